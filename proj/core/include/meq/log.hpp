// Copyright 2026 The meqforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEQ_LOG_HPP
#define MEQ_LOG_HPP

#include <string>

namespace meq {

// Library diagnostics go to stderr through a single logger whose level is
// controlled by the MEQFORGE_LOG environment variable (trace, debug, info,
// warn, error, critical, off; default warn).  Initialization is lazy and
// idempotent; set_log_level overrides the environment at runtime.

/// Applies MEQFORGE_LOG (no-op after the first call).
void init_logging_from_env();

/// Overrides the log level ("debug", "info", "warn", ...).  Unknown names
/// fall back to "warn".
void set_log_level(const std::string& level);

}  // namespace meq

#endif  // MEQ_LOG_HPP
