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

#include "meq/log.hpp"

#include <cstdlib>
#include <mutex>

#include "log_internal.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace meq {
namespace {

spdlog::level::level_enum parse_level(const std::string& s) {
  if (s == "trace") return spdlog::level::trace;
  if (s == "debug") return spdlog::level::debug;
  if (s == "info") return spdlog::level::info;
  if (s == "warn" || s == "warning") return spdlog::level::warn;
  if (s == "error") return spdlog::level::err;
  if (s == "critical") return spdlog::level::critical;
  if (s == "off") return spdlog::level::off;
  return spdlog::level::warn;
}

std::once_flag g_env_once;

}  // namespace

namespace detail {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_color_mt("meqforge");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  return log;
}

}  // namespace detail

void init_logging_from_env() {
  std::call_once(g_env_once, [] {
    const char* env = std::getenv("MEQFORGE_LOG");
    if (env != nullptr) detail::logger()->set_level(parse_level(env));
  });
}

void set_log_level(const std::string& level) {
  detail::logger()->set_level(parse_level(level));
}

}  // namespace meq
