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

#ifndef MEQ_MEQ_HPP
#define MEQ_MEQ_HPP

// Umbrella header.

#include "meq/bath.hpp"
#include "meq/liouvillian.hpp"
#include "meq/log.hpp"
#include "meq/mmio.hpp"
#include "meq/models.hpp"
#include "meq/operators.hpp"
#include "meq/secular.hpp"
#include "meq/solve.hpp"
#include "meq/special.hpp"
#include "meq/spectral.hpp"
#include "meq/symmetry.hpp"
#include "meq/types.hpp"

#endif  // MEQ_MEQ_HPP
