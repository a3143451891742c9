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

#ifndef MEQ_SRC_SPECTRAL_INTERNAL_HPP
#define MEQ_SRC_SPECTRAL_INTERNAL_HPP

// Shared frequency-grid primitive: Bohr frequencies of an energy list,
// deduplicated by single-linkage gap grouping, with a dense lookup of the
// group id of every ordered level pair.  Used by the spectral module's
// public operations and by the eigenbasis Liouvillian assembly.

#include <vector>

#include <Eigen/Dense>

#include "meq/types.hpp"

namespace meq::detail {

struct BohrGrid {
  std::vector<double> reps;  ///< ascending group representatives (means)
  Eigen::MatrixXi group_of;  ///< (i, j) → group id of frequency e_j − e_i
};

/// Groups all pairwise differences e_j − e_i; two differences belong to one
/// group iff they chain within `tol` on the sorted list.
BohrGrid build_bohr_grid(const RealVector& energies, double tol);

}  // namespace meq::detail

#endif  // MEQ_SRC_SPECTRAL_INTERNAL_HPP
