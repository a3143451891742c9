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

#ifndef MEQ_SRC_SUPEROP_INTERNAL_HPP
#define MEQ_SRC_SUPEROP_INTERNAL_HPP

// Superoperator helpers shared between assembly, symmetry, and solving.
// Row-stacking convention throughout (see operators.hpp).

#include "meq/types.hpp"

namespace meq::detail {

/// H ⊗ 1 − 1 ⊗ Hᵀ, the matrix of rho ↦ [H, rho], filled directly (no
/// Kronecker temporaries).
Matrix commutator_superop(const Matrix& H);

/// M ↦ (V ⊗ V*) · M · (V ⊗ V*)†, the similarity that carries a
/// superoperator between the eigenbasis and the original basis.  Evaluated
/// as four mode contractions of the d²×d² matrix viewed as a 4-index
/// tensor — O(d⁵) instead of O(d⁶).
Matrix superop_similarity(const Matrix& M, const Matrix& V);

/// Adds  −½ (K ⊗ 1 + 1 ⊗ Kᵀ)  to D in place (the anticommutator half of a
/// dissipator), without forming Kronecker products.
void subtract_half_anticommutator(Matrix& D, const Matrix& K);

}  // namespace meq::detail

#endif  // MEQ_SRC_SUPEROP_INTERNAL_HPP
