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

#ifndef MEQ_SYMMETRY_HPP
#define MEQ_SYMMETRY_HPP

#include <utility>
#include <vector>

#include "meq/operators.hpp"
#include "meq/types.hpp"

namespace meq {

// ---------------------------------------------------------------------------
// Weak symmetries and block diagonalization.
//
// A Hermitian system operator J generates a weak symmetry of the Liouvillian
// when the commutator superoperator 𝒥 = J ⊗ 1 − 1 ⊗ Jᵀ commutes with L.  In
// that case the eigenspaces of 𝒥 — labelled by differences n_i − n_j of J's
// eigenvalues — are invariant under L, and rotating by U = (V ⊗ V*) with
// columns sorted by label block-diagonalizes L.  The stationary state always
// lives in the label-0 block (it contains vec(1)).
// ---------------------------------------------------------------------------

/// Commutator superoperator of J: J ⊗ 1 − 1 ⊗ Jᵀ (row-stacking), i.e. the
/// matrix of rho ↦ [J, rho].
Matrix superop_adjoint(const Operator& J);

/// Relative commutator residual ‖L·Jsup − Jsup·L‖_F / ‖L‖_F and whether it
/// is below tol.  Diagonal Jsup (the common case after a basis choice) is
/// detected and handled without forming the dense products.
struct SymmetryCheck {
  bool holds = false;
  double residual = 0.0;
};
SymmetryCheck check_weak_symmetry(const Matrix& L, const Matrix& Jsup,
                                  double tol = 1e-9);

/// L rotated to the eigenbasis of a symmetry generator and cut into blocks.
struct BlockDecomposition {
  Matrix transform_U;               ///< d²×d² unitary, columns sorted by label
  std::vector<double> block_labels; ///< one eigenvalue difference per block
  std::vector<std::pair<int, int>> block_ranges;  ///< [begin, end) per block
  std::vector<Matrix> blocks;       ///< dense diagonal blocks of U†LU
  double symmetry_residual = 0.0;   ///< relative commutator residual of [L,𝒥]
  double offblock_mass = 0.0;       ///< ‖U†LU − blockdiag‖_F (absolute)
};

/// Block-diagonalizes L along the weak symmetry generated by Hermitian J.
/// The symmetry is verified first (tol on the relative commutator residual);
/// failure raises meq::domain_error carrying the residual.  Eigenvalue
/// differences are grouped into labels with tolerance
/// 1e−8 · (spectral span of J); each label's block is extracted from U†LU.
BlockDecomposition block_transform(const Matrix& L, const Operator& J,
                                   double tol = 1e-9);

}  // namespace meq

#endif  // MEQ_SYMMETRY_HPP
