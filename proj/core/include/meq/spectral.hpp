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

#ifndef MEQ_SPECTRAL_HPP
#define MEQ_SPECTRAL_HPP

#include <string>
#include <vector>

#include "meq/operators.hpp"
#include "meq/types.hpp"

namespace meq {

// ---------------------------------------------------------------------------
// Hermitian diagonalization, Bohr frequencies, jump operators.
//
// A coupling operator A decomposes over the eigenbasis of the system
// Hamiltonian into frequency components
//
//     A(w) = sum_{e_j − e_i = w} <e_i|A|e_j> |e_i><e_j|,
//
// one per distinct Bohr frequency w (energy difference).  Frequencies are
// deduplicated by single-linkage gap grouping on the sorted difference list
// with tolerance tol_degeneracy, so numerically split exact degeneracies
// collapse while physical quasidegeneracies stay distinct.
// ---------------------------------------------------------------------------

/// Result of a Hermitian diagonalization with deterministic phase fixing.
struct EigenSystem {
  RealVector energies;    ///< ascending eigenvalues
  Matrix vectors;         ///< unitary, one eigencolumn per energy
  double tol_degeneracy;  ///< frequency-equality tolerance used downstream
  CompositeSpace space;
};

/// One frequency component of a coupling operator, stored in the ORIGINAL
/// basis (already rotated back by the eigenvector unitary).
struct JumpOperator {
  std::string bath_label;
  int beta = 0;       ///< coupling-operator index within its bath
  double omega = 0.0; ///< Bohr frequency e_j − e_i
  Operator matrix;
};

/// Diagonalizes a Hermitian operator.  Eigenvalues ascend; each eigenvector's
/// largest-magnitude component is rotated to be real positive (first such
/// index on ties) so results are deterministic.  tol_degeneracy <= 0 selects
/// the default 1e−9 · (spectral span).  Throws meq::domain_error for
/// non-Hermitian input (tolerance 1e−10·‖H‖_F).
EigenSystem diagonalize(const Operator& H, double tol_degeneracy = -1.0);

/// All pairwise energy differences e_j − e_i, deduplicated with
/// tol_degeneracy (single-linkage grouping, representative = group mean),
/// sorted ascending.  Includes 0 and negative frequencies.
std::vector<double> bohr_frequencies(const EigenSystem& eig);

/// Frequency decomposition of a coupling operator: one JumpOperator per
/// distinct Bohr frequency with nonzero projected matrix.  Projected entries
/// below 1e−12·‖A‖_F are pruned; all-zero components are dropped.  The omega
/// labels are exactly the matching entries of bohr_frequencies(eig).
std::vector<JumpOperator> jump_operators(const EigenSystem& eig,
                                         const Operator& A,
                                         const std::string& bath_label,
                                         int beta);

}  // namespace meq

#endif  // MEQ_SPECTRAL_HPP
