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

#ifndef MEQ_LIOUVILLIAN_HPP
#define MEQ_LIOUVILLIAN_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "meq/bath.hpp"
#include "meq/operators.hpp"
#include "meq/secular.hpp"
#include "meq/spectral.hpp"
#include "meq/types.hpp"

namespace meq {

// ---------------------------------------------------------------------------
// Liouvillian assembly.
//
// The generator of the vectorized master equation is
//
//     L = −i(H ⊗ 1 − 1 ⊗ Hᵀ) + sum_b D_b,      H = H_S (+ H_LS),
//
// where each bath dissipator is a sum over retained frequency pairs
// (beta, beta', w, w') of
//
//     alpha² gamma(w, w') [ A_{beta'}(w) · A_beta(w')†  (as a sandwich)
//                           − ½ {A_beta(w')† A_{beta'}(w), ·} ]
//
// and the Lamb shift collects alpha² pi_ls(w, w') A_beta(w')† A_{beta'}(w)
// over the same pair set.  Which pairs are retained is the secularization
// policy's decision; the unified policy first merges jump operators
// cluster-wise and then keeps only cluster-diagonal pairs with the real rate
// gamma_full(wbar).
//
// Internally everything is assembled in the eigenbasis of the jump-operator
// Hamiltonian, where jump operators are sparse index masks and each retained
// element pair contributes a single superoperator entry.  The original-basis
// matrices required by the public contract (total(), dissipator()) are
// lazily materialized through the unitary similarity (V ⊗ V*) · M · (V ⊗ V*)†
// and cached; solvers can work directly in the eigenbasis representation,
// where norms, traces, and spectra are identical.
// ---------------------------------------------------------------------------

/// A fully assembled Liouvillian with per-bath bookkeeping.
///
/// Move-only.  The eigenbasis fields are the primary storage; total() and
/// dissipator() materialize original-basis matrices on first use (cached,
/// thread-safe).
struct LiouvillianBuild {
  SecularPolicy policy;
  long long kept_pairs = 0;     ///< retained same-bath frequency pairs
  long long dropped_pairs = 0;  ///< discarded same-bath frequency pairs
  std::optional<std::vector<FrequencyCluster>> clusters;  ///< unified only
  bool is_local = false;        ///< jump basis differs from the full H
  bool include_lamb_shift = true;

  CompositeSpace space;
  Operator hamiltonian;       ///< H_full, original basis
  Operator lamb_shift;        ///< H_LS, original basis, alpha²-weighted
  std::vector<std::string> bath_labels;

  /// Eigensystem of the jump-basis Hamiltonian (equals H_full for global
  /// builds, the uncoupled Hamiltonian for local builds).
  EigenSystem basis;

  /// V†(H_full + H_LS)V — the effective Hamiltonian driving the unitary
  /// part, in the jump-basis eigenbasis (H_LS omitted when disabled).
  Matrix h_effective_eig;

  /// Per-bath dissipators in the eigenbasis, alpha² included; aligned with
  /// bath_labels.
  std::vector<Matrix> dissipators_eig;

  /// Full generator, original basis (lazy, cached).
  const Matrix& total() const;

  /// One bath's dissipator, original basis (lazy, cached).  Throws
  /// meq::domain_error for an unknown label.
  const Matrix& dissipator(const std::string& label) const;

  /// Full generator assembled fresh in the eigenbasis (unitary part from
  /// h_effective_eig plus all dissipators).  Unitarily equivalent to
  /// total(); cheap — no basis transform involved.
  Matrix liouvillian_eig() const;

  LiouvillianBuild();
  LiouvillianBuild(LiouvillianBuild&&) noexcept;
  LiouvillianBuild& operator=(LiouvillianBuild&&) noexcept;
  ~LiouvillianBuild();

 private:
  struct Cache;
  std::unique_ptr<Cache> cache_;
};

/// Per-bath dissipator matrices built from explicit jump-operator lists in
/// the ORIGINAL basis (reference construction; the pipeline's eigenbasis
/// path is cross-checked against it).
struct DissipatorSet {
  std::vector<Matrix> per_bath;  ///< aligned with the baths argument
  long long kept_pairs = 0;
  long long dropped_pairs = 0;
};

/// Jump lists of one bath, indexed [coupling-op beta][component].
using BathJumpLists = std::vector<std::vector<JumpOperator>>;

/// Assembles per-bath dissipators from jump lists under a policy.  tau_r is
/// the dissipative timescale used by the Partial criterion (alpha_max^{-2});
/// freq_tol decides frequency equality (pass the tol_degeneracy that built
/// the jumps).  For the Unified policy pass cluster-merged jump lists;
/// retained pairs are then the cluster-diagonal ones with rate
/// gamma_full(wbar).  alpha² prefactors are included.
DissipatorSet build_dissipator(const std::vector<BathJumpLists>& jumps,
                               const std::vector<BathSpec>& baths,
                               const SecularPolicy& policy, double tau_r,
                               double freq_tol);

/// The Lamb-shift operator for the SAME retained pair set as
/// build_dissipator (alpha²-weighted, Hermitian).  For Unified the
/// coefficient is S(wbar) on merged operators.
Operator build_lamb_shift(const std::vector<BathJumpLists>& jumps,
                          const std::vector<BathSpec>& baths,
                          const SecularPolicy& policy, double tau_r,
                          double freq_tol);

/// Full pipeline: diagonalizes H_jump_basis, extracts jump operators for
/// every coupling operator of every bath, applies the policy, and assembles
/// the Liouvillian.  H_jump_basis equals H_full for the GLOBAL form; passing
/// the uncoupled Hamiltonian gives the LOCAL form.  tau_r is computed as
/// alpha_max^{-2} over the baths.  tol_degeneracy <= 0 selects the spectral
/// default.
LiouvillianBuild build_liouvillian(const Operator& H_full,
                                   const Operator& H_jump_basis,
                                   const std::vector<BathSpec>& baths,
                                   const SecularPolicy& policy,
                                   bool include_lamb_shift = true,
                                   double tol_degeneracy = -1.0);

}  // namespace meq

#endif  // MEQ_LIOUVILLIAN_HPP
