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

#ifndef MEQ_SOLVE_HPP
#define MEQ_SOLVE_HPP

#include <map>
#include <string>
#include <vector>

#include "meq/liouvillian.hpp"
#include "meq/operators.hpp"
#include "meq/types.hpp"

namespace meq {

// ---------------------------------------------------------------------------
// Steady states, propagation, heat flow.
//
// The steady state is the trace-one solution of L·vec(rho) = 0.  Because L
// preserves the trace, vec(1)† spans a left null vector, and appending the
// trace constraint yields well-posed linear systems.  Two direct methods are
// provided:
//
//   "qr"  stacks L with the weighted trace row (w = ‖L‖_F/d) and solves the
//         (d²+1)×d² least-squares system by orthogonal factorization;
//   "lu"  solves the square bordered system [[L, vec(1)], [vec(1)†, 0]] with
//         one step of iterative refinement — mathematically equivalent (the
//         border multiplier is exactly 0 at a trace-preserving L) and about
//         twice as fast at large dimension.
//
// "auto" picks "qr" up to d² = 1024 and "lu" beyond.  If the direct residual
// misses tol, the eigenvector of L with the smallest-magnitude eigenvalue is
// tried as a fallback before reporting non-convergence with both residuals.
// All solves run on the eigenbasis representation; residuals and traces are
// basis-invariant.
// ---------------------------------------------------------------------------

enum class SteadyMethod { Auto, QR, LU };

/// A converged stationary density matrix.
struct SteadyState {
  Operator rho;           ///< Hermitian, unit trace (original basis)
  double residual = 0.0;  ///< ‖L·vec(rho)‖₂
  std::string method;     ///< "qr", "lu", or "eig" (fallback)
  double min_eigenvalue = 0.0;  ///< smallest eigenvalue of rho (reported,
                                ///< not enforced; quasidegenerate policies
                                ///< may dip slightly negative)
};

/// Computes the steady state of a build.  Throws meq::numerical_error when
/// no method reaches tol, and meq::domain_error when the null space is
/// degenerate (dimension estimate included; a pure commutator generator
/// with nondegenerate H has a d-dimensional stationary family).
SteadyState steady_state(const LiouvillianBuild& build, double tol = 1e-10,
                         SteadyMethod method = SteadyMethod::Auto);

/// Propagates rho0 through the requested times (ascending) by dense
/// scaling-and-squaring matrix exponentials applied stepwise.  Exponentials
/// are computed once per distinct time step.  Traces are preserved to 1e−9
/// (checked).  Throws meq::numerical_error on non-finite results.
std::vector<Operator> evolve(const LiouvillianBuild& build,
                             const Operator& rho0,
                             const std::vector<double>& times);

/// Steady-state heat currents.
struct HeatFlowResult {
  std::map<std::string, double> per_bath;  ///< label → J (energy/time)
  double imbalance = 0.0;                  ///< |sum of currents|
};

/// Per-bath current J_b = Tr[H_S · unvec(D_b vec(rho_ss))] at a steady
/// state.  The Lamb shift is excluded from H_S by default (set
/// include_lamb_shift_in_h to add build.lamb_shift for sensitivity checks).
/// rho_ss is revalidated against the generator; a residual above stale_tol
/// raises meq::numerical_error.
HeatFlowResult heat_flow(const Operator& H_S, const LiouvillianBuild& build,
                         const Operator& rho_ss,
                         bool include_lamb_shift_in_h = false,
                         double stale_tol = 1e-8);

}  // namespace meq

#endif  // MEQ_SOLVE_HPP
