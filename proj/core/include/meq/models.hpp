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

#ifndef MEQ_MODELS_HPP
#define MEQ_MODELS_HPP

#include <array>
#include <vector>

#include "meq/bath.hpp"
#include "meq/liouvillian.hpp"
#include "meq/operators.hpp"

namespace meq {

// ---------------------------------------------------------------------------
// Prebuilt two-qubit, two-resonator thermal chain:
//
//   bath_L — resonator_L — qubit_1 — qubit_2 — resonator_R — bath_R
//
// with Hamiltonian
//
//   H = ½w₁σ_z⁽¹⁾ + ½w₂σ_z⁽²⁾ + Ω_L a_L†a_L + Ω_R a_R†a_R
//     + g₁(σ_+⁽¹⁾a_L + σ_−⁽¹⁾a_L†) + g₂(σ_+⁽²⁾a_R + σ_−⁽²⁾a_R†)
//     + g₁₂(σ_+⁽¹⁾σ_−⁽²⁾ + σ_−⁽¹⁾σ_+⁽²⁾),
//
// subsystem order [resonator_L, qubit_1, qubit_2, resonator_R], bosons
// truncated to N levels.  Baths couple through the resonator positions
// a + a† (momentum-quadrature coupling i(a† − a) available as an option).
// The model conserves total excitation number, which is what makes the
// weak-symmetry block structure available.
// ---------------------------------------------------------------------------

/// Chain parameters; defaults are the standard weak-coupling operating point.
struct ChainParams {
  double omega1 = 1.0;   ///< qubit-1 splitting
  double omega2 = 1.0;   ///< qubit-2 splitting
  double Omega_L = 1.0;  ///< left resonator frequency
  double Omega_R = 1.0;  ///< right resonator frequency
  double g1 = 0.05;      ///< qubit-1/resonator-L coupling
  double g2 = 0.05;      ///< qubit-2/resonator-R coupling
  double g12 = 0.05;     ///< qubit-qubit exchange coupling
  int N = 4;             ///< boson truncation (per resonator)
  double T_L = 0.5;      ///< left bath temperature
  double T_R = 0.1;      ///< right bath temperature
  double alpha_L = 0.01; ///< left bath coupling
  double alpha_R = 0.01; ///< right bath coupling
  double chi = 0.1;      ///< spectral coefficient
  double omega_c = 100.0;///< spectral cutoff
  bool momentum_coupling = false;  ///< couple via i(a† − a) instead of a + a†

  void validate() const;  ///< throws meq::domain_error on bad values
};

/// The chain's operator content.
struct ChainSystem {
  Operator H_full;    ///< all couplings included
  Operator H_bare;    ///< g1 = g2 = g12 = 0 (local jump basis)
  Operator couple_L;  ///< a_L + a_L† embedded in the chain space
  Operator couple_R;  ///< a_R + a_R† embedded in the chain space
  CompositeSpace space;  ///< dims [N, 2, 2, N]
};

/// Builds the chain Hamiltonians and coupling operators.
ChainSystem chain_hamiltonians(const ChainParams& p);

/// The two thermal baths (labels "L" and "R") attached to the chain's
/// coupling operators.
std::vector<BathSpec> chain_baths(const ChainParams& p);

/// Hand-assembled LOCAL generator: commutator with H_full plus the four
/// explicit thermal Lindblad terms on a_L, a_L†, a_R, a_R† with rates
/// 2π·alpha²·J(Ω)(1+nbar) and 2π·alpha²·J(Ω)·nbar, plus the local Lamb
/// shift built from S(±Ω) on the same operators.  Bypasses the generic
/// pipeline entirely; serves as its independent oracle.
LiouvillianBuild local_explicit_liouvillian(const ChainParams& p,
                                            bool include_lamb_shift = true);

/// Eigenenergies {−w, −g12, +g12, +w} of the resonant two-qubit exchange
/// block — the effective four-level structure controlling resonance.
std::array<double, 4> qq_effective_spectrum(double omega, double g12);

/// Qubit-qubit coupling at which the dressed pair resonates with a
/// resonator at frequency Omega: g12_hat = Omega − omega.
double resonance_g12(double Omega, double omega = 1.0);

}  // namespace meq

#endif  // MEQ_MODELS_HPP
