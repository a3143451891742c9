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

#include "meq/models.hpp"

#include <cmath>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "superop_internal.hpp"

namespace meq {

void ChainParams::validate() const {
  if (N < 2) throw domain_error("chain: N must be at least 2");
  if (!(omega1 > 0.0) || !(omega2 > 0.0))
    throw domain_error("chain: qubit splittings must be positive");
  if (!(Omega_L > 0.0) || !(Omega_R > 0.0))
    throw domain_error("chain: resonator frequencies must be positive");
  if (!(T_L > 0.0) || !(T_R > 0.0))
    throw domain_error("chain: bath temperatures must be positive");
  if (!(alpha_L >= 0.0) || !(alpha_R >= 0.0))
    throw domain_error("chain: bath couplings must be non-negative");
  if (!(chi > 0.0)) throw domain_error("chain: chi must be positive");
  if (!(omega_c > 0.0)) throw domain_error("chain: omega_c must be positive");
}

ChainSystem chain_hamiltonians(const ChainParams& p) {
  p.validate();
  ChainSystem s;
  s.space = CompositeSpace::of({p.N, 2, 2, p.N});

  const Matrix aL = embed(annihilation(p.N), 0, s.space).matrix;
  const Matrix aR = embed(annihilation(p.N), 3, s.space).matrix;
  const Matrix sz1 = embed(pauli(PauliKind::Z), 1, s.space).matrix;
  const Matrix sz2 = embed(pauli(PauliKind::Z), 2, s.space).matrix;
  const Matrix sp1 = embed(pauli(PauliKind::Plus), 1, s.space).matrix;
  const Matrix sp2 = embed(pauli(PauliKind::Plus), 2, s.space).matrix;
  const Matrix sm1 = sp1.adjoint();
  const Matrix sm2 = sp2.adjoint();

  Matrix H0 = 0.5 * p.omega1 * sz1 + 0.5 * p.omega2 * sz2 +
              p.Omega_L * (aL.adjoint() * aL) +
              p.Omega_R * (aR.adjoint() * aR);
  Matrix Hc = p.g1 * (sp1 * aL + aL.adjoint() * sm1) +
              p.g2 * (sp2 * aR + aR.adjoint() * sm2) +
              p.g12 * (sp1 * sm2 + sm1 * sp2);

  s.H_bare = Operator{s.space, H0};
  s.H_full = Operator{s.space, H0 + Hc};
  if (p.momentum_coupling) {
    // Momentum-quadrature coupling i(a† − a); Hermitian, unlike a − a†.
    s.couple_L = Operator{s.space, Complex(0, 1) * (aL.adjoint() - aL)};
    s.couple_R = Operator{s.space, Complex(0, 1) * (aR.adjoint() - aR)};
  } else {
    s.couple_L = Operator{s.space, aL + aL.adjoint()};
    s.couple_R = Operator{s.space, aR + aR.adjoint()};
  }
  return s;
}

std::vector<BathSpec> chain_baths(const ChainParams& p) {
  const ChainSystem s = chain_hamiltonians(p);
  std::vector<BathSpec> baths;
  baths.push_back(BathSpec::make(p.T_L, p.alpha_L, p.chi, p.omega_c,
                                 {s.couple_L}, "L"));
  baths.push_back(BathSpec::make(p.T_R, p.alpha_R, p.chi, p.omega_c,
                                 {s.couple_R}, "R"));
  return baths;
}

namespace {

/// gamma · [A ρ A† − ½{A†A, ρ}] accumulated onto D (vectorized form).
void add_lindblad(Matrix& D, const Matrix& A, double gamma) {
  D += gamma * Eigen::kroneckerProduct(A, A.conjugate());
  detail::subtract_half_anticommutator(D, (gamma * (A.adjoint() * A)).eval());
}

}  // namespace

LiouvillianBuild local_explicit_liouvillian(const ChainParams& p,
                                            bool include_lamb_shift) {
  const ChainSystem s = chain_hamiltonians(p);
  const std::vector<BathSpec> baths = chain_baths(p);
  const int d = s.space.total_dim;
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;

  const Matrix aL = embed(annihilation(p.N), 0, s.space).matrix;
  const Matrix aR = embed(annihilation(p.N), 3, s.space).matrix;

  LiouvillianBuild out;
  out.policy = SecularPolicy::full_secular();
  out.include_lamb_shift = include_lamb_shift;
  out.is_local = true;
  out.space = s.space;
  out.hamiltonian = s.H_full;
  out.bath_labels = {"L", "R"};
  // Two frequency components (a at +Omega, a† at −Omega) per bath; the
  // secular rule keeps the two diagonal pairs and drops the two cross pairs.
  out.kept_pairs = 4;
  out.dropped_pairs = 4;

  Matrix HLS = Matrix::Zero(d, d);
  for (int side = 0; side < 2; ++side) {
    const BathSpec& bath = baths[side];
    const Matrix& a = side == 0 ? aL : aR;
    const double Omega = side == 0 ? p.Omega_L : p.Omega_R;
    const double a2 = bath.alpha * bath.alpha;
    // Downward rate 2π alpha² J(Ω)(1+nbar), upward 2π alpha² J(Ω) nbar.
    const double rate_down = a2 * gamma_full(Omega, bath);
    const double rate_up = a2 * gamma_full(-Omega, bath);
    Matrix D = Matrix::Zero(d2, d2);
    add_lindblad(D, a, rate_down);
    add_lindblad(D, a.adjoint(), rate_up);
    out.dissipators_eig.push_back(std::move(D));
    HLS += a2 * (S_of_omega(Omega, bath) * (a.adjoint() * a) +
                 S_of_omega(-Omega, bath) * (a * a.adjoint()));
  }
  out.lamb_shift = Operator{s.space, HLS};

  // The representation basis is the product basis itself (V = 1); the
  // "eigenbasis" fields therefore carry product-basis matrices directly, and
  // energies hold the (unsorted) bare diagonal.
  out.basis.vectors = Matrix::Identity(d, d);
  out.basis.energies = s.H_bare.matrix.diagonal().real();
  out.basis.space = s.space;
  out.basis.tol_degeneracy =
      1e-9 * (out.basis.energies.maxCoeff() - out.basis.energies.minCoeff());
  out.h_effective_eig = s.H_full.matrix;
  if (include_lamb_shift) out.h_effective_eig += HLS;
  return out;
}

std::array<double, 4> qq_effective_spectrum(double omega, double g12) {
  if (!(omega > 0.0))
    throw domain_error("qq_effective_spectrum: omega must be positive");
  if (!(g12 >= 0.0))
    throw domain_error("qq_effective_spectrum: g12 must be non-negative");
  return {-omega, -g12, g12, omega};
}

double resonance_g12(double Omega, double omega) { return Omega - omega; }

}  // namespace meq
