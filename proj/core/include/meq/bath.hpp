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

#ifndef MEQ_BATH_HPP
#define MEQ_BATH_HPP

#include <functional>
#include <string>
#include <vector>

#include "meq/operators.hpp"
#include "meq/types.hpp"

namespace meq {

// ---------------------------------------------------------------------------
// Bosonic-bath physics.
//
// A thermal bath is described by its temperature T, a dimensionless coupling
// strength alpha, and a spectral density J(w).  The built-in spectral density
// is Ohmic with a Drude (Lorentzian) cutoff,
//
//     J(w) = chi * w / (1 + w²/w_c²),
//
// extended to negative frequency as an odd function.  The half-Fourier
// transform of the bath correlation function splits into a real absorptive
// part and an imaginary principal-value part,
//
//     Gamma(w) = pi * I(w) + i * S(w),
//
// with   I(w) = J(w) (1 + nbar(w))  (limit chi*T at w = 0)  and  S(w) the
// principal-value transform, for which the Drude form has a closed-form
// expression in terms of the complex digamma function.  The master-equation
// pair coefficients follow as
//
//     gamma(w, w') = pi [I(w) + I(w')] + i [S(w) − S(w')]
//     pi_ls(w, w') = (pi/2) [I(w) − I(w')] / i + (1/2) [S(w) + S(w')]
//     gamma_full(wbar) = 2 pi I(wbar)          (full Fourier transform)
//
// where gamma multiplies dissipator pairs, pi_ls builds the Lamb shift, and
// gamma_full is the rate used for cluster-merged (frequency-averaged) jump
// operators.  Slow numerical-quadrature evaluations of I and S ship alongside
// the closed forms so that the analytics stay independently checkable and so
// custom spectral densities can be validated.
// ---------------------------------------------------------------------------

/// Spectral density callback: (omega, chi, omega_c) -> J.  The argument order
/// is fixed; custom densities must be odd in omega for the detailed-balance
/// identities to hold.
using SpectralDensityFn = std::function<double(double, double, double)>;

/// Built-in Ohmic spectral density with Drude cutoff (odd in omega).
double ohmic_drude(double omega, double chi, double omega_c);

/// One thermal bath: parameters plus the system operators it couples to.
/// Several coupling operators on one BathSpec model a common bath (all share
/// the same correlation functions); distinct BathSpec instances are
/// independent baths with zero cross-correlation.
struct BathSpec {
  double temperature = 0.0;  ///< T > 0, energy units
  double alpha = 0.0;        ///< dimensionless coupling, >= 0
  double chi = 0.0;          ///< spectral coefficient, > 0
  double omega_c = 0.0;      ///< cutoff frequency, > 0
  std::vector<Operator> coupling_ops;
  std::string label;

  /// Optional custom spectral density; empty means the built-in Ohmic-Drude
  /// form (for which the closed-form S is used; custom densities fall back
  /// to principal-value quadrature).
  SpectralDensityFn custom_spectral_density;

  /// Validates parameters and (Hermiticity of) coupling operators.
  static BathSpec make(double temperature, double alpha, double chi,
                       double omega_c, std::vector<Operator> coupling_ops,
                       std::string label,
                       SpectralDensityFn custom_spectral_density = nullptr);

  bool has_custom_spectral_density() const {
    return static_cast<bool>(custom_spectral_density);
  }
};

/// Bose-Einstein occupation nbar(Omega) = 1/(e^{Omega/T} − 1); negative for
/// Omega < 0 via the analytic continuation nbar(−Omega) = −1 − nbar(Omega).
/// Throws meq::domain_error at Omega = 0 (callers use the w→0 limits below).
double bose_einstein(double Omega, double T);

/// J(omega) for this bath (built-in or custom), odd in omega.
double spectral_density(double omega, const BathSpec& bath);

/// Absorptive half-Fourier coefficient I(w) = J(w)(1 + nbar(w)) with the
/// analytic limit I(0) = chi*T.  Evaluated in a form that is safe against
/// overflow/cancellation on both signs of w.
double I_of_omega(double omega, const BathSpec& bath);

/// Principal-value half-Fourier coefficient S(w).  For the built-in
/// Ohmic-Drude density this is the closed form built on the complex digamma
/// function, with S(0) = −chi*w_c/2; custom spectral densities are integrated
/// numerically.
double S_of_omega(double omega, const BathSpec& bath);

/// Test oracle for I: evaluates the delta-collapsed frequency integrand as
/// written, i.e. J(|w|)(1+nbar(|w|)) for w > 0 and J(|w|) nbar(|w|) for
/// w < 0.  Requires w != 0.
double quadrature_I(double omega, const BathSpec& bath);

/// Test oracle for S: adaptive principal-value quadrature of the one-sided
/// integral with the singular point at nu = w handled by symmetric pairing
/// around the pole and the tail beyond nu = 50·max(w_c, w) replaced by an
/// analytic estimate.  Target absolute error 1e−8; throws
/// meq::numerical_error with the achieved error when the refinement budget
/// is exhausted.  Requires w >= 0.
double pv_quadrature_S(double omega, const BathSpec& bath);

/// Dissipator pair coefficient gamma(w, w') = pi[I(w)+I(w')] + i[S(w)−S(w')].
Complex gamma_pair(double omega, double omega_p, const BathSpec& bath);

/// Lamb-shift pair coefficient
/// pi_ls(w, w') = (pi/2i)[I(w) − I(w')] + (1/2)[S(w) + S(w')].
Complex pi_pair(double omega, double omega_p, const BathSpec& bath);

/// Full Fourier-transform rate gamma_full(wbar) = 2 pi I(wbar), used for
/// cluster-merged jump operators.
double gamma_full(double omega_bar, const BathSpec& bath);

/// The three coefficient functions of one bath bundled as closures.
struct CorrelationCoefficients {
  std::function<Complex(double, double)> gamma;
  std::function<Complex(double, double)> pi;
  std::function<double(double)> gamma_full;
};

/// Binds the coefficient functions to a bath specification.
CorrelationCoefficients correlation_coefficients(const BathSpec& bath);

}  // namespace meq

#endif  // MEQ_BATH_HPP
