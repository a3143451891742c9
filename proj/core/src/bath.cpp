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

#include "meq/bath.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "meq/special.hpp"

namespace meq {
namespace {

constexpr double kPi = 3.14159265358979323846;

// The quadrature oracles tolerate this much absolute error in total.
constexpr double kPvAbsTol = 1e-8;

struct GslQuietGuard {
  GslQuietGuard() { gsl_set_error_handler_off(); }
};

// Adaptive Gauss-Kronrod on [a, b] via GSL.  Returns {value, abserr}.
std::pair<double, double> integrate(const std::function<double(double)>& f,
                                    double a, double b, double epsabs) {
  struct Hook {
    const std::function<double(double)>* fn;
  } hook{&f};
  gsl_function gf;
  gf.function = [](double x, void* p) {
    return (*static_cast<Hook*>(p)->fn)(x);
  };
  gf.params = &hook;

  static GslQuietGuard quiet;  // install the no-abort handler once
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
  double value = 0.0, abserr = 0.0;
  int status = gsl_integration_qag(&gf, a, b, epsabs, 0.0, 4096,
                                   GSL_INTEG_GAUSS31, ws, &value, &abserr);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS && abserr > epsabs * 10) {
    std::ostringstream msg;
    msg << "quadrature failed on [" << a << ", " << b
        << "]: achieved absolute error " << abserr << " (target " << epsabs
        << ")";
    throw numerical_error(msg.str());
  }
  return {value, abserr};
}

// Semi-infinite adaptive quadrature on [a, inf) for decaying integrands.
std::pair<double, double> integrate_to_infinity(
    const std::function<double(double)>& f, double a, double epsabs) {
  struct Hook {
    const std::function<double(double)>* fn;
  } hook{&f};
  gsl_function gf;
  gf.function = [](double x, void* p) {
    return (*static_cast<Hook*>(p)->fn)(x);
  };
  gf.params = &hook;

  static GslQuietGuard quiet;
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
  double value = 0.0, abserr = 0.0;
  int status = gsl_integration_qagiu(&gf, a, epsabs, 0.0, 4096, ws, &value,
                                     &abserr);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS && abserr > epsabs * 10) {
    std::ostringstream msg;
    msg << "semi-infinite quadrature failed from " << a
        << ": achieved absolute error " << abserr;
    throw numerical_error(msg.str());
  }
  return {value, abserr};
}

// Principal-value transform by direct quadrature, valid for any spectral
// density attached to the bath.  Shared by pv_quadrature_S and the
// custom-density branch of S_of_omega.  `omega` may be negative (the pole
// then lies outside the one-sided integration range and no pairing is
// needed).
double s_by_quadrature(double omega, const BathSpec& bath) {
  const double wc = bath.omega_c;
  const double cutoff = 50.0 * std::max(wc, std::abs(omega));

  // Emission + absorption parts of the integrand, written through the
  // overflow-safe I(±nu) so both Bose factors stay finite:
  //   g(nu) = I(nu)/(omega − nu) + I(−nu)/(omega + nu).
  const auto emission = [&](double nu) { return I_of_omega(nu, bath); };
  const auto absorption = [&](double nu) { return I_of_omega(-nu, bath); };

  double total = 0.0;
  double err = 0.0;
  const double piece_tol = kPvAbsTol / 5.0;

  if (omega == 0.0) {
    // The two parts combine exactly: I(nu)/(−nu) + I(−nu)/nu = −J(nu)/nu,
    // which is smooth (→ −J'(0) at nu → 0).  No principal value needed.
    auto [v, e] = integrate(
        [&](double nu) { return -spectral_density(nu, bath) / nu; }, 0.0,
        cutoff, piece_tol);
    total += v;
    err += e;
  } else if (omega < 0.0) {
    // Pole at nu = omega < 0 lies outside [0, cutoff); plain quadrature.
    auto [v, e] = integrate(
        [&](double nu) {
          return emission(nu) / (omega - nu) + absorption(nu) / (omega + nu);
        },
        0.0, cutoff, piece_tol);
    total += v;
    err += e;
  } else {
    // Pole at nu = omega inside the range: integrate up to the pairing
    // window, fold the window symmetrically around the pole (the 1/u
    // singularity cancels between the two sides), and continue beyond it.
    const double half = 0.5 * std::min(omega, cutoff - omega);
    const auto full = [&](double nu) {
      return emission(nu) / (omega - nu) + absorption(nu) / (omega + nu);
    };

    auto [v1, e1] = integrate(full, 0.0, omega - half, piece_tol);
    auto [v2, e2] = integrate(
        [&](double u) {
          return (emission(omega - u) - emission(omega + u)) / u;
        },
        0.0, half, piece_tol);
    auto [v3, e3] = integrate(
        [&](double nu) { return absorption(nu) / (omega + nu); },
        omega - half, omega + half, piece_tol);
    auto [v4, e4] = integrate(full, omega + half, cutoff, piece_tol);
    total += v1 + v2 + v3 + v4;
    err += e1 + e2 + e3 + e4;
  }

  // Tail beyond the cutoff.  The thermal factor is numerically zero there
  // (cutoff/T >> 700), leaving ∫ J(nu)/(omega − nu) dnu.  For the built-in
  // Drude form this has a closed form by partial fractions; custom densities
  // are integrated numerically on the semi-infinite remainder.
  if (!bath.has_custom_spectral_density()) {
    const double chi = bath.chi;
    const double X = cutoff;
    double tail;
    if (omega == 0.0) {
      tail = -chi * wc * (kPi / 2.0 - std::atan(X / wc));
    } else {
      const double a = omega / (omega * omega + wc * wc);
      tail = -chi * wc * wc *
             (a * std::log(std::sqrt(X * X + wc * wc) / (X - omega)) +
              (wc / (omega * omega + wc * wc)) *
                  (kPi / 2.0 - std::atan(X / wc)));
    }
    total += tail;
  } else {
    auto [v, e] = integrate_to_infinity(
        [&](double nu) { return spectral_density(nu, bath) / (omega - nu); },
        cutoff, piece_tol);
    total += v;
    err += e;
  }

  if (err > kPvAbsTol) {
    std::ostringstream msg;
    msg << "pv quadrature did not reach the 1e-8 absolute-error target at "
           "omega="
        << omega << ": achieved " << err;
    throw numerical_error(msg.str());
  }
  return total / kPi;
}

}  // namespace

double ohmic_drude(double omega, double chi, double omega_c) {
  return chi * omega / (1.0 + (omega * omega) / (omega_c * omega_c));
}

BathSpec BathSpec::make(double temperature, double alpha, double chi,
                        double omega_c, std::vector<Operator> coupling_ops,
                        std::string label,
                        SpectralDensityFn custom_spectral_density) {
  if (!(temperature > 0.0))
    throw domain_error("BathSpec: temperature must be > 0");
  if (!(alpha >= 0.0)) throw domain_error("BathSpec: alpha must be >= 0");
  if (!(chi > 0.0)) throw domain_error("BathSpec: chi must be > 0");
  if (!(omega_c > 0.0)) throw domain_error("BathSpec: omega_c must be > 0");
  if (coupling_ops.empty())
    throw domain_error("BathSpec: at least one coupling operator required");

  const CompositeSpace& space = coupling_ops.front().space;
  for (const Operator& A : coupling_ops) {
    if (A.space != space)
      throw domain_error("BathSpec: coupling operators live on different spaces");
    const double scale = A.matrix.norm();
    if ((A.matrix - A.matrix.adjoint()).norm() > 1e-12 * scale)
      throw domain_error("BathSpec: coupling operator '" + label +
                         "' is not Hermitian");
  }

  BathSpec b;
  b.temperature = temperature;
  b.alpha = alpha;
  b.chi = chi;
  b.omega_c = omega_c;
  b.coupling_ops = std::move(coupling_ops);
  b.label = std::move(label);
  b.custom_spectral_density = std::move(custom_spectral_density);
  return b;
}

double bose_einstein(double Omega, double T) {
  if (!(T > 0.0)) throw domain_error("bose_einstein: temperature must be > 0");
  if (Omega == 0.0)
    throw domain_error(
        "bose_einstein: occupation diverges at Omega = 0; use the w->0 "
        "limit forms instead");
  return 1.0 / std::expm1(Omega / T);
}

double spectral_density(double omega, const BathSpec& bath) {
  if (bath.has_custom_spectral_density())
    return bath.custom_spectral_density(omega, bath.chi, bath.omega_c);
  return ohmic_drude(omega, bath.chi, bath.omega_c);
}

double I_of_omega(double omega, const BathSpec& bath) {
  const double T = bath.temperature;
  if (omega > 0.0) {
    // J(w)(1 + nbar(w)); the occupation underflows harmlessly to 0 at large
    // w/T, so no overflow is possible on this branch.
    return spectral_density(omega, bath) * (1.0 + 1.0 / std::expm1(omega / T));
  }
  if (omega < 0.0) {
    // J(w)(1 + nbar(w)) = J(|w|) nbar(|w|): evaluate through the positive-
    // frequency occupation so e^{w/T} never overflows.
    const double p = -omega;
    return spectral_density(p, bath) / std::expm1(p / T);
  }
  // w -> 0 limit: T * J'(0).
  if (!bath.has_custom_spectral_density()) return bath.chi * T;
  const double h = 1e-6 * bath.omega_c;
  return T * (spectral_density(h, bath) - spectral_density(-h, bath)) /
         (2.0 * h);
}

double S_of_omega(double omega, const BathSpec& bath) {
  if (bath.has_custom_spectral_density()) return s_by_quadrature(omega, bath);

  // Closed form for the Ohmic-Drude density.  With y = w_c/(2 pi T) and
  // b = w/(2 pi T),
  //
  //   S(w) = −chi / (2 pi (1 + w²/w_c²)) ·
  //          [ pi w_c + 2 w ( psi(y) + 1/(2y) − Re psi(1 + i b) ) ].
  //
  // This is the digamma-reflection form of the textbook expression (which
  // combines pi·cot(pi y) with psi(1 − y)); the reflected form stays finite
  // where cot and psi(1 − y) have cancelling poles (w_c/(2T) at multiples
  // of pi), and is algebraically identical elsewhere.  At w = 0 only the
  // pi w_c term survives: S(0) = −chi w_c / 2.
  const double T = bath.temperature;
  const double wc = bath.omega_c;
  const double chi = bath.chi;
  const double y = wc / (2.0 * kPi * T);
  const double b = omega / (2.0 * kPi * T);

  const double psi_y = digamma_complex(Complex(y, 0.0)).real();
  const double re_psi_1ib = digamma_complex(Complex(1.0, b)).real();
  const double bracket =
      kPi * wc + 2.0 * omega * (psi_y + 1.0 / (2.0 * y) - re_psi_1ib);
  return -chi / (2.0 * kPi * (1.0 + (omega * omega) / (wc * wc))) * bracket;
}

double quadrature_I(double omega, const BathSpec& bath) {
  if (omega == 0.0)
    throw domain_error("quadrature_I: omega must be nonzero");
  const double a = std::abs(omega);
  const double J = spectral_density(a, bath);
  const double nbar = bose_einstein(a, bath.temperature);
  return omega > 0.0 ? J * (1.0 + nbar) : J * nbar;
}

double pv_quadrature_S(double omega, const BathSpec& bath) {
  if (omega < 0.0)
    throw domain_error("pv_quadrature_S: omega must be >= 0");
  return s_by_quadrature(omega, bath);
}

Complex gamma_pair(double omega, double omega_p, const BathSpec& bath) {
  return Complex(kPi * (I_of_omega(omega, bath) + I_of_omega(omega_p, bath)),
                 S_of_omega(omega, bath) - S_of_omega(omega_p, bath));
}

Complex pi_pair(double omega, double omega_p, const BathSpec& bath) {
  // (pi/2i)[I(w) − I(w')] + ½[S(w) + S(w')]
  const double dI = I_of_omega(omega, bath) - I_of_omega(omega_p, bath);
  const double sS = S_of_omega(omega, bath) + S_of_omega(omega_p, bath);
  return Complex(0.5 * sS, -0.5 * kPi * dI);
}

double gamma_full(double omega_bar, const BathSpec& bath) {
  return 2.0 * kPi * I_of_omega(omega_bar, bath);
}

CorrelationCoefficients correlation_coefficients(const BathSpec& bath) {
  CorrelationCoefficients c;
  c.gamma = [bath](double w, double wp) { return gamma_pair(w, wp, bath); };
  c.pi = [bath](double w, double wp) { return pi_pair(w, wp, bath); };
  c.gamma_full = [bath](double wbar) { return gamma_full(wbar, bath); };
  return c;
}

}  // namespace meq
