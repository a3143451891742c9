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

#include "meq/solve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "log_internal.hpp"

namespace meq {

namespace {

/// Compensated accumulation for long trace sums.
struct KahanSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

/// Largest square-system size for which the eigenvector fallback and the
/// confirmation re-solve are considered affordable.
constexpr Eigen::Index kEigFallbackMax = 2500;
constexpr Eigen::Index kConfirmSolveMax = 2048;

std::string lapack_failure(const char* routine, lapack_int info) {
  std::ostringstream msg;
  msg << routine << " failed with info " << info;
  return msg.str();
}

/// Solves the square bordered system [[L, w·g],[w·t†, 0]]·[x;mu] = [0;w],
/// where t is vec(1) (the trace functional) and g an arbitrary border
/// column; for a trace-preserving L with a one-dimensional stationary space
/// the solution x is the trace-one steady state for ANY generic g.  One step
/// of iterative refinement follows the factorization.  pivot_ratio receives
/// min|U_ii|/max|U_ii| as a cheap rank-deficiency indicator.
Vector solve_lu_bordered(const Matrix& L, const Vector& g, int d, double w,
                         double* pivot_ratio) {
  const Eigen::Index n = L.rows();
  const Eigen::Index m = n + 1;
  Matrix M(m, m);
  M.setZero();
  M.topLeftCorner(n, n) = L;
  M.col(n).head(n) = w * g;
  for (int i = 0; i < d; ++i) M(n, static_cast<Eigen::Index>(i) * d + i) = w;
  Vector rhs = Vector::Zero(m);
  rhs[n] = w;

  Matrix F = M;  // factored in place; M stays pristine for refinement
  std::vector<lapack_int> ipiv(m);
  lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, static_cast<int>(m),
                                   static_cast<int>(m), F.data(),
                                   static_cast<int>(m), ipiv.data());
  if (info < 0) throw numerical_error(lapack_failure("zgetrf", info));
  if (info > 0)
    throw domain_error(
        "steady_state: bordered system is exactly singular — the stationary "
        "space is degenerate (dimension > 1)");
  double pmin = std::numeric_limits<double>::infinity(), pmax = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double p = std::abs(F(i, i));
    pmin = std::min(pmin, p);
    pmax = std::max(pmax, p);
  }
  *pivot_ratio = pmax > 0.0 ? pmin / pmax : 0.0;

  Vector x = rhs;
  info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', static_cast<int>(m), 1,
                        F.data(), static_cast<int>(m), ipiv.data(), x.data(),
                        static_cast<int>(m));
  if (info != 0) throw numerical_error(lapack_failure("zgetrs", info));
  Vector r = rhs - M * x;
  info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', static_cast<int>(m), 1,
                        F.data(), static_cast<int>(m), ipiv.data(), r.data(),
                        static_cast<int>(m));
  if (info != 0) throw numerical_error(lapack_failure("zgetrs", info));
  x += r;
  return x.head(n);
}

/// Solves the (n+1)×n least-squares system [L; w·t†]·x = [0; w] by
/// orthogonal factorization.
Vector solve_qr_stacked(const Matrix& L, int d, double w) {
  const Eigen::Index n = L.rows();
  const Eigen::Index m = n + 1;
  Matrix A(m, n);
  A.topRows(n) = L;
  A.row(n).setZero();
  for (int i = 0; i < d; ++i) A(n, static_cast<Eigen::Index>(i) * d + i) = w;
  Vector b = Vector::Zero(m);
  b[n] = w;
  lapack_int info =
      LAPACKE_zgels(LAPACK_COL_MAJOR, 'N', static_cast<int>(m),
                    static_cast<int>(n), 1, A.data(), static_cast<int>(m),
                    b.data(), static_cast<int>(m));
  if (info < 0) throw numerical_error(lapack_failure("zgels", info));
  if (info > 0)
    throw domain_error(
        "steady_state: the stacked system is rank deficient — the stationary "
        "space is degenerate (dimension > 1)");
  return b.head(n);
}

Matrix unvec_matrix(const Vector& v, int d) {
  Matrix M(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) M(r, c) = v[static_cast<Eigen::Index>(r) * d + c];
  return M;
}

Vector vec_matrix(const Matrix& M) {
  const int d = static_cast<int>(M.rows());
  Vector v(static_cast<Eigen::Index>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) v[static_cast<Eigen::Index>(r) * d + c] = M(r, c);
  return v;
}

/// Trace-normalized Hermitian candidate from a raw null-space vector.
/// Returns false when the vector is trace-orthogonal (no normalization
/// possible — a degeneracy symptom).
bool normalize_candidate(const Vector& x, int d, Matrix* rho) {
  Matrix R = unvec_matrix(x, d);
  R = 0.5 * (R + R.adjoint()).eval();
  const double tr = R.trace().real();
  if (std::abs(tr) < 1e-300 ||
      std::abs(tr) < 1e-10 * R.norm() * std::sqrt(static_cast<double>(d)))
    return false;
  *rho = R / tr;
  return true;
}

/// Deterministic pseudo-random complex vector with unit-scale entries.
Vector random_border(Eigen::Index n) {
  std::mt19937_64 gen(0x6d65716672ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = Complex(u(gen), u(gen));
  g /= g.norm() / std::sqrt(static_cast<double>(n));
  return g;
}

/// Null-space dimension estimate by dense eigenvalue count.
int null_dimension_estimate(const Matrix& L) {
  Eigen::ComplexEigenSolver<Matrix> es(L, /*computeEigenvectors=*/false);
  const double thresh = std::max(1e-12 * L.norm(), 1e-14);
  int count = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i]) <= thresh) ++count;
  return count;
}

}  // namespace

SteadyState steady_state(const LiouvillianBuild& build, double tol,
                         SteadyMethod method) {
  if (!(tol > 0.0)) throw domain_error("steady_state: tol must be positive");
  const int d = build.space.total_dim;
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;

  // A generator without any dissipation is stationary on every energy
  // eigenprojector (and every degenerate coherence): refuse with a dimension
  // estimate instead of returning an arbitrary member of the family.
  double diss_norm = 0.0;
  for (const Matrix& D : build.dissipators_eig)
    diss_norm = std::max(diss_norm, D.norm());
  if (diss_norm == 0.0) {
    const RealVector& e = build.basis.energies;
    const double ftol = build.basis.tol_degeneracy;
    long long dim = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (std::abs(e[i] - e[j]) <= ftol) ++dim;
    std::ostringstream msg;
    msg << "steady_state: all dissipators vanish; the stationary space is "
           "degenerate (dimension >= "
        << dim << ")";
    throw domain_error(msg.str());
  }

  const Matrix L = build.liouvillian_eig();
  const double w = L.norm() / d;

  SteadyMethod chosen = method;
  if (chosen == SteadyMethod::Auto)
    chosen = n <= 1024 ? SteadyMethod::QR : SteadyMethod::LU;
  const char* tag = chosen == SteadyMethod::QR ? "qr" : "lu";
  detail::logger()->debug("steady_state: n={}, method={}", n, tag);

  double pivot_ratio = 1.0;
  Vector x;
  if (chosen == SteadyMethod::QR) {
    x = solve_qr_stacked(L, d, w);
  } else {
    Vector e1 = Vector::Zero(n);
    for (int i = 0; i < d; ++i) e1[static_cast<Eigen::Index>(i) * d + i] = 1.0;
    x = solve_lu_bordered(L, e1, d, w, &pivot_ratio);
  }

  Matrix rho_eig;
  double direct_resid = std::numeric_limits<double>::infinity();
  bool direct_ok = normalize_candidate(x, d, &rho_eig);
  if (direct_ok) {
    direct_resid = (L * vec_matrix(rho_eig)).norm();
    direct_ok = direct_resid <= tol;
  }

  std::string method_used = tag;
  if (!direct_ok) {
    // Eigenvector fallback on the smallest-magnitude eigenvalue.
    if (n > kEigFallbackMax) {
      std::ostringstream msg;
      msg << "steady_state: direct method '" << tag
          << "' missed tol (residual " << direct_resid
          << " > " << tol << ") and the system is too large for the "
          << "eigenvector fallback";
      throw numerical_error(msg.str());
    }
    detail::logger()->warn(
        "steady_state: direct residual {} above tol {}, trying eigenvector "
        "fallback",
        direct_resid, tol);
    Eigen::ComplexEigenSolver<Matrix> es(L, /*computeEigenvectors=*/true);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(es.eigenvalues()[i]) < std::abs(es.eigenvalues()[best]))
        best = i;
    Matrix rho2;
    double resid2 = std::numeric_limits<double>::infinity();
    if (normalize_candidate(es.eigenvectors().col(best), d, &rho2))
      resid2 = (L * vec_matrix(rho2)).norm();
    if (resid2 <= tol) {
      rho_eig = std::move(rho2);
      direct_resid = resid2;
      method_used = "eig";
    } else {
      std::ostringstream msg;
      msg << "steady_state: no method converged (direct '" << tag
          << "' residual " << direct_resid << ", eigenvector residual "
          << resid2 << ", tol " << tol << ")";
      throw numerical_error(msg.str());
    }
  }

  // Degeneracy detection: a second solve against an unrelated border column
  // must reproduce the same state when the stationary space is
  // one-dimensional.  Run it outright at moderate size; at large size only
  // when the pivot spread of the LU factorization looks rank-deficient.
  const bool confirm =
      method_used != "eig" &&
      (n <= kConfirmSolveMax || pivot_ratio < 1e-13);
  if (confirm) {
    double pr2 = 1.0;
    Vector x2 = solve_lu_bordered(L, random_border(n), d, w, &pr2);
    Matrix rho_b;
    bool distinct = !normalize_candidate(x2, d, &rho_b);
    if (!distinct)
      distinct = (rho_b - rho_eig).norm() > 1e-6 * std::max(1.0, rho_eig.norm());
    if (distinct) {
      std::ostringstream msg;
      msg << "steady_state: the stationary space is degenerate (dimension ";
      if (n <= kEigFallbackMax)
        msg << "estimate " << null_dimension_estimate(L);
      else
        msg << "> 1";
      msg << "); two independent solves disagree";
      throw domain_error(msg.str());
    }
  }

  SteadyState out;
  out.residual = direct_resid;
  out.method = method_used;
  Eigen::SelfAdjointEigenSolver<Matrix> rho_es(rho_eig,
                                               Eigen::EigenvaluesOnly);
  out.min_eigenvalue = rho_es.eigenvalues().minCoeff();
  const Matrix& V = build.basis.vectors;
  out.rho = Operator{build.space, V * rho_eig * V.adjoint()};
  return out;
}

std::vector<Operator> evolve(const LiouvillianBuild& build,
                             const Operator& rho0,
                             const std::vector<double>& times) {
  if (rho0.space != build.space)
    throw domain_error("evolve: rho0 lives on a different space");
  if (times.empty()) throw domain_error("evolve: empty time list");
  const double h_norm = std::max(1.0, rho0.matrix.norm());
  if ((rho0.matrix - rho0.matrix.adjoint()).norm() > 1e-10 * h_norm)
    throw domain_error("evolve: rho0 is not Hermitian");
  if (std::abs(rho0.matrix.trace().real() - 1.0) > 1e-8 ||
      std::abs(rho0.matrix.trace().imag()) > 1e-8)
    throw domain_error("evolve: rho0 must have unit trace");
  if (times.front() < 0.0)
    throw domain_error("evolve: times must be non-negative");
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1])
      throw domain_error("evolve: times must ascend");

  const int d = build.space.total_dim;
  const Matrix L = build.liouvillian_eig();
  const Matrix& V = build.basis.vectors;
  Vector v = vec_matrix((V.adjoint() * rho0.matrix * V).eval());

  std::map<double, Matrix> propagators;  // per distinct step length
  std::vector<Operator> out;
  out.reserve(times.size());
  double t_prev = 0.0;
  for (double t : times) {
    const double dt = t - t_prev;
    if (dt > 0.0) {
      auto it = propagators.find(dt);
      if (it == propagators.end())
        it = propagators.emplace(dt, (L * dt).exp().eval()).first;
      v = it->second * v;
      t_prev = t;
    }
    if (!v.allFinite())
      throw numerical_error("evolve: propagation produced non-finite values");
    Matrix rho_eig = unvec_matrix(v, d);
    const Complex tr = rho_eig.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > 1e-9)
      throw numerical_error(
          "evolve: trace drifted beyond 1e-9 during propagation");
    out.push_back(Operator{build.space, V * rho_eig * V.adjoint()});
  }
  return out;
}

HeatFlowResult heat_flow(const Operator& H_S, const LiouvillianBuild& build,
                         const Operator& rho_ss, bool include_lamb_shift_in_h,
                         double stale_tol) {
  if (H_S.space != build.space)
    throw domain_error("heat_flow: H_S lives on a different space");
  if (rho_ss.space != build.space)
    throw domain_error("heat_flow: rho_ss lives on a different space");
  const int d = build.space.total_dim;
  const Matrix& V = build.basis.vectors;

  const Vector r = vec_matrix((V.adjoint() * rho_ss.matrix * V).eval());
  const double stale = (build.liouvillian_eig() * r).norm();
  if (stale > stale_tol) {
    std::ostringstream msg;
    msg << "heat_flow: rho_ss is stale for this generator (residual " << stale
        << " > " << stale_tol << ")";
    throw numerical_error(msg.str());
  }

  Matrix H = H_S.matrix;
  if (include_lamb_shift_in_h) H += build.lamb_shift.matrix;
  const Matrix H_eig = V.adjoint() * H * V;

  HeatFlowResult out;
  KahanSum total;
  for (size_t b = 0; b < build.bath_labels.size(); ++b) {
    const Vector phi = build.dissipators_eig[b] * r;
    const Matrix Phi = unvec_matrix(phi, d);
    KahanSum J;
    for (int a = 0; a < d; ++a)
      for (int c = 0; c < d; ++c)
        J.add((H_eig(a, c) * Phi(c, a)).real());
    out.per_bath[build.bath_labels[b]] = J.sum;
    total.add(J.sum);
  }
  out.imbalance = std::abs(total.sum);
  return out;
}

}  // namespace meq
