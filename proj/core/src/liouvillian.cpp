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

#include "meq/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "log_internal.hpp"
#include "spectral_internal.hpp"
#include "superop_internal.hpp"

namespace meq {

namespace detail {

Matrix commutator_superop(const Matrix& H) {
  const Eigen::Index d = H.rows();
  const Eigen::Index d2 = d * d;
  Matrix out = Matrix::Zero(d2, d2);
  // H ⊗ 1: [(a,b),(c,b)] += H(a,c).  Column-major friendly: column c·d+b.
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index a = 0; a < d; ++a) out(a * d + b, c * d + b) += H(a, c);
  // −1 ⊗ Hᵀ: [(a,b),(a,e)] −= H(e,b).
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index e = 0; e < d; ++e)
      for (Eigen::Index b = 0; b < d; ++b) out(a * d + b, a * d + e) -= H(e, b);
  return out;
}

void subtract_half_anticommutator(Matrix& D, const Matrix& K) {
  const Eigen::Index d = K.rows();
  // −½ K ⊗ 1: [(a,b),(c,b)] −= ½ K(a,c).
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index a = 0; a < d; ++a)
        D(a * d + b, c * d + b) -= 0.5 * K(a, c);
  // −½ 1 ⊗ Kᵀ: [(a,b),(a,e)] −= ½ K(e,b).
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index e = 0; e < d; ++e)
      for (Eigen::Index b = 0; b < d; ++b)
        D(a * d + b, a * d + e) -= 0.5 * K(e, b);
}

Matrix superop_similarity(const Matrix& M, const Matrix& V) {
  // Viewing the d²×d² matrix as a 4-index tensor M[(k,i),(l,j)] with i, j
  // fast, the similarity (V ⊗ V*) M (V ⊗ V*)† contracts one factor into
  // each index:  V into k,  V* into i,  V† into l (from the right),
  // Vᵀ into j (from the right).  Each contraction is a single GEMM over a
  // reshaped view, giving O(d⁵) total work with no index permutations.
  const Eigen::Index d = V.rows();
  const Eigen::Index d2 = d * d, d3 = d2 * d;
  Matrix A = M;
  Matrix B(d2, d2);
  const Matrix Vc = V.conjugate();
  const Matrix Vt = V.transpose();
  const Matrix Va = V.adjoint();
  // Fast row index i (stride 1):  out(b, ·) = sum_i conj(V(b,i)) A(i, ·).
  Eigen::Map<Matrix>(B.data(), d, d3) =
      Vc * Eigen::Map<const Matrix>(A.data(), d, d3);
  // Slow row index k (stride d): per column, out(b,a) = sum_k X(b,k) V(a,k).
  for (Eigen::Index c = 0; c < d2; ++c) {
    Eigen::Map<const Matrix> X(B.col(c).data(), d, d);
    Eigen::Map<Matrix> Z(A.col(c).data(), d, d);
    Z = X * Vt;
  }
  // Fast column index j (stride d²): per slow block l,
  // out(·,e) = sum_j G(·,j) V(e,j).
  for (Eigen::Index l = 0; l < d; ++l) {
    Eigen::Map<const Matrix> G(A.data() + l * d3, d2, d);
    Eigen::Map<Matrix> Go(B.data() + l * d3, d2, d);
    Go = G * Vt;
  }
  // Slow column index l (stride d³): out(·,c) = sum_l H(·,l) conj(V(c,l)).
  Eigen::Map<Matrix>(A.data(), d3, d) =
      Eigen::Map<const Matrix>(B.data(), d3, d) * Va;
  return A;
}

}  // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPrunRel = 1e-12;  ///< element pruning, relative to ‖A‖_F

/// Nonzero elements of one coupling operator in the eigenbasis, sorted by
/// Bohr-frequency group (then row, then column) with a per-group index.
struct EigElems {
  std::vector<int> row, col, grp;
  std::vector<Complex> val;
  std::vector<int> groups;                        ///< distinct groups, ascending
  std::vector<std::pair<int, int>> group_range;   ///< [begin, end) per group
};

EigElems extract_elements(const Matrix& A_eig, const Eigen::MatrixXi& group_of,
                          double prune) {
  const int d = static_cast<int>(A_eig.rows());
  struct Entry {
    int grp, row, col;
    Complex val;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Complex v = A_eig(i, j);
      if (std::abs(v) <= prune) continue;
      entries.push_back({group_of(i, j), i, j, v});
    }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.grp, a.row, a.col) < std::tie(b.grp, b.row, b.col);
  });
  EigElems e;
  e.row.reserve(entries.size());
  for (size_t p = 0; p < entries.size(); ++p) {
    const Entry& en = entries[p];
    if (e.groups.empty() || e.groups.back() != en.grp) {
      e.groups.push_back(en.grp);
      e.group_range.emplace_back(static_cast<int>(p), static_cast<int>(p));
    }
    e.group_range.back().second = static_cast<int>(p) + 1;
    e.row.push_back(en.row);
    e.col.push_back(en.col);
    e.grp.push_back(en.grp);
    e.val.push_back(en.val);
  }
  return e;
}

/// Effective Partial coefficient that folds Redfield and FullSecular into the
/// same retention rule: FullSecular keeps only Delta = 0 (c = 0), Redfield
/// keeps everything (c = +inf).  Using one code path makes the limit
/// identities Partial(0) = FullSecular and Partial(inf) = Redfield bitwise.
double effective_c(const SecularPolicy& policy) {
  switch (policy.kind) {
    case SecularPolicy::Kind::Redfield:
      return std::numeric_limits<double>::infinity();
    case SecularPolicy::Kind::FullSecular:
      return 0.0;
    case SecularPolicy::Kind::Partial:
      return policy.c_psa;
    case SecularPolicy::Kind::Unified:
      break;
  }
  throw domain_error("effective_c: unified policy has no Partial equivalent");
}

/// Retention decision on two frequency representatives: differences within
/// freq_tol count as exactly degenerate, otherwise the Partial criterion with
/// coefficient c decides.
bool keep_pair(double w_ket, double w_dag, double tau_r, double c,
               double freq_tol) {
  if (std::abs(w_ket - w_dag) <= freq_tol) return true;
  return !psa_drop(w_ket, w_dag, tau_r, c);
}

/// Frequency-level pair bookkeeping for one bath: every ordered pair of
/// content-bearing frequencies of every ordered pair of coupling operators is
/// either retained or dropped.
struct PairCount {
  long long kept = 0;
  long long dropped = 0;
};

Complex gamma_coefficient(const Complex& G_ket, const Complex& G_dag) {
  return G_ket + std::conj(G_dag);
}

Complex lamb_coefficient(const Complex& G_ket, const Complex& G_dag) {
  return (G_ket - std::conj(G_dag)) / Complex(0.0, 2.0);
}

// ---------------------------------------------------------------------------
// Reference (original-basis) assembly from explicit jump lists.
// ---------------------------------------------------------------------------

/// Sorted view of one coupling operator's jump list.
struct FreqList {
  std::vector<double> omega;
  std::vector<const Matrix*> mat;
};

FreqList make_freq_list(const std::vector<JumpOperator>& jumps) {
  std::vector<int> order(jumps.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return jumps[a].omega < jumps[b].omega;
  });
  FreqList f;
  for (int idx : order) {
    f.omega.push_back(jumps[idx].omega);
    f.mat.push_back(&jumps[idx].matrix.matrix);
  }
  return f;
}

/// Half-open window [lo, hi) of dagger frequencies retained against a ket
/// frequency.  All policies retain a contiguous interval |w' − w| <= thr:
/// thr = freq_tol for FullSecular and Unified, max(freq_tol, c/tau_r) for
/// Partial, +inf for Redfield.
std::pair<size_t, size_t> retained_window(const std::vector<double>& omegas,
                                          double w, double thr) {
  if (std::isinf(thr)) return {0, omegas.size()};
  auto lo = std::lower_bound(omegas.begin(), omegas.end(), w - thr);
  auto hi = std::upper_bound(omegas.begin(), omegas.end(), w + thr);
  return {static_cast<size_t>(lo - omegas.begin()),
          static_cast<size_t>(hi - omegas.begin())};
}

double retention_threshold(const SecularPolicy& policy, double tau_r,
                           double freq_tol) {
  if (policy.kind == SecularPolicy::Kind::Unified) return freq_tol;
  const double c = effective_c(policy);
  if (std::isinf(c)) return std::numeric_limits<double>::infinity();
  return std::max(freq_tol, c / tau_r);
}

void validate_jump_args(const std::vector<BathJumpLists>& jumps,
                        const std::vector<BathSpec>& baths, double tau_r,
                        double freq_tol) {
  if (jumps.size() != baths.size())
    throw domain_error(
        "build_dissipator: jump lists and bath list differ in length");
  if (!(tau_r > 0.0))
    throw domain_error("build_dissipator: tau_r must be positive");
  if (!(freq_tol >= 0.0))
    throw domain_error("build_dissipator: freq_tol must be non-negative");
  for (size_t b = 0; b < baths.size(); ++b)
    if (jumps[b].size() != baths[b].coupling_ops.size())
      throw domain_error(
          "build_dissipator: one jump list required per coupling operator");
}

int common_dim(const std::vector<BathSpec>& baths) {
  for (const BathSpec& b : baths)
    if (!b.coupling_ops.empty()) return b.coupling_ops.front().dim();
  throw domain_error("build_dissipator: no coupling operators given");
}

}  // namespace

// ---------------------------------------------------------------------------
// LiouvillianBuild: lazy original-basis materialization.
// ---------------------------------------------------------------------------

struct LiouvillianBuild::Cache {
  std::mutex mutex;
  std::optional<Matrix> total;
  std::map<std::string, Matrix> dissipators;
};

LiouvillianBuild::LiouvillianBuild() : cache_(std::make_unique<Cache>()) {}
LiouvillianBuild::LiouvillianBuild(LiouvillianBuild&&) noexcept = default;
LiouvillianBuild& LiouvillianBuild::operator=(LiouvillianBuild&&) noexcept =
    default;
LiouvillianBuild::~LiouvillianBuild() = default;

Matrix LiouvillianBuild::liouvillian_eig() const {
  Matrix L = Complex(0.0, -1.0) * detail::commutator_superop(h_effective_eig);
  for (const Matrix& D : dissipators_eig) L += D;
  return L;
}

const Matrix& LiouvillianBuild::total() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (!cache_->total) {
    detail::logger()->debug(
        "materializing full generator in the original basis (d={})",
        space.total_dim);
    const Matrix& V = basis.vectors;
    const Matrix H_orig = V * h_effective_eig * V.adjoint();
    Matrix L = Complex(0.0, -1.0) * detail::commutator_superop(H_orig);
    for (const Matrix& D : dissipators_eig)
      L += detail::superop_similarity(D, V);
    cache_->total = std::move(L);
  }
  return *cache_->total;
}

const Matrix& LiouvillianBuild::dissipator(const std::string& label) const {
  size_t idx = bath_labels.size();
  for (size_t i = 0; i < bath_labels.size(); ++i)
    if (bath_labels[i] == label) {
      idx = i;
      break;
    }
  if (idx == bath_labels.size())
    throw domain_error("dissipator: unknown bath label '" + label + "'");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->dissipators.find(label);
  if (it == cache_->dissipators.end()) {
    detail::logger()->debug(
        "materializing dissipator '{}' in the original basis", label);
    it = cache_->dissipators
             .emplace(label, detail::superop_similarity(dissipators_eig[idx],
                                                        basis.vectors))
             .first;
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// Reference construction from explicit jump lists (original basis).
// ---------------------------------------------------------------------------

DissipatorSet build_dissipator(const std::vector<BathJumpLists>& jumps,
                               const std::vector<BathSpec>& baths,
                               const SecularPolicy& policy, double tau_r,
                               double freq_tol) {
  validate_jump_args(jumps, baths, tau_r, freq_tol);
  const int d = common_dim(baths);
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  const bool unified = policy.kind == SecularPolicy::Kind::Unified;
  const double thr = retention_threshold(policy, tau_r, freq_tol);

  DissipatorSet out;
  for (size_t b = 0; b < baths.size(); ++b) {
    const BathSpec& bath = baths[b];
    const double a2 = bath.alpha * bath.alpha;
    std::vector<FreqList> lists;
    lists.reserve(jumps[b].size());
    for (const auto& oplist : jumps[b]) lists.push_back(make_freq_list(oplist));

    Matrix D = Matrix::Zero(d2, d2);
    Matrix K = Matrix::Zero(d, d);

    for (const FreqList& fd : lists) {    // dagger operator
      for (const FreqList& fk : lists) {  // ket operator
        // Sandwich part.  gamma(w, w') = Gamma(w) + conj(Gamma(w')) splits
        // the retained double sum into two window-factorized single sums:
        //   sum_w  (Gamma(w) A_k(w)) ⊗ conj(W_d(w))
        // + sum_w' W_k(w') ⊗ conj(Gamma(w') A_d(w')),
        // with W the window sum of the partner's retained components.  The
        // unified rate gamma_full(wbar) does not split; its retained pairs
        // are frequency-diagonal, so one windowed term suffices.
        for (size_t p = 0; p < fk.omega.size(); ++p) {
          auto [lo, hi] = retained_window(fd.omega, fk.omega[p], thr);
          if (lo == hi) continue;
          Matrix W = Matrix::Zero(d, d);
          for (size_t q = lo; q < hi; ++q) W += *fd.mat[q];
          const Complex coef =
              unified ? Complex(gamma_full(fk.omega[p], bath), 0.0)
                      : Complex(kPi * I_of_omega(fk.omega[p], bath),
                                S_of_omega(fk.omega[p], bath));
          D += Eigen::kroneckerProduct((coef * (*fk.mat[p])).eval(),
                                       W.conjugate());
        }
        if (!unified) {
          for (size_t q = 0; q < fd.omega.size(); ++q) {
            auto [lo, hi] = retained_window(fk.omega, fd.omega[q], thr);
            if (lo == hi) continue;
            Matrix W = Matrix::Zero(d, d);
            for (size_t p = lo; p < hi; ++p) W += *fk.mat[p];
            const Complex coef(kPi * I_of_omega(fd.omega[q], bath),
                               S_of_omega(fd.omega[q], bath));
            D += Eigen::kroneckerProduct(W, (coef * (*fd.mat[q])).conjugate());
          }
        }
        // Anticommutator kernel K = sum gamma(w,w') A_d(w')† A_k(w) over the
        // same retained pairs, plus pair bookkeeping.
        for (size_t p = 0; p < fk.omega.size(); ++p) {
          auto [lo, hi] = retained_window(fd.omega, fk.omega[p], thr);
          out.kept_pairs += static_cast<long long>(hi - lo);
          out.dropped_pairs += static_cast<long long>(fd.omega.size() -
                                                      (hi - lo));
          for (size_t q = lo; q < hi; ++q) {
            const Complex g =
                unified
                    ? Complex(gamma_full(fk.omega[p], bath), 0.0)
                    : gamma_pair(fk.omega[p], fd.omega[q], bath);
            K += g * (fd.mat[q]->adjoint() * (*fk.mat[p]));
          }
        }
      }
    }
    detail::subtract_half_anticommutator(D, K);
    out.per_bath.push_back(a2 * D);
  }
  return out;
}

Operator build_lamb_shift(const std::vector<BathJumpLists>& jumps,
                          const std::vector<BathSpec>& baths,
                          const SecularPolicy& policy, double tau_r,
                          double freq_tol) {
  validate_jump_args(jumps, baths, tau_r, freq_tol);
  const int d = common_dim(baths);
  const bool unified = policy.kind == SecularPolicy::Kind::Unified;
  const double thr = retention_threshold(policy, tau_r, freq_tol);

  CompositeSpace space;
  Matrix H = Matrix::Zero(d, d);
  for (size_t b = 0; b < baths.size(); ++b) {
    const BathSpec& bath = baths[b];
    const double a2 = bath.alpha * bath.alpha;
    if (space.dims.empty() && !bath.coupling_ops.empty())
      space = bath.coupling_ops.front().space;
    std::vector<FreqList> lists;
    for (const auto& oplist : jumps[b]) lists.push_back(make_freq_list(oplist));
    for (const FreqList& fd : lists) {
      for (const FreqList& fk : lists) {
        for (size_t p = 0; p < fk.omega.size(); ++p) {
          auto [lo, hi] = retained_window(fd.omega, fk.omega[p], thr);
          for (size_t q = lo; q < hi; ++q) {
            const Complex c =
                unified ? Complex(S_of_omega(fk.omega[p], bath), 0.0)
                        : pi_pair(fk.omega[p], fd.omega[q], bath);
            H += (a2 * c) * (fd.mat[q]->adjoint() * (*fk.mat[p]));
          }
        }
      }
    }
  }
  // Hermitian in exact arithmetic (the retained pair set is swap-symmetric
  // and conj(pi(w,w')) = pi(w',w)); symmetrize away roundoff.
  H = 0.5 * (H + H.adjoint()).eval();
  return Operator{space, std::move(H)};
}

// ---------------------------------------------------------------------------
// Full pipeline (eigenbasis scatter assembly).
// ---------------------------------------------------------------------------

LiouvillianBuild build_liouvillian(const Operator& H_full,
                                   const Operator& H_jump_basis,
                                   const std::vector<BathSpec>& baths,
                                   const SecularPolicy& policy,
                                   bool include_lamb_shift,
                                   double tol_degeneracy) {
  if (H_full.space != H_jump_basis.space)
    throw domain_error(
        "build_liouvillian: H_full and H_jump_basis live on different spaces");
  if (baths.empty()) throw domain_error("build_liouvillian: no baths given");
  for (const BathSpec& b : baths)
    for (const Operator& A : b.coupling_ops)
      if (A.space != H_full.space)
        throw domain_error("build_liouvillian: coupling operator of bath '" +
                           b.label + "' lives on a different space");

  const int d = H_full.dim();
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  const bool unified = policy.kind == SecularPolicy::Kind::Unified;

  double alpha_max = 0.0;
  for (const BathSpec& b : baths) alpha_max = std::max(alpha_max, b.alpha);
  const double tau_r = alpha_max > 0.0
                           ? 1.0 / (alpha_max * alpha_max)
                           : std::numeric_limits<double>::infinity();

  LiouvillianBuild out;
  out.policy = policy;
  out.include_lamb_shift = include_lamb_shift;
  out.space = H_full.space;
  out.hamiltonian = H_full;
  out.is_local = (H_full.matrix - H_jump_basis.matrix).norm() >
                 1e-12 * std::max(1.0, H_full.matrix.norm());
  out.basis = diagonalize(H_jump_basis, tol_degeneracy);
  const double freq_tol = out.basis.tol_degeneracy;
  const detail::BohrGrid grid =
      detail::build_bohr_grid(out.basis.energies, freq_tol);
  const int n_groups = static_cast<int>(grid.reps.size());
  const Matrix& V = out.basis.vectors;

  detail::logger()->info(
      "assembling Liouvillian: d={}, policy={}, {} basis, {} Bohr groups", d,
      policy.name(), out.is_local ? "local" : "global", n_groups);

  // Unified: cluster the full deduplicated Bohr list once; every group then
  // maps to the cluster containing its representative.
  std::vector<int> cluster_of_group;
  std::vector<double> cluster_rep;
  if (unified) {
    auto clusters = cluster_frequencies(grid.reps, policy.w);
    cluster_of_group.resize(n_groups);
    int g = 0;
    for (size_t c = 0; c < clusters.size(); ++c) {
      cluster_rep.push_back(clusters[c].representative);
      for (size_t m = 0; m < clusters[c].members.size(); ++m)
        cluster_of_group[g++] = static_cast<int>(c);
    }
    out.clusters = std::move(clusters);
  }
  const double c_eff = unified ? 0.0 : effective_c(policy);

  Matrix HLS_eig = Matrix::Zero(d, d);
  for (const BathSpec& bath : baths) {
    out.bath_labels.push_back(bath.label);
    const double a2 = bath.alpha * bath.alpha;

    // Eigenbasis elements of each coupling operator, grouped by frequency.
    std::vector<EigElems> ops;
    for (const Operator& A : bath.coupling_ops) {
      const Matrix A_eig = V.adjoint() * A.matrix * V;
      ops.push_back(
          extract_elements(A_eig, grid.group_of, kPrunRel * A.matrix.norm()));
    }

    // Correlation-function table, one entry per group with content.
    std::vector<char> used(n_groups, 0);
    for (const EigElems& e : ops)
      for (int g : e.groups) used[g] = 1;
    std::vector<Complex> Gamma(n_groups, Complex(0, 0));
    for (int g = 0; g < n_groups; ++g)
      if (used[g])
        Gamma[g] = Complex(kPi * I_of_omega(grid.reps[g], bath),
                           S_of_omega(grid.reps[g], bath));
    // Unified coefficients live on clusters instead.
    std::vector<double> cl_rate, cl_shift;
    if (unified) {
      std::vector<char> cl_used(cluster_rep.size(), 0);
      for (int g = 0; g < n_groups; ++g)
        if (used[g]) cl_used[cluster_of_group[g]] = 1;
      cl_rate.assign(cluster_rep.size(), 0.0);
      cl_shift.assign(cluster_rep.size(), 0.0);
      for (size_t c = 0; c < cluster_rep.size(); ++c)
        if (cl_used[c]) {
          cl_rate[c] = gamma_full(cluster_rep[c], bath);
          cl_shift[c] = S_of_omega(cluster_rep[c], bath);
        }
    }

    Matrix D = Matrix::Zero(d2, d2);
    Matrix K = Matrix::Zero(d, d);
    Matrix HLS_b = Matrix::Zero(d, d);
    PairCount count;

    // Unified bookkeeping lives on the merged-frequency domain: one entry
    // per content-bearing cluster per operator, diagonal pairs retained.
    if (unified) {
      std::vector<std::vector<int>> op_clusters;
      for (const EigElems& e : ops) {
        std::vector<int> cl;
        for (int g : e.groups)
          if (cl.empty() || cl.back() != cluster_of_group[g])
            cl.push_back(cluster_of_group[g]);
        op_clusters.push_back(std::move(cl));
      }
      for (const auto& cd : op_clusters)
        for (const auto& ck : op_clusters) {
          size_t p = 0, q = 0;
          long long common = 0;
          while (p < ck.size() && q < cd.size()) {
            if (ck[p] == cd[q]) ++common, ++p, ++q;
            else if (ck[p] < cd[q]) ++p;
            else ++q;
          }
          count.kept += common;
          count.dropped += static_cast<long long>(ck.size()) *
                               static_cast<long long>(cd.size()) -
                           common;
        }
    }

    for (const EigElems& ed : ops) {    // dagger operator
      for (const EigElems& ek : ops) {  // ket operator
        for (size_t gki = 0; gki < ek.groups.size(); ++gki) {
          const int gk = ek.groups[gki];
          for (size_t gdi = 0; gdi < ed.groups.size(); ++gdi) {
            const int gd = ed.groups[gdi];
            bool keep;
            Complex gamma, shift;
            if (unified) {
              keep = cluster_of_group[gk] == cluster_of_group[gd];
              if (keep) {
                const int c = cluster_of_group[gk];
                gamma = Complex(cl_rate[c], 0.0);
                shift = Complex(cl_shift[c], 0.0);
              }
            } else {
              keep = keep_pair(grid.reps[gk], grid.reps[gd], tau_r, c_eff,
                               freq_tol);
              if (keep) {
                gamma = gamma_coefficient(Gamma[gk], Gamma[gd]);
                shift = lamb_coefficient(Gamma[gk], Gamma[gd]);
              }
            }
            if (!keep) {
              if (!unified) ++count.dropped;
              continue;
            }
            if (!unified) ++count.kept;
            const auto [kb, ke] = ek.group_range[gki];
            const auto [db, de] = ed.group_range[gdi];
            for (int p = kb; p < ke; ++p) {
              const int rk = ek.row[p], ck = ek.col[p];
              const Complex vk = ek.val[p];
              for (int q = db; q < de; ++q) {
                const Complex vd_c = std::conj(ed.val[q]);
                D(static_cast<Eigen::Index>(rk) * d + ed.row[q],
                  static_cast<Eigen::Index>(ck) * d + ed.col[q]) +=
                    gamma * vk * vd_c;
                if (ed.row[q] == rk) {
                  const Complex w = vd_c * vk;
                  K(ed.col[q], ck) += gamma * w;
                  HLS_b(ed.col[q], ck) += shift * w;
                }
              }
            }
          }
        }
      }
    }
    detail::subtract_half_anticommutator(D, K);
    out.dissipators_eig.push_back(a2 * D);
    HLS_eig += a2 * HLS_b;
    out.kept_pairs += count.kept;
    out.dropped_pairs += count.dropped;
  }

  // Hermitian in exact arithmetic; symmetrize away roundoff scatter.
  HLS_eig = 0.5 * (HLS_eig + HLS_eig.adjoint()).eval();
  out.lamb_shift = Operator{out.space, V * HLS_eig * V.adjoint()};
  out.h_effective_eig = V.adjoint() * H_full.matrix * V;
  if (include_lamb_shift) out.h_effective_eig += HLS_eig;

  detail::logger()->info("assembly done: kept {} / dropped {} frequency pairs",
                         out.kept_pairs, out.dropped_pairs);
  return out;
}

}  // namespace meq
