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

#include "meq/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "meq/spectral.hpp"
#include "superop_internal.hpp"

namespace meq {

namespace {

/// Largest off-diagonal magnitude; 0.0 means exactly diagonal.
double max_offdiagonal(const Matrix& M) {
  double m = 0.0;
  for (Eigen::Index c = 0; c < M.cols(); ++c)
    for (Eigen::Index r = 0; r < M.rows(); ++r)
      if (r != c) m = std::max(m, std::abs(M(r, c)));
  return m;
}

/// ‖L·diag(lam) − diag(lam)·L‖_F for a diagonal superoperator, in one pass:
/// the commutator entry at (r,c) is L(r,c)·(lam_c − lam_r).
double diagonal_commutator_norm(const Matrix& L, const RealVector& lam) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < L.cols(); ++c)
    for (Eigen::Index r = 0; r < L.rows(); ++r) {
      const double dl = lam[c] - lam[r];
      sum += std::norm(L(r, c)) * dl * dl;
    }
  return std::sqrt(sum);
}

}  // namespace

Matrix superop_adjoint(const Operator& J) {
  return detail::commutator_superop(J.matrix);
}

SymmetryCheck check_weak_symmetry(const Matrix& L, const Matrix& Jsup,
                                  double tol) {
  if (L.rows() != L.cols() || Jsup.rows() != Jsup.cols() ||
      L.rows() != Jsup.rows())
    throw domain_error("check_weak_symmetry: dimension mismatch");
  const double l_norm = L.norm();
  if (l_norm == 0.0) return {true, 0.0};
  double resid;
  if (max_offdiagonal(Jsup) == 0.0) {
    RealVector lam = Jsup.diagonal().real();
    resid = diagonal_commutator_norm(L, lam);
  } else {
    resid = (L * Jsup - Jsup * L).norm();
  }
  const double rel = resid / l_norm;
  return {rel <= tol, rel};
}

BlockDecomposition block_transform(const Matrix& L, const Operator& J,
                                   double tol) {
  const int d = J.dim();
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  if (L.rows() != d2 || L.cols() != d2)
    throw domain_error(
        "block_transform: L must be d²×d² for the space of J");

  // Eigenbasis of the generator (deterministic phases), then rotate L there;
  // the commutator residual is unitarily invariant, so the symmetry can be
  // verified cheaply against the now-diagonal generator superoperator.
  const EigenSystem ej = diagonalize(J);
  const Matrix& VJ = ej.vectors;
  const RealVector& n = ej.energies;

  // superop_similarity with V† implements U† L U for U = VJ ⊗ VJ*.
  Matrix L_rot = detail::superop_similarity(L, VJ.adjoint());

  RealVector lam(d2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lam[static_cast<Eigen::Index>(i) * d + j] =
        n[i] - n[j];

  const double l_norm = L.norm();
  const double resid =
      l_norm == 0.0 ? 0.0 : diagonal_commutator_norm(L_rot, lam) / l_norm;
  if (resid > tol) {
    std::ostringstream msg;
    msg << "block_transform: J does not generate a weak symmetry "
           "(relative commutator residual "
        << resid << " > tol " << tol << ")";
    throw domain_error(msg.str());
  }

  // Group the d² eigenvalue differences into labels.
  const double span = n.size() > 0 ? n[n.size() - 1] - n[0] : 0.0;
  const double label_tol = 1e-8 * span;
  std::vector<int> order(d2);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (lam[a] != lam[b]) return lam[a] < lam[b];
    return a < b;  // stable within a label: original pair index
  });

  BlockDecomposition out;
  std::vector<std::pair<int, int>> ranges;
  int begin = 0;
  for (int t = 1; t <= static_cast<int>(d2); ++t) {
    if (t == static_cast<int>(d2) ||
        lam[order[t]] - lam[order[t - 1]] > label_tol) {
      ranges.emplace_back(begin, t);
      begin = t;
    }
  }
  for (const auto& [b, e] : ranges) {
    double mean = 0.0;
    for (int t = b; t < e; ++t) mean += lam[order[t]];
    out.block_labels.push_back(mean / (e - b));
  }
  for (size_t g = 1; g < out.block_labels.size(); ++g)
    if (out.block_labels[g] - out.block_labels[g - 1] <= label_tol)
      throw domain_error(
          "block_transform: label grouping produced overlapping labels; "
          "the generator spectrum is too clustered for the tolerance");
  out.block_ranges = ranges;

  // Within a label, columns follow the original pair index i·d+j.
  for (const auto& [b, e] : ranges)
    std::sort(order.begin() + b, order.begin() + e);

  // Permute the rotated generator and build U = (VJ ⊗ VJ*) P column-wise
  // (column for pair (i,j) is VJ.col(i) ⊗ conj(VJ.col(j))).
  Eigen::VectorXi perm(d2);
  for (Eigen::Index t = 0; t < d2; ++t) perm[t] = order[t];
  Matrix L_blk(d2, d2);
  for (Eigen::Index c = 0; c < d2; ++c)
    for (Eigen::Index r = 0; r < d2; ++r)
      L_blk(r, c) = L_rot(perm[r], perm[c]);
  L_rot.resize(0, 0);

  out.transform_U.resize(d2, d2);
  for (Eigen::Index t = 0; t < d2; ++t) {
    const int i = perm[t] / d;
    const int j = perm[t] % d;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        out.transform_U(static_cast<Eigen::Index>(a) * d + b, t) =
            VJ(a, i) * std::conj(VJ(b, j));
  }

  out.symmetry_residual = resid;
  for (const auto& [b, e] : ranges)
    out.blocks.push_back(L_blk.block(b, b, e - b, e - b));
  // Off-block mass summed directly over entries outside the diagonal blocks;
  // the subtraction ‖L_blk‖² − Σ‖block‖² would bottom out at ‖L‖·√eps.
  std::vector<int> block_of(d2);
  for (size_t g = 0; g < ranges.size(); ++g)
    for (int t = ranges[g].first; t < ranges[g].second; ++t)
      block_of[t] = static_cast<int>(g);
  double off_sq = 0.0;
  for (Eigen::Index c = 0; c < d2; ++c)
    for (Eigen::Index r = 0; r < d2; ++r)
      if (block_of[r] != block_of[c]) off_sq += std::norm(L_blk(r, c));
  out.offblock_mass = std::sqrt(off_sq);
  return out;
}

}  // namespace meq
