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

#include "meq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "spectral_internal.hpp"

namespace meq {

namespace detail {

BohrGrid build_bohr_grid(const RealVector& energies, double tol) {
  const int d = static_cast<int>(energies.size());
  struct Entry {
    double diff;
    int i, j;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      entries.push_back({energies(j) - energies(i), i, j});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.diff < b.diff; });

  BohrGrid grid;
  grid.group_of.resize(d, d);
  int g = -1;
  double prev = 0.0;
  double sum = 0.0;
  long count = 0;
  for (const Entry& e : entries) {
    if (g < 0 || e.diff - prev > tol) {
      if (g >= 0) grid.reps.push_back(sum / static_cast<double>(count));
      ++g;
      sum = 0.0;
      count = 0;
    }
    grid.group_of(e.i, e.j) = g;
    sum += e.diff;
    ++count;
    prev = e.diff;
  }
  if (g >= 0) grid.reps.push_back(sum / static_cast<double>(count));
  return grid;
}

}  // namespace detail

EigenSystem diagonalize(const Operator& H, double tol_degeneracy) {
  const Matrix& m = H.matrix;
  if (m.rows() != m.cols()) throw domain_error("diagonalize: matrix not square");
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > 1e-10 * std::max(scale, 1e-300))
    throw domain_error("diagonalize: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw numerical_error("diagonalize: eigensolver did not converge");

  EigenSystem eig;
  eig.energies = solver.eigenvalues();
  eig.vectors = solver.eigenvectors();
  eig.space = H.space;

  // Deterministic phases: rotate each eigencolumn so its largest-magnitude
  // component (first such index on ties) is real positive.
  const int d = static_cast<int>(eig.energies.size());
  for (int c = 0; c < d; ++c) {
    int imax = 0;
    double amax = -1.0;
    for (int r = 0; r < d; ++r) {
      const double a = std::abs(eig.vectors(r, c));
      if (a > amax) {
        amax = a;
        imax = r;
      }
    }
    const Complex pivot = eig.vectors(imax, c);
    if (std::abs(pivot) > 0.0) eig.vectors.col(c) *= std::conj(pivot) / std::abs(pivot);
  }

  const double span = eig.energies(d - 1) - eig.energies(0);
  eig.tol_degeneracy = tol_degeneracy > 0.0 ? tol_degeneracy : 1e-9 * span;
  return eig;
}

std::vector<double> bohr_frequencies(const EigenSystem& eig) {
  return detail::build_bohr_grid(eig.energies, eig.tol_degeneracy).reps;
}

std::vector<JumpOperator> jump_operators(const EigenSystem& eig,
                                         const Operator& A,
                                         const std::string& bath_label,
                                         int beta) {
  if (A.space != eig.space)
    throw domain_error("jump_operators: operator space does not match the eigensystem");
  const int d = eig.space.total_dim;
  const detail::BohrGrid grid =
      detail::build_bohr_grid(eig.energies, eig.tol_degeneracy);

  Matrix projected = eig.vectors.adjoint() * A.matrix * eig.vectors;
  const double prune = 1e-12 * A.matrix.norm();

  // One masked component per frequency group that has surviving entries.
  std::vector<Matrix> parts(grid.reps.size());
  std::vector<bool> used(grid.reps.size(), false);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Complex v = projected(i, j);
      if (std::abs(v) <= prune) continue;
      const int g = grid.group_of(i, j);
      if (!used[g]) {
        parts[g] = Matrix::Zero(d, d);
        used[g] = true;
      }
      parts[g](i, j) = v;
    }
  }

  std::vector<JumpOperator> jumps;
  for (size_t g = 0; g < grid.reps.size(); ++g) {
    if (!used[g]) continue;
    JumpOperator op;
    op.bath_label = bath_label;
    op.beta = beta;
    op.omega = grid.reps[g];
    op.matrix =
        Operator{eig.space, eig.vectors * parts[g] * eig.vectors.adjoint()};
    jumps.push_back(std::move(op));
  }
  return jumps;
}

}  // namespace meq
