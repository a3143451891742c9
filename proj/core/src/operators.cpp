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

#include "meq/operators.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

namespace meq {

CompositeSpace CompositeSpace::of(std::vector<int> dims) {
  if (dims.empty()) throw domain_error("CompositeSpace: no subsystems given");
  long long total = 1;
  for (int d : dims) {
    if (d < 2) throw domain_error("CompositeSpace: every dimension must be >= 2");
    total *= d;
    if (total > (1 << 20))
      throw domain_error("CompositeSpace: total dimension too large for dense storage");
  }
  CompositeSpace s;
  s.dims = std::move(dims);
  s.total_dim = static_cast<int>(total);
  return s;
}

Operator annihilation(int N) {
  if (N < 2) throw domain_error("annihilation: truncation must be >= 2");
  Matrix a = Matrix::Zero(N, N);
  for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator{CompositeSpace::single(N), std::move(a)};
}

Operator pauli(PauliKind kind) {
  Matrix m = Matrix::Zero(2, 2);
  switch (kind) {
    case PauliKind::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliKind::Y:
      m(0, 1) = Complex(0, -1);
      m(1, 0) = Complex(0, 1);
      break;
    case PauliKind::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case PauliKind::Plus:  // |e><g| in basis (|e>, |g>)
      m(0, 1) = 1.0;
      break;
    case PauliKind::Minus:  // |g><e|
      m(1, 0) = 1.0;
      break;
  }
  return Operator{CompositeSpace::single(2), std::move(m)};
}

Operator identity(const CompositeSpace& space) {
  return Operator{space, Matrix::Identity(space.total_dim, space.total_dim)};
}

Operator embed(const Operator& local, int site, const CompositeSpace& space) {
  if (site < 0 || site >= static_cast<int>(space.dims.size()))
    throw domain_error("embed: site index out of range");
  if (local.matrix.rows() != space.dims[site] ||
      local.matrix.cols() != space.dims[site])
    throw domain_error("embed: local operator does not match the site dimension");

  Matrix acc = Matrix::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(space.dims.size()); ++k) {
    const Matrix& factor = (k == site)
                               ? local.matrix
                               : static_cast<const Matrix&>(Matrix::Identity(
                                     space.dims[k], space.dims[k]));
    acc = Eigen::kroneckerProduct(acc, factor).eval();
  }
  return Operator{space, std::move(acc)};
}

StateVectorized vectorize(const Operator& rho) {
  if (rho.matrix.rows() != rho.matrix.cols())
    throw domain_error("vectorize: matrix must be square");
  const Eigen::Index d = rho.matrix.rows();
  Vector v(d * d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) v(r * d + c) = rho.matrix(r, c);
  return StateVectorized{rho.space, std::move(v)};
}

Operator unvectorize(const StateVectorized& v) {
  const Eigen::Index n = v.vec.size();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(n))));
  if (d * d != n)
    throw domain_error("unvectorize: length is not a perfect square");
  if (v.space.total_dim != d)
    throw domain_error("unvectorize: length does not match the space");
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = v.vec(r * d + c);
  return Operator{v.space, std::move(m)};
}

Matrix sandwich(const Operator& A, const Operator& B) {
  if (A.space != B.space)
    throw domain_error("sandwich: operators live on different spaces");
  return Eigen::kroneckerProduct(A.matrix, B.matrix.transpose());
}

Matrix super_anticommutator(const Operator& X) {
  if (X.matrix.rows() != X.matrix.cols())
    throw domain_error("super_anticommutator: matrix must be square");
  const Eigen::Index d = X.matrix.rows();
  Matrix id = Matrix::Identity(d, d);
  return Eigen::kroneckerProduct(X.matrix, id) +
         Eigen::kroneckerProduct(id, X.matrix.transpose());
}

}  // namespace meq
