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

#ifndef MEQ_OPERATORS_HPP
#define MEQ_OPERATORS_HPP

#include <vector>

#include "meq/types.hpp"

namespace meq {

// ---------------------------------------------------------------------------
// Operator algebra over composite Hilbert spaces.
//
// Everything downstream (jump operators, dissipators, the Liouvillian) is
// built from dense complex matrices carrying subsystem-dimension metadata.
// Density matrices are flattened by ROW-stacking: the length-d² vector stores
// element (r, c) at index r·d + c.  Under this convention
//
//     vec(A X B) = (A ⊗ Bᵀ) vec(X),
//
// so the map X ↦ A X B is the Kronecker product A ⊗ Bᵀ, the commutator
// generator is H ⊗ 1 − 1 ⊗ Hᵀ, and a sandwich A X B† is A ⊗ B*.  This is the
// single place the convention is defined; all superoperator code assumes it.
// ---------------------------------------------------------------------------

/// Ordered list of subsystem dimensions; leftmost entry is the leftmost
/// Kronecker factor.
struct CompositeSpace {
  std::vector<int> dims;
  int total_dim = 0;

  /// Builds a space from subsystem dimensions.  Every dimension must be >= 2.
  static CompositeSpace of(std::vector<int> dims);

  /// Single-factor space of dimension n.
  static CompositeSpace single(int n) { return of({n}); }

  bool operator==(const CompositeSpace& other) const = default;
};

/// Dense complex square matrix over a composite space.
struct Operator {
  CompositeSpace space;
  Matrix matrix;

  int dim() const { return space.total_dim; }
};

/// Row-stacked density matrix (or any operator) as a length-d² vector.
struct StateVectorized {
  CompositeSpace space;
  Vector vec;
};

/// Bosonic annihilation operator truncated to N levels:
/// <n-1|a|n> = sqrt(n).  Requires N >= 2.
Operator annihilation(int N);

enum class PauliKind { X, Y, Z, Plus, Minus };

/// Standard 2x2 Pauli/ladder matrices in the basis (|e>, |g>) with
/// sigma_z|e> = +|e> and sigma_+ = |e><g|.
Operator pauli(PauliKind kind);

/// Identity operator on the given space.
Operator identity(const CompositeSpace& space);

/// Embeds a single-subsystem operator at position `site` of a composite
/// space: 1 ⊗ ... ⊗ local ⊗ ... ⊗ 1, Kronecker order matching dims order.
Operator embed(const Operator& local, int site, const CompositeSpace& space);

/// Row-stacking vectorization: vec[r·d + c] = rho(r, c).
StateVectorized vectorize(const Operator& rho);

/// Inverse of vectorize.  The vector length must be a perfect square
/// matching the space dimension.
Operator unvectorize(const StateVectorized& v);

/// Superoperator of X ↦ A X B: the matrix A ⊗ Bᵀ (row-stacking convention).
Matrix sandwich(const Operator& A, const Operator& B);

/// Superoperator of rho ↦ {X, rho} = X rho + rho X:  X ⊗ 1 + 1 ⊗ Xᵀ.
Matrix super_anticommutator(const Operator& X);

}  // namespace meq

#endif  // MEQ_OPERATORS_HPP
