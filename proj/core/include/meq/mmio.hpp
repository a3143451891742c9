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

#ifndef MEQ_MMIO_HPP
#define MEQ_MMIO_HPP

#include <iosfwd>
#include <string>

#include "meq/types.hpp"

namespace meq {

// Matrix Market export ("%%MatrixMarket matrix coordinate complex general",
// 1-indexed) with full double round-trip precision (%.17g) — the bundled
// Eigen writer truncates to stream precision, hence this small writer.

/// Writes the nonzero entries (|z| > drop_tol) of a dense complex matrix in
/// coordinate complex format.  Deterministic: column-major entry order,
/// %.17g formatting.
void write_matrix_market(std::ostream& out, const Matrix& m,
                         double drop_tol = 0.0);

/// Same, to a file path.  Throws meq::numerical_error when the file cannot
/// be opened.
void write_matrix_market(const std::string& path, const Matrix& m,
                         double drop_tol = 0.0);

}  // namespace meq

#endif  // MEQ_MMIO_HPP
