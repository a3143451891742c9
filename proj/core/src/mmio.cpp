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

#include "meq/mmio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace meq {

void write_matrix_market(std::ostream& out, const Matrix& m, double drop_tol) {
  long long nnz = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > drop_tol) ++nnz;
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  char line[128];
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const Complex z = m(r, c);
      if (std::abs(z) <= drop_tol) continue;
      std::snprintf(line, sizeof line, "%lld %lld %.17g %.17g\n",
                    static_cast<long long>(r + 1),
                    static_cast<long long>(c + 1), z.real(), z.imag());
      out << line;
    }
}

void write_matrix_market(const std::string& path, const Matrix& m,
                         double drop_tol) {
  std::ofstream f(path);
  if (!f) throw numerical_error("cannot open '" + path + "' for writing");
  write_matrix_market(f, m, drop_tol);
  if (!f) throw numerical_error("write to '" + path + "' failed");
}

}  // namespace meq
