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

#include "meq/special.hpp"

#include <cmath>

namespace meq {

Complex digamma_complex(Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 &&
      z.real() == std::floor(z.real())) {
    throw domain_error("digamma_complex: pole at non-positive integer");
  }

  // Upward recurrence psi(z) = psi(z+1) − 1/z until the asymptotic series
  // converges quickly (Re z >= 10).
  Complex shift(0.0, 0.0);
  while (z.real() < 10.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }

  // Asymptotic series: ln z − 1/(2z) − sum B_{2k}/(2k z^{2k}), truncated at
  // z^{-12}.  Coefficients are B_2/2, B_4/4, ... = 1/12, −1/120, 1/252,
  // −1/240, 1/132, −691/32760.
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series(0.0, 0.0);
  static const double kBernoulliOverTwoK[6] = {
      1.0 / 12.0,  -1.0 / 120.0,  1.0 / 252.0,
      -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0};
  Complex p = inv2;
  for (double c : kBernoulliOverTwoK) {
    series += c * p;
    p *= inv2;
  }
  return shift + std::log(z) - 0.5 * inv - series;
}

}  // namespace meq
