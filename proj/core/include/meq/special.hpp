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

#ifndef MEQ_SPECIAL_HPP
#define MEQ_SPECIAL_HPP

#include "meq/types.hpp"

namespace meq {

/// Digamma function psi(z) for complex argument.
///
/// Evaluated by the upward recurrence psi(z) = psi(z+1) − 1/z until
/// Re(z) >= 10, then the asymptotic series
///
///   psi(z) ~ ln z − 1/(2z) − sum_k B_{2k} / (2k z^{2k})
///
/// with Bernoulli coefficients through order z^{-12}.  Exposed publicly
/// because the bath-correlation closed forms are built on it and because it
/// is convenient to test in isolation.
///
/// Throws meq::domain_error when z is a pole (non-positive integer).
Complex digamma_complex(Complex z);

}  // namespace meq

#endif  // MEQ_SPECIAL_HPP
