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

#ifndef MEQ_TYPES_HPP
#define MEQ_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace meq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;   // dense complex, column-major storage
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thrown when an input lies outside an operation's mathematical domain
/// (non-Hermitian Hamiltonian, pole of a special function, bad dimensions...).
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a numerical procedure fails to reach its accuracy or
/// convergence target (quadrature budget exhausted, singular solve, ...).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace meq

#endif  // MEQ_TYPES_HPP
