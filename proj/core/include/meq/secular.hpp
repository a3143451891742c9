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

#ifndef MEQ_SECULAR_HPP
#define MEQ_SECULAR_HPP

#include <string>
#include <vector>

#include "meq/spectral.hpp"
#include "meq/types.hpp"

namespace meq {

// ---------------------------------------------------------------------------
// Secularization policies.
//
// A master-equation build must decide which frequency pairs (w, w') of jump
// operators to retain.  Four policies are supported:
//
//   Redfield     keep every pair (no secularization),
//   FullSecular  keep only w = w' (within tolerance),
//   Partial(C)   keep w = w' and quasidegenerate pairs: a cross term is
//                dropped iff C/|w − w'| < tau_R, where tau_R ~ alpha^{-2} is
//                the dissipative timescale (strict '<'; C = 0 reproduces
//                FullSecular, C = inf reproduces Redfield),
//   Unified(w)   merge nearby frequencies into clusters of width scale w and
//                keep only cluster-diagonal pairs of the merged operators.
//
// Clustering is single-linkage on the sorted frequency list: a gap >= w
// between consecutive frequencies closes the cluster.  Chained clusters can
// grow wider than w; that pathology is reported as a warning but clustering
// proceeds.
// ---------------------------------------------------------------------------

/// Tagged policy choice.
struct SecularPolicy {
  enum class Kind { Redfield, FullSecular, Partial, Unified };
  Kind kind = Kind::FullSecular;
  double c_psa = 0.0;  ///< Partial cutoff coefficient, >= 0 (may be +inf)
  double w = 0.0;      ///< Unified cluster width, > 0

  static SecularPolicy redfield();
  static SecularPolicy full_secular();
  static SecularPolicy partial(double c_psa);
  static SecularPolicy unified(double w);

  std::string name() const;
};

/// Term-drop decision for the partial-secular policy.  Delta = |w1 − w2|;
/// pairs with Delta = 0 are always kept, otherwise dropped iff
/// c_psa / Delta < tau_r (strict).  Requires tau_r > 0 and c_psa >= 0.
bool psa_drop(double w1, double w2, double tau_r, double c_psa);

/// A group of nearby Bohr frequencies merged by the unified policy.
struct FrequencyCluster {
  std::vector<double> members;   ///< sorted ascending
  double representative = 0.0;   ///< arithmetic mean of members
};

/// Single-pass gap clustering of a sorted list of distinct frequencies:
/// consecutive gaps < w merge, a gap >= w starts a new cluster (the last
/// frequency is assigned by the same rule).  Every input belongs to exactly
/// one cluster.  Emits a warning for clusters chained wider than w.
std::vector<FrequencyCluster> cluster_frequencies(
    const std::vector<double>& freqs, double w);

/// Merges jump operators cluster-wise: per (bath_label, beta, cluster) one
/// operator with omega = representative and matrix = sum of member matrices.
/// Throws meq::domain_error if a jump frequency is not found in any cluster.
std::vector<JumpOperator> cluster_jump_ops(
    const std::vector<JumpOperator>& jumps,
    const std::vector<FrequencyCluster>& clusters);

}  // namespace meq

#endif  // MEQ_SECULAR_HPP
