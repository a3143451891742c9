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

#include "meq/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>
#include <utility>

#include "log_internal.hpp"
#include "meq/log.hpp"

namespace meq {

SecularPolicy SecularPolicy::redfield() {
  SecularPolicy p;
  p.kind = Kind::Redfield;
  return p;
}

SecularPolicy SecularPolicy::full_secular() {
  SecularPolicy p;
  p.kind = Kind::FullSecular;
  return p;
}

SecularPolicy SecularPolicy::partial(double c_psa) {
  if (c_psa < 0.0 || std::isnan(c_psa))
    throw domain_error("SecularPolicy: Partial cutoff must be >= 0");
  SecularPolicy p;
  p.kind = Kind::Partial;
  p.c_psa = c_psa;
  return p;
}

SecularPolicy SecularPolicy::unified(double w) {
  if (!(w > 0.0)) throw domain_error("SecularPolicy: Unified width must be > 0");
  SecularPolicy p;
  p.kind = Kind::Unified;
  p.w = w;
  return p;
}

std::string SecularPolicy::name() const {
  std::ostringstream s;
  switch (kind) {
    case Kind::Redfield:
      return "redfield";
    case Kind::FullSecular:
      return "full_secular";
    case Kind::Partial:
      s << "partial(" << c_psa << ")";
      return s.str();
    case Kind::Unified:
      s << "unified(" << w << ")";
      return s.str();
  }
  return "unknown";
}

bool psa_drop(double w1, double w2, double tau_r, double c_psa) {
  if (!(tau_r > 0.0)) throw domain_error("psa_drop: tau_r must be > 0");
  if (c_psa < 0.0 || std::isnan(c_psa))
    throw domain_error("psa_drop: c_psa must be >= 0");
  const double delta = std::abs(w1 - w2);
  if (delta == 0.0) return false;  // oscillation-free pairs always survive
  return (c_psa / delta) < tau_r;  // strict: borderline pairs are kept
}

std::vector<FrequencyCluster> cluster_frequencies(
    const std::vector<double>& freqs, double w) {
  if (!(w > 0.0)) throw domain_error("cluster_frequencies: width must be > 0");
  if (!std::is_sorted(freqs.begin(), freqs.end()))
    throw domain_error("cluster_frequencies: input must be sorted ascending");

  std::vector<FrequencyCluster> clusters;
  FrequencyCluster current;
  for (double f : freqs) {
    if (!current.members.empty() && f - current.members.back() >= w) {
      clusters.push_back(std::move(current));
      current = FrequencyCluster{};
    }
    current.members.push_back(f);
  }
  if (!current.members.empty()) clusters.push_back(std::move(current));

  init_logging_from_env();
  for (FrequencyCluster& c : clusters) {
    double sum = 0.0;
    for (double f : c.members) sum += f;
    c.representative = sum / static_cast<double>(c.members.size());
    const double width = c.members.back() - c.members.front();
    if (width > w) {
      // Chaining pathology: pairwise gaps < w accumulated into a cluster
      // wider than the merge scale itself.  The construction is still
      // well-defined, but the averaged-frequency approximation degrades.
      detail::logger()->warn(
          "frequency cluster around {:.6g} chained to width {:.6g} > w = "
          "{:.6g} ({} members)",
          c.representative, width, w, c.members.size());
    }
  }
  return clusters;
}

std::vector<JumpOperator> cluster_jump_ops(
    const std::vector<JumpOperator>& jumps,
    const std::vector<FrequencyCluster>& clusters) {
  // Identify each jump's cluster by nearest member match.
  double scale = 1.0;
  for (const auto& c : clusters)
    for (double f : c.members) scale = std::max(scale, std::abs(f));
  const double match_tol = 1e-9 * scale;

  auto find_cluster = [&](double omega) -> int {
    for (size_t k = 0; k < clusters.size(); ++k) {
      const auto& m = clusters[k].members;
      auto it = std::lower_bound(m.begin(), m.end(), omega);
      for (auto probe : {it, it == m.begin() ? it : std::prev(it)}) {
        if (probe != m.end() && std::abs(*probe - omega) <= match_tol)
          return static_cast<int>(k);
      }
    }
    return -1;
  };

  // Merge per (bath_label, beta, cluster), preserving first-seen order.
  std::map<std::tuple<std::string, int, int>, size_t> slot;
  std::vector<JumpOperator> merged;
  for (const JumpOperator& j : jumps) {
    const int k = find_cluster(j.omega);
    if (k < 0) {
      std::ostringstream msg;
      msg << "cluster_jump_ops: frequency " << j.omega
          << " is not a member of any cluster";
      throw domain_error(msg.str());
    }
    const auto key = std::make_tuple(j.bath_label, j.beta, k);
    auto it = slot.find(key);
    if (it == slot.end()) {
      slot.emplace(key, merged.size());
      JumpOperator out = j;
      out.omega = clusters[k].representative;
      merged.push_back(std::move(out));
    } else {
      merged[it->second].matrix.matrix += j.matrix.matrix;
    }
  }
  return merged;
}

}  // namespace meq
