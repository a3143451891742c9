#include <doctest.h>

#include <cmath>
#include <limits>

#include <meq/operators.hpp>
#include <meq/secular.hpp>

#include "test_util.hpp"

using meq::FrequencyCluster;
using meq::SecularPolicy;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("policy construction and names") {
  CHECK(SecularPolicy::redfield().kind == SecularPolicy::Kind::Redfield);
  CHECK(SecularPolicy::full_secular().kind ==
        SecularPolicy::Kind::FullSecular);
  const SecularPolicy p = SecularPolicy::partial(12.5);
  CHECK(p.kind == SecularPolicy::Kind::Partial);
  CHECK(p.c_psa == 12.5);
  const SecularPolicy u = SecularPolicy::unified(0.01);
  CHECK(u.kind == SecularPolicy::Kind::Unified);
  CHECK(u.w == 0.01);
  CHECK(SecularPolicy::partial(kInf).c_psa == kInf);

  CHECK(SecularPolicy::redfield().name() == "redfield");
  CHECK(SecularPolicy::full_secular().name() == "full_secular");
  CHECK(SecularPolicy::partial(10000).name().find("partial") == 0);
  CHECK(SecularPolicy::unified(0.01).name().find("unified") == 0);

  CHECK_THROWS_AS(SecularPolicy::partial(-1.0), meq::domain_error);
  CHECK_THROWS_AS(SecularPolicy::unified(0.0), meq::domain_error);
  CHECK_THROWS_AS(SecularPolicy::unified(-0.5), meq::domain_error);
}

TEST_CASE("psa_drop: strict timescale criterion") {
  // drop iff c/|w1−w2| < tau_r, equal frequencies always kept
  CHECK(!meq::psa_drop(1.0, 1.0, 100.0, 0.0));
  // c = 0: every cross term drops
  CHECK(meq::psa_drop(1.0, 1.1, 100.0, 0.0));
  // c = inf: nothing drops (inf < tau is false)
  CHECK(!meq::psa_drop(1.0, 2.0, 100.0, kInf));
  CHECK(!meq::psa_drop(1.0, 2.0, kInf, kInf));
  // generic: c/Delta = 10/0.5 = 20 vs tau
  CHECK(meq::psa_drop(1.0, 1.5, 30.0, 10.0));    // 20 < 30 -> drop
  CHECK(!meq::psa_drop(1.0, 1.5, 20.0, 10.0));   // 20 < 20 false -> keep
  CHECK(!meq::psa_drop(1.0, 1.5, 10.0, 10.0));   // keep
  // symmetric in the two frequencies
  CHECK(meq::psa_drop(1.5, 1.0, 30.0, 10.0));
  // slow dissipation (tau = inf) with finite c: drop everything unequal
  CHECK(meq::psa_drop(1.0, 1.0001, kInf, 1e6));
  CHECK_THROWS_AS(meq::psa_drop(1.0, 2.0, 0.0, 1.0), meq::domain_error);
  CHECK_THROWS_AS(meq::psa_drop(1.0, 2.0, -1.0, 1.0), meq::domain_error);
}

TEST_CASE("cluster_frequencies: gap clustering with mean representatives") {
  const std::vector<double> f = {0.0, 0.005, 0.5, 1.0, 1.004, 1.01};
  const std::vector<FrequencyCluster> cl = meq::cluster_frequencies(f, 0.05);
  REQUIRE(cl.size() == 3);
  CHECK(cl[0].members == std::vector<double>{0.0, 0.005});
  CHECK(cl[0].representative == doctest::Approx(0.0025).epsilon(1e-14));
  CHECK(cl[1].members == std::vector<double>{0.5});
  CHECK(cl[1].representative == 0.5);
  CHECK(cl[2].members == std::vector<double>{1.0, 1.004, 1.01});
  CHECK(cl[2].representative ==
        doctest::Approx((1.0 + 1.004 + 1.01) / 3).epsilon(1e-14));
  // every input appears exactly once
  size_t n = 0;
  for (const auto& c : cl) n += c.members.size();
  CHECK(n == f.size());
}

TEST_CASE("cluster_frequencies: boundary gap exactly w starts a new cluster") {
  const std::vector<double> f = {0.0, 0.05, 0.2};
  // gap 0.05 >= w = 0.05 closes the first cluster
  const auto cl = meq::cluster_frequencies(f, 0.05);
  REQUIRE(cl.size() == 3);
  // gap 0.049 < w merges
  const auto cl2 = meq::cluster_frequencies({0.0, 0.049, 0.2}, 0.05);
  REQUIRE(cl2.size() == 2);
  CHECK(cl2[0].members.size() == 2);
}

TEST_CASE("cluster_frequencies: chaining proceeds with a warning") {
  // consecutive gaps all < w but total width 3w: single chained cluster
  const std::vector<double> f = {0.0, 0.04, 0.08, 0.12};
  const auto cl = meq::cluster_frequencies(f, 0.05);
  REQUIRE(cl.size() == 1);
  CHECK(cl[0].members.size() == 4);
  CHECK(cl[0].representative == doctest::Approx(0.06).epsilon(1e-14));
}

TEST_CASE("cluster_jump_ops: merges per (bath, beta, cluster)") {
  const meq::CompositeSpace s = meq::CompositeSpace::single(2);
  meq::Matrix m1 = meq::Matrix::Zero(2, 2);
  m1(0, 1) = 1.0;
  meq::Matrix m2 = meq::Matrix::Zero(2, 2);
  m2(1, 0) = 2.0;
  std::vector<meq::JumpOperator> jumps;
  jumps.push_back({"b", 0, 1.0, meq::Operator{s, m1}});
  jumps.push_back({"b", 0, 1.004, meq::Operator{s, m2}});
  jumps.push_back({"b", 1, 1.0, meq::Operator{s, m1}});
  jumps.push_back({"b", 0, 0.5, meq::Operator{s, m2}});

  const auto clusters = meq::cluster_frequencies({0.5, 1.0, 1.004}, 0.05);
  REQUIRE(clusters.size() == 2);
  const auto merged = meq::cluster_jump_ops(jumps, clusters);
  // (b,0,cluster{1.0,1.004}) merged; (b,1,cluster{...}) and (b,0,{0.5}) kept
  REQUIRE(merged.size() == 3);
  int merged_count = 0;
  for (const auto& j : merged) {
    if (j.beta == 0 && std::abs(j.omega - 1.002) < 1e-12) {
      ++merged_count;
      CHECK((j.matrix.matrix - (m1 + m2)).norm() == 0.0);
    }
  }
  CHECK(merged_count == 1);

  // a jump frequency outside every cluster is an error
  std::vector<meq::JumpOperator> stray;
  stray.push_back({"b", 0, 7.0, meq::Operator{s, m1}});
  CHECK_THROWS_AS(meq::cluster_jump_ops(stray, clusters), meq::domain_error);
}
