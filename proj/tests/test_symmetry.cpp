#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <meq/liouvillian.hpp>
#include <meq/models.hpp>
#include <meq/operators.hpp>
#include <meq/symmetry.hpp>

#include "test_util.hpp"

using meq::Matrix;
using meq::Operator;

namespace {

/// Total excitation number of the chain: n_L + (sz1+1)/2 + (sz2+1)/2 + n_R.
Operator chain_number(const meq::ChainSystem& sys) {
  const meq::CompositeSpace& s = sys.space;
  const int N = s.dims[0];
  const Matrix aL = meq::embed(meq::annihilation(N), 0, s).matrix;
  const Matrix aR = meq::embed(meq::annihilation(N), 3, s).matrix;
  const Matrix z1 = meq::embed(meq::pauli(meq::PauliKind::Z), 1, s).matrix;
  const Matrix z2 = meq::embed(meq::pauli(meq::PauliKind::Z), 2, s).matrix;
  const Matrix id = Matrix::Identity(s.total_dim, s.total_dim);
  return Operator{s, aL.adjoint() * aL + aR.adjoint() * aR +
                         0.5 * (z1 + id) + 0.5 * (z2 + id)};
}

}  // namespace

TEST_CASE("superop_adjoint: vec([J, rho]) = Jsup vec(rho)") {
  std::mt19937_64 rng(31);
  const meq::CompositeSpace s = meq::CompositeSpace::of({2, 3});
  const Operator J{s, testutil::random_hermitian(6, rng)};
  const Matrix rho = testutil::random_hermitian(6, rng);
  const Matrix Jsup = meq::superop_adjoint(J);
  const meq::Vector lhs =
      Jsup * meq::vectorize(Operator{s, rho}).vec;
  const Matrix comm = J.matrix * rho - rho * J.matrix;
  const meq::Vector rhs = meq::vectorize(Operator{s, comm}).vec;
  CHECK((lhs - rhs).norm() < 1e-12 * std::max(1.0, rhs.norm()));
}

TEST_CASE("check_weak_symmetry: chain generator vs excitation number") {
  meq::ChainParams p;
  p.N = 2;
  const meq::ChainSystem sys = meq::chain_hamiltonians(p);
  const auto baths = meq::chain_baths(p);
  const Operator Nop = chain_number(sys);

  // FSA conserves the excitation-number superoperator
  const auto fsa = meq::build_liouvillian(sys.H_full, sys.H_full, baths,
                                          meq::SecularPolicy::full_secular());
  const meq::SymmetryCheck ok = meq::check_weak_symmetry(
      fsa.total(), meq::superop_adjoint(Nop));
  CHECK(ok.holds);
  CHECK(ok.residual < 1e-12);

  // Redfield retains a <-> a-dagger cross terms, which break it
  const auto red = meq::build_liouvillian(sys.H_full, sys.H_full, baths,
                                          meq::SecularPolicy::redfield());
  const meq::SymmetryCheck bad = meq::check_weak_symmetry(
      red.total(), meq::superop_adjoint(Nop));
  CHECK(!bad.holds);
  CHECK(bad.residual > 1e-6);
}

TEST_CASE("check_weak_symmetry: diagonal fast path equals dense computation") {
  std::mt19937_64 rng(37);
  const meq::CompositeSpace s = meq::CompositeSpace::single(3);
  // random small generator, diagonal symmetry candidate
  Matrix L(9, 9);
  for (int c = 0; c < 9; ++c)
    for (int r = 0; r < 9; ++r)
      L(r, c) = meq::Complex(std::uniform_real_distribution<>(-1, 1)(rng),
                             std::uniform_real_distribution<>(-1, 1)(rng));
  Matrix jd = Matrix::Zero(3, 3);
  jd(0, 0) = 0.0;
  jd(1, 1) = 1.0;
  jd(2, 2) = 2.0;
  const Matrix Jsup = meq::superop_adjoint(Operator{s, jd});
  const meq::SymmetryCheck fast = meq::check_weak_symmetry(L, Jsup);
  const double dense =
      (L * Jsup - Jsup * L).norm() / L.norm();
  CHECK(fast.residual == doctest::Approx(dense).epsilon(1e-12));
}

TEST_CASE("block_transform: chain FSA blocks, labels, invariant subspaces") {
  meq::ChainParams p;
  p.N = 2;
  const meq::ChainSystem sys = meq::chain_hamiltonians(p);
  const auto baths = meq::chain_baths(p);
  const auto build = meq::build_liouvillian(sys.H_full, sys.H_full, baths,
                                            meq::SecularPolicy::full_secular());
  const Matrix& L = build.total();
  const Operator Nop = chain_number(sys);

  const meq::BlockDecomposition bd = meq::block_transform(L, Nop);
  CHECK(bd.symmetry_residual < 1e-12);
  CHECK(bd.offblock_mass < 1e-12 * L.norm());

  // labels are the integers −4..4 with binomial-squared block sizes
  REQUIRE(bd.block_labels.size() == 9);
  const int want_sizes[] = {1, 8, 28, 56, 70, 56, 28, 8, 1};
  for (int g = 0; g < 9; ++g) {
    CHECK(bd.block_labels[g] == doctest::Approx(g - 4.0).epsilon(1e-12));
    CHECK(bd.block_ranges[g].second - bd.block_ranges[g].first ==
          want_sizes[g]);
    CHECK(bd.blocks[g].rows() == want_sizes[g]);
  }

  // transform is unitary
  const Matrix& U = bd.transform_U;
  CHECK((U.adjoint() * U - Matrix::Identity(256, 256)).norm() < 1e-11);

  // each block's column space is L-invariant: L U_g = U_g B_g
  for (size_t g = 0; g < bd.blocks.size(); ++g) {
    const auto [b, e] = bd.block_ranges[g];
    const Matrix Ug = U.middleCols(b, e - b);
    CHECK((L * Ug - Ug * bd.blocks[g]).norm() < 1e-9 * L.norm());
  }
}

TEST_CASE("block_transform: two-qubit toy reproduces the one-coherence block") {
  // Two exchange-coupled qubits, one bath on qubit 1, FSA.  The excitation
  // number n = (sz1+1)/2 + (sz2+1)/2 generates a weak symmetry; the block
  // with |label| = 1 adjacent to the stationary block consists of the four
  // vectorized coherences (r,c) with n_r − n_c = −1: indices 4, 8, 13, 14.
  const meq::CompositeSpace s = meq::CompositeSpace::of({2, 2});
  const Matrix z1 = meq::embed(meq::pauli(meq::PauliKind::Z), 0, s).matrix;
  const Matrix z2 = meq::embed(meq::pauli(meq::PauliKind::Z), 1, s).matrix;
  const Matrix p1 = meq::embed(meq::pauli(meq::PauliKind::Plus), 0, s).matrix;
  const Matrix m1 = meq::embed(meq::pauli(meq::PauliKind::Minus), 0, s).matrix;
  const Matrix p2 = meq::embed(meq::pauli(meq::PauliKind::Plus), 1, s).matrix;
  const Matrix m2 = meq::embed(meq::pauli(meq::PauliKind::Minus), 1, s).matrix;
  const Operator H{
      s, 0.5 * z1 + 0.5 * z2 + 0.1 * (p1 * m2 + m1 * p2)};
  const Operator sx1{s, p1 + m1};
  const auto bath = meq::BathSpec::make(0.5, 0.01, 0.1, 100.0, {sx1}, "b");
  const auto build = meq::build_liouvillian(
      H, H, {bath}, meq::SecularPolicy::full_secular());

  const Matrix id = Matrix::Identity(4, 4);
  const Operator n{s, 0.5 * (z1 + id) + 0.5 * (z2 + id)};
  const meq::BlockDecomposition bd = meq::block_transform(build.total(), n);
  REQUIRE(bd.block_labels.size() == 5);

  // recover original vectorized indices per column from the transform
  auto block_indices = [&](size_t g) {
    std::vector<int> idx;
    for (int t = bd.block_ranges[g].first; t < bd.block_ranges[g].second;
         ++t) {
      int arg = 0;
      double best = -1.0;
      for (int r = 0; r < 16; ++r)
        if (std::abs(bd.transform_U(r, t)) > best) {
          best = std::abs(bd.transform_U(r, t));
          arg = r;
        }
      CHECK(best > 1.0 - 1e-9);  // columns stay standard basis vectors here
      idx.push_back(arg);
    }
    std::sort(idx.begin(), idx.end());
    return idx;
  };

  for (size_t g = 0; g < bd.block_labels.size(); ++g) {
    if (std::abs(bd.block_labels[g] + 1.0) < 1e-9) {
      CHECK(block_indices(g) == std::vector<int>{4, 8, 13, 14});
    }
    if (std::abs(bd.block_labels[g] - 1.0) < 1e-9) {
      CHECK(block_indices(g) == std::vector<int>{1, 2, 7, 11});
    }
  }
}

TEST_CASE("block_transform: non-symmetric generator is rejected") {
  std::mt19937_64 rng(41);
  const meq::CompositeSpace s = meq::CompositeSpace::single(3);
  Matrix L(9, 9);
  for (int c = 0; c < 9; ++c)
    for (int r = 0; r < 9; ++r)
      L(r, c) = meq::Complex(std::uniform_real_distribution<>(-1, 1)(rng),
                             std::uniform_real_distribution<>(-1, 1)(rng));
  Matrix jd = Matrix::Zero(3, 3);
  jd(1, 1) = 1.0;
  jd(2, 2) = 2.0;
  CHECK_THROWS_AS(meq::block_transform(L, Operator{s, jd}),
                  meq::domain_error);
}
