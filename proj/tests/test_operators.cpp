#include <doctest.h>

#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include <meq/operators.hpp>
#include <meq/types.hpp>

#include "test_util.hpp"

using meq::Complex;
using meq::CompositeSpace;
using meq::Matrix;
using meq::Operator;

TEST_CASE("composite space: dimensions multiply and validate") {
  const CompositeSpace s = CompositeSpace::of({4, 2, 2, 4});
  CHECK(s.total_dim == 64);
  CHECK(s.dims.size() == 4);
  CHECK(CompositeSpace::single(8).total_dim == 8);
  CHECK_THROWS_AS(CompositeSpace::of({}), meq::domain_error);
  CHECK_THROWS_AS(CompositeSpace::of({2, 1}), meq::domain_error);
  CHECK_THROWS_AS(CompositeSpace::of({0}), meq::domain_error);
  CHECK(CompositeSpace::of({2, 3}) == CompositeSpace::of({2, 3}));
  CHECK(!(CompositeSpace::of({2, 3}) == CompositeSpace::of({3, 2})));
}

TEST_CASE("annihilation operator: matrix elements sqrt(n)") {
  const Operator a = meq::annihilation(4);
  CHECK(a.dim() == 4);
  for (int n = 1; n < 4; ++n)
    CHECK(std::abs(a.matrix(n - 1, n) - std::sqrt(double(n))) < 1e-15);
  CHECK(a.matrix.cwiseAbs().sum() ==
        doctest::Approx(std::sqrt(1.0) + std::sqrt(2.0) + std::sqrt(3.0))
            .epsilon(1e-14));
  // canonical commutator on the truncated space: [a, a†] = 1 − N|N-1><N-1|
  const Matrix comm = a.matrix * a.matrix.adjoint() -
                      a.matrix.adjoint() * a.matrix;
  Matrix expect = Matrix::Identity(4, 4);
  expect(3, 3) = Complex(1.0 - 4.0, 0.0);
  CHECK((comm - expect).norm() < 1e-14);
  CHECK_THROWS_AS(meq::annihilation(1), meq::domain_error);
}

TEST_CASE("pauli conventions: sigma_z|e> = +|e>, sigma_+ = |e><g|") {
  const Matrix z = meq::pauli(meq::PauliKind::Z).matrix;
  const Matrix p = meq::pauli(meq::PauliKind::Plus).matrix;
  const Matrix m = meq::pauli(meq::PauliKind::Minus).matrix;
  const Matrix x = meq::pauli(meq::PauliKind::X).matrix;
  const Matrix y = meq::pauli(meq::PauliKind::Y).matrix;
  CHECK(z(0, 0) == Complex(1, 0));
  CHECK(z(1, 1) == Complex(-1, 0));
  CHECK(p(0, 1) == Complex(1, 0));  // |e><g|
  CHECK((m - p.adjoint()).norm() == 0.0);
  CHECK((x - (p + m)).norm() < 1e-15);
  // sigma_x sigma_y = i sigma_z
  CHECK((x * y - Complex(0, 1) * z).norm() < 1e-15);
  // ladder algebra: [sigma_+, sigma_-] = sigma_z
  CHECK((p * m - m * p - z).norm() < 1e-15);
}

TEST_CASE("embed: acts on one factor, identity elsewhere") {
  const CompositeSpace s = CompositeSpace::of({2, 3, 2});
  const Operator sz = meq::pauli(meq::PauliKind::Z);
  const Operator a3 = meq::annihilation(3);

  const Operator e0 = meq::embed(sz, 0, s);
  const Operator e1 = meq::embed(a3, 1, s);
  const Operator e2 = meq::embed(sz, 2, s);
  CHECK(e0.dim() == 12);

  // Kronecker order: site 0 is the leftmost factor.
  Matrix want0 = Eigen::kroneckerProduct(
      sz.matrix, Matrix::Identity(6, 6)).eval();
  CHECK((e0.matrix - want0).norm() == 0.0);
  Matrix want1 =
      Eigen::kroneckerProduct(
          Matrix::Identity(2, 2),
          Eigen::kroneckerProduct(a3.matrix, Matrix::Identity(2, 2)).eval())
          .eval();
  CHECK((e1.matrix - want1).norm() == 0.0);

  // Operators embedded at different sites commute.
  CHECK((e0.matrix * e1.matrix - e1.matrix * e0.matrix).norm() == 0.0);
  CHECK((e1.matrix * e2.matrix - e2.matrix * e1.matrix).norm() == 0.0);

  CHECK_THROWS_AS(meq::embed(sz, 3, s), meq::domain_error);
  CHECK_THROWS_AS(meq::embed(sz, 1, s), meq::domain_error);  // dim mismatch
}

TEST_CASE("identity covers the whole space") {
  const CompositeSpace s = CompositeSpace::of({3, 2});
  CHECK((meq::identity(s).matrix - Matrix::Identity(6, 6)).norm() == 0.0);
}

TEST_CASE("vectorize: row-stacking index rule and round trip") {
  const CompositeSpace s = CompositeSpace::of({2, 2});
  std::mt19937_64 rng(7);
  const Matrix rho = testutil::random_hermitian(4, rng);
  const meq::StateVectorized v = meq::vectorize(Operator{s, rho});
  REQUIRE(v.vec.size() == 16);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) CHECK(v.vec[r * 4 + c] == rho(r, c));
  const Operator back = meq::unvectorize(v);
  CHECK((back.matrix - rho).norm() == 0.0);
  CHECK(back.space == s);
}

TEST_CASE("sandwich superoperator: vec(A X B†) = (A ⊗ B*) vec(X)") {
  const CompositeSpace s = CompositeSpace::of({5});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rand_mat = [&](int d) {
    Matrix m(d, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) m(r, c) = Complex(u(rng), u(rng));
    return m;
  };
  const Matrix A = rand_mat(5), B = rand_mat(5), X = rand_mat(5);
  const Matrix S = meq::sandwich(Operator{s, A}, Operator{s, B});
  const meq::Vector lhs =
      S * meq::vectorize(Operator{s, X}).vec;
  const Matrix want = A * X * B.adjoint();
  const meq::Vector rhs = meq::vectorize(Operator{s, want}).vec;
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("anticommutator superoperator: vec({X, rho})") {
  const CompositeSpace s = CompositeSpace::of({3});
  std::mt19937_64 rng(13);
  const Matrix X = testutil::random_hermitian(3, rng);
  const Matrix rho = testutil::random_hermitian(3, rng);
  const Matrix S = meq::super_anticommutator(Operator{s, X});
  const meq::Vector lhs = S * meq::vectorize(Operator{s, rho}).vec;
  const Matrix want = X * rho + rho * X;
  const meq::Vector rhs = meq::vectorize(Operator{s, want}).vec;
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("property: sandwich composes multiplicatively") {
  // (A1⊗B1*)(A2⊗B2*) = (A1A2) ⊗ (B1B2)* — sanity for the vectorization
  // convention used throughout the dissipator assembly.
  const CompositeSpace s = CompositeSpace::of({2, 2});
  std::mt19937_64 rng(17);
  const Matrix A1 = testutil::random_hermitian(4, rng);
  const Matrix A2 = testutil::random_hermitian(4, rng);
  const Matrix B1 = testutil::random_hermitian(4, rng);
  const Matrix B2 = testutil::random_hermitian(4, rng);
  const Matrix lhs = meq::sandwich(Operator{s, A1}, Operator{s, B1}) *
                     meq::sandwich(Operator{s, A2}, Operator{s, B2});
  const Matrix rhs = meq::sandwich(Operator{s, (A1 * A2).eval()},
                                   Operator{s, (B1 * B2).eval()});
  CHECK(testutil::rel_frob(lhs, rhs) < 1e-14);
}
