#include "dsm/core.hpp"
#include "dsm/random.hpp"

#include <doctest.h>

using dsm::DenseMatrix;
using dsm::Vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Cramer's rule for a 2x2 system.
Vector solve_2x2(double a11, double a12, double a21, double a22, const Vector& b) {
  const double det = a11 * a22 - a12 * a21;
  return vec({(b(0) * a22 - a12 * b(1)) / det, (a11 * b(1) - a21 * b(0)) / det});
}

}  // namespace

TEST_CASE("inner product examples") {
  CHECK(dsm::inner(vec({1, 0}), vec({0, 1})) == 0.0);
  CHECK(dsm::inner(vec({2}), vec({3})) == 6.0);
  const Vector u = vec({3, 4});
  CHECK(dsm::inner(u, u) == 25.0);
  CHECK_THROWS_AS(dsm::inner(vec({1, 2}), vec({1})), dsm::UsageError);
}

TEST_CASE("norm examples") {
  CHECK(dsm::norm(vec({0, 0, 0})) == 0.0);
  CHECK(dsm::norm(vec({3, 4})) == 5.0);
  CHECK(dsm::norm(vec({1, 1, 1, 1})) == 2.0);
}

TEST_CASE("Cauchy-Schwarz on random vectors") {
  dsm::SeededRng rng(7);
  for (int k = 0; k < 100; ++k) {
    const Vector u = rng.uniform_vector(6, -3, 3);
    const Vector v = rng.uniform_vector(6, -3, 3);
    CHECK(std::abs(dsm::inner(u, v)) <= dsm::norm(u) * dsm::norm(v) * (1 + 1e-14));
  }
}

TEST_CASE("solve_shifted examples") {
  SUBCASE("zero matrix is a scalar shift") {
    const Vector x = dsm::solve_shifted(DenseMatrix::Zero(2, 2), 2.0, vec({4, 6}));
    CHECK(x(0) == doctest::Approx(2.0));
    CHECK(x(1) == doctest::Approx(3.0));
  }
  SUBCASE("identity") {
    const Vector x = dsm::solve_shifted(DenseMatrix::Identity(1, 1), 1.0, vec({4}));
    CHECK(x(0) == doctest::Approx(2.0));
  }
  SUBCASE("skew matrix matches an independent 2x2 solve") {
    DenseMatrix j(2, 2);
    j << 0, 1, -1, 0;
    const Vector rhs = vec({1, 1});
    const Vector x = dsm::solve_shifted(j, 1.0, rhs);
    const Vector expected = solve_2x2(1, 1, -1, 1, rhs);
    CHECK(expected(0) == doctest::Approx(0.0));
    CHECK(expected(1) == doctest::Approx(1.0));
    CHECK((x - expected).norm() < 1e-14);
  }
}

TEST_CASE("solve_shifted rejects bad input") {
  CHECK_THROWS_AS(dsm::solve_shifted(DenseMatrix::Identity(2, 2), 0.0, vec({1, 1})),
                  dsm::UsageError);
  CHECK_THROWS_AS(dsm::solve_shifted(DenseMatrix::Identity(2, 2), 1.0, vec({1})),
                  dsm::UsageError);
  // -I + 1 I is exactly singular: a non-monotone Jacobian.
  CHECK_THROWS_AS(dsm::solve_shifted(-DenseMatrix::Identity(2, 2), 1.0, vec({1, 1})),
                  dsm::PreconditionViolation);
}

TEST_CASE("solve_shifted on random matrices with PSD symmetric part") {
  dsm::SeededRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    DenseMatrix m(n, n), g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        m(i, k) = rng.uniform(-1, 1);
        g(i, k) = rng.uniform(-1, 1);
      }
    }
    const DenseMatrix j = m.transpose() * m + (g - g.transpose());
    const double a = rng.uniform(1e-3, 2.0);
    const Vector rhs = rng.uniform_vector(n, -1, 1);
    const Vector x = dsm::solve_shifted(j, a, rhs);
    const Vector resid = (j + a * DenseMatrix::Identity(n, n)) * x - rhs;
    CHECK(resid.norm() <= dsm::kLinearSolveTol * (rhs.norm() + 1));
    // (J + aI) is coercive with constant a, so |x| <= |rhs| / a.
    CHECK(x.norm() <= rhs.norm() / a * (1 + 1e-10));
  }
}

TEST_CASE("seeded generator is reproducible") {
  dsm::SeededRng a(42), b(42), c(43);
  for (int k = 0; k < 10; ++k) {
    const double x = a.unit();
    CHECK(x == b.unit());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(a.next_u64() != c.next_u64());
  dsm::SeededRng r(5);
  for (int k = 0; k < 50; ++k) CHECK(r.in_ball(4, 2.0).norm() <= 2.0);
}
