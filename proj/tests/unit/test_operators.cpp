#include "dsm/operators.hpp"
#include "dsm/random.hpp"

#include <doctest.h>

#include <cmath>

using dsm::DenseMatrix;
using dsm::Vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

const dsm::OperatorProblem& find(const std::vector<dsm::OperatorProblem>& g,
                                 const std::string& name) {
  for (const auto& p : g) {
    if (p.name == name) return p;
  }
  throw std::runtime_error("missing " + name);
}

}  // namespace

TEST_CASE("gallery lists six problems with consistent shapes") {
  const auto g = dsm::gallery();
  REQUIRE(g.size() == 6);
  for (const auto& p : g) {
    CAPTURE(p.name);
    CHECK(p.rhs.size() == p.dim);
    const Vector u = Vector::Constant(p.dim, 0.3);
    CHECK(p.eval(u).size() == p.dim);
    CHECK(p.jacobian(u).rows() == p.dim);
    CHECK(p.jacobian(u).cols() == p.dim);
    REQUIRE(p.known_minimal_norm_solution.has_value());
    // y solves F(y) = f
    const Vector& y = *p.known_minimal_norm_solution;
    CHECK((p.eval(y) - p.rhs).norm() <= 1e-8 * (1 + p.rhs.norm()));
    for (const auto& z : p.null_space_basis) CHECK(std::abs(z.dot(y)) < 1e-10);
  }
}

TEST_CASE("gallery evaluation examples") {
  const auto g = dsm::gallery();
  const auto id = dsm::make_identity(2);
  CHECK(id.eval(vec({5, -3})) == vec({5, -3}));
  const auto cubic = dsm::make_diag_cubic(vec({8}));
  CHECK(cubic.eval(vec({2}))(0) == doctest::Approx(8.0));
  CHECK(find(g, "identity").dim == 10);
  CHECK(find(g, "fredholm_first_kind").dim == 100);
}

TEST_CASE("psd problem from an explicit spectrum") {
  const auto p = dsm::make_psd_from_spectrum(DenseMatrix::Identity(2, 2), vec({1, 0}), vec({1, 0}));
  CHECK(p.eval(vec({2, 5})) == vec({2, 0}));
  REQUIRE(p.null_space_basis.size() == 1);
  CHECK(p.null_space_basis[0] == vec({0, 1}));
  CHECK(*p.known_minimal_norm_solution == vec({1, 0}));
  CHECK_THROWS_AS(dsm::make_psd_from_spectrum(DenseMatrix::Identity(2, 2), vec({1, -1}), vec({1, 0})),
                  dsm::UsageError);
}

TEST_CASE("rank-deficient psd problem against its spectral decomposition") {
  const auto p = dsm::make_psd_rank_deficient(20, 15, 3);
  const DenseMatrix a = p.jacobian(Vector::Zero(20));
  CHECK((a - a.transpose()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(a);
  int zeros = 0;
  for (Eigen::Index i = 0; i < 20; ++i) {
    CHECK(eig.eigenvalues()(i) > -1e-12);
    if (std::abs(eig.eigenvalues()(i)) < 1e-9) ++zeros;
  }
  CHECK(zeros == 5);
  CHECK(p.null_space_basis.size() == 5);
  for (const auto& z : p.null_space_basis) CHECK((a * z).norm() < 1e-12);
}

TEST_CASE("make_problem validates names and sizes") {
  CHECK(dsm::make_problem("identity", 0, 0).dim == 10);
  CHECK(dsm::make_problem("diag_cubic", 7, 0).dim == 7);
  CHECK_THROWS_AS(dsm::make_problem("no_such_problem", 0, 0), dsm::UsageError);
  CHECK_THROWS_AS(dsm::make_problem("identity", 513, 0), dsm::UsageError);
  CHECK_THROWS_AS(dsm::make_problem("fredholm_first_kind", 1, 0), dsm::UsageError);
  const auto a = dsm::make_problem("skew_perturbed", 0, 9);
  const auto b = dsm::make_problem("skew_perturbed", 0, 9);
  CHECK(a.rhs == b.rhs);
}

TEST_CASE("monotonicity property") {
  for (const auto& p : dsm::gallery()) {
    CAPTURE(p.name);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto r = dsm::check_monotone(p, 200, 5.0, seed);
      CHECK(r.pass);
      CHECK(r.samples == 200);
    }
  }
  const auto id = dsm::check_monotone(dsm::make_identity(3), 50, 5.0, 1);
  CHECK(id.min_pairing >= 0.0);
  CHECK(dsm::check_monotone(dsm::make_diag_cubic(vec({8})), 200, 5.0, 1).pass);
  const auto neg = dsm::check_monotone(dsm::make_negated_identity(2), 200, 5.0, 1);
  CHECK_FALSE(neg.pass);
  CHECK(neg.min_pairing < 0.0);
  CHECK_THROWS_AS(dsm::check_monotone(dsm::make_identity(2), 0, 5.0, 1), dsm::UsageError);
}

TEST_CASE("analytic Jacobians agree with central differences") {
  const auto cubic = dsm::make_diag_cubic(vec({8}));
  const auto r = dsm::check_jacobian(cubic, vec({1}), 1e-5);
  CHECK(r.pass);
  // ((1+h)^3 - (1-h)^3) / 2h = 3 + h^2
  CHECK(r.max_entry_error == doctest::Approx(1e-10).epsilon(1e-3));
  CHECK(dsm::check_jacobian(dsm::make_identity(4), Vector::Constant(4, 2.5)).max_entry_error < 1e-9);

  dsm::SeededRng rng(17);
  for (const auto& p : dsm::gallery()) {
    CAPTURE(p.name);
    for (int k = 0; k < 10; ++k) CHECK(dsm::check_jacobian(p, rng.in_ball(p.dim, 5.0)).pass);
  }
}

TEST_CASE("Jacobian symmetric part is positive semidefinite") {
  dsm::SeededRng rng(23);
  for (const auto& p : dsm::gallery()) {
    CAPTURE(p.name);
    const DenseMatrix j = p.jacobian(rng.in_ball(p.dim, 5.0));
    const DenseMatrix sym = 0.5 * (j + j.transpose());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(sym);
    CHECK(eig.eigenvalues().minCoeff() > -1e-10 * (1 + j.norm()));
    if (p.symmetric_jacobian) CHECK((j - j.transpose()).norm() <= 1e-12 * (1 + j.norm()));
  }
}
