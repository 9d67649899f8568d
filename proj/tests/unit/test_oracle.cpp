#include "dsm/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using dsm::DenseMatrix;
using dsm::NewtonConfig;
using dsm::Vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Root of an increasing function on [lo, hi] by bisection.
double bisect(const std::function<double(double)>& g, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double cubic_root_oracle(double a, double f) {
  return bisect([=](double w) { return w * w * w + a * w - f; }, 0.0, 3.0);
}

dsm::OperatorProblem diag_one_zero(Vector f) {
  return dsm::make_psd_from_spectrum(DenseMatrix::Identity(2, 2), vec({1, 0}), std::move(f));
}

}  // namespace

TEST_CASE("solve_regularized examples") {
  const NewtonConfig cfg;
  for (double a : {0.1, 1.0, 5.0}) {
    const Vector w = dsm::solve_regularized(dsm::make_identity(3), a, Vector::Ones(3), cfg);
    CHECK(w.norm() < 1e-14);
  }

  const double expected = cubic_root_oracle(1.0, 8.0);
  CHECK(expected == doctest::Approx(1.83375).epsilon(1e-5));
  const Vector w = dsm::solve_regularized(dsm::make_diag_cubic(vec({8})), 1.0, vec({0}), cfg);
  CHECK(std::abs(w(0) - expected) < 1e-10);

  const Vector v = dsm::solve_regularized(diag_one_zero(vec({1, 0})), 0.5, Vector::Zero(2), cfg);
  CHECK(v(0) == doctest::Approx(1.0 / 1.5));
  CHECK(std::abs(v(1)) < 1e-15);
}

TEST_CASE("solution is unique: different starting points agree") {
  const NewtonConfig cfg;
  const auto p = dsm::make_problem("convex_gradient", 0, 2);
  const Vector a = dsm::solve_regularized(p, 0.3, Vector::Zero(p.dim), cfg);
  const Vector b = dsm::solve_regularized(p, 0.3, Vector::Constant(p.dim, 3.0), cfg);
  const Vector c = dsm::solve_regularized(p, 0.3, -Vector::Constant(p.dim, 2.0), cfg);
  CHECK((a - b).norm() < 1e-10);
  CHECK((a - c).norm() < 1e-10);
  CHECK(p.regularized_residual(a, 0.3).norm() <= cfg.tol);
}

TEST_CASE("nonconvergence carries the best iterate") {
  NewtonConfig cfg;
  cfg.max_iters = 1;
  try {
    dsm::solve_regularized(dsm::make_diag_cubic(vec({8})), 1.0, vec({0}), cfg);
    FAIL("expected NonConvergence");
  } catch (const dsm::NonConvergence& e) {
    CHECK(e.best_iterate().size() == 1);
    CHECK(e.residual() > cfg.tol);
    CHECK(std::isfinite(e.residual()));
  }
  CHECK_THROWS_AS(dsm::solve_regularized(dsm::make_identity(2), 0.0, Vector::Zero(2), NewtonConfig{}),
                  dsm::UsageError);
}

TEST_CASE("w_along_schedule") {
  const NewtonConfig cfg;
  const auto p = dsm::make_diag_cubic(vec({8}));
  CHECK(dsm::w_along_schedule(p, dsm::Schedule::power(1.0, 0.25), {}, cfg).empty());

  const auto flat = dsm::w_along_schedule(p, dsm::Schedule::constant(1.0), {0, 1, 5, 20}, cfg);
  REQUIRE(flat.size() == 4);
  for (const auto& sw : flat) CHECK(std::abs(sw.w(0) - flat.front().w(0)) <= cfg.tol);

  const auto s = dsm::Schedule::power(1.0, 0.25);
  const auto path = dsm::w_along_schedule(p, s, {0, 1, 10, 100}, cfg);
  for (const auto& sw : path) {
    CHECK(std::abs(sw.w(0) - cubic_root_oracle(s.value(sw.t), 8.0)) < 1e-10);
  }
  CHECK_THROWS_AS(dsm::w_along_schedule(p, s, {1, 0}, cfg), dsm::UsageError);
}

TEST_CASE("scaled norm sweep") {
  const NewtonConfig cfg;
  const auto id = dsm::scaled_norm_sweep(dsm::make_identity(1, vec({1})), {4, 2, 1, 0.5, 0.1}, cfg);
  CHECK(id.monotone_nondecreasing_in_a);
  for (std::size_t i = 0; i < id.a_values.size(); ++i) {
    const double a = id.a_values[i];
    CHECK(id.values[i] == doctest::Approx(a / (1 + a)));
  }

  const auto two = dsm::scaled_norm_sweep(dsm::make_diag_cubic(vec({8})), {2, 1}, cfg);
  CHECK(two.values.size() == 2);
  CHECK(two.monotone_nondecreasing_in_a);

  const std::vector<double> grid = {4, 2, 1, 0.5, 0.25, 0.1, 0.01};
  const auto cubic = dsm::scaled_norm_sweep(dsm::make_diag_cubic(vec({8})), grid, cfg);
  CHECK(cubic.monotone_nondecreasing_in_a);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(cubic.values[i] == doctest::Approx(grid[i] * cubic_root_oracle(grid[i], 8.0)));
  }

  CHECK_THROWS_AS(dsm::scaled_norm_sweep(dsm::make_identity(1), {1}, cfg), dsm::UsageError);
  CHECK_THROWS_AS(dsm::scaled_norm_sweep(dsm::make_identity(1), {1, 2}, cfg), dsm::UsageError);
}

TEST_CASE("minimal-norm continuation") {
  const NewtonConfig cfg;
  const dsm::ContinuationConfig cc;

  const auto id = dsm::minimal_norm_limit(dsm::make_identity(1, vec({3})), cc, cfg);
  CHECK(id.converged);
  CHECK(std::abs(id.y_estimate(0) - 3.0) < 1e-6);
  for (std::size_t i = 0; i < id.a_values.size(); ++i) {
    CHECK(id.w_values[i](0) == doctest::Approx(3.0 / (1 + id.a_values[i])));
  }

  const auto psd = dsm::minimal_norm_limit(diag_one_zero(vec({1, 0})), cc, cfg);
  CHECK(psd.converged);
  CHECK(std::abs(psd.y_estimate(0) - 1.0) < 1e-6);
  CHECK(std::abs(psd.y_estimate.dot(vec({0, 1}))) < 1e-12);

  const auto cubic = dsm::minimal_norm_limit(dsm::make_diag_cubic(vec({8})), cc, cfg);
  CHECK(cubic.converged);
  CHECK(std::abs(cubic.y_estimate(0) - std::cbrt(8.0)) < 1e-6);

  CHECK_THROWS_AS(dsm::minimal_norm_limit(diag_one_zero(vec({1, 1})), cc, cfg),
                  dsm::LikelyUnsolvable);

  dsm::ContinuationConfig bad;
  bad.a_factor = 1.5;
  CHECK_THROWS_AS(dsm::minimal_norm_limit(dsm::make_identity(1), bad, cfg), dsm::UsageError);
}
