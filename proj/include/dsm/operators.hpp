#pragma once

// Monotone operator problems F(u) = f and the built-in test gallery.

#include "dsm/core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dsm {

/// Radius of the ball on which every gallery operator is certified.
inline constexpr double kWorkingBoxRadius = 100.0;

struct OperatorProblem {
  std::string name;
  Eigen::Index dim = 0;
  std::function<Vector(const Vector&)> eval;
  std::function<DenseMatrix(const Vector&)> jacobian;
  Vector rhs;
  bool symmetric_jacobian = false;
  std::optional<Vector> known_minimal_norm_solution;
  std::vector<Vector> null_space_basis;
  /// Relative tolerance used when comparing a long-time flow state with
  /// the minimal-norm solution; loosened for ill-conditioned problems.
  double solution_rel_tol = 1e-2;

  /// F(u) + a u - f
  Vector regularized_residual(const Vector& u, double a) const;
};

// Gallery members. Every random ingredient is drawn from `seed`.

OperatorProblem make_identity(Eigen::Index n, Vector f);
OperatorProblem make_identity(Eigen::Index n);

/// F(u)_i = u_i^3. Without an explicit f, cycles f_i through {8, -1, 1/8, 0}.
OperatorProblem make_diag_cubic(Vector f);
OperatorProblem make_diag_cubic(Eigen::Index n);

/// F(u) = A u with A = Q diag(lambda) Q^T, Q orthogonal. Columns of Q with
/// lambda == 0 become the null-space basis and y = A^+ f is filled in.
OperatorProblem make_psd_from_spectrum(const DenseMatrix& q, const Vector& lambda, Vector f);

/// Random orthogonal Q, `rank` eigenvalues spread over [1, 10] and the
/// rest zero; f = A z lies in range(A).
OperatorProblem make_psd_rank_deficient(Eigen::Index n, Eigen::Index rank, std::uint64_t seed);

/// Midpoint discretization of the integral operator with kernel min(x, y)
/// on [0, 1]; f = A u_true with u_true(x) = sin(pi x) + x / 2.
OperatorProblem make_fredholm_first_kind(Eigen::Index n);

/// F(u) = (S + K) u with S symmetric positive definite, K skew.
OperatorProblem make_skew_perturbed(Eigen::Index n, std::uint64_t seed);

/// F = grad phi, phi(u) = sum(u_i^4 / 4 + u_i^2 / 2) + u^T B u / 2.
OperatorProblem make_convex_gradient(Eigen::Index n, std::uint64_t seed);

/// F(u) = -u. Not monotone; used to exercise the negative paths.
OperatorProblem make_negated_identity(Eigen::Index n);

/// The six gallery problems at their default sizes.
std::vector<OperatorProblem> gallery(std::uint64_t seed = 0);

/// Names accepted by make_problem, gallery members first.
const std::vector<std::string>& problem_names();
Eigen::Index default_dim(const std::string& name);
std::pair<Eigen::Index, Eigen::Index> allowed_dims(const std::string& name);

/// Builds a problem by name; dim <= 0 selects the default size.
/// Unknown names or out-of-range sizes raise UsageError.
OperatorProblem make_problem(const std::string& name, Eigen::Index dim, std::uint64_t seed);

struct MonotoneReport {
  double min_pairing = 0.0;
  bool pass = false;
  int samples = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
};

MonotoneReport check_monotone(const OperatorProblem& p, int samples, double radius,
                              std::uint64_t seed);

struct JacobianReport {
  double max_entry_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

JacobianReport check_jacobian(const OperatorProblem& p, const Vector& point, double step = 1e-5);

}  // namespace dsm
