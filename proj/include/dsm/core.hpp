#pragma once

// Shared value types, error types and dense linear algebra helpers.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dsm {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Relative residual accepted from a shifted linear solve.
inline constexpr double kLinearSolveTol = 1e-10;

/// Caller passed arguments that violate an operation's contract.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition of the method does not hold, e.g. the
/// supplied operator is not monotone so F'(u) + aI cannot be factored.
class PreconditionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double inner(const Vector& u, const Vector& v);
double norm(const Vector& u);

bool all_finite(const Vector& u);
bool all_finite(const DenseMatrix& m);

/// Solves (J + a I) x = rhs by LU with partial pivoting.
///
/// Requires a > 0 and a square J whose symmetric part is positive
/// semidefinite. A singular or badly failing factorization means that
/// requirement was broken and is reported as PreconditionViolation;
/// the residual is checked against kLinearSolveTol * (|rhs| + 1).
Vector solve_shifted(const DenseMatrix& jacobian, double shift, const Vector& rhs);

}  // namespace dsm
