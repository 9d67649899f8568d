#include "dsm/core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dsm {

double inner(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) {
    std::ostringstream msg;
    msg << "inner: dimension mismatch (" << u.size() << " vs " << v.size() << ")";
    throw UsageError(msg.str());
  }
  return u.dot(v);
}

double norm(const Vector& u) { return u.norm(); }

bool all_finite(const Vector& u) { return u.allFinite(); }
bool all_finite(const DenseMatrix& m) { return m.allFinite(); }

Vector solve_shifted(const DenseMatrix& jacobian, double shift, const Vector& rhs) {
  const auto n = jacobian.rows();
  if (jacobian.cols() != n) throw UsageError("solve_shifted: jacobian must be square");
  if (rhs.size() != n) throw UsageError("solve_shifted: rhs dimension mismatch");
  if (!(shift > 0.0)) throw UsageError("solve_shifted: shift must be positive");
  if (!jacobian.allFinite() || !rhs.allFinite()) {
    throw UsageError("solve_shifted: non-finite input");
  }
  if (n == 0) return Vector(0);

  DenseMatrix shifted = jacobian;
  shifted.diagonal().array() += shift;

  const Eigen::PartialPivLU<DenseMatrix> lu(shifted);
  const auto& factors = lu.matrixLU();
  const double scale = shifted.cwiseAbs().maxCoeff();
  const double pivot_floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(factors(i, i)) > pivot_floor)) {
      std::ostringstream msg;
      msg << "solve_shifted: F'(u) + aI is singular (pivot " << i << " = " << factors(i, i)
          << ", a = " << shift << "); the operator is not monotone";
      throw PreconditionViolation(msg.str());
    }
  }

  const double limit = kLinearSolveTol * (rhs.norm() + 1.0);
  Vector x = lu.solve(rhs);
  Vector residual = shifted * x - rhs;
  if (!(residual.norm() <= limit)) {
    // one step of iterative refinement
    x -= lu.solve(residual);
    residual = shifted * x - rhs;
  }
  if (!x.allFinite() || !(residual.norm() <= limit)) {
    std::ostringstream msg;
    msg << "solve_shifted: residual " << residual.norm() << " exceeds " << limit
        << " at a = " << shift << "; the operator is not monotone";
    throw PreconditionViolation(msg.str());
  }
  return x;
}

}  // namespace dsm
