#pragma once

// Static regularized equation F(w) + a w = f, solved by damped Newton.
// Provides w(t) along a schedule, the a |w_a| monotonicity sweep and the
// a -> 0 continuation towards the minimal-norm solution.

#include "dsm/core.hpp"
#include "dsm/operators.hpp"
#include "dsm/schedules.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsm {

struct NewtonConfig {
  /// target for |F(w) + a w - f|
  double tol = 1e-12;
  int max_iters = 100;

  void validate() const;
};

/// Armijo backtracking halves the step down to this floor.
inline constexpr double kMinDamping = 0x1.0p-30;

/// Newton iteration did not reach the residual target. Carries the best
/// iterate seen so far.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, Vector best, double residual)
      : std::runtime_error(what), best_(std::move(best)), residual_(residual) {}

  const Vector& best_iterate() const { return best_; }
  double residual() const { return residual_; }

 private:
  Vector best_;
  double residual_;
};

/// Continuation blew up: |w_a| exceeded kUnsolvableNorm, so f is most
/// likely outside the closure of range(F).
class LikelyUnsolvable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kUnsolvableNorm = 1e6;

Vector solve_regularized(const OperatorProblem& p, double a, const Vector& w_init,
                         const NewtonConfig& cfg);

struct ScheduledSolution {
  double t;
  Vector w;
};

/// Warm-started w(t_i) for increasing times. The first solve starts at zero.
std::vector<ScheduledSolution> w_along_schedule(const OperatorProblem& p, const Schedule& s,
                                                const std::vector<double>& times,
                                                const NewtonConfig& cfg);

struct ScaledNormSweepReport {
  std::vector<double> a_values;
  /// a |w_a| in the same order as a_values
  std::vector<double> values;
  bool monotone_nondecreasing_in_a = false;
  double slack = 0.0;
  /// smallest values[i] - values[i + 1] over the (decreasing) grid
  double worst_gap = 0.0;
};

ScaledNormSweepReport scaled_norm_sweep(const OperatorProblem& p, const std::vector<double>& a_grid,
                                        const NewtonConfig& cfg);

struct ContinuationResult {
  std::vector<double> a_values;
  std::vector<Vector> w_values;
  std::vector<double> residuals;
  Vector y_estimate;
  bool converged = false;
};

struct ContinuationConfig {
  double a_start = 1.0;
  double a_factor = 0.5;
  double a_floor = 1e-8;

  void validate() const;
};

/// Geometric continuation a <- a * a_factor from a_start down to a_floor.
/// NonConvergence at any level carries the partial path in its message;
/// growth past kUnsolvableNorm raises LikelyUnsolvable.
ContinuationResult minimal_norm_limit(const OperatorProblem& p, const ContinuationConfig& cc,
                                      const NewtonConfig& cfg);

}  // namespace dsm
