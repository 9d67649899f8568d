#include "dsm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dsm {

void NewtonConfig::validate() const {
  if (!(tol > 0.0)) throw UsageError("newton: tol must be positive");
  if (max_iters < 1) throw UsageError("newton: max_iters must be >= 1");
}

void ContinuationConfig::validate() const {
  if (!(a_floor > 0.0) || !(a_floor < a_start)) {
    throw UsageError("continuation: need 0 < a_floor < a_start");
  }
  if (!(a_factor > 0.0 && a_factor < 1.0)) throw UsageError("continuation: a_factor must lie in (0, 1)");
}

Vector solve_regularized(const OperatorProblem& p, double a, const Vector& w_init,
                         const NewtonConfig& cfg) {
  cfg.validate();
  if (!(a > 0.0)) throw UsageError("solve_regularized: a must be positive");
  if (w_init.size() != p.dim) throw UsageError("solve_regularized: w_init dimension mismatch");

  Vector w = w_init;
  Vector r = p.regularized_residual(w, a);
  double rnorm = r.norm();
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (rnorm <= cfg.tol) return w;
    const Vector delta = solve_shifted(p.jacobian(w), a, -r);

    // Armijo backtracking on |residual|
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= kMinDamping) {
      Vector trial = w + lambda * delta;
      Vector trial_r = p.regularized_residual(trial, a);
      const double trial_norm = trial_r.norm();
      if (std::isfinite(trial_norm) && trial_norm <= (1.0 - 1e-4 * lambda) * rnorm) {
        w = std::move(trial);
        r = std::move(trial_r);
        rnorm = trial_norm;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "solve_regularized: line search stalled at residual " << rnorm << " (tol " << cfg.tol
          << ", a = " << a << ")";
      throw NonConvergence(msg.str(), w, rnorm);
    }
  }
  if (rnorm <= cfg.tol) return w;
  std::ostringstream msg;
  msg << "solve_regularized: no convergence in " << cfg.max_iters << " iterations, residual "
      << rnorm << " (tol " << cfg.tol << ", a = " << a << ")";
  throw NonConvergence(msg.str(), w, rnorm);
}

std::vector<ScheduledSolution> w_along_schedule(const OperatorProblem& p, const Schedule& s,
                                                const std::vector<double>& times,
                                                const NewtonConfig& cfg) {
  std::vector<ScheduledSolution> out;
  out.reserve(times.size());
  Vector w = Vector::Zero(p.dim);
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!(t >= 0.0) || (i > 0 && !(t > prev))) {
      throw UsageError("w_along_schedule: times must be nonnegative and increasing");
    }
    prev = t;
    try {
      w = solve_regularized(p, s.value(t), w, cfg);
    } catch (const NonConvergence& e) {
      std::ostringstream msg;
      msg << "w_along_schedule: failed at t = " << t << ": " << e.what();
      throw NonConvergence(msg.str(), e.best_iterate(), e.residual());
    }
    out.push_back({t, w});
  }
  return out;
}

ScaledNormSweepReport scaled_norm_sweep(const OperatorProblem& p, const std::vector<double>& a_grid,
                                        const NewtonConfig& cfg) {
  if (a_grid.size() < 2) throw UsageError("scaled_norm_sweep: need at least two regularization levels");
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    if (!(a_grid[i] > 0.0) || (i > 0 && !(a_grid[i] < a_grid[i - 1]))) {
      throw UsageError("scaled_norm_sweep: grid must be positive and strictly decreasing");
    }
  }
  ScaledNormSweepReport r;
  r.a_values = a_grid;
  r.slack = 10.0 * cfg.tol;
  Vector w = Vector::Zero(p.dim);
  for (const double a : a_grid) {
    w = solve_regularized(p, a, w, cfg);
    r.values.push_back(a * w.norm());
  }
  r.worst_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < r.values.size(); ++i) {
    r.worst_gap = std::min(r.worst_gap, r.values[i] - r.values[i + 1]);
  }
  r.monotone_nondecreasing_in_a = r.worst_gap >= -r.slack;
  return r;
}

ContinuationResult minimal_norm_limit(const OperatorProblem& p, const ContinuationConfig& cc,
                                      const NewtonConfig& cfg) {
  cc.validate();
  ContinuationResult out;
  Vector w = Vector::Zero(p.dim);
  double a = cc.a_start;
  while (true) {
    try {
      w = solve_regularized(p, a, w, cfg);
    } catch (const NonConvergence& e) {
      std::ostringstream msg;
      msg << "minimal_norm_limit: failed at a = " << a << " after " << out.a_values.size()
          << " converged levels: " << e.what();
      throw NonConvergence(msg.str(), e.best_iterate(), e.residual());
    }
    if (w.norm() > kUnsolvableNorm) {
      std::ostringstream msg;
      msg << "minimal_norm_limit: |w_a| = " << w.norm() << " at a = " << a
          << "; the equation is likely unsolvable";
      throw LikelyUnsolvable(msg.str());
    }
    out.a_values.push_back(a);
    out.w_values.push_back(w);
    out.residuals.push_back(p.regularized_residual(w, a).norm());
    if (a <= cc.a_floor) break;
    a *= cc.a_factor;
  }
  out.y_estimate = out.w_values.back();
  const std::size_t n = out.w_values.size();
  out.converged = n >= 2 && (out.w_values[n - 1] - out.w_values[n - 2]).norm() <=
                                1e-6 * (1.0 + out.y_estimate.norm());
  return out;
}

}  // namespace dsm
