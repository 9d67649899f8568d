#pragma once

// Integration of the regularized continuous Newton flow
//
//   u'(t) = -(F'(u) + a(t) I)^{-1} (F(u) + a(t) u - f),   u(0) = u0,
//
// with the residual psi(t) = F(u) + a(t) u - f recorded along the path.

#include "dsm/core.hpp"
#include "dsm/operators.hpp"
#include "dsm/schedules.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dsm {

enum class StepMethod {
  kDormandPrince,  ///< adaptive embedded 5(4) pair with PI step control
  kFixedRk4,       ///< classical RK4 with step `initial_step`; deterministic regression mode
};

std::string to_string(StepMethod m);
StepMethod parse_step_method(const std::string& text);

struct IntegratorConfig {
  double t_max = 100.0;
  double initial_step = 1e-3;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  long max_steps = 200000;
  /// stop once |psi(t)| <= residual_stop
  double residual_stop = 1e-10;
  /// keep every k-th accepted step; 0 keeps all and thins to kMaxRecordedPoints
  int record_stride = 0;
  /// upper bound on the adaptive step; 0 means unbounded. Keeps the fast
  /// residual mode resolved relative to itself once |psi| << |u|.
  double max_step = 0.5;
  StepMethod method = StepMethod::kDormandPrince;

  /// Throws UsageError when a field is out of range.
  void validate() const;
};

inline constexpr std::size_t kMaxRecordedPoints = 2000;

struct TrajectoryPoint {
  double t = 0.0;
  Vector u;
  double a = 0.0;
  Vector psi;
  double h = 0.0;
  std::optional<double> dist_to_w;
};

enum class Termination { kResidualStop, kTMax, kMaxSteps, kStepFailure };

std::string to_string(Termination t);

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  Termination terminated_by = Termination::kTMax;
  std::string problem_name;
  Schedule schedule = Schedule::constant(1.0);
  IntegratorConfig config;
  long accepted_steps = 0;
  long rejected_steps = 0;
  /// C |w_C|, the limit term of the global residual bound; set by the verifier.
  std::optional<double> cap_term;

  const TrajectoryPoint& front() const { return points.front(); }
  const TrajectoryPoint& back() const { return points.back(); }
};

/// Raised when a schedule fails 0 < a < C, sup |a'|/a < 1/2.
class InadmissibleSchedule : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Right-hand side of the flow at (t, u).
Vector rhs(const OperatorProblem& p, const Schedule& s, double t, const Vector& u);

/// Integrates from t = 0. Refuses inadmissible schedules up front; a step
/// size collapse ends the run with Termination::kStepFailure. Failure of
/// the shifted solve (non-monotone operator) propagates as
/// PreconditionViolation.
Trajectory integrate(const OperatorProblem& p, const Schedule& s, const Vector& u0,
                     const IntegratorConfig& cfg);

struct ResidualDynamicsReport {
  double max_defect = 0.0;
  /// largest defect / tolerance over interior points
  double worst_ratio = 0.0;
  double worst_t = 0.0;
  bool pass = false;
};

/// Compares centered differences of the recorded psi with a'(t) u - psi.
/// Needs at least three points.
ResidualDynamicsReport residual_dynamics_check(const Trajectory& traj, const OperatorProblem& p,
                                               const Schedule& s);

}  // namespace dsm
