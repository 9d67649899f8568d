#pragma once

// Numerical certificates for the a-priori bounds satisfied by the flow.
//
// Every check compares a computed left-hand side against the bound's
// right-hand side at each recorded point. Margins are normalized, and a
// check passes iff worst_margin >= -slack; the slack for each bound is
// fixed below and echoed in the report.

#include "dsm/integrator.hpp"
#include "dsm/oracle.hpp"

#include <string>

namespace dsm {

enum class BoundId {
  kDistanceToRegularized,  ///< |u - w| <= h / a
  kIntegralEnvelope,       ///< h <= h0 e^{-t/2} + e^{-t/2} int e^{s/2} |a'| |w| ds
  kGlobalResidual,         ///< h <= h0 e^{-t/2} + (1 - e^{-t/2}) C |w_C|
  kResidualDecay,          ///< h -> 0 under the e^{-t} envelope
  kMinimalNormLimit,       ///< u(t_final) solves F(u) = f and equals the minimal-norm y
};

/// Identifier used in serialized reports.
std::string bound_code(BoundId id);
BoundId parse_bound_code(const std::string& code);

double bound_slack(BoundId id);

inline constexpr double kDistanceSlack = 1e-8;
inline constexpr double kIntegralEnvelopeSlack = 1e-2;
inline constexpr double kGlobalResidualSlack = 1e-6;
inline constexpr double kResidualDecaySlack = 1e-2;
/// THM check needs a(t_final) at or below this level.
inline constexpr double kLimitRegularizationLevel = 1e-3;

struct BoundReport {
  BoundId bound_id = BoundId::kDistanceToRegularized;
  bool pass = false;
  /// false when the check's precondition is not met; such reports never pass
  bool applicable = true;
  double worst_margin = 0.0;
  double worst_t = 0.0;
  int checkpoints = 0;
  double slack = 0.0;
  std::string notes;
};

/// |u(t) - w(t)| <= h(t) / a(t) with slack 1e-8 (1 + h / a). Fills
/// dist_to_w on every trajectory point.
BoundReport check_distance_bound(Trajectory& traj, const OperatorProblem& p, const Schedule& s,
                                 const NewtonConfig& cfg);

/// The integral envelope with |w(s)| from the oracle and composite Simpson
/// quadrature between recorded points; 1% relative slack.
BoundReport check_integral_envelope(const Trajectory& traj, const OperatorProblem& p,
                                    const Schedule& s, const NewtonConfig& cfg);

/// h(t) <= h(0) e^{-t/2} + (1 - e^{-t/2}) C |w_C| with slack 1e-6 (1 + RHS).
/// Records C |w_C| on the trajectory.
BoundReport check_global_residual(Trajectory& traj, const OperatorProblem& p, const Schedule& s,
                                  const NewtonConfig& cfg);

/// Residual decay: final h <= max(residual_stop, 1e-2 h(0)) and
/// h(t) <= h(0) e^{-t} + c e^{-t} int_0^t e^s |a'(s)| ds with
/// c = max recorded |u(t)|.
BoundReport check_residual_decay(const Trajectory& traj);

/// Long-time limit: |F(u) - f| <= max(1e3 residual_stop, 1e-6 (1 + |f|)) and
/// |u - y| <= p.solution_rel_tol (1 + |y|) against the continuation estimate.
BoundReport check_minimal_norm_limit(const Trajectory& traj, const OperatorProblem& p,
                                     const ContinuationResult& oracle_y);

}  // namespace dsm
