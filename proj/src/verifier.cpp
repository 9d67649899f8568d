#include "dsm/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dsm {

std::string bound_code(BoundId id) {
  switch (id) {
    case BoundId::kDistanceToRegularized:
      return "EQ_2_6";
    case BoundId::kIntegralEnvelope:
      return "EQ_2_8";
    case BoundId::kGlobalResidual:
      return "EQ_2_10";
    case BoundId::kResidualDecay:
      return "EQ_3_8";
    case BoundId::kMinimalNormLimit:
      return "THM_3_1";
  }
  return "UNKNOWN";
}

BoundId parse_bound_code(const std::string& code) {
  for (auto id : {BoundId::kDistanceToRegularized, BoundId::kIntegralEnvelope,
                  BoundId::kGlobalResidual, BoundId::kResidualDecay, BoundId::kMinimalNormLimit}) {
    if (bound_code(id) == code) return id;
  }
  throw UsageError("unknown bound id '" + code + "'");
}

double bound_slack(BoundId id) {
  switch (id) {
    case BoundId::kDistanceToRegularized:
      return kDistanceSlack;
    case BoundId::kIntegralEnvelope:
      return kIntegralEnvelopeSlack;
    case BoundId::kGlobalResidual:
      return kGlobalResidualSlack;
    case BoundId::kResidualDecay:
      return kResidualDecaySlack;
    case BoundId::kMinimalNormLimit:
      return 0.0;
  }
  return 0.0;
}

namespace {

constexpr int kEnvelopePanels = 200;

class MarginTracker {
 public:
  explicit MarginTracker(BoundReport& r) : r_(r) {
    r_.worst_margin = std::numeric_limits<double>::infinity();
  }
  void add(double t, double margin) {
    ++r_.checkpoints;
    if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
    if (margin < r_.worst_margin) {
      r_.worst_margin = margin;
      r_.worst_t = t;
    }
  }
  void finish() {
    if (r_.checkpoints == 0) r_.worst_margin = 0.0;
    r_.pass = r_.applicable && r_.worst_margin >= -r_.slack;
  }

 private:
  BoundReport& r_;
};

BoundReport make_report(BoundId id) {
  BoundReport r;
  r.bound_id = id;
  r.slack = bound_slack(id);
  return r;
}

std::vector<double> recorded_times(const Trajectory& traj) {
  std::vector<double> times;
  times.reserve(traj.points.size());
  for (const auto& pt : traj.points) times.push_back(pt.t);
  return times;
}

// Relative envelope margin: (env - h) / env, guarded for env == 0.
double envelope_margin(double env, double h) {
  if (env > 0.0) return (env - h) / env;
  return h == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
}

// Composite Simpson on [lo, hi] with an even number of panels.
template <class Fn>
double simpson(Fn&& g, double lo, double hi, int panels) {
  const double step = (hi - lo) / panels;
  double sum = g(lo) + g(hi);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * g(lo + i * step);
  return sum * step / 3.0;
}

}  // namespace

BoundReport check_distance_bound(Trajectory& traj, const OperatorProblem& p, const Schedule& s,
                                 const NewtonConfig& cfg) {
  if (traj.points.empty()) throw UsageError("distance bound: empty trajectory");
  BoundReport r = make_report(BoundId::kDistanceToRegularized);
  const auto ws = w_along_schedule(p, s, recorded_times(traj), cfg);
  MarginTracker tracker(r);
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    auto& pt = traj.points[i];
    const double dist = (pt.u - ws[i].w).norm();
    pt.dist_to_w = dist;
    const double bound = pt.h / pt.a;
    tracker.add(pt.t, (bound - dist) / (1.0 + bound));
  }
  tracker.finish();
  r.notes = "w(t) from damped Newton at recorded times, warm-started in t";
  return r;
}

BoundReport check_integral_envelope(const Trajectory& traj, const OperatorProblem& p,
                                    const Schedule& s, const NewtonConfig& cfg) {
  if (traj.points.empty()) throw UsageError("integral envelope: empty trajectory");
  BoundReport r = make_report(BoundId::kIntegralEnvelope);

  // oracle nodes: recorded times interleaved with interval midpoints
  std::vector<double> nodes;
  const auto& pts = traj.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) nodes.push_back(0.5 * (pts[i - 1].t + pts[i].t));
    nodes.push_back(pts[i].t);
  }
  const auto ws = w_along_schedule(p, s, nodes, cfg);
  auto weight = [&](std::size_t node) {
    return std::abs(s.derivative(ws[node].t)) * ws[node].w.norm();
  };

  const double h0 = pts.front().h;
  double integral = 0.0;  // e^{-t/2} int_0^t e^{s/2} |a'(s)| |w(s)| ds
  MarginTracker tracker(r);
  tracker.add(pts.front().t, envelope_margin(h0, h0));
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double lo = pts[i - 1].t;
    const double hi = pts[i].t;
    const double mid = 0.5 * (lo + hi);
    const double len = hi - lo;
    const double g_lo = std::exp(-0.5 * (hi - lo)) * weight(2 * i - 2);
    const double g_mid = std::exp(-0.5 * (hi - mid)) * weight(2 * i - 1);
    const double g_hi = weight(2 * i);
    integral = std::exp(-0.5 * len) * integral + len / 6.0 * (g_lo + 4.0 * g_mid + g_hi);
    const double env = h0 * std::exp(-0.5 * hi) + integral;
    tracker.add(hi, envelope_margin(env, pts[i].h));
  }
  tracker.finish();
  r.notes = "|w(s)| from damped Newton at recorded times and midpoints; Simpson quadrature";
  return r;
}

BoundReport check_global_residual(Trajectory& traj, const OperatorProblem& p, const Schedule& s,
                                  const NewtonConfig& cfg) {
  if (traj.points.empty()) throw UsageError("global residual bound: empty trajectory");
  BoundReport r = make_report(BoundId::kGlobalResidual);
  const AdmissibilityReport adm = check_admissible(s, std::max(traj.back().t, 1.0), 1001);
  if (!adm.pass_2_2) {
    r.applicable = false;
    r.pass = false;
    r.notes = "schedule inadmissible: " + adm.notes;
    return r;
  }
  const double cap = s.cap();
  const Vector w_cap = solve_regularized(p, cap, Vector::Zero(p.dim), cfg);
  const double cap_term = cap * w_cap.norm();
  traj.cap_term = cap_term;

  const double h0 = traj.front().h;
  MarginTracker tracker(r);
  for (const auto& pt : traj.points) {
    const double decay = std::exp(-0.5 * pt.t);
    const double bound = h0 * decay + (1.0 - decay) * cap_term;
    tracker.add(pt.t, (bound - pt.h) / (1.0 + bound));
  }
  tracker.finish();
  std::ostringstream notes;
  notes.precision(17);
  notes << "C = " << cap << ", C |w_C| = " << cap_term;
  r.notes = notes.str();
  return r;
}

BoundReport check_residual_decay(const Trajectory& traj) {
  if (traj.points.empty()) throw UsageError("residual decay: empty trajectory");
  BoundReport r = make_report(BoundId::kResidualDecay);
  std::ostringstream notes;
  notes.precision(6);

  if (traj.terminated_by == Termination::kStepFailure ||
      traj.terminated_by == Termination::kMaxSteps) {
    r.applicable = false;
    r.pass = false;
    r.notes = "cannot certify decay: trajectory terminated by " + to_string(traj.terminated_by);
    return r;
  }

  const Schedule& s = traj.schedule;
  const auto& pts = traj.points;
  double c_traj = 0.0;
  for (const auto& pt : pts) c_traj = std::max(c_traj, pt.u.norm());

  const double h0 = pts.front().h;
  MarginTracker tracker(r);
  tracker.add(pts.front().t, envelope_margin(h0, h0));
  double integral = 0.0;  // e^{-t} int_0^t e^s |a'(s)| ds
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double lo = pts[i - 1].t;
    const double hi = pts[i].t;
    const auto g = [&](double x) { return std::exp(x - hi) * std::abs(s.derivative(x)); };
    integral = std::exp(lo - hi) * integral + simpson(g, lo, hi, kEnvelopePanels);
    const double env = h0 * std::exp(-hi) + c_traj * integral;
    tracker.add(hi, envelope_margin(env, pts[i].h));
  }

  const double h_final = pts.back().h;
  const double final_limit = std::max(traj.config.residual_stop, 1e-2 * h0);
  tracker.add(pts.back().t, envelope_margin(final_limit, h_final));
  tracker.finish();

  notes << "envelope integral term multiplied by c_traj = max |u(t)| = " << c_traj
        << " (the printed envelope omits this factor); final h = " << h_final
        << " vs limit " << final_limit;
  r.notes = notes.str();
  return r;
}

BoundReport check_minimal_norm_limit(const Trajectory& traj, const OperatorProblem& p,
                                     const ContinuationResult& oracle_y) {
  if (traj.points.empty()) throw UsageError("minimal-norm limit: empty trajectory");
  BoundReport r = make_report(BoundId::kMinimalNormLimit);
  const auto& last = traj.back();
  std::ostringstream notes;
  notes.precision(6);

  const bool finished = traj.terminated_by == Termination::kResidualStop ||
                        traj.terminated_by == Termination::kTMax;
  if (!finished || !(last.a <= kLimitRegularizationLevel)) {
    r.applicable = false;
    r.pass = false;
    notes << "not applicable: needs a finished run with a(t_final) <= " << kLimitRegularizationLevel
          << ", got a = " << last.a << ", terminated by " << to_string(traj.terminated_by);
    r.notes = notes.str();
    return r;
  }

  const Vector& y = oracle_y.y_estimate;
  const double eq_residual = (p.eval(last.u) - p.rhs).norm();
  const double eps_sol = std::max(1e3 * traj.config.residual_stop, 1e-6 * (1.0 + p.rhs.norm()));
  const double dist = (last.u - y).norm();
  const double eps_y = p.solution_rel_tol * (1.0 + y.norm());

  MarginTracker tracker(r);
  tracker.add(last.t, (eps_sol - eq_residual) / eps_sol);
  tracker.add(last.t, (eps_y - dist) / eps_y);
  tracker.finish();

  notes << "|F(u)-f| = " << eq_residual << " (limit " << eps_sol << "), |u-y| = " << dist
        << " (limit " << eps_y << ", relative tolerance " << p.solution_rel_tol << ")";
  if (p.solution_rel_tol > 1e-2) notes << "; relaxed tolerance for slowly converging ill-posed problem";
  if (!oracle_y.converged) notes << "; warning: continuation oracle did not settle";
  double worst_null = 0.0;
  for (const auto& z : p.null_space_basis) worst_null = std::max(worst_null, std::abs(inner(last.u, z)));
  if (!p.null_space_basis.empty()) notes << "; max |<u, z>| over null-space basis = " << worst_null;
  r.notes = notes.str();
  return r;
}

}  // namespace dsm
