#include "dsm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dsm {

std::string to_string(StepMethod m) {
  return m == StepMethod::kFixedRk4 ? "rk4" : "dopri5";
}

StepMethod parse_step_method(const std::string& text) {
  if (text == "dopri5") return StepMethod::kDormandPrince;
  if (text == "rk4") return StepMethod::kFixedRk4;
  throw UsageError("unknown integration method '" + text + "' (expected dopri5 or rk4)");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kResidualStop:
      return "residual_stop";
    case Termination::kTMax:
      return "t_max";
    case Termination::kMaxSteps:
      return "max_steps";
    case Termination::kStepFailure:
      return "step_failure";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  if (!(t_max > 0.0)) throw UsageError("integrator: t_max must be positive");
  if (!(initial_step > 0.0)) throw UsageError("integrator: initial_step must be positive");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw UsageError("integrator: tolerances must be positive");
  if (max_steps < 1) throw UsageError("integrator: max_steps must be >= 1");
  if (!(residual_stop >= 0.0)) throw UsageError("integrator: residual_stop must be nonnegative");
  if (record_stride < 0) throw UsageError("integrator: record_stride must be >= 0");
  if (!(max_step >= 0.0)) throw UsageError("integrator: max_step must be nonnegative");
}

namespace {

struct FlowSample {
  Vector velocity;
  Vector psi;
};

FlowSample eval_flow(const OperatorProblem& p, const Schedule& s, double t, const Vector& u) {
  const double a = s.value(t);
  Vector psi = p.regularized_residual(u, a);
  DenseMatrix jac = p.jacobian(u);
  // a non-finite evaluation is handed back to the step controller, which rejects it
  if (!psi.allFinite() || !jac.allFinite()) {
    return {Vector::Constant(u.size(), std::numeric_limits<double>::quiet_NaN()), std::move(psi)};
  }
  Vector velocity = -solve_shifted(jac, a, psi);
  return {std::move(velocity), std::move(psi)};
}

TrajectoryPoint make_point(double t, const Vector& u, double a, Vector psi) {
  TrajectoryPoint pt;
  pt.t = t;
  pt.u = u;
  pt.a = a;
  pt.h = psi.norm();
  pt.psi = std::move(psi);
  return pt;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants (Hairer, Norsett & Wanner).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMinFactor = 0.2;   // step may shrink at most 5x
constexpr double kMaxFactor = 10.0;  // and grow at most 10x

class Recorder {
 public:
  Recorder(Trajectory& traj, int stride) : traj_(traj), stride_(stride) {}

  void accepted(long step_index, double t, const Vector& u, double a, const Vector& psi,
                bool last) {
    if (stride_ == 0 || last || step_index % stride_ == 0) {
      traj_.points.push_back(make_point(t, u, a, psi));
    }
  }

  void finish() {
    if (stride_ != 0 || traj_.points.size() <= kMaxRecordedPoints) return;
    const std::size_t n = traj_.points.size();
    const std::size_t keep_every = (n - 1 + kMaxRecordedPoints - 3) / (kMaxRecordedPoints - 2);
    std::vector<TrajectoryPoint> thinned;
    thinned.reserve(kMaxRecordedPoints);
    for (std::size_t i = 0; i + 1 < n; i += keep_every) thinned.push_back(std::move(traj_.points[i]));
    thinned.push_back(std::move(traj_.points.back()));
    traj_.points = std::move(thinned);
  }

 private:
  Trajectory& traj_;
  int stride_;
};

bool finite(const Vector& v) { return v.allFinite(); }

void run_dopri(const OperatorProblem& p, const Schedule& s, const IntegratorConfig& cfg,
               Trajectory& traj, Recorder& rec) {
  const double min_step = 1e-14 * cfg.t_max;
  double t = 0.0;
  Vector u = traj.points.front().u;
  FlowSample k1 = eval_flow(p, s, t, u);
  double step = std::min(cfg.initial_step, cfg.t_max);
  double err_old = 1e-4;
  bool last_rejected = false;

  while (true) {
    if (traj.accepted_steps >= cfg.max_steps) {
      traj.terminated_by = Termination::kMaxSteps;
      break;
    }
    if (cfg.max_step > 0.0) step = std::min(step, cfg.max_step);
    bool final_step = false;
    if (t + step >= cfg.t_max) {
      step = cfg.t_max - t;
      final_step = true;
    }
    if (step < min_step) {
      traj.terminated_by = Termination::kStepFailure;
      break;
    }

    const double h = step;
    const Vector& d1 = k1.velocity;
    const Vector d2 = eval_flow(p, s, t + c2 * h, u + h * a21 * d1).velocity;
    const Vector d3 = eval_flow(p, s, t + c3 * h, u + h * (a31 * d1 + a32 * d2)).velocity;
    const Vector d4 =
        eval_flow(p, s, t + c4 * h, u + h * (a41 * d1 + a42 * d2 + a43 * d3)).velocity;
    const Vector d5 =
        eval_flow(p, s, t + c5 * h, u + h * (a51 * d1 + a52 * d2 + a53 * d3 + a54 * d4)).velocity;
    const double t_new = final_step ? cfg.t_max : t + h;
    const Vector d6 =
        eval_flow(p, s, t_new, u + h * (a61 * d1 + a62 * d2 + a63 * d3 + a64 * d4 + a65 * d5))
            .velocity;
    Vector u_new = u + h * (a71 * d1 + a73 * d3 + a74 * d4 + a75 * d5 + a76 * d6);
    FlowSample k7;
    double err = std::numeric_limits<double>::infinity();
    if (finite(u_new)) {
      k7 = eval_flow(p, s, t_new, u_new);
      const Vector local = h * (e1 * d1 + e3 * d3 + e4 * d4 + e5 * d5 + e6 * d6 + e7 * k7.velocity);
      const double scale = cfg.abs_tol + cfg.rel_tol * std::max(u.norm(), u_new.norm());
      err = local.norm() / scale;
      if (!std::isfinite(err) || !finite(k7.velocity)) err = std::numeric_limits<double>::infinity();
    }

    if (err <= 1.0) {
      const double fac11 = std::pow(err, kExpo);
      double fac = fac11 / std::pow(err_old, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxFactor, 1.0 / kMinFactor);
      double next = h / fac;
      if (last_rejected) next = std::min(next, h);
      err_old = std::max(err, 1e-4);
      last_rejected = false;

      t = t_new;
      u = std::move(u_new);
      k1 = std::move(k7);
      ++traj.accepted_steps;
      const double a = s.value(t);
      const double hnorm = k1.psi.norm();
      const bool stop_residual = hnorm <= cfg.residual_stop;
      const bool stop_time = final_step;
      const bool stop = stop_residual || stop_time || traj.accepted_steps >= cfg.max_steps;
      rec.accepted(traj.accepted_steps, t, u, a, k1.psi, stop);
      if (stop_residual) {
        traj.terminated_by = Termination::kResidualStop;
        return;
      }
      if (stop_time) {
        traj.terminated_by = Termination::kTMax;
        return;
      }
      step = next;
    } else {
      ++traj.rejected_steps;
      const double shrink = std::isfinite(err)
                                ? std::min(1.0 / kMinFactor, std::pow(err, kExpo) / kSafety)
                                : 1.0 / kMinFactor;
      step = h / shrink;
      last_rejected = true;
    }
  }
  // loop left without an accepted final step: make sure the last state is kept
  if (traj.points.back().t != t) {
    traj.points.push_back(make_point(t, u, s.value(t), k1.psi));
  }
}

void run_rk4(const OperatorProblem& p, const Schedule& s, const IntegratorConfig& cfg,
             Trajectory& traj, Recorder& rec) {
  double t = 0.0;
  Vector u = traj.points.front().u;
  const double base = cfg.initial_step;
  const long total = static_cast<long>(std::ceil(cfg.t_max / base - 1e-9));
  for (long i = 0; i < total; ++i) {
    if (traj.accepted_steps >= cfg.max_steps) {
      traj.terminated_by = Termination::kMaxSteps;
      break;
    }
    const bool final_step = i + 1 == total;
    const double t_new = final_step ? cfg.t_max : static_cast<double>(i + 1) * base;
    const double h = t_new - t;
    const Vector k1 = eval_flow(p, s, t, u).velocity;
    const Vector k2 = eval_flow(p, s, t + 0.5 * h, u + 0.5 * h * k1).velocity;
    const Vector k3 = eval_flow(p, s, t + 0.5 * h, u + 0.5 * h * k2).velocity;
    const Vector k4 = eval_flow(p, s, t_new, u + h * k3).velocity;
    Vector u_new = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!finite(u_new)) {
      traj.terminated_by = Termination::kStepFailure;
      break;
    }
    t = t_new;
    u = std::move(u_new);
    ++traj.accepted_steps;
    const double a = s.value(t);
    Vector psi = p.regularized_residual(u, a);
    const bool stop_residual = psi.norm() <= cfg.residual_stop;
    const bool stop = stop_residual || final_step || traj.accepted_steps >= cfg.max_steps;
    rec.accepted(traj.accepted_steps, t, u, a, psi, stop);
    if (stop_residual) {
      traj.terminated_by = Termination::kResidualStop;
      return;
    }
    if (final_step) {
      traj.terminated_by = Termination::kTMax;
      return;
    }
  }
  if (traj.points.back().t != t) {
    const double a = s.value(t);
    traj.points.push_back(make_point(t, u, a, p.regularized_residual(u, a)));
  }
}

}  // namespace

Vector rhs(const OperatorProblem& p, const Schedule& s, double t, const Vector& u) {
  if (!(t >= 0.0)) throw UsageError("rhs: t must be nonnegative");
  if (u.size() != p.dim) throw UsageError("rhs: state dimension mismatch");
  return eval_flow(p, s, t, u).velocity;
}

Trajectory integrate(const OperatorProblem& p, const Schedule& s, const Vector& u0,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  if (u0.size() != p.dim) throw UsageError("integrate: u0 dimension mismatch");
  if (!u0.allFinite()) throw UsageError("integrate: u0 must be finite");
  const AdmissibilityReport adm = check_admissible(s, cfg.t_max, 1001);
  if (!adm.pass_2_2) {
    throw InadmissibleSchedule("integrate: schedule refused, global existence not guaranteed: " +
                               adm.notes);
  }

  Trajectory traj;
  traj.problem_name = p.name;
  traj.schedule = s;
  traj.config = cfg;
  const double a0 = s.value(0.0);
  traj.points.push_back(make_point(0.0, u0, a0, p.regularized_residual(u0, a0)));
  if (traj.points.front().h <= cfg.residual_stop) {
    traj.terminated_by = Termination::kResidualStop;
    return traj;
  }

  Recorder rec(traj, cfg.record_stride);
  if (cfg.method == StepMethod::kFixedRk4) {
    run_rk4(p, s, cfg, traj, rec);
  } else {
    run_dopri(p, s, cfg, traj, rec);
  }
  rec.finish();
  return traj;
}

ResidualDynamicsReport residual_dynamics_check(const Trajectory& traj, const OperatorProblem& p,
                                               const Schedule& s) {
  (void)p;  // psi is stored; the operator is only needed to build the trajectory
  const auto& pts = traj.points;
  if (pts.size() < 3) throw UsageError("residual_dynamics_check: need at least three points");

  ResidualDynamicsReport r;
  r.pass = true;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const auto& prev = pts[i - 1];
    const auto& cur = pts[i];
    const auto& next = pts[i + 1];
    const double h1 = cur.t - prev.t;
    const double h2 = next.t - cur.t;
    const Vector dpsi = (-h2 / (h1 * (h1 + h2))) * prev.psi + ((h2 - h1) / (h1 * h2)) * cur.psi +
                        (h1 / (h2 * (h1 + h2))) * next.psi;
    const Vector expected = s.derivative(cur.t) * cur.u - cur.psi;
    const double defect = (dpsi - expected).norm();

    double scale = 0.0;
    for (const auto* q : {&prev, &cur, &next}) {
      scale = std::max(scale, q->h + std::abs(s.derivative(q->t)) * q->u.norm());
    }
    const double dt = std::max(h1, h2);
    const double tol = dt * dt * scale + 10.0 * traj.config.rel_tol * scale;
    r.max_defect = std::max(r.max_defect, defect);
    const double ratio = tol > 0.0 ? defect / tol : (defect > 0.0 ? INFINITY : 0.0);
    if (ratio > r.worst_ratio) {
      r.worst_ratio = ratio;
      r.worst_t = cur.t;
    }
    if (defect > tol) r.pass = false;
  }
  return r;
}

}  // namespace dsm
