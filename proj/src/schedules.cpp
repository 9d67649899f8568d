#include "dsm/schedules.hpp"

#include "dsm/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dsm {

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kPower:
      return "power";
    case ScheduleKind::kExponential:
      return "exponential";
    case ScheduleKind::kConstant:
      return "constant";
  }
  return "unknown";
}

ScheduleKind parse_schedule_kind(const std::string& text) {
  if (text == "power") return ScheduleKind::kPower;
  if (text == "exponential") return ScheduleKind::kExponential;
  if (text == "constant") return ScheduleKind::kConstant;
  throw UsageError("unknown schedule kind '" + text + "' (expected power, exponential or constant)");
}

Schedule::Schedule(ScheduleKind kind, double a0, double param, std::optional<double> cap)
    : kind_(kind), a0_(a0), param_(kind == ScheduleKind::kConstant ? 0.0 : param),
      cap_(cap.value_or(a0 * (1.0 + 1e-6))) {
  if (!(a0 > 0.0) || !std::isfinite(a0)) throw UsageError("schedule: a0 must be positive and finite");
  if (!std::isfinite(param)) throw UsageError("schedule: parameter must be finite");
  if (!(cap_ > 0.0)) throw UsageError("schedule: cap must be positive");
}

double Schedule::value(double t) const {
  if (!(t >= 0.0)) throw UsageError("schedule: t must be nonnegative");
  switch (kind_) {
    case ScheduleKind::kPower:
      return a0_ * std::pow(1.0 + t, -param_);
    case ScheduleKind::kExponential:
      return a0_ * std::exp(-param_ * t);
    case ScheduleKind::kConstant:
      break;
  }
  return a0_;
}

double Schedule::derivative(double t) const {
  if (!(t >= 0.0)) throw UsageError("schedule: t must be nonnegative");
  switch (kind_) {
    case ScheduleKind::kPower:
      return -a0_ * param_ * std::pow(1.0 + t, -param_ - 1.0);
    case ScheduleKind::kExponential:
      return -param_ * value(t);
    case ScheduleKind::kConstant:
      break;
  }
  return 0.0;
}

double Schedule::sup_ratio() const {
  // power: |b| / (1 + t) peaks at t = 0; exponential: constant |k|.
  return kind_ == ScheduleKind::kConstant ? 0.0 : std::abs(param_);
}

bool Schedule::decays() const { return kind_ != ScheduleKind::kConstant && param_ > 0.0; }

AdmissibilityReport check_admissible(const Schedule& s, double horizon, int grid_points) {
  if (!(horizon > 0.0)) throw UsageError("check_admissible: horizon must be positive");
  if (grid_points < 2) throw UsageError("check_admissible: need at least two grid points");

  AdmissibilityReport r;
  r.positive = true;
  r.below_cap = s.a0() < s.cap();
  double grid_max = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double t = horizon * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const double a = s.value(t);
    if (!(a > 0.0)) r.positive = false;
    if (!(a < s.cap())) r.below_cap = false;
    if (a > 0.0) grid_max = std::max(grid_max, std::abs(s.derivative(t)) / a);
  }
  // an increasing schedule eventually crosses any cap
  if (s.kind() != ScheduleKind::kConstant && s.param() < 0.0) r.below_cap = false;

  r.max_ratio = std::max(grid_max, s.sup_ratio());
  r.decays = s.decays();
  r.pass_2_2 = r.positive && r.below_cap && r.max_ratio < 0.5;
  r.pass_3_3 = r.decays;
  r.warning = r.max_ratio > kRatioWarningLevel;

  std::ostringstream notes;
  if (!(r.max_ratio < 0.5)) {
    notes << "ratio sup |a'(t)|/a(t) = " << r.max_ratio << " must be < 1/2; ";
  } else if (r.warning) {
    notes << "warning: sup |a'(t)|/a(t) = " << r.max_ratio
          << " is close to 1/2, the residual growth bound is weak; ";
  }
  if (!r.positive) notes << "a(t) is not positive on the grid; ";
  if (!r.below_cap) notes << "a(t) does not stay below the cap C = " << s.cap() << "; ";
  if (!r.decays) notes << "a(t) does not decay to zero; ";
  r.notes = notes.str();
  if (r.notes.size() >= 2) r.notes.resize(r.notes.size() - 2);
  return r;
}

}  // namespace dsm
