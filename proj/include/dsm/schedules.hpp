#pragma once

// Regularizer schedules a(t) and their admissibility certificate.

#include <optional>
#include <string>

namespace dsm {

enum class ScheduleKind { kPower, kExponential, kConstant };

std::string to_string(ScheduleKind kind);
/// Accepts "power", "exponential" and "constant"; anything else is a UsageError.
ScheduleKind parse_schedule_kind(const std::string& text);

/// power:        a(t) = a0 (1 + t)^(-b)
/// exponential:  a(t) = a0 exp(-k t)
/// constant:     a(t) = a0
class Schedule {
 public:
  /// `cap` defaults to a0 (1 + 1e-6). Throws UsageError unless a0 > 0
  /// and the cap is positive.
  Schedule(ScheduleKind kind, double a0, double param = 0.0, std::optional<double> cap = {});

  static Schedule power(double a0, double b) { return {ScheduleKind::kPower, a0, b}; }
  static Schedule exponential(double a0, double k) { return {ScheduleKind::kExponential, a0, k}; }
  static Schedule constant(double a0) { return {ScheduleKind::kConstant, a0}; }

  ScheduleKind kind() const { return kind_; }
  double a0() const { return a0_; }
  double param() const { return param_; }
  double cap() const { return cap_; }

  double value(double t) const;
  /// Closed-form da/dt.
  double derivative(double t) const;
  /// sup over t >= 0 of |a'(t)| / a(t), in closed form.
  double sup_ratio() const;
  /// True when a(t) -> 0 as t -> infinity.
  bool decays() const;

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  ScheduleKind kind_;
  double a0_;
  double param_;
  double cap_;
};

/// Ratio above which the growth bound on the residual degrades noticeably.
inline constexpr double kRatioWarningLevel = 0.45;

struct AdmissibilityReport {
  double max_ratio = 0.0;
  bool positive = false;
  bool below_cap = false;
  bool decays = false;
  /// 0 < a(t) < C and sup |a'|/a < 1/2
  bool pass_2_2 = false;
  /// a(t) -> 0
  bool pass_3_3 = false;
  bool warning = false;
  std::string notes;
};

AdmissibilityReport check_admissible(const Schedule& s, double horizon, int grid_points);

}  // namespace dsm
