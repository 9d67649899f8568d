#pragma once

// Run configuration, CSV trajectory/continuation output and JSON reports.

#include "dsm/integrator.hpp"
#include "dsm/oracle.hpp"
#include "dsm/verifier.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dsm {

struct ScheduleSpec {
  std::string kind = "power";
  double a0 = 1.0;
  double param = 0.25;

  Schedule build() const;
};

struct RunConfig {
  std::string problem;
  /// 0 selects the problem's default size
  long dim = 0;
  ScheduleSpec schedule;
  IntegratorConfig integrator;
  NewtonConfig oracle;
  ContinuationConfig continuation;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  /// Initial state: empty means zero, one value fills every entry,
  /// otherwise one value per coordinate.
  std::vector<double> u0;

  Vector initial_state(Eigen::Index n) const;

  /// Checks names and ranges; throws UsageError.
  void validate() const;
};

/// Missing fields take their defaults; "problem" is required.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const ScheduleSpec& s);

nlohmann::json to_json(const AdmissibilityReport& r);
nlohmann::json to_json(const MonotoneReport& r);
nlohmann::json to_json(const ScaledNormSweepReport& r);
nlohmann::json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const nlohmann::json& j);

/// Columns: t, a, h, norm_u, dist_to_w, bound_2_6_rhs, bound_2_10_rhs.
/// Unknown values are left empty; numbers use 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);

/// Columns: a, norm_w, a_norm_w, residual.
std::string continuation_csv(const ContinuationResult& result);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);

}  // namespace dsm
