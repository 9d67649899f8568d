#include "dsm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dsm {

using nlohmann::json;

Schedule ScheduleSpec::build() const { return Schedule(parse_schedule_kind(kind), a0, param); }

Vector RunConfig::initial_state(Eigen::Index n) const {
  if (u0.empty()) return Vector::Zero(n);
  if (u0.size() == 1) return Vector::Constant(n, u0.front());
  if (static_cast<Eigen::Index>(u0.size()) != n) {
    throw UsageError("config: u0 has " + std::to_string(u0.size()) + " entries, problem has " +
                     std::to_string(n));
  }
  return Eigen::Map<const Vector>(u0.data(), n);
}

void RunConfig::validate() const {
  const auto& names = problem_names();
  if (std::find(names.begin(), names.end(), problem) == names.end()) {
    throw UsageError("unknown problem '" + problem + "'");
  }
  if (dim != 0) {
    const auto [lo, hi] = allowed_dims(problem);
    if (dim < lo || dim > hi) {
      throw UsageError("dim " + std::to_string(dim) + " outside the allowed range for " + problem);
    }
  }
  schedule.build();
  integrator.validate();
  oracle.validate();
  continuation.validate();
  for (double v : u0) {
    if (!std::isfinite(v)) throw UsageError("config: u0 must be finite");
  }
}

namespace {

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  try {
    if (!j.is_object()) throw UsageError("config: top level must be a JSON object");
    if (!j.contains("problem")) throw UsageError("config: missing required field 'problem'");
    RunConfig cfg;
    cfg.problem = j.at("problem").get<std::string>();
    read_opt(j, "dim", cfg.dim);
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      read_opt(s, "kind", cfg.schedule.kind);
      read_opt(s, "a0", cfg.schedule.a0);
      read_opt(s, "param", cfg.schedule.param);
    }
    if (j.contains("integrator")) {
      const auto& i = j.at("integrator");
      auto& ic = cfg.integrator;
      read_opt(i, "t_max", ic.t_max);
      read_opt(i, "initial_step", ic.initial_step);
      read_opt(i, "rel_tol", ic.rel_tol);
      read_opt(i, "abs_tol", ic.abs_tol);
      read_opt(i, "max_steps", ic.max_steps);
      read_opt(i, "residual_stop", ic.residual_stop);
      read_opt(i, "record_stride", ic.record_stride);
      read_opt(i, "max_step", ic.max_step);
      if (i.contains("method")) ic.method = parse_step_method(i.at("method").get<std::string>());
    }
    if (j.contains("oracle")) {
      read_opt(j.at("oracle"), "tol", cfg.oracle.tol);
      read_opt(j.at("oracle"), "max_iters", cfg.oracle.max_iters);
    }
    if (j.contains("continuation")) {
      const auto& c = j.at("continuation");
      read_opt(c, "a_start", cfg.continuation.a_start);
      read_opt(c, "a_factor", cfg.continuation.a_factor);
      read_opt(c, "a_floor", cfg.continuation.a_floor);
    }
    read_opt(j, "seed", cfg.seed);
    read_opt(j, "output_dir", cfg.output_dir);
    if (j.contains("u0")) {
      const auto& u = j.at("u0");
      cfg.u0 = u.is_array() ? u.get<std::vector<double>>() : std::vector<double>{u.get<double>()};
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config: " + path.string() + ": " + e.what());
  }
  RunConfig cfg = parse_run_config(j);
  // relative output directories are resolved against the config file
  const std::filesystem::path out(cfg.output_dir);
  if (out.is_relative()) cfg.output_dir = (path.parent_path() / out).lexically_normal().string();
  return cfg;
}

json to_json(const ScheduleSpec& s) {
  return {{"kind", s.kind}, {"a0", s.a0}, {"param", s.param}};
}

json to_json(const RunConfig& cfg) {
  const auto& ic = cfg.integrator;
  return {
      {"problem", cfg.problem},
      {"dim", cfg.dim},
      {"schedule", to_json(cfg.schedule)},
      {"integrator",
       {{"t_max", ic.t_max},
        {"initial_step", ic.initial_step},
        {"rel_tol", ic.rel_tol},
        {"abs_tol", ic.abs_tol},
        {"max_steps", ic.max_steps},
        {"residual_stop", ic.residual_stop},
        {"record_stride", ic.record_stride},
        {"max_step", ic.max_step},
        {"method", to_string(ic.method)}}},
      {"oracle", {{"tol", cfg.oracle.tol}, {"max_iters", cfg.oracle.max_iters}}},
      {"continuation",
       {{"a_start", cfg.continuation.a_start},
        {"a_factor", cfg.continuation.a_factor},
        {"a_floor", cfg.continuation.a_floor}}},
      {"seed", cfg.seed},
      {"output_dir", cfg.output_dir},
      {"u0", cfg.u0},
  };
}

json to_json(const AdmissibilityReport& r) {
  return {{"max_ratio", r.max_ratio}, {"positive", r.positive}, {"below_cap", r.below_cap},
          {"decays", r.decays},       {"pass_2_2", r.pass_2_2}, {"pass_3_3", r.pass_3_3},
          {"warning", r.warning},     {"notes", r.notes}};
}

json to_json(const MonotoneReport& r) {
  return {{"min_pairing", r.min_pairing}, {"pass", r.pass},     {"samples", r.samples},
          {"radius", r.radius},           {"seed", r.seed}};
}

json to_json(const ScaledNormSweepReport& r) {
  return {{"a_values", r.a_values},
          {"a_norm_w", r.values},
          {"monotone_nondecreasing_in_a", r.monotone_nondecreasing_in_a},
          {"slack", r.slack},
          {"worst_gap", r.worst_gap}};
}

json to_json(const BoundReport& r) {
  return {{"bound_id", bound_code(r.bound_id)},
          {"pass", r.pass},
          {"applicable", r.applicable},
          {"worst_margin", std::isfinite(r.worst_margin) ? json(r.worst_margin) : json(nullptr)},
          {"worst_t", r.worst_t},
          {"checkpoints", r.checkpoints},
          {"slack", r.slack},
          {"notes", r.notes}};
}

BoundReport bound_report_from_json(const json& j) {
  BoundReport r;
  r.bound_id = parse_bound_code(j.at("bound_id").get<std::string>());
  r.pass = j.at("pass").get<bool>();
  r.applicable = j.value("applicable", true);
  const auto& m = j.at("worst_margin");
  r.worst_margin = m.is_null() ? -INFINITY : m.get<double>();
  r.worst_t = j.at("worst_t").get<double>();
  r.checkpoints = j.at("checkpoints").get<int>();
  r.slack = j.value("slack", bound_slack(r.bound_id));
  r.notes = j.value("notes", "");
  return r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,a,h,norm_u,dist_to_w,bound_2_6_rhs,bound_2_10_rhs\n";
  const double h0 = traj.points.empty() ? 0.0 : traj.front().h;
  for (const auto& pt : traj.points) {
    out += format_double(pt.t) + ',' + format_double(pt.a) + ',' + format_double(pt.h) + ',' +
           format_double(pt.u.norm()) + ',';
    if (pt.dist_to_w) out += format_double(*pt.dist_to_w);
    out += ',' + format_double(pt.h / pt.a) + ',';
    if (traj.cap_term) {
      const double decay = std::exp(-0.5 * pt.t);
      out += format_double(h0 * decay + (1.0 - decay) * *traj.cap_term);
    }
    out += '\n';
  }
  return out;
}

std::string continuation_csv(const ContinuationResult& result) {
  std::string out = "a,norm_w,a_norm_w,residual\n";
  for (std::size_t i = 0; i < result.a_values.size(); ++i) {
    const double a = result.a_values[i];
    const double nw = result.w_values[i].norm();
    out += format_double(a) + ',' + format_double(nw) + ',' + format_double(a * nw) + ',' +
           format_double(result.residuals[i]) + '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dsm
