#include "dsm/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <ostream>

namespace dsm::cli {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<double>& sweep_grid() {
  static const std::vector<double> grid = {10, 3, 1, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001};
  return grid;
}

namespace {

constexpr int kMonotoneSamples = 200;
constexpr double kMonotoneRadius = 5.0;

struct Prepared {
  RunConfig cfg;
  OperatorProblem problem;
  Schedule schedule;
  AdmissibilityReport admissibility;
};

// Loads and validates everything a run needs. Throws UsageError.
Prepared prepare(const fs::path& config_path, const fs::path& output_dir) {
  RunConfig cfg = load_run_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir.string();
  OperatorProblem problem = make_problem(cfg.problem, cfg.dim, cfg.seed);
  Schedule schedule = cfg.schedule.build();
  cfg.initial_state(problem.dim);  // rejects a u0 of the wrong length
  AdmissibilityReport adm = check_admissible(schedule, cfg.integrator.t_max, 1001);
  if (!adm.pass_2_2) {
    throw InadmissibleSchedule("schedule inadmissible: " + adm.notes);
  }
  return {std::move(cfg), std::move(problem), schedule, adm};
}

json run_metadata(const Prepared& run, const Trajectory& traj) {
  const auto& last = traj.back();
  return {{"config", to_json(run.cfg)},
          {"problem_dim", run.problem.dim},
          {"terminated_by", to_string(traj.terminated_by)},
          {"accepted_steps", traj.accepted_steps},
          {"rejected_steps", traj.rejected_steps},
          {"recorded_points", traj.points.size()},
          {"final", {{"t", last.t}, {"a", last.a}, {"h", last.h}, {"norm_u", last.u.norm()}}},
          {"schedule_admissibility", to_json(run.admissibility)}};
}

void print_bound_table(std::ostream& out, const std::vector<BoundReport>& reports) {
  out << std::left << std::setw(10) << "bound" << std::setw(8) << "status" << std::setw(16)
      << "worst_margin" << std::setw(14) << "worst_t" << "checkpoints\n";
  for (const auto& r : reports) {
    const char* status = !r.applicable ? "n/a" : (r.pass ? "PASS" : "FAIL");
    out << std::setw(10) << bound_code(r.bound_id) << std::setw(8) << status << std::setw(16)
        << std::setprecision(6) << r.worst_margin << std::setw(14) << r.worst_t << r.checkpoints
        << "\n";
  }
  out << std::right;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

}  // namespace

int cmd_run(const fs::path& config, std::ostream& out, std::ostream& err,
            const fs::path& output_dir) {
  return guarded(err, [&] {
    const Prepared run = prepare(config, output_dir);
    if (run.admissibility.warning) err << "warning: " << run.admissibility.notes << "\n";
    Trajectory traj = integrate(run.problem, run.schedule, run.cfg.initial_state(run.problem.dim),
                                run.cfg.integrator);
    const Vector w_cap =
        solve_regularized(run.problem, run.schedule.cap(), Vector::Zero(run.problem.dim),
                          run.cfg.oracle);
    traj.cap_term = run.schedule.cap() * w_cap.norm();

    const fs::path dir(run.cfg.output_dir);
    write_file_atomic(dir / "trajectory.csv", trajectory_csv(traj));
    write_file_atomic(dir / "run.json", run_metadata(run, traj).dump(2) + "\n");

    out << run.problem.name << " (n = " << run.problem.dim << "): terminated by "
        << to_string(traj.terminated_by) << " at t = " << traj.back().t << ", h = " << traj.back().h
        << ", " << traj.points.size() << " points -> " << dir.string() << "\n";
    if (traj.terminated_by == Termination::kStepFailure) {
      err << "step size underflow at t = " << traj.back().t << "\n";
      return static_cast<int>(kRuntimeFailure);
    }
    return static_cast<int>(kSuccess);
  });
}

int cmd_verify(const fs::path& config, std::ostream& out, std::ostream& err,
               const fs::path& output_dir) {
  return guarded(err, [&] {
    const Prepared run = prepare(config, output_dir);
    const auto& p = run.problem;
    const fs::path dir(run.cfg.output_dir);
    json report = {{"problem", p.name},
                   {"dim", p.dim},
                   {"schedule", to_json(run.cfg.schedule)},
                   {"schedule_admissibility", to_json(run.admissibility)}};
    std::vector<std::string> failed;

    const MonotoneReport mono = check_monotone(p, kMonotoneSamples, kMonotoneRadius, run.cfg.seed);
    report["monotonicity"] = to_json(mono);
    if (!mono.pass) {
      failed.push_back("monotonicity");
      report["bounds"] = json::array();
      report["all_pass"] = false;
      report["failed"] = failed;
      write_file_atomic(dir / "bounds.json", report.dump(2) + "\n");
      out << "FAIL monotonicity: min pairing " << mono.min_pairing
          << " < 0; the operator is not monotone, bounds not evaluated\n";
      return static_cast<int>(kCheckFailure);
    }

    Trajectory traj = integrate(p, run.schedule, run.cfg.initial_state(p.dim), run.cfg.integrator);
    std::vector<BoundReport> bounds;
    bounds.push_back(check_distance_bound(traj, p, run.schedule, run.cfg.oracle));
    bounds.push_back(check_integral_envelope(traj, p, run.schedule, run.cfg.oracle));
    bounds.push_back(check_global_residual(traj, p, run.schedule, run.cfg.oracle));
    bounds.push_back(check_residual_decay(traj));
    const ContinuationResult limit = minimal_norm_limit(p, run.cfg.continuation, run.cfg.oracle);
    bounds.push_back(check_minimal_norm_limit(traj, p, limit));
    const ScaledNormSweepReport sweep = scaled_norm_sweep(p, sweep_grid(), run.cfg.oracle);

    report["lemma_2_1"] = to_json(sweep);
    report["continuation"] = {{"converged", limit.converged},
                              {"levels", limit.a_values.size()},
                              {"norm_y", limit.y_estimate.norm()}};
    report["bounds"] = json::array();
    for (const auto& b : bounds) {
      report["bounds"].push_back(to_json(b));
      if (b.applicable && !b.pass) failed.push_back(bound_code(b.bound_id));
    }
    if (!sweep.monotone_nondecreasing_in_a) failed.push_back("lemma_2_1");
    report["all_pass"] = failed.empty();
    report["failed"] = failed;

    write_file_atomic(dir / "bounds.json", report.dump(2) + "\n");
    write_file_atomic(dir / "trajectory.csv", trajectory_csv(traj));
    write_file_atomic(dir / "run.json", run_metadata(run, traj).dump(2) + "\n");

    out << p.name << " (n = " << p.dim << "), terminated by " << to_string(traj.terminated_by)
        << " at t = " << traj.back().t << "\n";
    print_bound_table(out, bounds);
    out << "a|w_a| sweep: " << (sweep.monotone_nondecreasing_in_a ? "PASS" : "FAIL")
        << " (worst gap " << sweep.worst_gap << ")\n";
    if (!failed.empty()) {
      out << "failed:";
      for (const auto& f : failed) out << ' ' << f;
      out << "\n";
      return static_cast<int>(kCheckFailure);
    }
    return static_cast<int>(kSuccess);
  });
}

int cmd_gallery(std::ostream& out) {
  const auto problems = gallery();
  out << std::left << std::setw(22) << "name" << std::setw(6) << "dim" << std::setw(12) << "dims"
      << std::setw(11) << "symmetric" << std::setw(8) << "has_y" << "null_dim\n";
  for (const auto& p : problems) {
    const auto [lo, hi] = allowed_dims(p.name);
    out << std::setw(22) << p.name << std::setw(6) << p.dim << std::setw(12)
        << (std::to_string(lo) + ".." + std::to_string(hi)) << std::setw(11)
        << (p.symmetric_jacobian ? "yes" : "no") << std::setw(8)
        << (p.known_minimal_norm_solution ? "yes" : "no") << p.null_space_basis.size() << "\n";
  }
  out << std::right;
  return kSuccess;
}

int cmd_check_schedule(const std::string& kind, double a0, double param, double horizon,
                       std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Schedule s(parse_schedule_kind(kind), a0, param);
    const AdmissibilityReport r = check_admissible(s, horizon, 1001);
    out << "schedule " << kind << " a0=" << a0 << " param=" << param << " cap=" << s.cap() << "\n"
        << "max_ratio " << r.max_ratio << "\n"
        << "positive  " << std::boolalpha << r.positive << "\n"
        << "below_cap " << r.below_cap << "\n"
        << "decays    " << r.decays << "\n"
        << "pass_2_2  " << r.pass_2_2 << "\n"
        << "pass_3_3  " << r.pass_3_3 << "\n";
    if (!r.notes.empty()) out << "notes: " << r.notes << "\n";
    return static_cast<int>(r.pass_2_2 ? kSuccess : kCheckFailure);
  });
}

int cmd_oracle(const fs::path& config, std::ostream& out, std::ostream& err,
               const fs::path& output_dir) {
  return guarded(err, [&] {
    RunConfig cfg = load_run_config(config);
    if (!output_dir.empty()) cfg.output_dir = output_dir.string();
    const OperatorProblem p = make_problem(cfg.problem, cfg.dim, cfg.seed);
    const ContinuationResult result = minimal_norm_limit(p, cfg.continuation, cfg.oracle);
    const fs::path dir(cfg.output_dir);
    write_file_atomic(dir / "continuation.csv", continuation_csv(result));
    out << p.name << " (n = " << p.dim << "): " << result.a_values.size()
        << " levels, |y| = " << result.y_estimate.norm()
        << (result.converged ? ", converged" : ", NOT converged") << " -> "
        << (dir / "continuation.csv").string() << "\n";
    return static_cast<int>(result.converged ? kSuccess : kCheckFailure);
  });
}

int main(int argc, char** argv) {
  CLI::App app{"Regularized continuous Newton flow for monotone equations F(u) = f"};
  app.require_subcommand(1);

  std::string config;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "integrate the flow; writes trajectory.csv and run.json");
  run->add_option("config", config, "JSON run configuration")->required();
  run->add_option("-o,--output-dir", output_dir, "overrides output_dir from the config");
  auto* verify = app.add_subcommand("verify", "integrate and certify all bounds; writes bounds.json");
  verify->add_option("config", config, "JSON run configuration")->required();
  verify->add_option("-o,--output-dir", output_dir, "overrides output_dir from the config");
  auto* oracle =
      app.add_subcommand("oracle", "a -> 0 continuation of F(w) + a w = f; writes continuation.csv");
  oracle->add_option("config", config, "JSON run configuration")->required();
  oracle->add_option("-o,--output-dir", output_dir, "overrides output_dir from the config");
  auto* list = app.add_subcommand("gallery", "list the built-in problems");

  std::string kind;
  double a0 = 1.0;
  double param = 0.0;
  double horizon = 1000.0;
  auto* sched = app.add_subcommand("check-schedule", "admissibility report for a(t)");
  sched->add_option("kind", kind, "power | exponential | constant")->required();
  sched->add_option("a0", a0, "a(0)")->required();
  sched->add_option("param", param, "decay exponent b or rate k")->required();
  sched->add_option("--horizon", horizon, "sampling horizon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kValidationError;
  }

  if (*run) return cmd_run(config, std::cout, std::cerr, output_dir);
  if (*verify) return cmd_verify(config, std::cout, std::cerr, output_dir);
  if (*oracle) return cmd_oracle(config, std::cout, std::cerr, output_dir);
  if (*list) return cmd_gallery(std::cout);
  return cmd_check_schedule(kind, a0, param, horizon, std::cout, std::cerr);
}

}  // namespace dsm::cli
