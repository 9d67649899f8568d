#include "dsm/cli.hpp"
#include "dsm/io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace dsm;

namespace {

py::dict trajectory_dict(const Trajectory& traj) {
  const auto n = static_cast<Eigen::Index>(traj.points.size());
  const Eigen::Index dim = n > 0 ? traj.points.front().u.size() : 0;
  Vector t(n), a(n), h(n);
  DenseMatrix u(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& pt = traj.points[static_cast<std::size_t>(i)];
    t(i) = pt.t;
    a(i) = pt.a;
    h(i) = pt.h;
    u.row(i) = pt.u.transpose();
  }
  py::dict d;
  d["t"] = t;
  d["a"] = a;
  d["h"] = h;
  d["u"] = u;
  d["terminated_by"] = to_string(traj.terminated_by);
  d["accepted_steps"] = traj.accepted_steps;
  d["rejected_steps"] = traj.rejected_steps;
  return d;
}

py::dict report_dict(const BoundReport& r) {
  return py::module_::import("json").attr("loads")(to_json(r).dump());
}

IntegratorConfig integrator_config(double t_max, double rel_tol, double abs_tol,
                                   double residual_stop, double max_step,
                                   const std::string& method, double initial_step) {
  IntegratorConfig cfg;
  cfg.t_max = t_max;
  cfg.rel_tol = rel_tol;
  cfg.abs_tol = abs_tol;
  cfg.residual_stop = residual_stop;
  cfg.max_step = max_step;
  cfg.method = parse_step_method(method);
  cfg.initial_step = initial_step;
  return cfg;
}

// Runs the flow and every bound check; mirrors the `verify` subcommand without files.
py::dict verify(const std::string& problem, long dim, std::uint64_t seed, const Schedule& s,
                const Vector& u0, double t_max) {
  const OperatorProblem p = make_problem(problem, dim, seed);
  IntegratorConfig cfg;
  cfg.t_max = t_max;
  const NewtonConfig ncfg;
  Trajectory traj = integrate(p, s, u0.size() == 0 ? Vector::Zero(p.dim) : u0, cfg);
  py::list bounds;
  bounds.append(report_dict(check_distance_bound(traj, p, s, ncfg)));
  bounds.append(report_dict(check_integral_envelope(traj, p, s, ncfg)));
  bounds.append(report_dict(check_global_residual(traj, p, s, ncfg)));
  bounds.append(report_dict(check_residual_decay(traj)));
  const ContinuationResult y = minimal_norm_limit(p, ContinuationConfig{}, ncfg);
  bounds.append(report_dict(check_minimal_norm_limit(traj, p, y)));
  py::dict d;
  d["trajectory"] = trajectory_dict(traj);
  d["bounds"] = bounds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dsm, m) {
  m.doc() = "Regularized continuous Newton flow for monotone equations F(u) = f";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<PreconditionViolation>(m, "PreconditionViolation", PyExc_RuntimeError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception<LikelyUnsolvable>(m, "LikelyUnsolvable", PyExc_RuntimeError);

  m.def("solve_shifted", &solve_shifted, py::arg("jacobian"), py::arg("shift"), py::arg("rhs"));

  py::class_<OperatorProblem>(m, "Problem")
      .def_readonly("name", &OperatorProblem::name)
      .def_readonly("dim", &OperatorProblem::dim)
      .def_readonly("rhs", &OperatorProblem::rhs)
      .def_readonly("symmetric_jacobian", &OperatorProblem::symmetric_jacobian)
      .def_readonly("known_minimal_norm_solution", &OperatorProblem::known_minimal_norm_solution)
      .def_readonly("null_space_basis", &OperatorProblem::null_space_basis)
      .def("eval", [](const OperatorProblem& p, const Vector& u) { return p.eval(u); })
      .def("jacobian", [](const OperatorProblem& p, const Vector& u) { return p.jacobian(u); })
      .def("__repr__", [](const OperatorProblem& p) {
        return "<Problem " + p.name + " dim=" + std::to_string(p.dim) + ">";
      });

  m.def("problem_names", &problem_names);
  m.def("make_problem", &make_problem, py::arg("name"), py::arg("dim") = 0, py::arg("seed") = 0);
  m.def("gallery", &gallery, py::arg("seed") = 0);
  m.def(
      "check_monotone",
      [](const OperatorProblem& p, int samples, double radius, std::uint64_t seed) {
        const auto r = check_monotone(p, samples, radius, seed);
        return py::make_tuple(r.min_pairing, r.pass);
      },
      py::arg("problem"), py::arg("samples") = 200, py::arg("radius") = 5.0, py::arg("seed") = 0);

  py::class_<Schedule>(m, "Schedule")
      .def_static("power", &Schedule::power, py::arg("a0"), py::arg("b"))
      .def_static("exponential", &Schedule::exponential, py::arg("a0"), py::arg("k"))
      .def_static("constant", &Schedule::constant, py::arg("a0"))
      .def("value", &Schedule::value)
      .def("derivative", &Schedule::derivative)
      .def_property_readonly("cap", &Schedule::cap)
      .def_property_readonly("kind", [](const Schedule& s) { return to_string(s.kind()); });

  m.def(
      "check_admissible",
      [](const Schedule& s, double horizon, int grid_points) {
        const auto r = check_admissible(s, horizon, grid_points);
        py::dict d;
        d["max_ratio"] = r.max_ratio;
        d["positive"] = r.positive;
        d["decays"] = r.decays;
        d["pass_2_2"] = r.pass_2_2;
        d["pass_3_3"] = r.pass_3_3;
        d["notes"] = r.notes;
        return d;
      },
      py::arg("schedule"), py::arg("horizon") = 1000.0, py::arg("grid_points") = 1001);

  m.def(
      "integrate",
      [](const OperatorProblem& p, const Schedule& s, const Vector& u0, double t_max,
         double rel_tol, double abs_tol, double residual_stop, double max_step,
         const std::string& method, double initial_step) {
        const auto cfg = integrator_config(t_max, rel_tol, abs_tol, residual_stop, max_step,
                                           method, initial_step);
        return trajectory_dict(integrate(p, s, u0, cfg));
      },
      py::arg("problem"), py::arg("schedule"), py::arg("u0"), py::arg("t_max") = 100.0,
      py::arg("rel_tol") = 1e-8, py::arg("abs_tol") = 1e-10, py::arg("residual_stop") = 1e-10,
      py::arg("max_step") = 0.5, py::arg("method") = "dopri5", py::arg("initial_step") = 1e-3);

  m.def(
      "solve_regularized",
      [](const OperatorProblem& p, double a, std::optional<Vector> w_init, double tol) {
        NewtonConfig cfg;
        cfg.tol = tol;
        return solve_regularized(p, a, w_init ? *w_init : Vector::Zero(p.dim), cfg);
      },
      py::arg("problem"), py::arg("a"), py::arg("w_init") = py::none(), py::arg("tol") = 1e-12);

  m.def(
      "scaled_norm_sweep",
      [](const OperatorProblem& p, const std::vector<double>& grid) {
        const auto r = scaled_norm_sweep(p, grid, NewtonConfig{});
        return py::make_tuple(r.values, r.monotone_nondecreasing_in_a);
      },
      py::arg("problem"), py::arg("a_grid") = cli::sweep_grid());

  m.def(
      "minimal_norm_limit",
      [](const OperatorProblem& p, double a_start, double a_factor, double a_floor) {
        ContinuationConfig cc;
        cc.a_start = a_start;
        cc.a_factor = a_factor;
        cc.a_floor = a_floor;
        const auto r = minimal_norm_limit(p, cc, NewtonConfig{});
        return py::make_tuple(r.y_estimate, r.converged);
      },
      py::arg("problem"), py::arg("a_start") = 1.0, py::arg("a_factor") = 0.5,
      py::arg("a_floor") = 1e-8);

  m.def("verify", &verify, py::arg("problem"), py::arg("dim") = 0, py::arg("seed") = 0,
        py::arg("schedule") = Schedule::exponential(1.0, 0.4), py::arg("u0") = Vector(),
        py::arg("t_max") = 50.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv_store = {"dsm"};
        argv_store.insert(argv_store.end(), args.begin(), args.end());
        std::vector<char*> argv;
        for (auto& a : argv_store) argv.push_back(a.data());
        return cli::main(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the command-line tool in-process and returns its exit code.");
}
