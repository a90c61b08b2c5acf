#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "discflux/acceptance.hpp"
#include "discflux/cli.hpp"
#include "discflux/diagnostics.hpp"
#include "discflux/error.hpp"
#include "discflux/scenarios.hpp"

namespace py = pybind11;
using namespace discflux;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

Scenario scenario_arg(const std::string& ref) { return load_scenario(ref); }

py::dict solve(const std::string& ref, double t, int n, double profile_dt) {
  const Scenario sc = scenario_arg(ref);
  FormulaRun run;
  {
    py::gil_scoped_release release;
    run = run_formula(sc, sc.data(n), t, n, profile_dt);
  }
  py::dict d;
  d["t"] = t;
  d["x"] = to_array(run.field.xs);
  d["u"] = to_array(run.field.u);
  d["v"] = to_array(run.field.v);
  d["R"] = run.field.R;
  d["L"] = run.field.L;
  d["interface_t"] = to_array(run.profile.times);
  d["interface_flux"] = to_array(run.profile.flux);
  d["rh_residual"] = run.profile.rh_residual(sc.f(), sc.g());
  return d;
}

py::dict fvm(const std::string& ref, double t, int n, double cfl) {
  const Scenario sc = scenario_arg(ref);
  EvolveStats stats;
  FVMState st;
  {
    py::gil_scoped_release release;
    st = run_fvm(sc, sc.data(n), t, n, cfl, &stats);
  }
  py::dict d;
  d["t"] = st.t_now;
  d["x"] = to_array(st.centers);
  d["u"] = to_array(st.u);
  d["dx"] = st.dx;
  d["steps"] = stats.steps;
  d["max_mass_residual"] = stats.max_mass_residual;
  return d;
}

py::dict compare(const std::string& ref, double t, int n, double cfl) {
  const Scenario sc = scenario_arg(ref);
  const InitialProfile data = sc.data(n);
  CompareResult c;
  {
    py::gil_scoped_release release;
    const FormulaRun run = run_formula(sc, data, t, n);
    const FVMState st = run_fvm(sc, data, t, n, cfl);
    c = cross_compare(run.field, st);
  }
  py::dict d;
  d["l1"] = c.l1;
  d["linf_away"] = c.linf_away;
  return d;
}

std::string tv_report(const std::string& ref, double t, std::vector<int> levels, double M, double eps, bool run_fvm) {
  const Scenario sc = scenario_arg(ref);
  RefinementOptions opt;
  opt.levels = std::move(levels);
  opt.M = M;
  opt.eps = eps;
  opt.run_fvm = run_fvm;
  TVReport r;
  {
    py::gil_scoped_release release;
    r = refinement_study(sc, t, opt);
  }
  std::ostringstream os;
  write_tv_json(os, r);
  return os.str();
}

py::list verify(const std::string& filter, double tighten, std::uint64_t seed, const std::string& work_dir) {
  AcceptanceOptions opt;
  opt.filter = filter;
  opt.tighten = tighten;
  opt.seed = seed;
  opt.work_dir = work_dir;
  std::vector<CriterionResult> res;
  {
    py::gil_scoped_release release;
    res = run_acceptance(opt);
  }
  py::list out;
  for (const auto& r : res) {
    py::dict d;
    d["id"] = r.id;
    d["group"] = r.group;
    d["pass"] = r.pass;
    d["seconds"] = r.seconds;
    d["detail"] = r.detail;
    out.append(d);
  }
  return out;
}

py::tuple cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"discflux"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_discflux, m) {
  m.doc() = "Discontinuous-flux conservation laws: explicit formula and Godunov reference";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi);

  py::class_<ConvexFlux>(m, "ConvexFlux")
      .def("__call__", &ConvexFlux::eval)
      .def("deriv", &ConvexFlux::deriv)
      .def("deriv2", &ConvexFlux::deriv2)
      .def_property_readonly("theta", &ConvexFlux::theta)
      .def_property_readonly("min_value", &ConvexFlux::min_value)
      .def_property_readonly("label", &ConvexFlux::label)
      .def_property_readonly("bracket", &ConvexFlux::bracket);

  m.def(
      "make_flux",
      [](const std::string& key, std::optional<Interval> bracket, std::vector<double> coeffs) {
        if (key == "polynomial") {
          if (!bracket) throw Error(ErrorKind::InvalidConfig, "polynomial flux needs a bracket");
          return make_polynomial_flux(std::move(coeffs), *bracket);
        }
        return make_flux(key, bracket.value_or(default_bracket(key)), coeffs);
      },
      py::arg("key"), py::arg("bracket") = py::none(), py::arg("coeffs") = std::vector<double>{});
  m.def("flux_keys", &flux_keys);
  m.def("legendre", &legendre, py::arg("h"), py::arg("p"));
  m.def("deriv_inverse", &deriv_inverse, py::arg("h"), py::arg("p"));
  m.def(
      "branch_inverse",
      [](const ConvexFlux& h, const std::string& side, double v) {
        if (side != "increasing" && side != "decreasing")
          throw Error(ErrorKind::InvalidConfig, "side must be 'increasing' or 'decreasing'");
        return branch_inverse(h, side == "increasing" ? Branch::increasing : Branch::decreasing, v);
      },
      py::arg("h"), py::arg("side"), py::arg("v"));

  m.def("builtin_names", &builtin_names);
  m.def(
      "scenario_json", [](const std::string& ref) { return scenario_to_json(load_scenario(ref)).dump(); },
      py::arg("ref"));
  m.def("solve", &solve, py::arg("scenario"), py::arg("t"), py::arg("n") = 400, py::arg("profile_dt") = 0.0);
  m.def("fvm", &fvm, py::arg("scenario"), py::arg("t"), py::arg("n") = 400, py::arg("cfl") = 0.45);
  m.def("compare", &compare, py::arg("scenario"), py::arg("t"), py::arg("n") = 400, py::arg("cfl") = 0.45);
  m.def("tv_report", &tv_report, py::arg("scenario"), py::arg("t"),
        py::arg("levels") = std::vector<int>{256, 512, 1024}, py::arg("M") = 1.0, py::arg("eps") = 0.1,
        py::arg("run_fvm") = true);
  m.def("verify", &verify, py::arg("filter") = "", py::arg("tighten") = 1.0, py::arg("seed") = 20240611,
        py::arg("work_dir") = "out");
  m.def("cli", &cli, py::arg("args"));
}
