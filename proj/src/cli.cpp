#include "discflux/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "discflux/acceptance.hpp"

namespace discflux {

namespace fs = std::filesystem;
using nlohmann::json;

std::string number_tag(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s;
  for (const char* p = buf; *p; ++p) {
    if (*p == '.') {
      s += 'p';
    } else if (*p == '-') {
      s += 'm';
    } else if (*p != '+') {
      s += *p;
    }
  }
  return s;
}

void validate_config(const RunConfig& cfg, bool needs_scenario) {
  if (needs_scenario && cfg.scenario.empty()) throw Error(ErrorKind::InvalidConfig, "--scenario is required");
  if (cfg.times.empty()) throw Error(ErrorKind::InvalidConfig, "at least one --t is required");
  for (double t : cfg.times) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidConfig, "times must be positive");
  }
  if (cfg.grids.empty()) throw Error(ErrorKind::InvalidConfig, "at least one --n is required");
  for (int n : cfg.grids) {
    if (n < 16) throw Error(ErrorKind::InvalidConfig, "grid sizes must be >= 16");
  }
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.5)) throw Error(ErrorKind::InvalidConfig, "--cfl must lie in (0, 0.5]");
  if (cfg.profile_dt < 0.0) throw Error(ErrorKind::InvalidConfig, "--profile-dt must be >= 0");
  if (!(cfg.l1_factor > 0.0)) throw Error(ErrorKind::InvalidConfig, "--l1-factor must be positive");
  if (!(cfg.eps > 0.0 && cfg.eps < cfg.M)) throw Error(ErrorKind::InvalidConfig, "need 0 < --eps < --M");
  if (!(cfg.tighten > 0.0)) throw Error(ErrorKind::InvalidConfig, "--tighten must be positive");
}

Scenario load_configured_scenario(const RunConfig& cfg) {
  Scenario sc = load_scenario(cfg.scenario);
  if (!cfg.A && !cfg.B) return sc;
  json j = scenario_to_json(sc);
  json c = json::object();
  if (cfg.A && cfg.B) {
    c = {{"mode", "explicit"}, {"A", *cfg.A}, {"B", *cfg.B}};
  } else if (cfg.A) {
    c = {{"mode", "from_A"}, {"A", *cfg.A}};
  } else {
    c = {{"mode", "from_B"}, {"B", *cfg.B}};
  }
  j["connection"] = c;
  return scenario_from_json(j);
}

namespace {

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".discflux_probe";
  std::ofstream p(probe);
  if (ec || !p) throw Error(ErrorKind::InvalidConfig, "output directory '" + dir + "' is not writable");
  p.close();
  fs::remove(probe, ec);
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::ofstream os(fs::path(dir) / name, std::ios::binary);
  if (!os) throw Error(ErrorKind::InvalidConfig, "cannot write " + name);
  return os;
}

std::string stem(const char* kind, double t, int n) {
  return std::string(kind) + "_t" + number_tag(t) + "_n" + std::to_string(n);
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  validate_config(cfg);
  const Scenario sc = load_configured_scenario(cfg);
  prepare_dir(cfg.out_dir);
  {
    auto os = open_out(cfg.out_dir, "scenario.json");
    os << scenario_to_json(sc).dump(2) << '\n';
  }
  const auto old = log.precision(17);
  for (double t : cfg.times) {
    for (int n : cfg.grids) {
      const InitialProfile data = sc.data(n);
      const FormulaRun run = run_formula(sc, data, t, n, cfg.profile_dt);
      HJSolver solver(sc.f(), sc.g(), sc.connection(), data, run.profile);
      {
        auto os = open_out(cfg.out_dir, stem("profile", t, n) + ".csv");
        write_profile_csv(os, run.profile);
      }
      {
        auto os = open_out(cfg.out_dir, stem("field", t, n) + ".csv");
        write_field_csv(os, run.field);
      }
      {
        auto os = open_out(cfg.out_dir, stem("fronts", t, n) + ".json");
        write_fronts_json(os, run.field, solver.interface_traces(t));
      }
      log << "solve " << sc.label() << " t=" << t << " N=" << n << " R=" << run.field.R << " L=" << run.field.L
          << '\n';
    }
  }
  log.precision(old);
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& log) {
  validate_config(cfg);
  if (!cfg.fvm_times.empty() && cfg.fvm_times != cfg.times) {
    throw Error(ErrorKind::InvalidConfig, "--fvm-t must list the same times as --t");
  }
  const Scenario sc = load_configured_scenario(cfg);
  prepare_dir(cfg.out_dir);
  json out;
  out["scenario"] = sc.label();
  bool ok = true;
  for (double t : cfg.times) {
    for (int n : cfg.grids) {
      const InitialProfile data = sc.data(n);
      const FormulaRun fr = run_formula(sc, data, t, n, cfg.profile_dt);
      EvolveStats stats;
      const FVMState st = run_fvm(sc, data, t, n, cfg.cfl, &stats);
      const CompareResult cr = cross_compare(fr.field, st);
      const double bound = cfg.l1_factor * st.dx;
      const bool pass = cr.l1 <= bound;
      ok = ok && pass;
      out["runs"].push_back({{"t", t},
                             {"N", n},
                             {"dx", st.dx},
                             {"l1", cr.l1},
                             {"l1_bound", bound},
                             {"linf_away", cr.linf_away},
                             {"fvm_steps", stats.steps},
                             {"max_mass_residual", stats.max_mass_residual},
                             {"pass", pass}});
    }
  }
  out["pass"] = ok;
  {
    auto os = open_out(cfg.out_dir, "compare.json");
    os << out.dump(2) << '\n';
  }
  log << out.dump(2) << '\n';
  return ok ? kExitOk : kExitTolerance;
}

int cmd_tv_report(const RunConfig& cfg, std::ostream& log) {
  validate_config(cfg);
  if (cfg.grids.size() < 3) throw Error(ErrorKind::InvalidConfig, "tv-report needs at least three --n levels");
  const Scenario sc = load_configured_scenario(cfg);
  prepare_dir(cfg.out_dir);
  RefinementOptions opt;
  opt.levels = cfg.grids;
  opt.M = cfg.M;
  opt.eps = cfg.eps;
  opt.profile_dt = cfg.profile_dt;
  opt.cfl = cfg.cfl;
  opt.thresholds = cfg.thresholds;
  for (double t : cfg.times) {
    const TVReport r = refinement_study(sc, t, opt);
    const std::string base = "tv_t" + number_tag(t);
    {
      auto os = open_out(cfg.out_dir, base + ".json");
      write_tv_json(os, r);
    }
    {
      auto os = open_out(cfg.out_dir, base + ".csv");
      write_tv_csv(os, r);
    }
    {
      auto os = open_out(cfg.out_dir, base + ".svg");
      write_tv_svg(os, r);
    }
    write_tv_json(log, r);
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  AcceptanceOptions opt;
  opt.filter = cfg.filter;
  opt.tighten = cfg.tighten;
  opt.seed = cfg.seed;
  opt.work_dir = cfg.out_dir;
  const auto results = run_acceptance(opt, &log);
  print_acceptance_table(log, results);
  for (const auto& r : results) {
    if (!r.pass) return kExitAcceptance;
  }
  return kExitOk;
}

int cmd_list_scenarios(std::ostream& log) {
  const auto old = log.precision(17);
  for (const auto& name : builtin_names()) {
    const Scenario sc = builtin(name);
    log << name << "  g=" << sc.g().label() << " f=" << sc.f().label() << " A=" << sc.connection().A
        << " B=" << sc.connection().B << (sc.critical() ? " critical" : "") << " data=" << sc.data_spec().kind
        << " domain=[" << sc.domain().lo << ", " << sc.domain().hi << "]\n";
  }
  log.precision(old);
  return kExitOk;
}

int exit_code_for(const Error& e) { return e.is_validation() ? kExitConfig : kExitNumeric; }

void write_error_json(std::ostream& os, const Error& e) {
  const json j = {{"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}},
                  {"exit_code", exit_code_for(e)}};
  os << j.dump() << '\n';
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit-formula and finite-volume solvers for conservation laws with a discontinuous flux"};
  app.require_subcommand(1);
  RunConfig cfg;
  double A = 0.0, B = 0.0;

  auto common = [&](CLI::App* sub, bool grids) {
    sub->add_option("--scenario", cfg.scenario, "Builtin name or scenario JSON file")->required();
    sub->add_option("--t", cfg.times, "Output times")->delimiter(',');
    if (grids) sub->add_option("--n", cfg.grids, "Grid sizes")->delimiter(',');
    sub->add_option("--cfl", cfg.cfl, "CFL number for the finite-volume oracle");
    sub->add_option("--profile-dt", cfg.profile_dt, "Interface profile step (0: t/2000)");
    sub->add_option("--out", cfg.out_dir, "Output directory");
    sub->add_option("--A", A, "Override connection state A");
    sub->add_option("--B", B, "Override connection state B");
  };

  auto* solve = app.add_subcommand("solve", "Solve fields with the explicit formula");
  common(solve, true);
  auto* compare = app.add_subcommand("compare", "Compare the formula against the finite-volume oracle");
  common(compare, true);
  compare->add_option("--fvm-t", cfg.fvm_times, "Oracle times (must match --t)")->delimiter(',');
  compare->add_option("--l1-factor", cfg.l1_factor, "L1 bound in units of dx");
  auto* tv = app.add_subcommand("tv-report", "Total-variation refinement study");
  common(tv, true);
  tv->add_option("--M", cfg.M, "Outer radius of I(M, eps)");
  tv->add_option("--eps", cfg.eps, "Inner radius of I(M, eps)");
  tv->add_option("--growth", cfg.thresholds.growth, "Per-level increase for 'growing'");
  tv->add_option("--stability", cfg.thresholds.stability, "Last-level spread for 'bounded'");
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--filter", cfg.filter, "Comma-separated groups to run");
  verify->add_option("--tighten", cfg.tighten, "Divide every tolerance by this factor");
  verify->add_option("--seed", cfg.seed, "Seed for sampled property checks");
  verify->add_option("--out", cfg.out_dir, "Scratch directory");
  auto* list = app.add_subcommand("list-scenarios", "List builtin scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    const Error wrapped(ErrorKind::InvalidConfig, e.what());
    write_error_json(err, wrapped);
    return kExitConfig;
  }

  auto opt_set = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
  try {
    for (CLI::App* sub : {solve, compare, tv}) {
      if (!sub->parsed()) continue;
      if (opt_set(sub, "--A")) cfg.A = A;
      if (opt_set(sub, "--B")) cfg.B = B;
    }
    if (solve->parsed()) return cmd_solve(cfg, out);
    if (compare->parsed()) return cmd_compare(cfg, out);
    if (tv->parsed()) return cmd_tv_report(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (list->parsed()) return cmd_list_scenarios(out);
  } catch (const Error& e) {
    write_error_json(err, e);
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    write_error_json(err, Error(ErrorKind::InvalidConfig, e.what()));
    return kExitConfig;
  } catch (const std::exception& e) {
    write_error_json(err, Error(ErrorKind::UnstableBlowup, e.what()));
    return kExitNumeric;
  }
  return kExitConfig;
}

}  // namespace discflux
