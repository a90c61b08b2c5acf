#include "discflux/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <random>
#include <sstream>

#include "discflux/cli.hpp"
#include "discflux/diagnostics.hpp"
#include "discflux/error.hpp"

namespace discflux {

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a named measurement against a bound; the first failure is noted.
  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!ok || detail.tellp() < 400) detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " FAIL");
  }
};

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

// Golden-section maximization of a unimodal function on [a, b].
double golden_max(const std::function<double(double)>& fn, double a, double b, int iters = 90) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = fn(d);
    }
  }
  return std::max(fc, fd);
}

// ---- 1: Legendre suite ------------------------------------------------------

void legendre_suite(const AcceptanceOptions& opt, Outcome& out) {
  const double tol_inv = 1e-6 / opt.tighten;
  const double tol_env = 1e-8 / opt.tighten;
  const double tol_chain = 1e-10 / opt.tighten;
  std::mt19937_64 rng(opt.seed);
  for (const std::string key : {"burgers", "square", "shifted", "quartic", "sextic_plus1"}) {
    const ConvexFlux h = make_flux(key, default_bracket(key));
    const Interval br = h.bracket();
    const Interval sl = h.slope_range();
    // Brute-force conjugate, independent of the library.
    auto hstar = [&](double p) { return golden_max([&](double q) { return p * q - h(q); }, br.lo, br.hi); };
    std::uniform_real_distribution<double> pick(br.lo + 0.05 * br.width(), br.hi - 0.05 * br.width());
    double inv = 0.0, env5 = 0.0, env6 = 0.0, chain = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double q = pick(rng);
      const double hss = golden_max([&](double p) { return p * q - hstar(p); }, sl.lo, sl.hi);
      inv = std::max(inv, std::abs(hss - h(q)));

      const double p = h.deriv(q);
      env5 = std::max(env5, std::abs(legendre(h, p) - (q * p - h(q))));
      const double qs = deriv_inverse(h, p);  // h*'(p)
      env6 = std::max(env6, std::abs(h(qs) - (p * qs - legendre(h, p))));

      chain = std::max(chain, std::abs(h.deriv(deriv_inverse(h, p)) - p));
      const Branch b = q >= h.theta() ? Branch::increasing : Branch::decreasing;
      chain = std::max(chain, std::abs(h(branch_inverse(h, b, h(q))) - h(q)));
    }
    out.check(inv <= tol_inv && env5 <= tol_env && env6 <= tol_env && chain <= tol_chain,
              key + " inv=" + sci(inv) + " env=" + sci(std::max(env5, env6)) + " chain=" + sci(chain));
  }
}

// ---- 2: single-flux reduction -------------------------------------------

// Classical Hopf-Lax for h = u^2/2 with exact primitive v0: dense scan of
// v0(y) + (x - y)^2 / 2t, then bisection of its derivative u0(y) - (x - y)/t
// around the best node.
double hopf_lax_u(double x, double t, const std::function<double(double)>& v0,
                  const std::function<double(double)>& u0) {
  auto phi = [&](double y) { return v0(y) + (x - y) * (x - y) / (2.0 * t); };
  auto dphi = [&](double y) { return u0(y) - (x - y) / t; };
  const int n = 4000;
  const double lo = x - 4.0 * t, hi = x + 4.0 * t;
  const double step = (hi - lo) / n;
  int best = 0;
  double bv = phi(lo);
  for (int i = 1; i <= n; ++i) {
    const double v = phi(lo + i * step);
    if (v < bv) {
      bv = v;
      best = i;
    }
  }
  double a = lo + std::max(0, best - 1) * step, b = lo + std::min(n, best + 1) * step;
  for (int i = 0; i < 200 && b - a > 0.0; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    (dphi(m) < 0.0 ? a : b) = m;
  }
  return (x - 0.5 * (a + b)) / t;
}

void single_flux_suite(const AcceptanceOptions& opt, Outcome& out) {
  const double tol_pt = 1e-8 / opt.tighten;
  const int n = 800;
  const double t = 1.0;
  struct Case {
    const char* name;
    std::function<double(double)> v0;
    std::function<double(double)> u0;
  };
  const Case cases[] = {
      {"single_flux_burgers", [](double y) { return y < 0.0 ? y : 0.0; }, [](double y) { return y < 0.0 ? 1.0 : 0.0; }},
      {"single_flux_smooth",
       [](double y) { return 0.5 * y + 0.4 * std::sqrt(std::acos(-1.0)) / 4.0 * std::erf(2.0 * y); },
       [](double y) { return 0.5 + 0.4 * std::exp(-4.0 * y * y); }},
  };
  for (const auto& c : cases) {
    const Scenario sc = builtin(c.name);
    const InitialProfile data = sc.data(n);
    const FormulaRun fr = run_formula(sc, data, t, n);
    const auto& xs = fr.field.xs;
    std::vector<double> ref(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ref[i] = hopf_lax_u(xs[i], t, c.v0, c.u0);
    std::vector<bool> near_shock(xs.size(), false);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (std::abs(ref[i] - ref[i - 1]) > 0.05) {
        for (std::size_t k = i >= 3 ? i - 3 : 0; k < std::min(xs.size(), i + 3); ++k) near_shock[k] = true;
      }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!near_shock[i]) worst = std::max(worst, std::abs(fr.field.u[i] - ref[i]));
    }
    const FVMState st = run_fvm(sc, data, t, n);
    const CompareResult cr = cross_compare(fr.field, st);
    const double bound = 10.0 * st.dx / opt.tighten;
    out.check(worst <= tol_pt, std::string(c.name) + " pointwise=" + sci(worst));
    out.check(cr.l1 <= bound, std::string(c.name) + " l1=" + sci(cr.l1) + "/" + sci(bound));
  }
}

// ---- 3: interface consistency -------------------------------------------

std::vector<std::string> two_flux_builtins() {
  std::vector<std::string> names;
  for (const auto& n : builtin_names()) {
    if (!builtin(n).single_flux()) names.push_back(n);
  }
  return names;
}

void interface_suite(const AcceptanceOptions& opt, Outcome& out) {
  const double tol_rh = 1e-6 / opt.tighten;
  const double tol_ent = 1e-6 / opt.tighten;
  const double tol_v = 1e-4 / opt.tighten;
  const int n = 400;
  for (const auto& name : two_flux_builtins()) {
    const Scenario sc = builtin(name);
    const InitialProfile data = sc.data(n);
    const auto& f = sc.f();
    const auto& g = sc.g();
    const Connection conn = sc.connection();
    double rh = 0.0, ent = 1e300, vgap = 0.0;
    int overlap = 0;
    for (double t : {0.5, 1.0, 2.0}) {
      const InterfaceProfile prof = build_profile(data, f, g, conn, t, t / 2000.0);
      rh = std::max(rh, prof.rh_residual(f, g));
      for (std::size_t i = 0; i < prof.size(); ++i) {
        const double lp = prof.lambda_plus[i], lm = prof.lambda_minus[i];
        ent = std::min(ent, interface_entropy(f, g, conn, lp, lm));
        if (f.deriv(lp) > 1e-8 && g.deriv(lm) < -1e-8) ++overlap;
      }
      const HJSolver solver(f, g, conn, data, prof);
      // v(+-eps) on a halving sequence, extrapolated linearly to 0.
      const double e = 1e-2 / 4096.0;
      const double vp = 2.0 * solver.value_at(e, t).v - solver.value_at(2.0 * e, t).v;
      const double vm = 2.0 * solver.value_at(-e, t).v - solver.value_at(-2.0 * e, t).v;
      vgap = std::max({vgap, std::abs(vp - vm), std::abs(vp - prof.interface_value.back())});
    }
    const bool crit = sc.critical();
    const bool ent_ok = crit ? overlap == 0 : ent >= -tol_ent;
    out.check(rh <= tol_rh && ent_ok && vgap <= tol_v,
              name + " rh=" + sci(rh) + (crit ? " overlap=" + std::to_string(overlap) : " I_AB>=" + sci(ent)) +
                  " vgap=" + sci(vgap));
  }
}

// ---- 4: monotonicity ------------------------------------------------------

void monotonicity_suite(const AcceptanceOptions& opt, Outcome& out) {
  const double tol = 1e-8 / opt.tighten;
  const int n = 400;
  int fields = 0;
  double worst = 0.0;
  for (const auto& name : builtin_names()) {
    const Scenario sc = builtin(name);
    const InitialProfile data = sc.data(n);
    std::vector<double> times{0.5, 1.0, 2.0};
    if (sc.critical() && data.support()) times.push_back(5.0);
    for (double t : times) {
      const FormulaRun fr = run_formula(sc, data, t, n);
      const auto& fd = fr.field;
      const double w = check_monotonicity(fd).worst();
      worst = std::max(worst, w);
      double C = 0.0;
      for (std::size_t i = 0; i < fd.xs.size(); ++i) {
        C = std::max(C, std::abs(fd.xs[i] > 0.0 ? sc.f().deriv(fd.u[i]) : sc.g().deriv(fd.u[i])));
      }
      const Interval r = data.value_range();
      for (double u : {r.lo, r.hi}) C = std::max({C, std::abs(sc.f().deriv(u)), std::abs(sc.g().deriv(u))});
      // Fronts are located to half a cell.
      double dx = 0.0;
      for (std::size_t i = 1; i < fd.xs.size(); ++i) dx = std::max(dx, fd.xs[i] - fd.xs[i - 1]);
      const double slack = 0.5 * dx + tol;
      const bool fronts_ok = fd.R >= 0.0 && fd.R <= C * t + slack && fd.L <= 0.0 && fd.L >= -C * t - slack;
      ++fields;
      if (w > tol || !fronts_ok) {
        out.check(false, name + " t=" + sci(t) + " worst=" + sci(w) + " R=" + sci(fd.R) + " L=" + sci(fd.L) +
                             " Ct=" + sci(C * t));
      }
    }
  }
  out.check(worst <= tol, std::to_string(fields) + " fields, worst violation=" + sci(worst));
}

// ---- 5-7: TV refinement studies -----------------------------------------

std::size_t region_index(const std::string& name) {
  const auto& names = region_names();
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

VerdictThresholds tightened(const AcceptanceOptions& opt) {
  VerdictThresholds th;
  th.stability /= opt.tighten;
  th.growth *= opt.tighten;
  return th;
}

std::string series(const TVReport& r, std::size_t k, bool fvm) {
  std::ostringstream os;
  os << std::setprecision(4);
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const auto& v = fvm ? r.levels[i].fvm : r.levels[i].formula;
    os << (i ? "," : "[") << (k < v.size() ? v[k] : 0.0);
  }
  os << "]";
  return os.str();
}

void thm31_suite(const AcceptanceOptions& opt, Outcome& out) {
  const Scenario sc = builtin("thm31_quartic");
  RefinementOptions ro;
  ro.levels = {256, 512, 1024, 2048};
  ro.thresholds = tightened(opt);
  const TVReport r = refinement_study(sc, 1.0, ro);
  const std::size_t k = region_index("I_R_union_I_L");
  double min_ratio = 1e300;
  for (std::size_t i = 1; i < r.levels.size(); ++i) {
    min_ratio = std::min(min_ratio, r.levels[i].data_tv / r.levels[i - 1].data_tv);
  }
  out.check(r.verdict_formula[k] == Verdict::bounded,
            "I(R)uI(L) formula " + to_string(r.verdict_formula[k]) + " " + series(r, k, false));
  out.check(min_ratio >= 1.0 + 0.5 * opt.tighten, "data TV min level ratio=" + sci(min_ratio));
  if (!r.verdict_fvm.empty()) {
    out.detail << "; fvm (informational) " << to_string(r.verdict_fvm[k]) << " " << series(r, k, true);
  }
}

void blowup_suite(const AcceptanceOptions& opt, Outcome& out) {
  const Scenario sc = builtin("counterexample_ghoshal");
  RefinementOptions ro;
  ro.levels = {256, 512, 1024, 2048};
  ro.thresholds = tightened(opt);
  const TVReport r = refinement_study(sc, 1.0, ro);
  const std::size_t k = region_index("full");
  out.check(r.verdict_formula[k] == Verdict::growing,
            "full-line formula " + to_string(r.verdict_formula[k]) + " " + series(r, k, false));
  out.check(!r.verdict_fvm.empty() && r.verdict_fvm[k] == Verdict::growing,
            "full-line fvm " + (r.verdict_fvm.empty() ? std::string("missing") : to_string(r.verdict_fvm[k])) +
                " " + series(r, k, true));
}

void thm32_suite(const AcceptanceOptions& opt, Outcome& out) {
  const Scenario sc = builtin("thm32_compact");
  const ValueInequalities vi = check_value_inequalities(sc.f(), sc.g());
  out.check(vi.all && sc.critical(), "value inequalities " + std::string(vi.all ? "hold" : "fail"));
  const InitialProfile probe = sc.data(256);
  const double M = probe.support().value_or(1.0);
  RefinementOptions ro;
  ro.levels = {256, 512, 1024};
  ro.M = M;
  ro.run_fvm = false;
  ro.thresholds = tightened(opt);
  const std::size_t k = region_index("I_R_union_I_L");
  const std::vector<double> sweep{1.0, 5.0, 10.0, 20.0};
  Verdict last = Verdict::inconclusive;
  double first_bounded = -1.0;
  for (double t : sweep) {
    const TVReport r = refinement_study(sc, t, ro);
    last = r.verdict_formula[k];
    if (last == Verdict::bounded && first_bounded < 0.0) first_bounded = t;
    if (t == sweep.back()) out.detail << "; t=" << t << " " << series(r, k, false);
  }
  out.check(last == Verdict::bounded, "I(R)uI(L) at t=20 " + to_string(last));
  out.detail << "; first bounded t=" << first_bounded;

  // Data exhaustion: once no left data reaches the interface, the states
  // leaving it on the right are f_+^{-1}(g(0)).
  const double t = sweep.back();
  const int n = 1024;
  const InitialProfile data = sc.data(n);
  const FormulaRun fr = run_formula(sc, data, t, n);
  const double ym = fr.profile.y_minus_t.back();
  const bool exhausted = ym <= -M || ym == 0.0;
  const double target = branch_inverse(sc.f(), Branch::increasing, sc.g()(0.0));
  double gap = 0.0;
  int seen = 0;
  for (std::size_t i = 0; i < fr.field.xs.size() && seen < 3; ++i) {
    const double x = fr.field.xs[i];
    if (x <= 0.0 || x >= fr.field.R) continue;
    gap = std::max(gap, std::abs(fr.field.u[i] - target));
    ++seen;
  }
  out.check(exhausted && seen > 0 && gap <= 1e-6 / opt.tighten,
            "exhausted=" + std::string(exhausted ? "yes" : "no") + " y_-=" + sci(ym) + " |u-f+^-1(g(0))|=" +
                sci(gap));
}

// ---- 8: oracle health -----------------------------------------------------

void oracle_suite(const AcceptanceOptions& opt, Outcome& out) {
  const double tol = 1e-12 / opt.tighten;
  double mass = 0.0;
  for (const auto& name : builtin_names()) {
    const Scenario sc = builtin(name);
    EvolveStats stats;
    run_fvm(sc, sc.data(256), 1.0, 256, 0.45, &stats);
    mass = std::max(mass, stats.max_mass_residual);
  }
  out.check(mass <= tol, "mass residual=" + sci(mass));

  double drift = 0.0;
  for (const auto& name : two_flux_builtins()) {
    const Scenario sc = builtin(name);
    const Connection c = sc.connection();
    const InitialProfile step = InitialProfile::piecewise_constant({0.0}, {c.A, c.B}, "connection");
    FVMState st = make_fvm_state(step, sc.domain(), 256, sc.f(), sc.g(), c);
    std::vector<double> prev = st.u;
    evolve(st, sc.f(), sc.g(), c, 1.0, 0.45, [&](const FVMState& s, const StepInfo&) {
      for (std::size_t i = 0; i < s.u.size(); ++i) drift = std::max(drift, std::abs(s.u[i] - prev[i]));
      prev = s.u;
    });
  }
  out.check(drift <= tol, "steady-state drift=" + sci(drift));

  // Self-convergence on smooth single-flux data before the shock forms.
  const Scenario sc = builtin("single_flux_smooth");
  std::vector<std::vector<double>> sols;
  std::vector<double> dxs;
  for (int n : {200, 400, 800, 1600}) {
    const FVMState st = run_fvm(sc, sc.data(n), 0.5, n);
    sols.push_back(st.u);
    dxs.push_back(st.dx);
  }
  std::vector<double> errs;
  for (std::size_t l = 0; l + 1 < sols.size(); ++l) {
    double e = 0.0;
    for (std::size_t i = 0; i < sols[l].size(); ++i) {
      e += std::abs(sols[l][i] - 0.5 * (sols[l + 1][2 * i] + sols[l + 1][2 * i + 1])) * dxs[l];
    }
    errs.push_back(e);
  }
  double order = 1e300;
  for (std::size_t l = 0; l + 1 < errs.size(); ++l) order = std::min(order, std::log2(errs[l] / errs[l + 1]));
  out.check(order >= 0.7 * opt.tighten, "self-convergence order=" + sci(order));
}

// ---- 9: determinism -------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void determinism_suite(const AcceptanceOptions& opt, Outcome& out) {
  RunConfig cfg;
  cfg.scenario = "counterexample_ghoshal";
  cfg.times = {0.5, 1.0};
  cfg.grids = {256};
  const fs::path a = fs::path(opt.work_dir) / "determinism_a";
  const fs::path b = fs::path(opt.work_dir) / "determinism_b";
  std::ostringstream log;
  cfg.out_dir = a.string();
  cmd_solve(cfg, log);
  cfg.out_dir = b.string();
  cmd_solve(cfg, log);
  int files = 0, differ = 0;
  std::vector<fs::path> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename());
  std::sort(names.begin(), names.end());
  for (const auto& nm : names) {
    ++files;
    if (!fs::exists(b / nm) || slurp(a / nm) != slurp(b / nm)) ++differ;
  }
  out.check(files > 0 && differ == 0, std::to_string(files) + " files, " + std::to_string(differ) + " differ");
}

struct Criterion {
  int id;
  const char* group;
  double budget;
  void (*run)(const AcceptanceOptions&, Outcome&);
};

const Criterion kCriteria[] = {
    {1, "legendre", 5.0, legendre_suite},        {2, "single_flux", 30.0, single_flux_suite},
    {3, "interface", 0.0, interface_suite},      {4, "monotonicity", 0.0, monotonicity_suite},
    {5, "thm31", 600.0, thm31_suite},            {6, "blowup", 600.0, blowup_suite},
    {7, "thm32", 600.0, thm32_suite},            {8, "oracle", 0.0, oracle_suite},
    {9, "determinism", 0.0, determinism_suite},
};

}  // namespace

const std::vector<std::string>& acceptance_groups() {
  static const std::vector<std::string> groups = [] {
    std::vector<std::string> g;
    for (const auto& c : kCriteria) g.emplace_back(c.group);
    return g;
  }();
  return groups;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << r.id << ' ' << std::left << std::setw(12) << r.group << ' ' << (r.pass ? "PASS" : "FAIL")
     << ' ' << std::fixed << std::setprecision(2) << r.seconds << "s";
  if (r.budget > 0.0) os << " (budget " << std::setprecision(0) << r.budget << "s)";
  os << "  " << r.detail;
  return os.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream* progress) {
  std::vector<std::string> wanted;
  {
    std::stringstream ss(opt.filter);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto& g = acceptance_groups();
      if (std::find(g.begin(), g.end(), item) == g.end()) {
        throw Error(ErrorKind::InvalidConfig, "unknown acceptance group '" + item + "'");
      }
      wanted.push_back(item);
    }
  }
  if (!(opt.tighten > 0.0)) throw Error(ErrorKind::InvalidConfig, "tighten must be positive");
  std::vector<CriterionResult> results;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.group) == wanted.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.group = c.group;
    r.budget = c.budget;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(opt, out);
    } catch (const std::exception& e) {
      out.check(false, std::string("error: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.budget > 0.0 && r.seconds > r.budget) out.check(false, "runtime over budget");
    r.pass = out.pass;
    r.detail = out.detail.str();
    if (progress) *progress << format_result(r) << '\n' << std::flush;
    results.push_back(std::move(r));
  }
  return results;
}

void print_acceptance_table(std::ostream& os, const std::vector<CriterionResult>& results) {
  int passed = 0;
  os << "id  group         result  seconds\n";
  for (const auto& r : results) {
    os << std::left << std::setw(4) << r.id << std::setw(14) << r.group << std::setw(8) << (r.pass ? "PASS" : "FAIL")
       << std::fixed << std::setprecision(2) << r.seconds << '\n';
    passed += r.pass ? 1 : 0;
  }
  os << passed << "/" << results.size() << " criteria passed\n";
}

}  // namespace discflux
