#include "discflux/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "discflux/error.hpp"

namespace discflux {

double total_variation(std::span<const double> values) {
  double tv = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) tv += std::abs(values[i] - values[i - 1]);
  return tv;
}

double total_variation_on(const std::vector<double>& xs, const std::vector<double>& u, double lo, double hi,
                          bool open) {
  std::vector<double> sel;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool in = open ? (xs[i] > lo && xs[i] < hi) : (xs[i] >= lo && xs[i] <= hi);
    if (in) sel.push_back(u[i]);
  }
  return total_variation(sel);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded: return "bounded";
    case Verdict::growing: return "growing";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict classify_series(const std::vector<double>& s, const VerdictThresholds& th) {
  if (s.size() < 2) return Verdict::inconclusive;
  bool growing = true;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] >= (1.0 + th.growth) * s[i - 1]) || !(s[i] > th.zero)) growing = false;
  }
  if (growing) return Verdict::growing;
  const double a = s[s.size() - 2];
  const double b = s.back();
  if (std::abs(a) <= th.zero && std::abs(b) <= th.zero) return Verdict::bounded;
  if (std::abs(b - a) <= th.stability * std::max(std::abs(a), std::abs(b))) return Verdict::bounded;
  return Verdict::inconclusive;
}

const std::vector<std::string>& region_names() {
  static const std::vector<std::string> names{"I_R", "I_L", "I_R_union_I_L", "I_M_eps", "full"};
  return names;
}

TVReport tv_regions(const std::vector<double>& xs, const std::vector<double>& u, double t, double R, double L,
                    double M, double eps) {
  if (!(eps < M)) throw Error(ErrorKind::InvalidConfig, "tv_regions needs eps < M");
  TVReport r;
  r.t = t;
  auto count = [&](double lo, double hi, bool open) {
    std::size_t c = 0;
    for (double x : xs) c += open ? (x > lo && x < hi) : (x >= lo && x <= hi);
    return c;
  };
  const double tv_r = total_variation_on(xs, u, 0.0, R, true);
  const double tv_l = total_variation_on(xs, u, L, 0.0, true);
  const double tv_m = total_variation_on(xs, u, eps, M, false) + total_variation_on(xs, u, -M, -eps, false);
  r.regions.push_back({"I_R", {0.0, R}, tv_r, count(0.0, R, true) == 0 ? "EmptyRegion" : ""});
  r.regions.push_back({"I_L", {L, 0.0}, tv_l, count(L, 0.0, true) == 0 ? "EmptyRegion" : ""});
  r.regions.push_back({"I_R_union_I_L", {L, R}, tv_r + tv_l,
                       count(0.0, R, true) + count(L, 0.0, true) == 0 ? "EmptyRegion" : ""});
  r.regions.push_back({"I_M_eps", {eps, M}, tv_m,
                       count(eps, M, false) + count(-M, -eps, false) == 0 ? "EmptyRegion" : ""});
  r.regions.push_back({"full", {xs.empty() ? 0.0 : xs.front(), xs.empty() ? 0.0 : xs.back()}, total_variation(u),
                       xs.empty() ? "EmptyRegion" : ""});
  return r;
}

TVReport tv_regions(const SolutionField& field, double M, double eps) {
  return tv_regions(field.xs, field.u, field.t, field.R, field.L, M, eps);
}

FormulaRun run_formula(const Scenario& sc, const InitialProfile& data, double t, int n, double profile_dt) {
  const double dt = profile_dt > 0.0 ? profile_dt : t / 2000.0;
  InterfaceProfile prof = build_profile(data, sc.f(), sc.g(), sc.connection(), t, dt);
  HJSolver solver(sc.f(), sc.g(), sc.connection(), data, prof);
  GridSpec gs;
  gs.domain = sc.domain();
  gs.n = n;
  SolutionField field = solver.solve_field(t, make_grid(gs));
  return {std::move(prof), std::move(field)};
}

FVMState run_fvm(const Scenario& sc, const InitialProfile& data, double t, int n, double cfl, EvolveStats* stats) {
  FVMState st = make_fvm_state(data, sc.domain(), n, sc.f(), sc.g(), sc.connection());
  const EvolveStats es = evolve(st, sc.f(), sc.g(), sc.connection(), t, cfl);
  if (stats) *stats = es;
  return st;
}

TVReport refinement_study(const Scenario& sc, double t, const RefinementOptions& opt) {
  if (opt.levels.size() < 3) throw Error(ErrorKind::InvalidConfig, "refinement study needs at least 3 levels");
  TVReport report;
  report.t = t;
  std::vector<double> data_series;
  for (int n : opt.levels) {
    const InitialProfile data = sc.data(n);
    const FormulaRun fr = run_formula(sc, data, t, n, opt.profile_dt);
    const TVReport rf = tv_regions(fr.field, opt.M, opt.eps);
    LevelTV lv;
    lv.n = n;
    lv.R = fr.field.R;
    lv.L = fr.field.L;
    for (const auto& reg : rf.regions) lv.formula.push_back(reg.tv);
    // Data TV sampled at the uniform cell centers.
    const double dx = sc.domain().width() / n;
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = data.u0(sc.domain().lo + (i + 0.5) * dx);
    lv.data_tv = total_variation(samples);
    data_series.push_back(lv.data_tv);
    if (opt.run_fvm) {
      const FVMState st = run_fvm(sc, data, t, n, opt.cfl);
      const TVReport rv = tv_regions(st.centers, st.u, t, lv.R, lv.L, opt.M, opt.eps);
      for (const auto& reg : rv.regions) lv.fvm.push_back(reg.tv);
    }
    report.regions = rf.regions;
    report.levels.push_back(std::move(lv));
  }
  const std::size_t nr = region_names().size();
  for (std::size_t k = 0; k < nr; ++k) {
    std::vector<double> sf, sv;
    for (const auto& lv : report.levels) {
      sf.push_back(lv.formula[k]);
      if (!lv.fvm.empty()) sv.push_back(lv.fvm[k]);
    }
    report.verdict_formula.push_back(classify_series(sf, opt.thresholds));
    if (!sv.empty()) report.verdict_fvm.push_back(classify_series(sv, opt.thresholds));
  }
  report.verdict_data = classify_series(data_series, opt.thresholds);
  return report;
}

namespace {

struct Reconstruction {
  std::vector<double> edges;  // size n + 1
  std::vector<double> vals;   // size n
};

Reconstruction from_nodes(const std::vector<double>& xs, const std::vector<double>& u, double lo, double hi) {
  Reconstruction r;
  r.edges.push_back(lo);
  for (std::size_t i = 1; i < xs.size(); ++i) r.edges.push_back(0.5 * (xs[i - 1] + xs[i]));
  r.edges.push_back(hi);
  r.vals = u;
  return r;
}

double value_in(const Reconstruction& r, double x) {
  const std::size_t k = std::upper_bound(r.edges.begin(), r.edges.end(), x) - r.edges.begin();
  return r.vals[std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, r.vals.size() - 1)];
}

std::vector<double> jump_positions(const std::vector<double>& xs, const std::vector<double>& u) {
  std::vector<double> out;
  if (u.empty()) return out;
  const auto [mn, mx] = std::minmax_element(u.begin(), u.end());
  const double thr = 0.5 * (*mx - *mn);
  if (!(thr > 0.0)) return out;
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (std::abs(u[i] - u[i - 1]) > thr) out.push_back(0.5 * (xs[i] + xs[i - 1]));
  }
  return out;
}

}  // namespace

CompareResult cross_compare(const SolutionField& field, const FVMState& fvm) {
  if (field.xs.empty() || fvm.u.empty()) throw Error(ErrorKind::GridMismatch, "cross_compare: empty grid");
  if (std::abs(field.t - fvm.t_now) > 1e-12 * std::max(1.0, field.t)) {
    throw Error(ErrorKind::GridMismatch, "cross_compare: fields at different times");
  }
  const double lo = fvm.centers.front() - 0.5 * fvm.dx;
  const double hi = fvm.centers.back() + 0.5 * fvm.dx;
  if (field.xs.front() > hi || field.xs.back() < lo) {
    throw Error(ErrorKind::GridMismatch, "cross_compare: grids do not overlap");
  }
  const Reconstruction a = from_nodes(field.xs, field.u, lo, hi);
  const Reconstruction b = from_nodes(fvm.centers, fvm.u, lo, hi);
  std::vector<double> cuts = a.edges;
  cuts.insert(cuts.end(), b.edges.begin(), b.edges.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> jumps = jump_positions(field.xs, field.u);
  const auto jb = jump_positions(fvm.centers, fvm.u);
  jumps.insert(jumps.end(), jb.begin(), jb.end());
  const double band = 5.0 * fvm.dx;

  CompareResult r;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double x0 = std::max(cuts[i - 1], lo);
    const double x1 = std::min(cuts[i], hi);
    if (!(x1 > x0)) continue;
    const double mid = 0.5 * (x0 + x1);
    const double d = std::abs(value_in(a, mid) - value_in(b, mid));
    r.l1 += d * (x1 - x0);
    bool near = false;
    for (double j : jumps) near = near || std::abs(mid - j) <= band;
    if (!near) r.linf_away = std::max(r.linf_away, d);
  }
  return r;
}

double interface_entropy(const ConvexFlux& f, const ConvexFlux& g, const Connection& conn, double u_plus,
                         double u_minus) {
  auto sgn = [](double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); };
  return (g(u_minus) - g(conn.A)) * sgn(u_minus - conn.A) - (f(u_plus) - f(conn.B)) * sgn(u_plus - conn.B);
}

void write_tv_json(std::ostream& os, const TVReport& r) {
  nlohmann::json j;
  j["t"] = r.t;
  for (const auto& reg : r.regions) {
    j["regions"].push_back({{"name", reg.name},
                            {"interval", {reg.interval.lo, reg.interval.hi}},
                            {"tv", reg.tv},
                            {"note", reg.note}});
  }
  for (const auto& lv : r.levels) {
    j["levels"].push_back(
        {{"N", lv.n}, {"R", lv.R}, {"L", lv.L}, {"data_tv", lv.data_tv}, {"formula", lv.formula}, {"fvm", lv.fvm}});
  }
  const auto& names = region_names();
  for (std::size_t k = 0; k < r.verdict_formula.size(); ++k) j["verdict_formula"][names[k]] = to_string(r.verdict_formula[k]);
  for (std::size_t k = 0; k < r.verdict_fvm.size(); ++k) j["verdict_fvm"][names[k]] = to_string(r.verdict_fvm[k]);
  j["verdict_data"] = to_string(r.verdict_data);
  os << j.dump(2) << '\n';
}

void write_tv_csv(std::ostream& os, const TVReport& r) {
  const auto old = os.precision(17);
  os << "N,solver,region,tv\n";
  const auto& names = region_names();
  for (const auto& lv : r.levels) {
    for (std::size_t k = 0; k < lv.formula.size(); ++k) os << lv.n << ",formula," << names[k] << ',' << lv.formula[k] << '\n';
    for (std::size_t k = 0; k < lv.fvm.size(); ++k) os << lv.n << ",fvm," << names[k] << ',' << lv.fvm[k] << '\n';
    os << lv.n << ",data,full," << lv.data_tv << '\n';
  }
  os.precision(old);
}

void write_tv_svg(std::ostream& os, const TVReport& r) {
  constexpr double W = 640, H = 400, pad = 50;
  const auto& names = region_names();
  double ymax = 0.0;
  for (const auto& lv : r.levels) {
    for (double v : lv.formula) ymax = std::max(ymax, v);
  }
  if (!(ymax > 0.0)) ymax = 1.0;
  const double lx0 = std::log2(static_cast<double>(r.levels.front().n));
  const double lx1 = std::log2(static_cast<double>(r.levels.back().n));
  auto px = [&](int n) {
    return pad + (W - 2 * pad) * (lx1 > lx0 ? (std::log2(static_cast<double>(n)) - lx0) / (lx1 - lx0) : 0.5);
  };
  auto py = [&](double v) { return H - pad - (H - 2 * pad) * v / ymax; };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
     << "\" stroke=\"black\"/>\n";
  for (std::size_t k = 0; k < names.size(); ++k) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[k % 5] << "\" points=\"";
    for (const auto& lv : r.levels) os << px(lv.n) << ',' << py(lv.formula[k]) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << W - pad - 120 << "\" y=\"" << pad + 16 * k << "\" fill=\"" << colors[k % 5]
       << "\" font-size=\"12\">" << names[k] << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" font-size=\"12\">N (log2)</text>\n";
  os << "</svg>\n";
}

}  // namespace discflux
