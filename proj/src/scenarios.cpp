#include "discflux/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "discflux/error.hpp"

namespace discflux {

using nlohmann::json;

namespace {

ConvexFlux build_flux(const FluxSpec& s) {
  try {
    return make_flux(s.key, s.bracket, s.coeffs);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NoSignChange) throw Error(ErrorKind::InvalidFlux, e.what());
    throw;
  }
}

Connection resolve_connection(const ConnectionSpec& spec, const ConvexFlux& f, const ConvexFlux& g) {
  auto need = [&](const std::optional<double>& v, const char* name) {
    if (!v) throw Error(ErrorKind::InvalidConfig, std::string("connection mode '") + spec.mode + "' needs " + name);
    return *v;
  };
  try {
    if (spec.mode == "explicit") return {need(spec.A, "A"), need(spec.B, "B")};
    if (spec.mode == "from_A") return connection_from_left(f, g, need(spec.A, "A"));
    if (spec.mode == "from_B") return connection_from_right(f, g, need(spec.B, "B"));
    if (spec.mode == "critical:A=theta_g") return connection_from_left(f, g, g.theta());
    if (spec.mode == "critical:B=theta_f") return connection_from_right(f, g, f.theta());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BelowMinimum || e.kind() == ErrorKind::BracketExceeded) {
      throw Error(ErrorKind::InvalidConnection, e.what());
    }
    throw;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown connection mode '" + spec.mode + "'");
}

double get(const json& p, const char* key, double fallback) {
  return p.contains(key) ? p.at(key).get<double>() : fallback;
}

double req(const json& p, const char* key) {
  if (!p.contains(key)) throw Error(ErrorKind::InvalidConfig, std::string("data parameter '") + key + "' missing");
  return p.at(key).get<double>();
}

InitialProfile oscillatory_profile(const json& p, int n_cells) {
  int n = static_cast<int>(req(p, "n_waves"));
  const double per_cell = get(p, "waves_per_cell", 0.0);
  if (per_cell > 0.0 && n_cells > 0) n = std::max(n, static_cast<int>(std::lround(per_cell * n_cells)));
  if (n < 1) throw Error(ErrorKind::InvalidConfig, "oscillatory data needs n_waves >= 1");
  const double amp = req(p, "amplitude");
  const double decay = get(p, "decay", 1.0);
  const double offset = get(p, "offset", 0.0);
  const double start = get(p, "start", 0.0);
  const double acc = get(p, "accumulation", 1.0);
  if (!(decay > 0.0 && decay <= 1.0) || start == acc) {
    throw Error(ErrorKind::InvalidConfig, "oscillatory data needs 0 < decay <= 1 and start != accumulation");
  }
  const double len = std::abs(acc - start);
  const double dir = acc > start ? 1.0 : -1.0;
  const double w0 = decay == 1.0 ? len / (2.0 * n) : len * (1.0 - decay) / (2.0 * (1.0 - std::pow(decay, n)));
  std::vector<std::pair<double, double>> ups;
  double cum = 0.0;
  double w = w0;
  const double floor_w = 1e-12 * (1.0 + std::abs(start) + std::abs(acc));
  for (int k = 0; k < n && w > floor_w; ++k) {
    if (dir > 0) {
      ups.push_back({start + cum, start + cum + w});
    } else {
      ups.push_back({start - cum - w, start - cum});
    }
    cum += 2.0 * w;
    w *= decay;
  }
  std::sort(ups.begin(), ups.end());
  std::vector<double> breaks, values{offset};
  for (const auto& [a, b] : ups) {
    breaks.push_back(a);
    values.push_back(offset + amp);
    breaks.push_back(b);
    values.push_back(offset);
  }
  return InitialProfile::piecewise_constant(std::move(breaks), std::move(values), "oscillatory");
}

}  // namespace

DataSpec oscillatory_data(int n_waves, double amplitude, double decay, double offset, double start,
                          double accumulation, double waves_per_cell) {
  json p = {{"n_waves", n_waves}, {"amplitude", amplitude},   {"decay", decay},
            {"offset", offset},   {"start", start},           {"accumulation", accumulation}};
  if (waves_per_cell > 0.0) p["waves_per_cell"] = waves_per_cell;
  return {"oscillatory", p};
}

DataSpec compact_support_data(const DataSpec& inner, double M) {
  if (!(M > 0.0)) throw Error(ErrorKind::InvalidConfig, "compact support radius must be positive");
  return {"compact", json{{"M", M}, {"inner", json{{"kind", inner.kind}, {"params", inner.params}}}}};
}

InitialProfile make_data(const DataSpec& spec, Interval domain, int n) {
  const json& p = spec.params;
  const std::string& k = spec.kind;
  if (k == "constant") {
    return InitialProfile::piecewise_constant({}, {req(p, "value")}, "constant");
  }
  if (k == "riemann") {
    return InitialProfile::piecewise_constant({get(p, "position", 0.0)}, {req(p, "left"), req(p, "right")},
                                              "riemann");
  }
  if (k == "piecewise") {
    return InitialProfile::piecewise_constant(p.at("breaks").get<std::vector<double>>(),
                                              p.at("values").get<std::vector<double>>(), "piecewise");
  }
  if (k == "sampled") {
    return InitialProfile::sampled(p.at("xs").get<std::vector<double>>(), p.at("us").get<std::vector<double>>(),
                                   "sampled");
  }
  if (k == "box") {
    const double M = req(p, "M");
    auto prof = InitialProfile::piecewise_constant({-M, M}, {0.0, req(p, "value"), 0.0}, "box");
    prof.set_support(M);
    return prof;
  }
  if (k == "gaussian") {
    const double base = req(p, "base");
    const double amp = req(p, "amplitude");
    const double rate = get(p, "rate", 1.0);
    const double w = domain.width();
    return InitialProfile::from_function([=](double x) { return base + amp * std::exp(-rate * x * x); },
                                         {domain.lo - w, domain.hi + w}, "gaussian");
  }
  if (k == "oscillatory") return oscillatory_profile(p, n);
  if (k == "compact") {
    const double M = req(p, "M");
    const json& in = p.at("inner");
    const DataSpec inner{in.at("kind").get<std::string>(), in.value("params", json::object())};
    const InitialProfile base = make_data(inner, domain, n);
    if (base.is_piecewise()) {
      const auto& pc = base.pieces();
      std::vector<double> breaks{-M}, values{0.0};
      for (std::size_t i = 0; i < pc.breaks.size(); ++i) {
        const double b = pc.breaks[i];
        if (b <= -M || b >= M) continue;
        values.push_back(base.u0_left(b));
        breaks.push_back(b);
      }
      values.push_back(base.u0_left(M));
      breaks.push_back(M);
      values.push_back(0.0);
      // Drop breaks with equal values on both sides.
      std::vector<double> b2, v2{values.front()};
      for (std::size_t i = 0; i < breaks.size(); ++i) {
        if (values[i + 1] == v2.back()) continue;
        b2.push_back(breaks[i]);
        v2.push_back(values[i + 1]);
      }
      auto prof = InitialProfile::piecewise_constant(std::move(b2), std::move(v2), "compact");
      prof.set_support(M);
      return prof;
    }
    auto prof = InitialProfile::from_function(
        [base, M](double x) { return std::abs(x) <= M ? base.u0(x) : 0.0; }, {-M, M}, "compact");
    prof.set_support(M);
    return prof;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown data kind '" + k + "'");
}

Scenario::Scenario(std::string label, FluxSpec left, FluxSpec right, ConnectionSpec conn, DataSpec data,
                   Interval domain)
    : label_(std::move(label)),
      left_spec_(std::move(left)),
      right_spec_(std::move(right)),
      conn_spec_(std::move(conn)),
      data_spec_(std::move(data)),
      domain_(domain),
      f_(build_flux(right_spec_)),
      g_(build_flux(left_spec_)) {
  if (!(domain_.lo < 0.0 && domain_.hi > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "scenario domain must straddle 0");
  }
  const HypothesisReport hr = validate_hypotheses(f_, g_);
  if (!hr.h1_ok || !hr.h2_ok || !hr.h3_ok) {
    throw Error(ErrorKind::InvalidFlux, "scenario '" + label_ + "': flux hypotheses fail");
  }
  conn_ = resolve_connection(conn_spec_, f_, g_);
  if (!validate_connection(f_, g_, conn_).valid) {
    throw Error(ErrorKind::InvalidConnection, "scenario '" + label_ + "': (A,B) is not a connection");
  }

  // Bracket coverage: data, connection and the states the interface can emit.
  const Interval r = this->data(64).value_range();
  std::vector<double> states{r.lo, r.hi, conn_.A, conn_.B, f_.theta(), g_.theta()};
  for (double u : {r.lo, r.hi, conn_.A, conn_.B}) {
    try {
      states.push_back(branch_inverse(f_, Branch::increasing, std::max(g_(u), f_.min_value())));
      states.push_back(branch_inverse(g_, Branch::decreasing, std::max(f_(u), g_.min_value())));
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidConfig, "scenario '" + label_ + "': bracket too small (" + e.what() + ")");
    }
  }
  for (double s : states) {
    if (!(s > f_.bracket().lo && s < f_.bracket().hi && s > g_.bracket().lo && s < g_.bracket().hi)) {
      std::ostringstream os;
      os.precision(17);
      os << "scenario '" << label_ << "': reachable state " << s << " not strictly inside both brackets";
      throw Error(ErrorKind::InvalidConfig, os.str());
    }
  }
}

bool Scenario::single_flux() const {
  return left_spec_.key == right_spec_.key && left_spec_.coeffs == right_spec_.coeffs;
}

bool Scenario::critical() const { return validate_connection(f_, g_, conn_).critical; }

std::vector<std::string> builtin_names() {
  return {"single_flux_burgers", "single_flux_burgers_fan", "single_flux_smooth", "thm31_quartic",
          "counterexample_ghoshal", "thm32_compact", "twoflux_noncritical"};
}

Scenario builtin(const std::string& name) {
  const FluxSpec burgers{"burgers", {}, {-4.0, 4.0}};
  const FluxSpec shifted{"shifted", {}, {-3.0, 5.0}};
  const FluxSpec square{"square", {}, {-4.0, 4.0}};
  if (name == "single_flux_burgers") {
    return Scenario(name, burgers, burgers, {"explicit", 0.0, 0.0}, {"riemann", {{"left", 1.0}, {"right", 0.0}}},
                    {-2.0, 2.0});
  }
  if (name == "single_flux_burgers_fan") {
    return Scenario(name, burgers, burgers, {"explicit", 0.0, 0.0}, {"riemann", {{"left", 0.0}, {"right", 1.0}}},
                    {-2.0, 2.0});
  }
  if (name == "single_flux_smooth") {
    return Scenario(name, burgers, burgers, {"explicit", 0.0, 0.0},
                    {"gaussian", {{"base", 0.5}, {"amplitude", 0.4}, {"rate", 4.0}}}, {-4.0, 4.0});
  }
  if (name == "thm31_quartic") {
    return Scenario(name, {"sextic_plus1", {}, {-1.6, 1.6}}, {"quartic", {}, {-2.0, 2.0}},
                    {"from_A", -0.5, std::nullopt}, oscillatory_data(16, 1.8, 1.0, -0.9, -1.5, 1.5, 1.0 / 16.0),
                    {-8.0, 8.0});
  }
  if (name == "counterexample_ghoshal") {
    return Scenario(name, square, shifted, {"critical:A=theta_g", std::nullopt, std::nullopt},
                    oscillatory_data(8, 1.0, 0.7, -0.5, 0.2, 2.0, 1.0 / 64.0), {-4.0, 4.0});
  }
  if (name == "thm32_compact") {
    return Scenario(name, {"polynomial", {0.1, 0.0, 1.0}, {-4.0, 4.0}}, shifted,
                    {"critical:A=theta_g", std::nullopt, std::nullopt},
                    compact_support_data(oscillatory_data(6, 1.0, 1.0, -0.5, -1.0, 1.0), 1.0), {-64.0, 64.0});
  }
  if (name == "twoflux_noncritical") {
    return Scenario(name, square, shifted, {"from_A", -1.0, std::nullopt}, {"constant", {{"value", 0.0}}},
                    {-4.0, 4.0});
  }
  throw Error(ErrorKind::UnknownScenario, "unknown scenario '" + name + "'");
}

namespace {

FluxSpec flux_spec_from_json(const json& j) {
  FluxSpec s;
  s.key = j.at("key").get<std::string>();
  if (j.contains("coeffs")) s.coeffs = j.at("coeffs").get<std::vector<double>>();
  if (j.contains("bracket")) {
    const auto b = j.at("bracket").get<std::vector<double>>();
    if (b.size() != 2) throw Error(ErrorKind::InvalidConfig, "flux bracket needs two entries");
    s.bracket = {b[0], b[1]};
  } else {
    s.bracket = default_bracket(s.key);
  }
  return s;
}

json flux_spec_to_json(const FluxSpec& s) {
  json j = {{"key", s.key}, {"bracket", {s.bracket.lo, s.bracket.hi}}};
  if (!s.coeffs.empty()) j["coeffs"] = s.coeffs;
  return j;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  try {
    ConnectionSpec c;
    const json& cj = j.at("connection");
    c.mode = cj.value("mode", std::string("explicit"));
    if (cj.contains("A")) c.A = cj.at("A").get<double>();
    if (cj.contains("B")) c.B = cj.at("B").get<double>();
    const json& dj = j.at("data");
    DataSpec d{dj.at("kind").get<std::string>(), dj.value("params", json::object())};
    const auto dom = j.at("domain").get<std::vector<double>>();
    if (dom.size() != 2) throw Error(ErrorKind::InvalidConfig, "domain needs two entries");
    return Scenario(j.value("label", std::string("custom")), flux_spec_from_json(j.at("flux_left")),
                    flux_spec_from_json(j.at("flux_right")), c, d, {dom[0], dom[1]});
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("scenario JSON: ") + e.what());
  }
}

json scenario_to_json(const Scenario& s) {
  json c = {{"mode", s.connection_spec().mode}};
  if (s.connection_spec().A) c["A"] = *s.connection_spec().A;
  if (s.connection_spec().B) c["B"] = *s.connection_spec().B;
  return {{"label", s.label()},
          {"flux_left", flux_spec_to_json(s.left_spec())},
          {"flux_right", flux_spec_to_json(s.right_spec())},
          {"connection", c},
          {"data", {{"kind", s.data_spec().kind}, {"params", s.data_spec().params}}},
          {"domain", {s.domain().lo, s.domain().hi}}};
}

Scenario load_scenario(const std::string& ref) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), ref) != names.end()) return builtin(ref);
  std::ifstream in(ref);
  if (!in) throw Error(ErrorKind::UnknownScenario, "no builtin scenario or readable file named '" + ref + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("scenario file: ") + e.what());
  }
  return scenario_from_json(j);
}

ValueInequalities check_value_inequalities(const ConvexFlux& f, const ConvexFlux& g, double tol) {
  ValueInequalities v;
  v.gaps[0] = std::abs(f.min_value() - g.min_value());
  v.gaps[1] = std::abs(f.min_value() - g(0.0));
  v.gaps[2] = std::abs(f(0.0) - g.min_value());
  v.gaps[3] = std::abs(f(0.0) - g(0.0));
  v.all = v.gaps[0] > tol && v.gaps[1] > tol && v.gaps[2] > tol && v.gaps[3] > tol;
  return v;
}

}  // namespace discflux
