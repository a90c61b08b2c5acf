#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "discflux/flux.hpp"
#include "discflux/paths.hpp"

namespace discflux {

struct FluxSpec {
  std::string key;
  std::vector<double> coeffs;  // only for "polynomial"
  Interval bracket;
};

/// mode: "explicit" (A and B), "from_A", "from_B", "critical:A=theta_g",
/// "critical:B=theta_f".
struct ConnectionSpec {
  std::string mode = "explicit";
  std::optional<double> A;
  std::optional<double> B;
};

/// Initial data description. Kinds: constant, riemann, piecewise, sampled,
/// gaussian, oscillatory, compact, box.
struct DataSpec {
  std::string kind;
  nlohmann::json params;
};

/// Alternating states offset / offset + amplitude on intervals that shrink by
/// `decay` per wave and fill [start, accumulation] exactly.
/// With waves_per_cell > 0 the wave count becomes max(n_waves, round(waves_per_cell * N))
/// for a grid of N cells.
DataSpec oscillatory_data(int n_waves, double amplitude, double decay, double offset, double start = 0.0,
                          double accumulation = 1.0, double waves_per_cell = 0.0);

/// Truncates `inner` to zero outside [-M, M].
DataSpec compact_support_data(const DataSpec& inner, double M);

/// Materializes data for a grid of n cells over `domain` (n only matters for
/// resolution-dependent families).
InitialProfile make_data(const DataSpec& spec, Interval domain, int n = 0);

class Scenario {
 public:
  Scenario(std::string label, FluxSpec left, FluxSpec right, ConnectionSpec conn, DataSpec data, Interval domain);

  const std::string& label() const { return label_; }
  const ConvexFlux& f() const { return f_; }  // x > 0
  const ConvexFlux& g() const { return g_; }  // x < 0
  const Connection& connection() const { return conn_; }
  const Interval& domain() const { return domain_; }
  const FluxSpec& left_spec() const { return left_spec_; }
  const FluxSpec& right_spec() const { return right_spec_; }
  const ConnectionSpec& connection_spec() const { return conn_spec_; }
  const DataSpec& data_spec() const { return data_spec_; }
  bool single_flux() const;
  bool critical() const;

  InitialProfile data(int n = 0) const { return make_data(data_spec_, domain_, n); }

 private:
  std::string label_;
  FluxSpec left_spec_;
  FluxSpec right_spec_;
  ConnectionSpec conn_spec_;
  DataSpec data_spec_;
  Interval domain_;
  ConvexFlux f_;
  ConvexFlux g_;
  Connection conn_{};
};

std::vector<std::string> builtin_names();
/// Throws UnknownScenario.
Scenario builtin(const std::string& name);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
/// Builtin name or path to a JSON file.
Scenario load_scenario(const std::string& ref);

/// The four value inequalities used for the critical compact-support case:
/// f(theta_f) != g(theta_g), f(theta_f) != g(0), f(0) != g(theta_g), f(0) != g(0).
struct ValueInequalities {
  bool all = false;
  double gaps[4] = {0, 0, 0, 0};
};
ValueInequalities check_value_inequalities(const ConvexFlux& f, const ConvexFlux& g, double tol = 1e-9);

}  // namespace discflux
