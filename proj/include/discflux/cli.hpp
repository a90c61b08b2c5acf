#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "discflux/diagnostics.hpp"
#include "discflux/error.hpp"

namespace discflux {

/// Exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitAcceptance = 1,
  kExitConfig = 2,
  kExitTolerance = 3,
  kExitNumeric = 4,
};

struct RunConfig {
  std::string scenario;
  std::vector<double> times{1.0};
  std::vector<double> fvm_times;  // compare only; must equal `times` when given
  std::vector<int> grids{400};
  double cfl = 0.45;
  double profile_dt = 0.0;  // 0: t / 2000
  std::string out_dir = "out";
  double l1_factor = 10.0;  // compare bound in units of dx
  double M = 1.0;
  double eps = 0.1;
  VerdictThresholds thresholds;
  std::optional<double> A;  // connection overrides
  std::optional<double> B;
  // verify
  std::string filter;
  double tighten = 1.0;
  std::uint64_t seed = 20240611;
};

/// Checks sizes and ranges. Throws InvalidConfig.
void validate_config(const RunConfig& cfg, bool needs_scenario = true);

/// Loads the scenario and applies connection overrides.
Scenario load_configured_scenario(const RunConfig& cfg);

int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_compare(const RunConfig& cfg, std::ostream& log);
int cmd_tv_report(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_list_scenarios(std::ostream& log);

int exit_code_for(const Error& e);
void write_error_json(std::ostream& os, const Error& e);

/// Parses arguments, dispatches, and maps errors to exit codes. Error JSON
/// goes to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "t1" style tag with %.17g digits, filesystem-safe.
std::string number_tag(double v);

}  // namespace discflux
