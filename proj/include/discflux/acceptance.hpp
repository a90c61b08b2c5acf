#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace discflux {

struct AcceptanceOptions {
  std::string filter;      // comma-separated group names; empty runs all
  double tighten = 1.0;    // every tolerance is divided by this factor
  std::uint64_t seed = 20240611;
  std::string work_dir = "out";
};

struct CriterionResult {
  int id = 0;
  std::string group;
  bool pass = false;
  double seconds = 0.0;
  double budget = 0.0;  // 0: no runtime limit
  std::string detail;
};

/// Group names in criterion order.
const std::vector<std::string>& acceptance_groups();

/// Runs the selected criteria in order. A line per criterion goes to
/// `progress` as soon as it finishes. Throws InvalidConfig on an unknown group.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream* progress = nullptr);

/// One line per criterion: "criterion N <group> PASS|FAIL <seconds>s <detail>".
std::string format_result(const CriterionResult& r);
void print_acceptance_table(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace discflux
