#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "discflux/godunov.hpp"
#include "discflux/hj_solver.hpp"
#include "discflux/scenarios.hpp"

namespace discflux {

double total_variation(std::span<const double> values);

/// Variation of u over nodes with x in [lo, hi] (closed) or (lo, hi) (open).
double total_variation_on(const std::vector<double>& xs, const std::vector<double>& u, double lo, double hi,
                          bool open);

enum class Verdict { bounded, growing, inconclusive };
std::string to_string(Verdict v);

struct VerdictThresholds {
  double growth = 0.20;     // per-level increase for "growing"
  double stability = 0.05;  // last-two-level spread for "bounded"
  double zero = 1e-10;      // two values this small count as stable
};

/// growing: every consecutive increase >= growth; bounded: last two levels
/// within stability; otherwise inconclusive.
Verdict classify_series(const std::vector<double>& series, const VerdictThresholds& th = {});

struct RegionTV {
  std::string name;
  Interval interval;  // for I_M_eps the positive half
  double tv = 0.0;
  std::string note;
};

struct LevelTV {
  int n = 0;
  double R = 0.0;
  double L = 0.0;
  double data_tv = 0.0;         // sampled initial data
  std::vector<double> formula;  // per region
  std::vector<double> fvm;      // per region, empty when not run
};

struct TVReport {
  double t = 0.0;
  std::vector<RegionTV> regions;
  std::vector<LevelTV> levels;
  std::vector<Verdict> verdict_formula;
  std::vector<Verdict> verdict_fvm;
  Verdict verdict_data = Verdict::inconclusive;
};

/// Region names, in order.
const std::vector<std::string>& region_names();

/// TV over I(R) = (0, R), I(L) = (L, 0), their union, I(M, eps) = {eps <= |x| <= M}
/// and the whole grid.
TVReport tv_regions(const std::vector<double>& xs, const std::vector<double>& u, double t, double R, double L,
                    double M, double eps);
TVReport tv_regions(const SolutionField& field, double M, double eps);

struct RefinementOptions {
  std::vector<int> levels{256, 512, 1024};
  double M = 1.0;
  double eps = 0.1;
  double profile_dt = 0.0;  // 0: t / 2000
  double cfl = 0.45;
  bool run_fvm = true;
  VerdictThresholds thresholds;
};

/// Solves the scenario at each level with both solvers and classifies the
/// per-region TV series.
TVReport refinement_study(const Scenario& sc, double t, const RefinementOptions& opt);

struct CompareResult {
  double l1 = 0.0;
  double linf_away = 0.0;
};

/// L1 via the common refinement of both piecewise-constant reconstructions,
/// and L-infinity away from a 5-cell band around detected jumps.
CompareResult cross_compare(const SolutionField& field, const FVMState& fvm);

/// I_AB(t) at one time from the traces.
double interface_entropy(const ConvexFlux& f, const ConvexFlux& g, const Connection& conn, double u_plus,
                         double u_minus);

void write_tv_json(std::ostream& os, const TVReport& r);
void write_tv_csv(std::ostream& os, const TVReport& r);
void write_tv_svg(std::ostream& os, const TVReport& r);

/// Convenience: profile, solver and field in one call.
struct FormulaRun {
  InterfaceProfile profile;
  SolutionField field;
};
FormulaRun run_formula(const Scenario& sc, const InitialProfile& data, double t, int n, double profile_dt = 0.0);
FVMState run_fvm(const Scenario& sc, const InitialProfile& data, double t, int n, double cfl = 0.45,
                 EvolveStats* stats = nullptr);

}  // namespace discflux
