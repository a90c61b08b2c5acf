#pragma once

#include <functional>
#include <vector>

#include "discflux/flux.hpp"
#include "discflux/paths.hpp"

namespace discflux {

/// Cell averages on a uniform grid with a face at x = 0.
struct FVMState {
  std::vector<double> centers;
  std::vector<double> u;
  double t_now = 0.0;
  double dx = 0.0;
  std::size_t n_left = 0;  // cells with center < 0
  double bound = 0.0;      // invariant bound on |u|
};

/// Initializes exact cell averages (v0 differences) on [lo, hi] with n cells.
/// Throws GridMismatch unless 0 lands on a face.
FVMState make_fvm_state(const InitialProfile& data, Interval domain, int n, const ConvexFlux& f,
                        const ConvexFlux& g, const Connection& conn);

double godunov_flux(const ConvexFlux& h, double a, double b);
double interface_flux(const ConvexFlux& f, const ConvexFlux& g, const Connection& conn, double a, double b);

struct StepInfo {
  double t = 0.0;
  double dt = 0.0;
  double mass_residual = 0.0;  // |change of sum u dx - boundary flux balance|
};

struct EvolveStats {
  std::size_t steps = 0;
  double max_mass_residual = 0.0;
};

using StepObserver = std::function<void(const FVMState&, const StepInfo&)>;

/// Advances to time T with outflow boundaries. Throws UnstableBlowup if an
/// average exceeds twice the invariant bound.
EvolveStats evolve(FVMState& state, const ConvexFlux& f, const ConvexFlux& g, const Connection& conn, double T,
                   double cfl = 0.45, const StepObserver& observer = {});

}  // namespace discflux
