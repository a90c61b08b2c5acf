#include "discflux/godunov.hpp"

#include <algorithm>
#include <cmath>

#include "discflux/error.hpp"

namespace discflux {

FVMState make_fvm_state(const InitialProfile& data, Interval domain, int n, const ConvexFlux& f,
                        const ConvexFlux& g, const Connection& conn) {
  if (n < 2 || !(domain.lo < 0.0 && domain.hi > 0.0)) {
    throw Error(ErrorKind::GridMismatch, "finite-volume grid must straddle 0 with at least 2 cells");
  }
  FVMState s;
  s.dx = (domain.hi - domain.lo) / n;
  const double k = -domain.lo / s.dx;
  const double kr = std::round(k);
  if (std::abs(k - kr) > 1e-9 * std::max(1.0, k)) {
    throw Error(ErrorKind::GridMismatch, "finite-volume grid has no face at x = 0");
  }
  s.n_left = static_cast<std::size_t>(kr);
  s.centers.resize(n);
  s.u.resize(n);
  for (int i = 0; i < n; ++i) {
    // Faces are measured from 0 so the interface face is exact.
    const double a = (static_cast<double>(i) - kr) * s.dx;
    const double b = a + s.dx;
    s.centers[i] = a + 0.5 * s.dx;
    s.u[i] = (data.v0(b) - data.v0(a)) / s.dx;
  }
  s.bound = std::max({data.sup_norm(), std::abs(conn.A), std::abs(conn.B), std::abs(f.theta()), std::abs(g.theta())});
  return s;
}

double godunov_flux(const ConvexFlux& h, double a, double b) {
  const double th = h.theta();
  return std::max(h(std::max(a, th)), h(std::min(b, th)));
}

// Godunov flux of g between a and A, against Godunov flux of f between B and b.
// With g'(A) <= 0 <= f'(B) this is max(g(max(a, theta_g)), g(A), f(min(b, theta_f))).
double interface_flux(const ConvexFlux& f, const ConvexFlux& g, const Connection& conn, double a, double b) {
  return std::max(godunov_flux(g, a, conn.A), godunov_flux(f, conn.B, b));
}

EvolveStats evolve(FVMState& s, const ConvexFlux& f, const ConvexFlux& g, const Connection& conn, double T,
                   double cfl, const StepObserver& observer) {
  if (!(cfl > 0.0 && cfl <= 0.5)) throw Error(ErrorKind::InvalidConfig, "cfl must lie in (0, 0.5]");
  if (T < s.t_now) throw Error(ErrorKind::InvalidConfig, "evolve: target time precedes current time");
  EvolveStats stats;
  const std::size_t n = s.u.size();
  std::vector<double> F(n + 1);
  const double limit = 2.0 * s.bound + 1e-12;
  auto flux_of = [&](std::size_t i) -> const ConvexFlux& { return i < s.n_left ? g : f; };

  while (s.t_now < T) {
    double speed = std::max(std::abs(g.deriv(conn.A)), std::abs(f.deriv(conn.B)));
    for (std::size_t i = 0; i < n; ++i) speed = std::max(speed, std::abs(flux_of(i).deriv(s.u[i])));
    double dt = speed > 0.0 ? cfl * s.dx / speed : T - s.t_now;
    if (s.t_now + dt >= T) dt = T - s.t_now;

    F[0] = flux_of(0)(s.u[0]);
    F[n] = flux_of(n - 1)(s.u[n - 1]);
    for (std::size_t j = 1; j < n; ++j) {
      if (j == s.n_left) {
        F[j] = interface_flux(f, g, conn, s.u[j - 1], s.u[j]);
      } else {
        F[j] = godunov_flux(flux_of(j), s.u[j - 1], s.u[j]);
      }
    }
    double mass_before = 0.0, mass_after = 0.0;
    for (std::size_t i = 0; i < n; ++i) mass_before += s.u[i];
    const double r = dt / s.dx;
    for (std::size_t i = 0; i < n; ++i) {
      s.u[i] -= r * (F[i + 1] - F[i]);
      mass_after += s.u[i];
      if (!(std::abs(s.u[i]) <= limit)) {
        throw Error(ErrorKind::UnstableBlowup, "finite-volume average left the invariant bound");
      }
    }
    s.t_now = s.t_now + dt >= T ? T : s.t_now + dt;

    StepInfo info;
    info.t = s.t_now;
    info.dt = dt;
    info.mass_residual = std::abs((mass_after - mass_before) * s.dx + dt * (F[n] - F[0]));
    stats.max_mass_residual = std::max(stats.max_mass_residual, info.mass_residual);
    ++stats.steps;
    if (observer) observer(s, info);
  }
  return stats;
}

}  // namespace discflux
