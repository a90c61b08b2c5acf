#include <doctest.h>

#include <cmath>
#include <random>

#include "discflux/error.hpp"
#include "discflux/diagnostics.hpp"
#include "discflux/godunov.hpp"

using namespace discflux;

namespace {
ConvexFlux flux(const char* key) { return make_flux(key, default_bracket(key)); }
}  // namespace

TEST_SUITE("godunov_oracle") {
  TEST_CASE("godunov flux") {
    const auto b = flux("burgers");
    CHECK(godunov_flux(b, 1.0, 0.0) == doctest::Approx(0.5));
    CHECK(godunov_flux(b, -1.0, 1.0) == 0.0);
    const auto g = flux("square");
    for (double c : {-1.5, 0.0, 0.7}) CHECK(godunov_flux(g, c, c) == doctest::Approx(g(c)));
  }

  TEST_CASE("interface flux") {
    const auto f = flux("shifted");
    const auto g = flux("square");
    const Connection c{-1.0, 1.0 + std::sqrt(2.0)};
    CHECK(interface_flux(f, g, c, c.A, c.B) == doctest::Approx(g(c.A)));
    CHECK(interface_flux(f, g, {0.0, 2.0}, 0.0, 0.0) == doctest::Approx(0.0));
    const auto b = flux("burgers");
    for (double a : {-1.0, 0.0, 0.5})
      for (double r : {-0.5, 0.3, 1.2}) CHECK(interface_flux(b, b, {0.0, 0.0}, a, r) == doctest::Approx(godunov_flux(b, a, r)));
  }

  TEST_CASE("interface flux is monotone") {
    const auto f = flux("shifted");
    const auto g = flux("square");
    const Connection c{0.0, 2.0};
    for (int i = 0; i < 40; ++i) {
      const double a = -2.0 + 0.1 * i;
      for (int k = 0; k < 40; ++k) {
        const double b = -1.0 + 0.1 * k;
        CHECK(interface_flux(f, g, c, a + 0.05, b) >= interface_flux(f, g, c, a, b) - 1e-15);
        CHECK(interface_flux(f, g, c, a, b + 0.05) <= interface_flux(f, g, c, a, b) + 1e-15);
      }
    }
  }

  TEST_CASE("grid needs a face at zero") {
    const auto b = flux("burgers");
    const auto zero = InitialProfile::piecewise_constant({}, {0.0});
    CHECK_THROWS_AS(make_fvm_state(zero, {-1.0, 2.0}, 10, b, b, {0.0, 0.0}), Error);
    const auto st = make_fvm_state(zero, {-1.0, 1.0}, 10, b, b, {0.0, 0.0});
    CHECK(st.n_left == 5);
    CHECK(st.dx == doctest::Approx(0.2));
  }

  TEST_CASE("constant data is stationary") {
    const auto b = flux("burgers");
    const auto d = InitialProfile::piecewise_constant({}, {0.6});
    auto st = make_fvm_state(d, {-1.0, 1.0}, 64, b, b, {0.0, 0.0});
    evolve(st, b, b, {0.0, 0.0}, 2.0);
    for (double u : st.u) CHECK(u == doctest::Approx(0.6).epsilon(1e-14));
  }

  TEST_CASE("Riemann shock location") {
    const auto b = flux("burgers");
    const auto d = InitialProfile::piecewise_constant({0.0}, {1.0, 0.0});
    auto st = make_fvm_state(d, {-2.0, 2.0}, 400, b, b, {0.0, 0.0});
    evolve(st, b, b, {0.0, 0.0}, 1.0);
    double x_half = 0.0;
    for (std::size_t i = 1; i < st.u.size(); ++i) {
      if (st.u[i - 1] >= 0.5 && st.u[i] < 0.5) x_half = 0.5 * (st.centers[i - 1] + st.centers[i]);
    }
    CHECK(std::abs(x_half - 0.5) <= 2.0 * st.dx);
  }

  TEST_CASE("conservation and connection steady state") {
    const Scenario sc = builtin("counterexample_ghoshal");
    EvolveStats stats;
    run_fvm(sc, sc.data(256), 1.0, 256, 0.45, &stats);
    CHECK(stats.max_mass_residual <= 1e-12);

    const Connection c = sc.connection();
    const auto step = InitialProfile::piecewise_constant({0.0}, {c.A, c.B});
    auto st = make_fvm_state(step, sc.domain(), 128, sc.f(), sc.g(), c);
    const auto u0 = st.u;
    evolve(st, sc.f(), sc.g(), c, 1.0);
    for (std::size_t i = 0; i < u0.size(); ++i) CHECK(std::abs(st.u[i] - u0[i]) <= 1e-12);
  }

  TEST_CASE("ordered states stay ordered") {
    const Scenario sc = builtin("counterexample_ghoshal");
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.8, 1.8), gap(0.0, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> breaks, lo, hi;
      for (int k = 0; k < 9; ++k) breaks.push_back(-2.0 + 0.5 * k + 0.01);
      for (int k = 0; k < 10; ++k) {
        lo.push_back(u(rng));
        hi.push_back(lo.back() + gap(rng));
      }
      auto a = make_fvm_state(InitialProfile::piecewise_constant(breaks, lo), sc.domain(), 128, sc.f(), sc.g(),
                              sc.connection());
      auto b = make_fvm_state(InitialProfile::piecewise_constant(breaks, hi), sc.domain(), 128, sc.f(), sc.g(),
                              sc.connection());
      // One common step: T below both stable time steps.
      const double T = 0.4 * a.dx / 6.0;
      evolve(a, sc.f(), sc.g(), sc.connection(), T);
      evolve(b, sc.f(), sc.g(), sc.connection(), T);
      for (std::size_t i = 0; i < a.u.size(); ++i) CHECK(a.u[i] <= b.u[i] + 1e-14);
    }
  }

  TEST_CASE("cfl validation") {
    const auto b = flux("burgers");
    auto st = make_fvm_state(InitialProfile::piecewise_constant({}, {0.0}), {-1.0, 1.0}, 8, b, b, {0.0, 0.0});
    CHECK_THROWS_AS(evolve(st, b, b, {0.0, 0.0}, 1.0, 0.9), Error);
  }
}
