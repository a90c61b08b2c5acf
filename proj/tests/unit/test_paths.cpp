#include <doctest.h>

#include <cmath>
#include <random>

#include "discflux/error.hpp"
#include "discflux/paths.hpp"
#include "oracles.hpp"

using namespace discflux;

namespace {

ConvexFlux flux(const char* key) { return make_flux(key, default_bracket(key)); }

// Trapezoid quadrature of h*(gamma') along the curve on a fine time grid.
double quadrature_cost(const ControlCurve& c, const InitialProfile& d, const ConvexFlux& h, int n = 200000) {
  double acc = d.v0(c.y);
  const double dt = c.t / n;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) * dt;
    const double slope = (c.position(s + 0.5 * dt) - c.position(s - 0.5 * dt)) / dt;
    acc += dt * legendre(h, slope);
  }
  return acc;
}

}  // namespace

TEST_SUITE("paths") {
  TEST_CASE("curve construction") {
    const auto rest = make_curve(1.0, 0.0, 0.0, 0.0, 1.0, Side::positive);
    CHECK_FALSE(rest.direct());
    CHECK(rest.position(0.5) == 0.0);

    const auto seg = make_curve(1.0, 2.0, 1.0, 0.0, 0.0, Side::positive);
    CHECK(seg.direct());
    CHECK(seg.pieces() == 1);
    CHECK(seg.position(0.0) == doctest::Approx(1.0));
    CHECK(seg.position(0.5) == doctest::Approx(1.5));
    CHECK(seg.position(1.0) == doctest::Approx(2.0));

    try {
      make_curve(1.0, 1.0, -1.0, 0.3, 0.6, Side::positive);
      FAIL("expected SignViolation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SignViolation);
    }
    try {
      make_curve(1.0, 1.0, 1.0, 0.7, 0.6, Side::positive);
      FAIL("expected TimeOrderViolation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TimeOrderViolation);
    }
  }

  TEST_CASE("three-piece curve vertices") {
    const auto c = make_curve(1.0, 0.5, 1.0, 0.3, 0.6, Side::positive);
    const auto v = c.vertices();
    REQUIRE(v.size() == 4);
    CHECK(v[1].time == doctest::Approx(0.3));
    CHECK(v[1].pos == 0.0);
    CHECK(v[2].time == doctest::Approx(0.6));
    CHECK(c.position(0.45) == 0.0);
  }

  TEST_CASE("cost of a single segment") {
    const auto h = flux("burgers");
    const auto d = InitialProfile::piecewise_constant({0.0}, {1.0, -0.5});
    const auto c = make_curve(2.0, 3.0, 1.0, 0.0, 0.0, Side::positive);
    CHECK(cost_J(c, d, h) == doctest::Approx(d.v0(1.0) + 2.0 * legendre(h, 1.0)).epsilon(1e-14));
    CHECK(cost_Jpm(c, d, h, Side::positive) == doctest::Approx(cost_J(c, d, h)).epsilon(1e-14));
  }

  TEST_CASE("resting curve") {
    const auto f = flux("shifted");
    const auto zero = InitialProfile::piecewise_constant({}, {0.0});
    const auto c = make_curve(1.0, 0.0, 0.0, 0.0, 1.0, Side::positive);
    CHECK(cost_J(c, zero, f) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cost_Jpm(c, zero, f, Side::positive) == doctest::Approx(0.0));
  }

  TEST_CASE("three-piece cost against quadrature and J+") {
    const auto f = flux("shifted");
    const auto d = InitialProfile::piecewise_constant({-1.0, 0.5}, {0.3, -0.2, 0.7});
    const auto c = make_curve(1.0, 0.8, 0.6, 0.25, 0.55, Side::positive);
    const double j = cost_J(c, d, f);
    CHECK(std::abs(j - quadrature_cost(c, d, f)) < 1e-8);
    CHECK(cost_Jpm(c, d, f, Side::positive) == doctest::Approx(j - 0.3 * legendre(f, 0.0)).epsilon(1e-12));
  }

  TEST_CASE("splitting a segment leaves the cost unchanged") {
    const auto h = flux("square");
    const auto d = InitialProfile::piecewise_constant({0.2}, {0.4, -0.3});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      const double t = 0.5 + u(rng), x = -2.0 * u(rng) - 0.01, y = -2.0 * u(rng) - 0.01;
      const auto c = make_curve(t, x, y, 0.0, 0.0, Side::negative);
      const double s = t * u(rng);
      const double xm = c.position(s);
      const double split = d.v0(y) + s * legendre(h, (xm - y) / s) + (t - s) * legendre(h, (x - xm) / (t - s));
      CHECK(std::abs(cost_J(c, d, h) - split) < 1e-12 * (1.0 + std::abs(split)));
    }
  }

  TEST_CASE("cost lower bound") {
    const auto f = flux("shifted");
    const auto d = InitialProfile::piecewise_constant({0.0}, {0.5, -0.5});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const double t = 1.0 + u(rng);
      const double t2 = 0.2 + 0.3 * u(rng), t1 = t2 + (t - t2 - 0.2) * u(rng);
      const auto c = make_curve(t, 0.5 * u(rng) + 1e-3, 0.5 * u(rng) + 1e-3, t2, t1, Side::positive);
      CHECK(cost_J(c, d, f) >= d.v0(c.y) - t * f(0.0) - 1e-12);  // min of f* is -f(0)
    }
  }

  TEST_CASE("initial profiles") {
    const auto pc = InitialProfile::piecewise_constant({-1.0, 1.0}, {0.0, 2.0, 0.0});
    CHECK(pc.v0(0.0) == 0.0);
    CHECK(pc.v0(1.0) == doctest::Approx(2.0));
    CHECK(pc.v0(-1.0) == doctest::Approx(-2.0));
    CHECK(pc.v0(5.0) == doctest::Approx(2.0));
    CHECK(pc.u0(1.0) == 0.0);
    CHECK(pc.u0_left(1.0) == 2.0);
    CHECK(pc.sup_norm() == 2.0);

    const auto fn = InitialProfile::from_function([](double x) { return std::cos(x); }, {-4.0, 4.0});
    for (double x : {-3.0, -0.7, 0.0, 1.3, 3.9}) CHECK(std::abs(fn.v0(x) - std::sin(x)) < 1e-6);

    const auto s = InitialProfile::sampled({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0});
    CHECK(s.u0(0.75) == 2.0);
    CHECK_THROWS_AS(InitialProfile::piecewise_constant({1.0, 0.0}, {0.0, 1.0, 2.0}), Error);
  }

  TEST_CASE("direct minimization against a dense scan") {
    const auto h = flux("burgers");
    const auto d = InitialProfile::piecewise_constant({-0.5, 0.3, 0.8}, {0.9, -0.4, 0.6, 0.1});
    for (double x : {-1.3, -0.2, 0.4, 1.1}) {
      for (Side side : {Side::positive, Side::negative}) {
        const double lo = side == Side::positive ? 0.0 : x - 4.0;
        const double hi = side == Side::positive ? x + 4.0 : 0.0;
        if (side == Side::positive && hi <= lo) continue;
        const double ref =
            oracle::scan_min([&](double y) { return d.v0(y) + (x - y) * (x - y) / 2.0; }, lo, hi);
        const auto opt = minimize_direct(x, 1.0, d, h, side);
        CHECK(std::abs(opt.value - ref) < 1e-10);
        CHECK(opt.value <= ref + 1e-14);
      }
    }
  }
}
