#include <doctest.h>

#include <cmath>
#include <random>

#include "discflux/error.hpp"
#include "discflux/flux.hpp"
#include "oracles.hpp"

using namespace discflux;

namespace {
ConvexFlux flux(const char* key) { return make_flux(key, default_bracket(key)); }
const char* const kKeys[] = {"burgers", "square", "shifted", "quartic", "sextic_plus1"};
}  // namespace

TEST_SUITE("flux_core") {
  TEST_CASE("minimizers") {
    const auto g = flux("square");
    CHECK(g.theta() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.min_value() == doctest::Approx(0.0));
    const auto f = flux("shifted");
    CHECK(std::abs(f.theta() - 1.0) < 1e-12);
    CHECK(std::abs(f.min_value() + 1.0) < 1e-12);
    const auto q = flux("quartic");
    CHECK(std::abs(q.theta()) < 1e-4);
    CHECK(std::abs(q.deriv(q.theta())) < 1e-12);
    CHECK(q.min_value() < 1e-15);
  }

  TEST_CASE("minimizer needs a sign change") {
    CHECK_THROWS_AS(make_polynomial_flux({0.0, 0.0, 1.0}, {1.0, 2.0}), Error);
  }

  TEST_CASE("branch inverse") {
    const auto g = flux("square");
    CHECK(branch_inverse(g, Branch::increasing, 4.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(branch_inverse(g, Branch::decreasing, 0.0)) < 1e-12);
    CHECK(std::abs(branch_inverse(g, Branch::decreasing, -1e-13)) < 1e-12);  // clamped
    const auto f = flux("shifted");
    CHECK(branch_inverse(f, Branch::increasing, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(branch_inverse(f, Branch::decreasing, 0.0) == doctest::Approx(0.0).epsilon(1e-12));

    try {
      branch_inverse(g, Branch::increasing, -1.0);
      FAIL("expected BelowMinimum");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BelowMinimum);
    }
    try {
      branch_inverse(g, Branch::increasing, 1e6);
      FAIL("expected BracketExceeded");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BracketExceeded);
    }
  }

  TEST_CASE("derivative inverse") {
    const auto b = flux("burgers");
    CHECK(deriv_inverse(b, 3.0) == doctest::Approx(3.0).epsilon(1e-12));
    const auto q = flux("quartic");
    CHECK(std::abs(deriv_inverse(q, 0.0)) < 1e-12);
    CHECK(deriv_inverse(q, 4.0) == doctest::Approx(1.0).epsilon(1e-12));
    try {
      deriv_inverse(b, 100.0);
      FAIL("expected OutOfRange");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OutOfRange);
    }
  }

  TEST_CASE("legendre closed forms") {
    CHECK(legendre(flux("burgers"), 1.0) == doctest::Approx(0.5));
    CHECK(legendre(flux("shifted"), 0.0) == doctest::Approx(1.0));
    CHECK(legendre(flux("square"), 3.0) == doctest::Approx(2.25));
  }

  TEST_CASE("legendre matches a brute-force conjugate") {
    std::mt19937_64 rng(7);
    for (const char* key : kKeys) {
      const auto h = flux(key);
      const auto sl = h.slope_range();
      std::uniform_real_distribution<double> pick(sl.lo, sl.hi);
      for (int i = 0; i < 50; ++i) {
        const double p = pick(rng);
        const double ref = oracle::conjugate([&](double q) { return h(q); }, p, h.bracket().lo, h.bracket().hi);
        CHECK(std::abs(legendre(h, p) - ref) < 1e-8 * (1.0 + std::abs(ref)));
      }
    }
  }

  TEST_CASE("involution, envelope and identity chain") {
    std::mt19937_64 rng(11);
    for (const char* key : kKeys) {
      const auto h = flux(key);
      const auto br = h.bracket();
      const auto sl = h.slope_range();
      std::uniform_real_distribution<double> pick(br.lo + 0.05 * br.width(), br.hi - 0.05 * br.width());
      for (int i = 0; i < 100; ++i) {
        const double q = pick(rng);
        // h** from the library conjugate.
        const double hss = oracle::golden_max([&](double p) { return p * q - legendre(h, p); }, sl.lo, sl.hi);
        CHECK(std::abs(hss - h(q)) <= 1e-6);
        const double p = h.deriv(q);
        const double qs = deriv_inverse(h, p);
        CHECK(std::abs(h(qs) - (p * qs - legendre(h, p))) <= 1e-8);
        CHECK(std::abs(legendre(h, p) - (q * p - h(q))) <= 1e-8);
        if (h.deriv2(q) > 1e-2) CHECK(std::abs(qs - q) <= 1e-10);
      }
    }
  }

  TEST_CASE("inverse of h' is 1/alpha Lipschitz under uniform convexity") {
    for (const char* key : {"burgers", "square", "shifted"}) {
      const auto h = flux(key);
      const auto rep = check_flux(h);
      REQUIRE(rep.alpha.has_value());
      const double a = *rep.alpha;
      const auto sl = h.slope_range();
      for (int i = 0; i < 50; ++i) {
        const double p1 = sl.lo + (i + 0.3) / 50.0 * sl.width();
        const double p2 = sl.lo + (49 - i + 0.7) / 50.0 * sl.width();
        CHECK(std::abs(deriv_inverse(h, p1) - deriv_inverse(h, p2)) <= (1.0 / a + 1e-6) * std::abs(p1 - p2));
      }
    }
  }

  TEST_CASE("hypotheses") {
    const auto q = flux("quartic");
    const auto s = flux("sextic_plus1");
    const auto rep = validate_hypotheses(q, s);
    CHECK(rep.h1_ok);
    CHECK(rep.h2_ok);
    CHECK(rep.h3_ok);
    CHECK_FALSE(rep.uniform_convexity_alpha.has_value());
    CHECK_FALSE(rep.f.degenerate_points.empty());

    const auto b = flux("burgers");
    const auto rb = validate_hypotheses(b, b);
    REQUIRE(rb.uniform_convexity_alpha.has_value());
    CHECK(*rb.uniform_convexity_alpha == doctest::Approx(1.0));

    // (u-2)^4 + u: h'' vanishes at 2 where h' = 1.
    const auto bad = make_polynomial_flux({16.0, -31.0, 24.0, -8.0, 1.0}, {-2.0, 5.0});
    CHECK(bad.deriv2(2.0) == doctest::Approx(0.0));
    CHECK(bad.deriv(2.0) == doctest::Approx(1.0));
    CHECK_FALSE(validate_hypotheses(bad, b).h2_ok);
  }

  TEST_CASE("sampled convexity invariants") {
    for (const char* key : kKeys) {
      const auto h = flux(key);
      const auto br = h.bracket();
      for (int i = 1; i < 200; ++i) {
        const double u1 = br.lo + (i - 1) * br.width() / 200.0;
        const double u2 = br.lo + i * br.width() / 200.0;
        const double u3 = br.lo + (i + 1) * br.width() / 200.0;
        CHECK(h(u2) < 0.5 * (h(u1) + h(u3)));
        CHECK(h.deriv(u2) > h.deriv(u1));
      }
    }
  }

  TEST_CASE("connections") {
    const auto f = flux("shifted");
    const auto g = flux("square");
    auto c = validate_connection(f, g, {0.0, 2.0});
    CHECK(c.valid);
    CHECK(c.critical);
    CHECK(c.critical_left);
    c = validate_connection(f, g, {-1.0, 1.0 + std::sqrt(2.0)});
    CHECK(c.valid);
    CHECK_FALSE(c.critical);
    c = validate_connection(f, g, {1.0, 1.0 + std::sqrt(2.0)});
    CHECK_FALSE(c.valid);

    const Connection from_a = connection_from_left(f, g, -1.0);
    CHECK(from_a.B == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
    const Connection from_b = connection_from_right(f, g, 1.0 + std::sqrt(2.0));
    CHECK(from_b.A == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_THROWS_AS(connection_from_left(f, g, 1.0), Error);
  }

  TEST_CASE("registry") {
    CHECK(flux_keys().size() >= 6);
    CHECK_THROWS_AS(make_flux("cubic", {-1.0, 1.0}), Error);
    CHECK_THROWS_AS(make_polynomial_flux({0.0, 0.0, 0.0, 1.0}, {-1.0, 1.0}), Error);
  }
}
