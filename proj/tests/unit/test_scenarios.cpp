#include <doctest.h>

#include <cmath>

#include "discflux/error.hpp"
#include "discflux/diagnostics.hpp"
#include "discflux/scenarios.hpp"

using namespace discflux;

TEST_SUITE("scenarios") {
  TEST_CASE("every builtin loads and validates") {
    for (const auto& name : builtin_names()) {
      CAPTURE(name);
      const Scenario sc = builtin(name);
      const auto hr = validate_hypotheses(sc.f(), sc.g());
      CHECK(hr.h1_ok);
      CHECK(hr.h2_ok);
      CHECK(hr.h3_ok);
      CHECK(validate_connection(sc.f(), sc.g(), sc.connection()).valid);
      const auto d = sc.data(256);
      CHECK(sc.f().bracket().contains(d.value_range().lo));
      CHECK(sc.g().bracket().contains(d.value_range().hi));
    }
    try {
      builtin("nope");
      FAIL("expected UnknownScenario");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnknownScenario);
    }
  }

  TEST_CASE("named configurations") {
    const Scenario q = builtin("thm31_quartic");
    CHECK(q.f().label() == "quartic");
    CHECK(q.g().label() == "sextic_plus1");
    CHECK_FALSE(q.critical());

    const Scenario c = builtin("counterexample_ghoshal");
    CHECK(c.critical());
    CHECK(std::abs(c.connection().A) < 1e-12);
    CHECK(c.connection().B == doctest::Approx(2.0).epsilon(1e-12));

    const Scenario b = builtin("single_flux_burgers");
    CHECK(b.single_flux());

    const Scenario t = builtin("thm32_compact");
    CHECK(t.critical());
    CHECK(check_value_inequalities(t.f(), t.g()).all);
    CHECK(t.data(256).support().has_value());
    // Unshifted counterexample fluxes fail f(0) != g(0).
    CHECK_FALSE(check_value_inequalities(c.f(), c.g()).all);
  }

  TEST_CASE("oscillatory data variation") {
    const Interval dom{-2.0, 2.0};
    auto d = make_data(oscillatory_data(1, 0.7, 1.0, 0.0, 0.0, 1.0), dom);
    std::vector<double> u;
    for (int i = 0; i <= 4000; ++i) u.push_back(d.u0(-2.0 + 4.0 * i / 4000.0));
    CHECK(total_variation(u) == doctest::Approx(1.4));

    for (int k : {3, 8}) {
      d = make_data(oscillatory_data(k, 0.5, 0.8, -0.2, -1.0, 1.0), dom);
      REQUIRE(d.is_piecewise());
      double tv = 0.0;
      const auto& pc = d.pieces();
      for (std::size_t i = 1; i < pc.values.size(); ++i) tv += std::abs(pc.values[i] - pc.values[i - 1]);
      CHECK(tv == doctest::Approx(2.0 * 0.5 * k));
    }

    // Resolution-scaled families double their wave count with N.
    const auto spec = oscillatory_data(4, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0 / 16.0);
    CHECK(make_data(spec, dom, 256).pieces().breaks.size() * 2 ==
          make_data(spec, dom, 512).pieces().breaks.size());
  }

  TEST_CASE("compact support") {
    const DataSpec box{"box", {{"M", 1.0}, {"value", 1.0}}};
    const auto b = make_data(box, {-3.0, 3.0});
    REQUIRE(b.support().has_value());
    CHECK(*b.support() == 1.0);
    const auto c = make_data(compact_support_data(oscillatory_data(6, 1.0, 1.0, -0.5, -2.0, 2.0), 1.0), {-3.0, 3.0});
    CHECK(*c.support() == 1.0);
    for (double x : {-2.5, -1.01, 1.01, 2.5}) CHECK(c.u0(x) == 0.0);
    CHECK(c.u0(0.3) != 0.0);
  }

  TEST_CASE("json round trip") {
    for (const auto& name : builtin_names()) {
      const Scenario a = builtin(name);
      const Scenario b = scenario_from_json(scenario_to_json(a));
      CHECK(scenario_to_json(b) == scenario_to_json(a));
      CHECK(b.connection().A == a.connection().A);
      CHECK(b.connection().B == a.connection().B);
    }
  }

  TEST_CASE("invalid scenarios") {
    auto j = scenario_to_json(builtin("twoflux_noncritical"));
    j["connection"] = {{"mode", "explicit"}, {"A", 1.0}, {"B", 1.0}};
    CHECK_THROWS_AS(scenario_from_json(j), Error);
    j = scenario_to_json(builtin("twoflux_noncritical"));
    j["domain"] = {1.0, 2.0};
    CHECK_THROWS_AS(scenario_from_json(j), Error);
    j = scenario_to_json(builtin("twoflux_noncritical"));
    j["data"] = {{"kind", "mystery"}, {"params", nlohmann::json::object()}};
    CHECK_THROWS_AS(scenario_from_json(j), Error);
  }
}
