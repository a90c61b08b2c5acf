import json
import math

import numpy as np
import pytest

import discflux


def test_builtins_listed():
    names = discflux.builtin_names()
    assert "single_flux_burgers" in names
    assert "counterexample_ghoshal" in names


def test_burgers_legendre():
    h = discflux.make_flux("burgers")
    for p in (-1.5, 0.0, 0.7):
        assert discflux.legendre(h, p) == pytest.approx(p * p / 2, abs=1e-12)
    assert discflux.deriv_inverse(h, 0.3) == pytest.approx(0.3, abs=1e-12)
    assert discflux.branch_inverse(h, "increasing", 0.5) == pytest.approx(1.0, abs=1e-9)
    assert discflux.branch_inverse(h, "decreasing", 0.5) == pytest.approx(-1.0, abs=1e-9)


def test_polynomial_needs_bracket():
    with pytest.raises(discflux.Error):
        discflux.make_flux("polynomial", coeffs=[0.0, 0.0, 1.0])


def test_riemann_shock_speed():
    # u0 = 1 | 0 under u^2/2: shock at x = t/2.
    r = discflux.solve("single_flux_burgers", 1.0, 400)
    x, u = r["x"], r["u"]
    assert x.shape == u.shape
    assert np.all(u[x < 0.45] > 0.99)
    assert np.all(np.abs(u[x > 0.55]) < 1e-9)


def test_fvm_mass_and_compare():
    r = discflux.fvm("twoflux_noncritical", 0.5, 256)
    assert r["steps"] > 0
    assert r["max_mass_residual"] < 1e-12
    c = discflux.compare("single_flux_burgers", 1.0, 200)
    assert c["l1"] < 10 * 8.0 / 200


def test_tv_report_json():
    rep = json.loads(discflux.tv_report("thm31_quartic", 1.0, [128, 256, 512], run_fvm=False))
    assert rep["t"] == 1.0
    assert len(rep["levels"]) == 3


def test_scenario_roundtrip():
    j = json.loads(discflux.scenario_json("thm32_compact"))
    assert j["domain"][0] < 0 < j["domain"][1]


def test_cli_exit_codes():
    code, out, err = discflux.cli(["list-scenarios"])
    assert code == 0 and "single_flux_burgers" in out
    code, _, err = discflux.cli(["solve", "--scenario", "nope", "--t", "1"])
    assert code == 2
    assert json.loads(err)["exit_code"] == 2
    code, _, _ = discflux.cli(["solve", "--scenario", "single_flux_burgers", "--t", "-1"])
    assert code == 2


def test_verify_legendre():
    res = discflux.verify("legendre")
    assert len(res) == 1 and res[0]["pass"] and res[0]["id"] == 1


def test_theta_and_min():
    h = discflux.make_flux("shifted")
    assert h(h.theta) == pytest.approx(h.min_value)
    assert math.isfinite(h.deriv(h.theta))
