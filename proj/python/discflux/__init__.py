"""Scalar conservation laws with a flux discontinuous at x = 0."""

from ._discflux import (
    ConvexFlux,
    Error,
    Interval,
    branch_inverse,
    builtin_names,
    cli,
    compare,
    deriv_inverse,
    flux_keys,
    fvm,
    legendre,
    make_flux,
    scenario_json,
    solve,
    tv_report,
    verify,
)

__all__ = [
    "ConvexFlux",
    "Error",
    "Interval",
    "branch_inverse",
    "builtin_names",
    "cli",
    "compare",
    "deriv_inverse",
    "flux_keys",
    "fvm",
    "legendre",
    "make_flux",
    "scenario_json",
    "solve",
    "tv_report",
    "verify",
]
