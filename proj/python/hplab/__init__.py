"""Python interface to the hplab verification toolkit."""

import json as _json

from . import _core
from ._core import (
    DomainError,
    EmptyValidityRegion,
    Error,
    ParseError,
    SolverError,
    UnknownIdentifier,
    bessel_clifford,
    c0,
    coefficient_map,
    evaluate,
    family_names,
    hyperbolic_laplacian,
    log_sinh,
    log_tanh_half,
    mittag_leffler,
    normalize,
    run_cli,
)

__all__ = [
    "DomainError",
    "EmptyValidityRegion",
    "Error",
    "ParseError",
    "SolverError",
    "UnknownIdentifier",
    "bessel_clifford",
    "c0",
    "catalog",
    "check_invariance",
    "coefficient_map",
    "evaluate",
    "family_names",
    "fit_order",
    "hyperbolic_laplacian",
    "log_sinh",
    "log_tanh_half",
    "mittag_leffler",
    "normalize",
    "residual",
    "run_cli",
    "solve",
]


def catalog(all=False):
    """Catalog entries as dictionaries."""
    return _json.loads(_core.catalog_json(all))


def residual(family, params=None, t_max=None):
    return _json.loads(_core.residual_json(family, params or {}, t_max))


def check_invariance(op, basis, points=0, trials=20, threshold=1e-7, seed=20240601):
    return _json.loads(_core.invariance_json(op, list(basis), points, trials, threshold, seed))


def solve(equation, family, params=None, scheme="rk4", nodes=200, eta_min=0.1, eta_max=8.0,
          t_end=1.0, dt=1e-3, snapshots=()):
    return _json.loads(_core.solve_json(equation, family, params or {}, scheme, nodes, eta_min,
                                        eta_max, t_end, dt, list(snapshots)))


def fit_order(spacing, errors):
    return _json.loads(_core.fit_order_json(list(spacing), list(errors)))
