"""q-deformed weak measurement of a coherent-state pointer."""

import json

from ._core import (
    ConfigError,
    DimensionOverflow,
    DomainError,
    Error,
    IoError,
    NonConvergence,
    ZeroMeanPhoton,
    _sweep_text,
    _verify_json,
    convergence_radius,
    fidelity,
    g2_zero,
    mandel_q,
    photon_distribution,
    q_exp,
    q_factorial,
    q_number,
    quadrature_moments,
    weak_value,
)

__all__ = [
    "ConfigError",
    "DimensionOverflow",
    "DomainError",
    "Error",
    "IoError",
    "NonConvergence",
    "ZeroMeanPhoton",
    "convergence_radius",
    "fidelity",
    "g2_zero",
    "mandel_q",
    "photon_distribution",
    "q_exp",
    "q_factorial",
    "q_number",
    "quadrature_moments",
    "sweep",
    "sweep_csv",
    "verify",
    "weak_value",
]


def verify(tol=1e-8, seed=42, count=200):
    """Closed forms against the truncated Fock-space oracle; returns the report as a dict."""
    return json.loads(_verify_json(tol, seed, count))


def sweep_csv(command, preset=None, set=None, axis=None, range=None):
    """CSV text identical to what the qweak CLI writes."""
    return _sweep_text(command, preset, {k: str(v) for k, v in (set or {}).items()}, axis, range, "csv")


def sweep(command, preset=None, set=None, axis=None, range=None):
    """Sweep result as a dict with metadata, columns and rows."""
    text = _sweep_text(command, preset, {k: str(v) for k, v in (set or {}).items()}, axis, range, "json")
    return json.loads(text)
