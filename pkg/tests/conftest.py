"""Shared fixtures and oracles.

Every test runs with the default output root redirected into a
session-shared temp directory, so nothing writes into the working tree
and the generated 1000-point reference-front caches are reused across
tests instead of being rebuilt.

Arc positions are recovered independently of the production code: the
curve parameter of each front point is recovered analytically (SPHERE) or
by root finding (DENT), and arc length is integrated with adaptive
quadrature over a finite-difference speed function.
"""

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq


@pytest.fixture(autouse=True)
def _isolated_output_root(tmp_path_factory, monkeypatch):
    root = tmp_path_factory.getbasetemp() / "shared_output_root"
    monkeypatch.setenv("EVENFRONT_OUT", str(root))


def _speed(front_param, t, h=1e-7):
    t0 = min(max(t - h, 0.0), 1.0 - 2 * h)
    a = front_param(np.array([t0]))[0]
    b = front_param(np.array([t0 + 2 * h]))[0]
    return float(np.linalg.norm(b - a)) / (2 * h)


def arc_positions(spec, points):
    """Arc-length coordinate of each front point plus the total length."""
    params = []
    if spec.id == "SPHERE":
        # f1 = 2 t^2
        params = [float(np.sqrt(f1 / 2.0)) for f1, _ in points]
    elif spec.id == "DENT":
        # f1 is strictly monotone along the parameterization
        def f1_at(t):
            return float(spec.front_param(np.array([t]))[0, 0])
        lo, hi = f1_at(0.0), f1_at(1.0)
        assert lo < hi
        for f1, _ in points:
            params.append(brentq(lambda t: f1_at(t) - f1, 0.0, 1.0,
                                 xtol=1e-13))
    else:
        raise ValueError(f"no parameter recovery for {spec.id}")

    total = quad(lambda t: _speed(spec.front_param, t), 0.0, 1.0,
                 limit=200)[0]
    positions = [
        quad(lambda t: _speed(spec.front_param, t), 0.0, ti, limit=200)[0]
        for ti in params
    ]
    return np.array(positions), total
