"""Seeded random configurations."""
from __future__ import annotations

import itertools

import mpmath
import numpy as np
from mpmath import mpf

from .dynamics import Regime, TrapezoidState
from .errors import InputError, RejectionExhausted
from .numerics import PrecisionPolicy, norm2, resolve, sub
from .simplex import VertexConfig, gamma, params_from_vertices

MAX_ATTEMPTS = 10 ** 6
MIN_SEPARATION = 1e-3


def _sphere_points(rng: np.random.Generator, count: int, dim: int) -> list:
    raw = rng.standard_normal((count, dim))
    pts = []
    for row in raw:
        v = [mpf(float(x)) for x in row]
        r = mpmath.sqrt(norm2(v))
        pts.append(tuple(x / r for x in v))
    return pts


def _separated(pts) -> bool:
    return all(mpmath.sqrt(norm2(sub(p, q))) >= MIN_SEPARATION for p, q in itertools.combinations(pts, 2))


def generate_random(
    regime: Regime | str,
    dim: int = 3,
    seed: int | list = 0,
    policy: PrecisionPolicy | None = None,
):
    """Random configuration for ``regime``; identical output for identical ``seed``.

    Vertices are normalized standard Gaussian vectors.  Tetrahedra with
    ``gamma <= 10 * tolerance`` are rejected, as are quadrilaterals, triangles
    and simplices with two vertices closer than 1e-3.  The trapezoid regime
    returns a :class:`TrapezoidState` with abscissas uniform in (-1, 1).
    """
    regime = Regime(regime)
    policy = resolve(policy)
    rng = np.random.default_rng(seed)
    tol = policy.tolerance
    with policy.context():
        for _ in range(MAX_ATTEMPTS):
            if regime is Regime.TETRA:
                cfg = VertexConfig(tuple(_sphere_points(rng, 4, 3)))
                if gamma(params_from_vertices(cfg, policy), policy) > 10 * tol:
                    return cfg.validate(policy)
            elif regime is Regime.QUAD:
                pts = _sphere_points(rng, 4, 2)
                if _separated(pts):
                    return VertexConfig.from_points(pts, policy)
            elif regime is Regime.TRIANGLE:
                pts = _sphere_points(rng, 3, 2)
                if _separated(pts):
                    return VertexConfig(tuple(pts)).validate(policy)
            elif regime is Regime.TRAPEZOID:
                a, b = (mpf(float(x)) for x in rng.uniform(-1, 1, size=2))
                if abs(a - b) >= MIN_SEPARATION:
                    return TrapezoidState(a, b).validate(policy)
            else:
                if not 2 <= dim <= 20:
                    raise InputError("dim must be in [2, 20]")
                pts = _sphere_points(rng, dim + 1, dim)
                if _separated(pts):
                    return VertexConfig(tuple(pts)).validate(policy)
    raise RejectionExhausted(f"no acceptable {regime.value} configuration after {MAX_ATTEMPTS} draws")
