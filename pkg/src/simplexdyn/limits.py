"""Closed-form limit shapes, special-configuration predicates and convergence-order fits."""
from __future__ import annotations

from dataclasses import dataclass
from statistics import median
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .errors import InsufficientData, NonConvexLabeling, NonPlanarInput, PlanarInput, UnderflowTail
from .numerics import PrecisionPolicy, resolve
from .simplex import EdgeParams, TriangleParams, gamma


@dataclass(frozen=True)
class LimitPrediction:
    d12_inf: mpf
    d13_inf: mpf
    d14_inf: mpf
    L: mpf
    rate_r: mpf
    regime: str

    @property
    def params(self) -> EdgeParams:
        """Limit parameters laid out as an EdgeParams (opposite edges equal)."""
        return EdgeParams(self.d12_inf, self.d13_inf, self.d14_inf, self.d14_inf, self.d13_inf, self.d12_inf)

    @property
    def is_square(self) -> bool:
        return self.regime == "quad" and self.rate_r == 0


@dataclass(frozen=True)
class OrderEstimate:
    order: float
    constant: float
    lam: float | None
    residual: float
    points: int


@dataclass(frozen=True)
class Residual:
    step: int
    h: tuple
    delta: mpf
    epsilon: mpf
    pair_sum_ratio: mpf | None


def _rate(values) -> mpf:
    return max(abs(d - 2) / 2 for d in values)


def tetra_limit(p: EdgeParams, policy: PrecisionPolicy | None = None) -> LimitPrediction:
    """Limit isosceles tetrahedron: d_inf^2 = L d_ij d_kl with sum of d_inf equal to 8."""
    policy = resolve(policy)
    with policy.context():
        if gamma(p, policy) <= policy.tolerance:
            raise PlanarInput("configuration is planar; use quad_limit")
        roots = [mpmath.sqrt(x) for x in p.products()]
        L = 64 / mpmath.fsum(roots) ** 2
        sq = mpmath.sqrt(L)
        d = [sq * r for r in roots]
        return LimitPrediction(d[0], d[1], d[2], L, _rate(d), "tetra")


def quad_limit(p: EdgeParams, policy: PrecisionPolicy | None = None) -> LimitPrediction:
    """Limit rectangle of a convex cyclic quadrilateral (d13, d24 are the diagonals)."""
    policy = resolve(policy)
    tol = policy.tolerance
    with policy.context():
        if gamma(p, policy) > tol:
            raise NonPlanarInput("configuration is not planar; use tetra_limit")
        x, z, y = (mpmath.sqrt(v) for v in p.products())
        # Ptolemy's equality holds for the diagonals only in convex order
        if abs(z - x - y) > 64 * tol:
            raise NonConvexLabeling("vertices are not in convex cyclic order")
        mu = 4 * x / z
        L = 16 / (z * z)
        return LimitPrediction(mu, mpf(4), 4 - mu, L, abs(mu - 2) / 2, "quad")


def triangle_limit(policy: PrecisionPolicy | None = None) -> TriangleParams:
    """Equilateral triangle inscribed in the unit circle: sides sqrt(3)."""
    with resolve(policy).context():
        return TriangleParams(mpf(9), mpf(27), mpf(27))


def is_isodynamic(p: EdgeParams, policy: PrecisionPolicy | None = None, rtol=None) -> bool:
    """Whether the orbit's limit is regular (tetrahedron) or a square (quadrilateral).

    ``rtol`` overrides the equality tolerance on the opposite-edge products,
    for inputs known only to a few digits.
    """
    policy = resolve(policy)
    tol = policy.tolerance
    eq_tol = tol if rtol is None else mpf(rtol)
    with policy.context():
        x, y, z = p.products()
        if gamma(p, policy) > tol:
            scale = max(x, y, z)
            return abs(x - y) <= eq_tol * scale and abs(y - z) <= eq_tol * scale and x <= mpf(64) / 9 + tol
        return abs(x - z) <= eq_tol * max(x, z) and x <= 4 + tol


def residual_diagnostics(orbit, lim: LimitPrediction, policy: PrecisionPolicy | None = None) -> list:
    """Per-step deviations h_ij = d_ij - d_ij_inf, their sum and the weighted gap epsilon.

    ``pair_sum_ratio`` is max |h_ij + h_kl| / |h|^2 over opposite pairs; it
    stays bounded along a converging orbit.
    """
    policy = resolve(policy)
    inf = lim.params.values
    out = []
    with policy.context():
        for rec in orbit:
            d = rec.state.values
            h = tuple(x - y for x, y in zip(d, inf))
            delta = mpmath.fsum(h)
            epsilon = ((h[0] - h[5]) ** 2 * lim.d12_inf + (h[1] - h[4]) ** 2 * lim.d13_inf
                       + (h[2] - h[3]) ** 2 * lim.d14_inf)
            hn2 = mpmath.fsum(x * x for x in h)
            ratio = None
            if hn2 > 0:
                ratio = max(abs(h[0] + h[5]), abs(h[1] + h[4]), abs(h[2] + h[3])) / hn2
            out.append(Residual(rec.step, h, delta, epsilon, ratio))
    return out


def _usable(og_sequence, policy, upper):
    floor = policy.underflow_floor
    seq = [mpf(x) for x in og_sequence]
    if sum(1 for x in seq if x > floor) < 4:
        raise UnderflowTail("fewer than 4 values above the underflow floor")
    return [(n, x) for n, x in enumerate(seq) if floor < x < upper]


def estimate_order(
    og_sequence: Sequence,
    policy: PrecisionPolicy | None = None,
    upper: float = 1e-2,
) -> OrderEstimate:
    """Fit ``OG_{n+1} = C OG_n^q`` by least squares in log space over the tail.

    Only values in ``(2**(16 - bits), upper)`` are used.  When q is close to 2
    the doubling constant of ``OG_n ~ lam**(2**n)`` is fitted as well.
    """
    policy = resolve(policy)
    if len(og_sequence) < 4:
        raise InsufficientData("need at least 4 values")
    with policy.context():
        pts = _usable(og_sequence, policy, mpf(upper))
        if len(pts) < 4:
            raise InsufficientData(f"only {len(pts)} values in the fitting window")
        logs = {n: float(mpmath.log(x)) for n, x in pts}
    pairs = [(logs[n], logs[n + 1]) for n in sorted(logs) if n + 1 in logs]
    if len(pairs) < 3:
        raise InsufficientData("fewer than 3 consecutive pairs in the fitting window")
    xs = np.array([a for a, _ in pairs])
    ys = np.array([b for _, b in pairs])
    q, c = np.polyfit(xs, ys, 1)
    resid = float(np.sqrt(np.mean((ys - (q * xs + c)) ** 2)))
    lam = None
    if abs(q - 2) < 0.25:
        ns = sorted(logs)
        powers = np.array([2.0 ** n for n in ns])
        slope, _ = np.polyfit(powers, np.array([logs[n] for n in ns]), 1)
        lam = float(np.exp(slope))
    return OrderEstimate(float(q), float(np.exp(c)), lam, resid, len(pts))


def tail_ratio(og_sequence: Sequence, k: int = 5, policy: PrecisionPolicy | None = None,
               upper: float = 1e-2) -> float:
    """Median of OG_{n+1}/OG_n over the last ``k`` consecutive usable pairs."""
    policy = resolve(policy)
    with policy.context():
        pts = dict(_usable(og_sequence, policy, mpf(upper)))
        ratios = [float(pts[n + 1] / pts[n]) for n in sorted(pts) if n + 1 in pts]
    if not ratios:
        raise InsufficientData("no consecutive pairs in the fitting window")
    return median(ratios[-k:])
