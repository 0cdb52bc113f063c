"""The iteration maps and an orbit runner.

Four views of the same dynamical system:

* ``step_vertices``: explicit coordinates, any dimension;
* ``step_params``: six squared edges of a tetrahedron or cyclic quadrilateral;
* ``step_triangle``: the (s, t, u) parameters of a triangle;
* ``step_trapezoid``: abscissas (a, b) of the vertical sides of an isosceles
  trapezoid inscribed in the unit circle, symmetric about the x-axis.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import mpmath
from mpmath import mpf

from .errors import ConsistencyFault, DomainError, InvalidConfiguration, SimplexDynamicsError, VanishingPower
from .numerics import PrecisionPolicy, norm2, resolve, second_sphere_intersection
from .simplex import (
    EDGES,
    EdgeParams,
    TriangleParams,
    VertexConfig,
    centroid_distances,
    gamma,
    og_squared,
    params_from_vertices,
    ptolemy,
)


class Regime(str, enum.Enum):
    TETRA = "tetra"
    QUAD = "quad"
    TRIANGLE = "triangle"
    TRAPEZOID = "trapezoid"
    VERTICES = "vertices"


@dataclass(frozen=True)
class TrapezoidState:
    a: mpf
    b: mpf

    @property
    def g(self) -> mpf:
        """Abscissa of the centroid."""
        return (self.a + self.b) / 2

    @property
    def values(self) -> tuple:
        return (self.a, self.b)

    def validate(self, policy: PrecisionPolicy | None = None) -> TrapezoidState:
        policy = resolve(policy)
        with policy.context():
            if not (self.a ** 2 < 1 and self.b ** 2 < 1):
                raise InvalidConfiguration("trapezoid abscissas must lie in (-1, 1)")
            if abs(self.a - self.b) <= policy.tolerance:
                raise InvalidConfiguration("trapezoid abscissas must differ")
        return self

    def vertices(self, policy: PrecisionPolicy | None = None) -> VertexConfig:
        """A=(a,+), B=(b,+), C=(b,-), D=(a,-); AD and BC are the vertical sides."""
        with resolve(policy).context():
            ya = mpmath.sqrt(1 - self.a ** 2)
            yb = mpmath.sqrt(1 - self.b ** 2)
            return VertexConfig(((self.a, ya), (self.b, yb), (self.b, -yb), (self.a, -ya)))


@dataclass(frozen=True)
class OrbitRecord:
    step: int
    state: object
    og2: mpf
    p: mpf
    pt: mpf | None = None
    products: tuple | None = None
    lam: mpf | None = None  # AM-GM ratio linking this step's products to the next


@dataclass
class Orbit:
    regime: Regime
    records: list = field(default_factory=list)
    converged: bool = False

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def og2(self) -> list:
        return [r.og2 for r in self.records]

    def og(self) -> list:
        """Distances OG_n (|g_n| in the trapezoid regime)."""
        if self.regime is Regime.TRAPEZOID:
            return [abs(r.state.g) for r in self.records]
        return [mpmath.sqrt(max(r.og2, 0)) for r in self.records]

    @property
    def even(self) -> list:
        return [r.state for r in self.records[0::2]]

    @property
    def odd(self) -> list:
        return [r.state for r in self.records[1::2]]


def step_vertices(c: VertexConfig, policy: PrecisionPolicy | None = None) -> VertexConfig:
    """Send every vertex to the other end of its chord through the centroid."""
    policy = resolve(policy)
    with policy.context():
        g = c.centroid(policy)
        out = []
        drift = mpf(0)
        for v in c.vertices:
            w = second_sphere_intersection(v, g, policy)
            r = mpmath.sqrt(norm2(w))
            drift = max(drift, abs(r - 1))
            out.append(tuple(x / r for x in w))
        return VertexConfig(tuple(out), drift=drift)


def lambda_ratio(cd) -> mpf:
    """p0^4 / (g1 g2 g3 g4); at least 1 by AM-GM."""
    return cd.p0 ** 4 / (cd.g1 * cd.g2 * cd.g3 * cd.g4)


def step_params(p: EdgeParams, policy: PrecisionPolicy | None = None) -> tuple[EdgeParams, mpf]:
    """Image parameters ``p0^2 d_ij / (g_i g_j)`` and the next power ``p1``."""
    policy = resolve(policy)
    tol = policy.tolerance
    with policy.context():
        cd = centroid_distances(p, policy)
        p0 = cd.p0
        if p0 <= tol:
            raise VanishingPower("centroid on the circumsphere")
        g = cd.g
        p02 = p0 * p0
        ratios = [d / (g[i] * g[j]) for d, (i, j) in zip(p.values, EDGES)]
        nxt = EdgeParams(*(p02 * r for r in ratios))
        p1 = p02 / 16 * mpmath.fsum(ratios)
        if abs(p1 - (1 - og_squared(nxt, policy))) > 64 * tol:
            raise ConsistencyFault("p1 disagrees with the centroid of the image")
        return nxt, p1


def triangle_denominator(s, t) -> mpf:
    return -4 * s ** 3 + 18 * s * t - 108 * t + 27 * s * s


def step_triangle(tp: TriangleParams, policy: PrecisionPolicy | None = None) -> TriangleParams:
    policy = resolve(policy)
    with policy.context():
        s, t = tp.s, tp.t
        D = triangle_denominator(s, t)
        if D <= policy.tolerance:
            raise DomainError("triangle map denominator is not positive")
        s2 = s * s
        s1 = s2 * (6 * t - s2) / D
        t1 = s2 * s2 * t * (9 * t - 2 * s2) / (D * D)
        return TriangleParams(s1, t1, 4 * t1 - s1 * s1)


def step_trapezoid(st: TrapezoidState, policy: PrecisionPolicy | None = None) -> TrapezoidState:
    policy = resolve(policy)
    tol = policy.tolerance
    with policy.context():
        a, b = st.a, st.b
        den_a = a * a - 2 * a * b - 3 * b * b + 4
        den_b = b * b - 2 * a * b - 3 * a * a + 4
        if abs(den_a) <= tol or abs(den_b) <= tol:
            raise DomainError("trapezoid map denominator vanishes")
        a1 = -(a * a * b + 2 * a * b * b + b ** 3 - 4 * a) / den_a
        b1 = -(b * b * a + 2 * b * a * a + a ** 3 - 4 * b) / den_b
        return TrapezoidState(a1, b1)


def _diagnostics(regime: Regime, state, policy: PrecisionPolicy) -> dict:
    if regime in (Regime.TETRA, Regime.QUAD):
        og2 = og_squared(state, policy)
        return dict(og2=og2, pt=ptolemy(state, policy), products=state.products())
    if regime is Regime.TRIANGLE:
        return dict(og2=state.og_squared())
    if regime is Regime.TRAPEZOID:
        return dict(og2=state.g ** 2)
    og2 = norm2(state.centroid(policy))
    if len(state.vertices) == 4:
        params = params_from_vertices(state, policy)
        return dict(og2=og2, pt=ptolemy(params, policy), products=params.products())
    return dict(og2=og2)


def run_orbit(
    initial,
    steps: int,
    regime: Regime | str,
    policy: PrecisionPolicy | None = None,
    stop_when: Callable[[OrbitRecord], bool] | None = None,
) -> Orbit:
    """Iterate ``steps`` times from ``initial``.

    Stops early once og2 drops below ``2**(-bits/2)`` (``converged=True``) or
    when ``stop_when(record)`` is true.  Errors from a map are
    re-raised with ``exc.step`` set to the index of the state being mapped.
    """
    if steps < 0:
        raise InvalidConfiguration("steps must be >= 0")
    regime = Regime(regime)
    policy = resolve(policy)
    tol = policy.tolerance
    orbit = Orbit(regime)
    with policy.context():
        state = initial
        for n in range(steps + 1):
            try:
                diag = _diagnostics(regime, state, policy)
                if regime is Regime.QUAD and gamma(state, policy) > tol:
                    raise ConsistencyFault("quadrilateral orbit left the plane")
                last = n == steps
                done = diag["og2"] < tol
                lam = None
                nxt = None
                if not (last or done):
                    if regime in (Regime.TETRA, Regime.QUAD):
                        lam = lambda_ratio(centroid_distances(state, policy))
                        nxt, _ = step_params(state, policy)
                    elif regime is Regime.TRIANGLE:
                        nxt = step_triangle(state, policy)
                    elif regime is Regime.TRAPEZOID:
                        nxt = step_trapezoid(state, policy)
                    else:
                        nxt = step_vertices(state, policy)
            except SimplexDynamicsError as exc:
                exc.step = n
                raise
            rec = OrbitRecord(step=n, state=state, og2=diag["og2"], p=1 - diag["og2"],
                              pt=diag.get("pt"), products=diag.get("products"), lam=lam)
            orbit.records.append(rec)
            if done:
                orbit.converged = True
                break
            if stop_when is not None and stop_when(rec):
                break
            if nxt is None:
                break
            state = nxt
    return orbit
