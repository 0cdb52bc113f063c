"""Worked numerical examples: a harmonic quadrilateral, an isosceles trapezoid
converging to a square, and a triangle trace.  Used by ``paper-examples``."""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .dynamics import Regime, TrapezoidState, run_orbit, step_params
from .limits import estimate_order, quad_limit
from .numerics import PrecisionPolicy, resolve
from .simplex import TriangleParams, VertexConfig, params_from_vertices

HARMONIC_COSINES = ("0.923827833284", "-0.8", "0.9")
TRAPEZOID_SEED = ("0.955", "0.12237784429")
TRIANGLE_SEED = (8, 20, 16)
SQUARE = (2, 4, 2, 2, 4, 2)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def harmonic_quadrilateral(policy: PrecisionPolicy | None = None) -> VertexConfig:
    """Polar angles 0, arccos(0.9238...), arccos(-0.8), -arccos(0.9)."""
    policy = resolve(policy)
    with policy.context():
        c1, c2, c3 = (mpf(c) for c in HARMONIC_COSINES)
        angles = [mpf(0), mpmath.acos(c1), mpmath.acos(c2), -mpmath.acos(c3)]
        return VertexConfig.from_points([(mpmath.cos(t), mpmath.sin(t)) for t in angles], policy)


def harmonic_partner(a, guess, policy: PrecisionPolicy | None = None) -> mpf:
    """Abscissa b making the trapezoid (a, b) harmonic, so its limit is a square.

    Harmonic here means d12^2 = d14 d23, i.e. ``(a-b)^2 + (ya-yb)^2 = 4 ya yb``
    with ``y = sqrt(1 - x^2)``.
    """
    policy = resolve(policy)
    with policy.context():
        a = mpf(a)
        ya = mpmath.sqrt(1 - a * a)

        def f(b):
            yb = mpmath.sqrt(1 - b * b)
            return (a - b) ** 2 + (ya - yb) ** 2 - 4 * ya * yb

        return mpmath.findroot(f, mpf(guess))


def check_harmonic_quadrilateral(policy: PrecisionPolicy | None = None) -> list:
    policy = resolve(policy)
    with policy.context():
        p = params_from_vertices(harmonic_quadrilateral(policy), policy)
        lim = quad_limit(p, policy)
        dev = None
        hit = None
        for n in range(1, 6):
            p, _ = step_params(p, policy)
            dev = max(abs(x - y) for x, y in zip(p.values, SQUARE))
            if dev < mpf("1e-3"):
                hit = n
                break
    return [
        Check("harmonic quad: predicted rate below 1e-3", lim.rate_r < mpf("1e-3"),
              f"rate_r = {mpmath.nstr(lim.rate_r, 6)}"),
        Check("harmonic quad: quasi-square within 5 steps", hit is not None,
              f"max |d - square| = {mpmath.nstr(dev, 6)} after {hit or 5} steps"),
    ]


def check_trapezoid(policy: PrecisionPolicy | None = None) -> list:
    policy = resolve(policy)
    with policy.context():
        a0, b0 = (mpf(x) for x in TRAPEZOID_SEED)
        orbit = run_orbit(TrapezoidState(a0, b0).validate(policy), 3, Regime.TRAPEZOID, policy)
        st = orbit[3].state
        quasi = abs(st.a + st.b) < mpf("1e-6") and abs(st.a ** 2 - mpf(1) / 2) < mpf("1e-3")
        literal = estimate_order(run_orbit(TrapezoidState(a0, b0), 20, Regime.TRAPEZOID, policy).og(), policy)
        b_exact = harmonic_partner(a0, b0, policy)
        exact = run_orbit(TrapezoidState(a0, b_exact).validate(policy), 20, Regime.TRAPEZOID, policy)
        est = estimate_order(exact.og(), policy)
    return [
        Check("trapezoid: quasi-square after 3 steps", quasi,
              f"|a+b| = {mpmath.nstr(abs(st.a + st.b), 6)}, a^2 - 1/2 = {mpmath.nstr(st.a ** 2 - mpf(1) / 2, 6)}"),
        Check("trapezoid: order 3 +- 0.1 on the 11-digit seed", abs(literal.order - 3) <= 0.1,
              f"order = {literal.order:.6f}; the 11-digit b0 is harmonic only to about 3.5e-14, "
              f"so g_n turns geometric after three cubic steps"),
        Check("trapezoid: order 3 +- 0.1 on the exactly harmonic seed", abs(est.order - 3) <= 0.1,
              f"order = {est.order:.6f}, b0 = {mpmath.nstr(b_exact, 20)}"),
    ]


def check_triangle(policy: PrecisionPolicy | None = None) -> list:
    policy = resolve(policy)
    with policy.context():
        tp = TriangleParams(*(mpf(x) for x in TRIANGLE_SEED)).validate(policy)
        orbit = run_orbit(tp, 40, Regime.TRIANGLE, policy)
        first = orbit[1].state
        target = (9, 27, 27)
        hit = next((r.step for r in orbit
                    if max(abs(x - y) for x, y in zip(r.state.values, target)) < mpf("1e-20")), None)
        est = estimate_order(orbit.og(), policy)
        step1_ok = max(abs(x - mpf(y)) for x, y in zip(first.values, ("8.96", "26.624", "26.2144"))) < policy.tolerance
    return [
        Check("triangle: first step (8.96, 26.624, 26.2144)", step1_ok,
              "s1, t1, u1 = " + ", ".join(mpmath.nstr(x, 12) for x in first.values)),
        Check("triangle: (9, 27, 27) within 1e-20 in <= 15 steps", hit is not None and hit <= 15,
              f"reached at step {hit}"),
        Check("triangle: order 2 +- 0.05, constant 1 +- 0.05",
              abs(est.order - 2) <= 0.05 and abs(est.constant - 1) <= 0.05,
              f"order = {est.order:.6f}, constant = {est.constant:.6f}"),
    ]


def all_checks(policy: PrecisionPolicy | None = None) -> list:
    return check_harmonic_quadrilateral(policy) + check_trapezoid(policy) + check_triangle(policy)
