import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from simplexdyn.dynamics import (
    Regime,
    TrapezoidState,
    lambda_ratio,
    run_orbit,
    step_params,
    step_trapezoid,
    step_triangle,
    step_vertices,
    triangle_denominator,
)
from simplexdyn.errors import DomainError, InvalidConfiguration, NumericFault
from simplexdyn.numerics import PrecisionPolicy
from simplexdyn.reproductions import harmonic_partner
from simplexdyn.sampling import generate_random
from simplexdyn.simplex import (
    EdgeParams,
    ShapeClass,
    TriangleParams,
    VertexConfig,
    centroid_distances,
    params_from_vertices,
    shape_class,
    triangle_params_from_vertices,
)

SKEW_VERTICES = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0))
seeds = st.integers(0, 2 ** 32 - 1)


def maxdiff(u, v):
    return max(abs(x - y) for x, y in zip(u, v))


def regular_vertices(policy):
    with policy.context():
        s = mpmath.sqrt(mpf(8) / 9)
        h = mpmath.sqrt(mpf(2) / 3)
        third = mpf(-1) / 3
        return VertexConfig(((0, 0, 1), (s, 0, third), (-s / 2, h, third), (-s / 2, -h, third))).validate(policy)


def test_regular_is_fixed_in_parameter_space(policy):
    p = params_from_vertices(regular_vertices(policy), policy)
    q, p1 = step_params(p, policy)
    assert maxdiff(p.values, q.values) < policy.tolerance
    assert abs(p1 - 1) < policy.tolerance


def test_square_is_fixed(policy):
    p = EdgeParams.from_sequence((2, 4, 2, 2, 4, 2), policy)
    q, p1 = step_params(p, policy)
    assert q.values == p.values and p1 == 1


def test_params_step_matches_vertex_step(policy):
    cfg = VertexConfig.from_points(SKEW_VERTICES, policy)
    q, p1 = step_params(params_from_vertices(cfg, policy), policy)
    oracle = params_from_vertices(step_vertices(cfg, policy), policy)
    assert maxdiff(q.values, oracle.values) < 64 * policy.tolerance
    with policy.context():
        assert abs(p1 - (1 - mpmath.fsum(x ** 2 for x in step_vertices(cfg, policy).centroid(policy)))) \
            < 64 * policy.tolerance


def test_isosceles_vertices_reflect_through_center(policy):
    cfg = regular_vertices(policy)
    once = step_vertices(cfg, policy)
    twice = step_vertices(once, policy)
    with policy.context():
        for v, w in zip(cfg.vertices, once.vertices):
            assert maxdiff(w, [-x for x in v]) < 8 * policy.tolerance
        for v, w in zip(cfg.vertices, twice.vertices):
            assert maxdiff(v, w) < 8 * policy.tolerance


def test_equilateral_triangle_goes_antipodal(policy):
    with policy.context():
        pts = [(mpmath.cos(2 * mpmath.pi * k / 3), mpmath.sin(2 * mpmath.pi * k / 3)) for k in range(3)]
        out = step_vertices(VertexConfig(tuple(pts)).validate(policy), policy)
        for v, w in zip(pts, out.vertices):
            assert maxdiff(w, [-x for x in v]) < 8 * policy.tolerance


def test_right_isosceles_triangle_cross_map(policy):
    cfg = VertexConfig(((1, 0), (-1, 0), (0, 1))).validate(policy)
    via_vertices = triangle_params_from_vertices(step_vertices(cfg, policy), policy)
    via_params = step_triangle(TriangleParams.from_st(8, 20, policy), policy)
    assert maxdiff(via_vertices.values, via_params.values) < 64 * policy.tolerance


def test_triangle_map_examples(policy):
    with policy.context():
        assert step_triangle(TriangleParams(mpf(9), mpf(27), mpf(27)), policy).values == (9, 27, 27)
        assert triangle_denominator(mpf(8), mpf(20)) == 400
        out = step_triangle(TriangleParams(mpf(8), mpf(20), mpf(16)), policy)
        assert maxdiff(out.values, (mpf("8.96"), mpf("26.624"), mpf("26.2144"))) < policy.tolerance
        flat = TriangleParams.from_st(8, 16, policy).validate(policy)
        assert flat.u == 0
        assert step_triangle(flat, policy).s == 8


def test_triangle_domain_error(policy):
    with pytest.raises(DomainError):
        step_triangle(TriangleParams(mpf(0), mpf(0), mpf(0)), policy)


@given(st.floats(-0.99, 0.99))
def test_rectangle_trapezoid_is_fixed(x):
    pol = PrecisionPolicy(128)
    with pol.context():
        st_ = TrapezoidState(mpf(x), -mpf(x))
        out = step_trapezoid(st_, pol)
        assert abs(out.a - st_.a) <= pol.tolerance and abs(out.b - st_.b) <= pol.tolerance


def test_trapezoid_literal_seed(policy):
    orbit = run_orbit(TrapezoidState(mpf("0.955"), mpf("0.12237784429")).validate(policy), 3,
                      Regime.TRAPEZOID, policy)
    a, b = orbit[3].state.values
    assert abs(a + b) < mpf("1e-6")
    assert a ** 2 - mpf("0.5") < mpf("1e-3")


def test_trapezoid_matches_vertex_step(policy):
    # the chord map swaps the upper and lower arcs, so compare the vertex sets
    st_ = TrapezoidState(mpf("0.3"), mpf("-0.6"))
    nxt = step_trapezoid(st_, policy)
    mapped = sorted(step_vertices(st_.vertices(policy), policy).vertices)
    expected = sorted(nxt.vertices(policy).vertices)
    assert max(maxdiff(u, v) for u, v in zip(mapped, expected)) < 64 * policy.tolerance


def test_trapezoid_cubic_ratio(policy):
    # harmonic trapezoids near the square: the partner b solves the harmonic condition
    with policy.context():
        a = 1 / mpmath.sqrt(2) + mpf("0.05")
        st_ = TrapezoidState(a, harmonic_partner(a, -a, policy))
        gs = [st_.g]
        for _ in range(3):
            st_ = step_trapezoid(st_, policy)
            gs.append(st_.g)
        ratios = [abs(gs[n + 1] / gs[n] ** 3) for n in range(3)]
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1)
    assert abs(ratios[-1] - 1) < mpf("1e-3")


def test_isosceles_orbit_is_constant(policy):
    p = params_from_vertices(regular_vertices(policy), policy)
    orbit = run_orbit(p, 10, Regime.TETRA, policy)
    for rec in orbit:
        assert maxdiff(rec.state.values, p.values) < policy.tolerance


def test_skew_orbit_monotone(policy):
    p = EdgeParams.from_sequence((2, 2, 4, 2, 2, 2), policy)
    orbit = run_orbit(p, 50, Regime.TETRA, policy)
    assert len(orbit) == 51
    for cur, nxt in zip(orbit.records, orbit.records[1:]):
        assert nxt.og2 < cur.og2
        assert all(b >= a for a, b in zip(cur.products, nxt.products))
        assert nxt.pt >= cur.pt


def test_triangle_orbit_is_quadratic(policy):
    orbit = run_orbit(TriangleParams.from_st(8, 20, policy), 10, Regime.TRIANGLE, policy)
    og2 = orbit.og2()
    ratios = [og2[n + 1] / og2[n] ** 2 for n in range(len(og2) - 1) if og2[n + 1] > policy.underflow_floor]
    assert abs(ratios[-1] - 1) < mpf("0.05")
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1)


def test_negative_steps_rejected(policy):
    with pytest.raises(InvalidConfiguration):
        run_orbit(TriangleParams.from_st(8, 20, policy), -1, Regime.TRIANGLE, policy)


def test_fault_carries_step(policy):
    with pytest.raises(NumericFault) as info:
        run_orbit(TriangleParams(mpf(0), mpf(0), mpf(0)), 5, Regime.TRIANGLE, policy)
    assert info.value.step == 0


@settings(max_examples=15)
@given(seeds)
def test_cross_map_consistency(seed):
    pol = PrecisionPolicy(512)
    cfg = generate_random(Regime.TETRA, 3, seed, pol)
    p = params_from_vertices(cfg, pol)
    for _ in range(20):
        cfg = step_vertices(cfg, pol)
        p, _ = step_params(p, pol)
        assert maxdiff(p.values, params_from_vertices(cfg, pol).values) <= 64 * pol.tolerance


@settings(max_examples=15)
@given(seeds)
def test_monotonicity_theorem(seed):
    pol = PrecisionPolicy(512)
    slack = 64 * pol.tolerance
    p = params_from_vertices(generate_random(Regime.TETRA, 3, seed, pol), pol)
    orbit = run_orbit(p, 40, Regime.TETRA, pol)
    with pol.context():
        for cur, nxt in zip(orbit.records, orbit.records[1:]):
            generic = shape_class(cur.state, pol) is ShapeClass.GENERIC
            assert nxt.og2 < cur.og2 if generic else nxt.og2 <= cur.og2 + slack
            assert all(b >= a - slack for a, b in zip(cur.products, nxt.products))
            assert cur.lam >= 1 - slack
            assert cur.lam == lambda_ratio(centroid_distances(cur.state, pol))
            for a, b in zip(cur.products, nxt.products):
                assert abs(b - cur.lam * a) <= slack
            assert nxt.pt >= cur.pt - slack
            assert abs(nxt.pt - cur.lam ** 2 * cur.pt) <= slack


@given(seeds)
def test_triangle_orbit_monotone(seed):
    pol = PrecisionPolicy(256)
    tp = triangle_params_from_vertices(generate_random(Regime.TRIANGLE, 2, seed, pol), pol)
    orbit = run_orbit(tp, 12, Regime.TRIANGLE, pol)
    slack = 64 * pol.tolerance
    with pol.context():
        for cur, nxt in zip(orbit.records, orbit.records[1:]):
            a, b = cur.state, nxt.state
            assert b.s >= a.s - slack
            assert b.u >= a.u - slack
            if a.s >= 3:
                assert b.t >= a.t - slack


def test_vertex_orbit_settles_to_two_cycle(policy):
    cfg = VertexConfig.from_points(SKEW_VERTICES, policy)
    orbit = run_orbit(cfg, 120, Regime.VERTICES, policy)
    states = [r.state.vertices for r in orbit]

    def dist(u, v):
        return max(maxdiff(x, y) for x, y in zip(u, v))

    gaps = [dist(states[n], states[n + 2]) for n in range(len(states) - 2)]
    assert gaps[-1] < mpf("1e-12")
    assert gaps[-1] < gaps[10]
    with policy.context():
        mirrored = [[-x for x in v] for v in states[-2]]
    assert dist(states[-1], mirrored) < mpf("1e-12")
