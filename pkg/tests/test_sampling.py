import mpmath
import pytest
from hypothesis import given, strategies as st

from simplexdyn.dynamics import Regime, TrapezoidState
from simplexdyn.errors import InputError
from simplexdyn.numerics import PrecisionPolicy, norm2
from simplexdyn.sampling import generate_random
from simplexdyn.simplex import VertexConfig, gamma, params_from_vertices, realizable


def test_seed_one_tetrahedron(policy):
    p = params_from_vertices(generate_random(Regime.TETRA, 3, 1, policy), policy)
    assert gamma(p, policy) > 0
    assert realizable(p, policy)
    p.validate(policy)


@pytest.mark.parametrize("regime", list(Regime))
def test_deterministic(regime, policy):
    a = generate_random(regime, 5, 42, policy)
    b = generate_random(regime, 5, 42, policy)
    assert a == b
    assert a != generate_random(regime, 5, 43, policy)


def test_trapezoid_regime_returns_abscissas(policy):
    st_ = generate_random(Regime.TRAPEZOID, 3, 0, policy)
    assert isinstance(st_, TrapezoidState)
    assert -1 < st_.a < 1 and -1 < st_.b < 1


def test_dimension_bound(policy):
    with pytest.raises(InputError):
        generate_random(Regime.VERTICES, 21, 0, policy)


@given(st.integers(0, 2 ** 32 - 1))
def test_quadrilaterals_are_cyclic_and_sorted(seed):
    pol = PrecisionPolicy(128)
    cfg = generate_random(Regime.QUAD, 2, seed, pol)
    assert isinstance(cfg, VertexConfig)
    with pol.context():
        angles = [mpmath.atan2(y, x) for x, y in cfg.vertices]
        assert all(abs(norm2(v) - 1) <= pol.tolerance for v in cfg.vertices)
    # polar order, up to the rotation of the starting vertex
    descents = sum(1 for a, b in zip(angles, angles[1:] + angles[:1]) if b < a)
    assert descents == 1


@given(st.integers(2, 8), st.integers(0, 1000))
def test_simplices_lie_on_the_sphere(dim, seed):
    pol = PrecisionPolicy(128)
    cfg = generate_random(Regime.VERTICES, dim, seed, pol)
    assert len(cfg.vertices) == dim + 1 and cfg.dim == dim
    with pol.context():
        assert all(abs(norm2(v) - 1) <= pol.tolerance for v in cfg.vertices)
