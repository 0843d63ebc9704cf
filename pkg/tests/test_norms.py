import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anisoperim.norms import (
    Integrand,
    IntegrandError,
    builtin_integrands,
    comparability_bounds,
    evaluate,
    strict_convexity_check,
    strictly_convex_builtins,
    unit_directions,
)

from helpers import oracle_value

BUILTINS = builtin_integrands()
PARAMS = {
    "euclidean": {},
    "ellipse": {"matrix": [[1.0, 0.0], [0.0, 4.0]]},
    "p_norm": {"p": 1.5},
    "asymmetric_shift": {"shift": (0.5, 0.0)},
    "crystalline_l1": {},
    "crystalline_linf": {},
}

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_examples():
    assert evaluate(Integrand.euclidean(), (3, 4)) == 5.0
    ell = Integrand.ellipse([[1, 0], [0, 4]])
    assert evaluate(ell, (0, 1)) == 2.0
    assert evaluate(ell, (1, 0)) == 1.0
    asym = Integrand.asymmetric_shift((0.5, 0))
    assert evaluate(asym, (1, 0)) == 1.5
    assert evaluate(asym, (-1, 0)) == 0.5


def test_zero_vector_rejected():
    with pytest.raises(IntegrandError):
        evaluate(Integrand.euclidean(), (0, 0))


@pytest.mark.parametrize("bad", [
    lambda: Integrand.ellipse([[1, 2], [2, 1]]),
    lambda: Integrand.ellipse([[1, 0.5], [0, 1]]),
    lambda: Integrand.p_norm(1.0),
    lambda: Integrand.p_norm(math.inf),
    lambda: Integrand.asymmetric_shift((1.0, 0.0)),
    lambda: Integrand.tabulated([(0, 1.0), (90, -1.0)]),
    lambda: Integrand.tabulated([(90, 1.0), (0, 1.0)]),
])
def test_invalid_parameters(bad):
    with pytest.raises(IntegrandError):
        bad()


@pytest.mark.parametrize("name", list(BUILTINS))
def test_matches_scalar_oracle(name):
    rng = np.random.default_rng(7)
    V = rng.normal(size=(200, 2)) * rng.uniform(0.01, 100, size=(200, 1))
    got = BUILTINS[name](V)
    want = [oracle_value(name, v, **PARAMS[name]) for v in V]
    np.testing.assert_allclose(got, want, rtol=1e-13)


@pytest.mark.parametrize("name", list(BUILTINS))
@settings(max_examples=60, deadline=None)
@given(x=finite, y=finite, t=st.floats(1e-3, 10))
def test_homogeneity(name, x, y, t):
    if math.hypot(x, y) < 1e-6:
        return
    I = BUILTINS[name]
    v = np.array([x, y])
    assert abs(I(t * v) - t * I(v)) <= 1e-12 * I(t * v)


@pytest.mark.parametrize("name", list(BUILTINS))
def test_convex_on_sampled_pairs(name):
    I = BUILTINS[name]
    U = unit_directions(180)
    i, j = np.triu_indices(len(U), k=1)
    lhs = I(U[i] + U[j] + 1e-300)
    assert np.all(lhs <= I(U[i]) + I(U[j]) + 1e-12)


def test_strictness_dichotomy():
    for name, I in BUILTINS.items():
        rep = strict_convexity_check(I, 360, 1e-9)
        assert rep.is_strict == bool(I.strictly_convex_declared), name


def test_crystalline_slack_zero_on_axes():
    rep = strict_convexity_check(Integrand.crystalline_l1(), 360, 1e-9)
    assert not rep.is_strict
    assert abs(rep.worst_slack) <= 1e-12
    I = Integrand.crystalline_l1()
    assert I(np.array([1.0, 1.0])) == I(np.array([1.0, 0.0])) + I(np.array([0.0, 1.0]))


def test_asymmetric_slack_equals_euclidean_slack():
    a = strict_convexity_check(Integrand.asymmetric_shift((0.5, 0)), 72, 0)
    e = strict_convexity_check(Integrand.euclidean(), 72, 0)
    assert a.is_strict
    assert a.worst_slack == pytest.approx(e.worst_slack, rel=1e-9)


def test_check_parameters():
    with pytest.raises(ValueError):
        strict_convexity_check(Integrand.euclidean(), 4)
    with pytest.raises(ValueError):
        comparability_bounds(Integrand.euclidean(), 4)


@pytest.mark.parametrize("name,lo,hi", [
    ("euclidean", 1.0, 1.0),
    ("ellipse", 1.0, 2.0),
    ("asymmetric_shift", 0.5, 1.5),
])
def test_comparability_bounds(name, lo, hi):
    b = comparability_bounds(BUILTINS[name], 360)
    assert b.c_lower == pytest.approx(lo, abs=1e-12)
    assert b.C_upper == pytest.approx(hi, abs=1e-12)


def test_positivity_above_lower_bound():
    for I in BUILTINS.values():
        b = comparability_bounds(I, 720)
        assert b.c_lower > 0
        assert np.all(I(unit_directions(720)) >= b.c_lower)


def test_symmetry_flags():
    assert Integrand.euclidean().symmetric
    assert Integrand.crystalline_linf().symmetric
    assert not Integrand.asymmetric_shift((0.2, 0.1)).symmetric
    assert not Integrand.tabulated([(0, 1.0), (90, 1.0), (180, 2.0), (270, 1.0)]).symmetric


def test_tabulated_interpolates_linearly_in_angle():
    I = Integrand.tabulated([(0, 1.0), (90, 3.0), (180, 1.0), (270, 3.0)])
    assert I.strictly_convex_declared is None
    u = np.array([math.cos(math.radians(45)), math.sin(math.radians(45))])
    assert I(u) == pytest.approx(2.0, abs=1e-14)
    # wraps from the last node back to the first
    w = np.array([math.cos(math.radians(315)), math.sin(math.radians(315))])
    assert I(w) == pytest.approx(2.0, abs=1e-14)
    assert I(2.5 * u) == pytest.approx(5.0, abs=1e-13)
    b = comparability_bounds(I, 8)
    assert (b.c_lower, b.C_upper) == (pytest.approx(1.0), pytest.approx(3.0))


def test_tabulated_constant_is_euclidean():
    I = Integrand.tabulated([(0, 1.0), (120, 1.0), (240, 1.0)])
    assert strict_convexity_check(I, 90).is_strict


@pytest.mark.parametrize("I", list(BUILTINS.values()) + [
    Integrand.p_norm(3.0), Integrand.ellipse([[2.0, 0.5], [0.5, 1.0]]),
    Integrand.tabulated([(0, 1.0), (100, 2.0), (200, 1.5)])])
def test_json_round_trip(I):
    J = Integrand.from_json(I.to_json())
    U = unit_directions(64)
    assert np.array_equal(I(U), J(U))
    assert J.to_json() == I.to_json()


def test_json_errors():
    with pytest.raises(IntegrandError):
        Integrand.from_json({"family": "nope", "params": {}})
    with pytest.raises(IntegrandError):
        Integrand.from_json({"params": {}})
    with pytest.raises(IntegrandError):
        Integrand.from_json({"family": "ellipse", "params": {}})


def test_strictly_convex_builtins():
    assert set(strictly_convex_builtins()) == {"euclidean", "ellipse", "p_norm", "asymmetric_shift"}
