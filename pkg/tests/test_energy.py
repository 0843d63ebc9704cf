import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anisoperim.energy import arc_energy, chord_energy, jensen_gap, phi, segment_energy
from anisoperim.geometry import (
    Arc,
    PolygonalSet,
    Window,
    enclosed_region,
    replace_arc,
    shorten_chord,
    square,
)
from anisoperim.norms import Integrand, IntegrandError, builtin_integrands

from helpers import oracle_arc_energy, oracle_chord_energy, star_polygon

EUC = Integrand.euclidean()
ELL = Integrand.ellipse([[1, 0], [0, 4]])
L1 = Integrand.crystalline_l1()
RIGHT = Arc.from_polyline([[0, 0], [1, 0], [1, 1]])


def test_square_energies():
    assert phi(square(), None, EUC).total == 4.0
    assert phi(square(), None, ELL).total == 6.0
    assert phi(square(), Window.disk((0.5, 0.5), 5), EUC).total == 4.0


def test_half_window():
    # window keeps x <= 1/2: two half sides (1/2 each) plus the full left side
    W = Window.rectangle(-1, -1, 0.5, 2)
    assert phi(square(), W, EUC).total == pytest.approx(2.0, abs=1e-15)


def test_breakdown_consistency():
    rng = np.random.default_rng(0)
    E = PolygonalSet.from_loops([star_polygon(rng, 40)])
    br = phi(E, Window.disk((0.2, 0), 0.9), Integrand.p_norm(1.5))
    assert br.total == pytest.approx(math.fsum(br.contributions), rel=1e-12)
    assert np.all(br.contributions >= 0)
    assert sum(br.per_loop) == pytest.approx(br.total, rel=1e-12)
    rows = br.to_csv().splitlines()
    assert rows[0] == "loop,edge,normal_x,normal_y,length,value,contribution"
    assert len(rows) == 41


def test_arc_examples():
    assert arc_energy(Arc.from_polyline([[0, 0], [3, 0]]), EUC) == 3.0
    assert arc_energy(RIGHT, EUC) == 2.0
    assert arc_energy(RIGHT, L1) == 2.0
    assert chord_energy(RIGHT, EUC) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert chord_energy(RIGHT, L1) == 2.0
    assert jensen_gap(RIGHT, EUC) == pytest.approx(2 - math.sqrt(2), abs=1e-15)
    assert jensen_gap(RIGHT, L1) == 0.0


@pytest.mark.parametrize("I", list(builtin_integrands().values()))
def test_flat_arc_has_no_gap(I):
    arc = Arc.from_polyline([[0, 0], [1, 0.5], [3, 1.5]])
    assert chord_energy(arc, I) == pytest.approx(arc_energy(arc, I), rel=1e-14)
    assert abs(jensen_gap(arc, I)) <= 1e-14


def test_closed_arc_rejected():
    with pytest.raises(IntegrandError):
        chord_energy(Arc.from_polyline([[0, 0], [1, 0], [0, 1], [0, 0]]), EUC)


@pytest.mark.parametrize("name,params", [
    ("euclidean", {}), ("ellipse", {"matrix": [[1.0, 0.0], [0.0, 4.0]]}), ("p_norm", {"p": 1.5}),
    ("asymmetric_shift", {"shift": (0.5, 0.0)}), ("crystalline_l1", {}), ("crystalline_linf", {}),
])
def test_against_scalar_oracle(name, params):
    I = builtin_integrands()[name]
    rng = np.random.default_rng(11)
    for _ in range(50):
        pts = rng.uniform(-5, 5, size=(int(rng.integers(2, 10)), 2))
        arc = Arc.from_polyline(pts)
        assert arc_energy(arc, I) == pytest.approx(oracle_arc_energy(pts, name, **params), rel=1e-13)
        assert chord_energy(arc, I) == pytest.approx(oracle_chord_energy(pts, name, **params), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(a=st.floats(0.01, 10), b=st.floats(0.01, 10), theta=st.floats(1e-3, math.pi - 1e-3))
def test_two_edge_euclidean_closed_form(a, b, theta):
    # first edge along +x, second turned left by theta
    pts = [[0, 0], [a, 0], [a + b * math.cos(theta), b * math.sin(theta)]]
    gap = jensen_gap(Arc.from_polyline(pts), EUC)
    exact = a + b - math.sqrt(a * a + b * b + 2 * a * b * math.cos(theta))
    assert gap == pytest.approx(exact, rel=1e-9, abs=1e-13)
    # equal legs attain the bound arc_energy * (1 - cos(theta / 2))
    sym = jensen_gap(Arc.from_polyline([[0, 0], [a, 0], [a + a * math.cos(theta), a * math.sin(theta)]]), EUC)
    assert sym == pytest.approx(2 * a * (1 - math.cos(theta / 2)), rel=1e-8, abs=1e-13)


def test_segment_energy_orientation():
    asym = Integrand.asymmetric_shift((0.5, 0))
    # material on the left of an upward segment: normal points to +x
    assert segment_energy((0, 0), (0, 2), asym) == pytest.approx(3.0)
    assert segment_energy((0, 2), (0, 0), asym) == pytest.approx(1.0)


def test_additivity_over_convex_cells():
    rng = np.random.default_rng(2)
    I = Integrand.asymmetric_shift((0.3, -0.2))
    for _ in range(5):
        E = PolygonalSet.from_loops([star_polygon(rng, 30, 0.5, 1.8)])
        whole = phi(E, Window.rectangle(-1.5, -1.5, 1.5, 1.5), I).total
        xs = [-1.5, -0.37, 0.41, 1.5]
        ys = [-1.5, 0.13, 1.5]
        parts = [phi(E, Window.rectangle(x0, y0, x1, y1), I).total
                 for x0, x1 in zip(xs, xs[1:]) for y0, y1 in zip(ys, ys[1:])]
        assert math.fsum(parts) == pytest.approx(whole, rel=1e-10)


U = PolygonalSet.from_loops([[[0, 0], [3, 0], [3, 3], [2, 3], [2, 1], [1, 1], [1, 3], [0, 3]]])


@pytest.mark.parametrize("I", list(builtin_integrands().values()) + [Integrand.asymmetric_shift((-0.4, 0.7))])
@pytest.mark.parametrize("start,n,window", [
    (3, 3, Window.disk((1.5, 2.0), 1.2)),  # dent: region outside E
    (6, 2, Window.disk((0.4, 1.6), 1.8)),  # material corner: region inside E
])
def test_case_uniformity(I, start, n, window):
    arc, _ = shorten_chord(Arc.on_loop(U, 0, start, n), U)
    G = enclosed_region(arc)
    assert np.all(window.contains_strictly(G.loops[0]))
    F = replace_arc(U, arc)
    lhs = phi(F, window, I).total
    rhs = phi(U, window, I).total - jensen_gap(arc, I)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
