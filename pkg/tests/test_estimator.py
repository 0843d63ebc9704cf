import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from anisoperim import ChordDescent
from anisoperim.geometry import Window, square
from anisoperim.minimize import descend
from anisoperim.norms import Integrand


def test_fit_matches_descend():
    E = square(0, 0, 10)
    W = Window.disk((0, 0), 1)
    est = ChordDescent(window=W).fit(E)
    F, trace = descend(E, W, Integrand.euclidean())
    assert est.set_.equals(F)
    assert est.energy_ == trace.final_energy
    assert est.n_steps_ == trace.n_steps
    assert est.termination_ == trace.termination.value
    assert est.score() == -trace.final_energy
    assert est.energy_ < est.initial_energy_


def test_transform_and_fit_transform_agree():
    E = square(0, 0, 10)
    est = ChordDescent(integrand="p_norm", window={"shape": "disk", "center": [0, 0], "radius": 1})
    assert est.fit_transform(E).equals(est.transform(E))


def test_raw_loops_are_accepted():
    est = ChordDescent(window=Window.disk((0, 0), 1))
    est.fit([[[0, 0], [10, 0], [10, 10], [0, 10]]])
    np.testing.assert_array_equal(est.predict([[5, 5], [0.1, 0.1], [-1, -1]]), [True, False, False])


def test_params_round_trip_and_clone():
    est = ChordDescent(integrand="crystalline_l1", gain_tol=1e-8, max_arc_edges=4)
    assert clone(est).get_params() == est.get_params()
    est.set_params(max_steps=3)
    assert est.get_params()["max_steps"] == 3


def test_errors():
    with pytest.raises(ValueError):
        ChordDescent().fit(square())
    with pytest.raises(NotFittedError):
        ChordDescent(window=Window.disk((0, 0), 1)).predict([[0, 0]])
    with pytest.raises(ValueError):
        ChordDescent(window=Window.disk((0, 0), 1), max_arc_edges=1).fit(square())


def test_score_of_other_set():
    W = Window.disk((0, 0), 1)
    est = ChordDescent(window=W).fit(square(0, 0, 10))
    assert est.score(square(-5, 0, 10)) == pytest.approx(-2.0, abs=1e-15)
