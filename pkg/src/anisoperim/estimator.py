"""Scikit-learn style wrapper around chord-replacement descent."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import (
    check_integrand,
    check_points,
    check_polygonal_set,
    check_window,
)
from .energy import phi
from .minimize import DescentParams, descend


class ChordDescent(TransformerMixin, BaseEstimator):
    """Drive a polygonal set towards a locally flat configuration.

    ``fit(X)`` runs descent on ``X`` and stores the result; ``transform(X)``
    runs descent on ``X`` and returns the final set; ``predict(points)``
    reports membership in the fitted final set; ``score()`` is the negated
    final energy.

    Parameters mirror :class:`DescentParams` plus the integrand (a built-in
    name, JSON object or :class:`Integrand`) and the window (a
    :class:`Window` or JSON object).
    """

    def __init__(self, integrand="euclidean", window=None, gain_tol=1e-10, flat_tol=1e-6,
                 max_arc_edges=16, max_steps=2000, arc_enumeration="all_subarcs",
                 anchor_offset=1e-10):
        self.integrand = integrand
        self.window = window
        self.gain_tol = gain_tol
        self.flat_tol = flat_tol
        self.max_arc_edges = max_arc_edges
        self.max_steps = max_steps
        self.arc_enumeration = arc_enumeration
        self.anchor_offset = anchor_offset

    def _setup(self):
        if self.window is None:
            raise ValueError("a window is required")
        params = DescentParams(
            gain_tol=self.gain_tol, flat_tol=self.flat_tol, max_arc_edges=self.max_arc_edges,
            max_steps=self.max_steps, arc_enumeration=self.arc_enumeration,
            anchor_offset=self.anchor_offset,
        )
        return check_integrand(self.integrand), check_window(self.window), params

    def fit(self, X, y=None):
        integrand, window, params = self._setup()
        E0 = check_polygonal_set(X)
        E, trace = descend(E0, window, integrand, params)
        self.initial_energy_ = trace.initial_energy
        self.set_ = E
        self.trace_ = trace
        self.energy_ = trace.final_energy
        self.n_steps_ = trace.n_steps
        self.termination_ = trace.termination.value
        return self

    def transform(self, X):
        integrand, window, params = self._setup()
        E, _ = descend(check_polygonal_set(X), window, integrand, params)
        return E

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, y).set_

    def predict(self, points) -> np.ndarray:
        check_is_fitted(self, "set_")
        return self.set_.contains(check_points(points))

    def score(self, X=None, y=None) -> float:
        check_is_fitted(self, "set_")
        if X is None:
            return -self.energy_
        integrand, window, _ = self._setup()
        return -phi(check_polygonal_set(X), window, integrand).total
