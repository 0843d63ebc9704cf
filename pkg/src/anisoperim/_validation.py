"""Input coercion shared by the estimator and the command line."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .geometry import GeometryError, PolygonalSet, Window
from .norms import Integrand


def check_polygonal_set(X) -> PolygonalSet:
    """Accept a PolygonalSet, a list of loops, a set JSON object or a scene object."""
    if isinstance(X, PolygonalSet):
        return X.validate()
    if isinstance(X, dict):
        return PolygonalSet.from_json(X["set"] if "set" in X else X)
    if isinstance(X, np.ndarray) and X.ndim == 2:
        X = [X]
    try:
        loops = [check_array(L, dtype=float, ensure_min_samples=3) for L in X]
    except (TypeError, ValueError) as exc:
        raise GeometryError(f"cannot interpret input as polygon loops: {exc}") from exc
    for L in loops:
        if L.shape[1] != 2:
            raise GeometryError("loop vertices must be 2-dimensional")
    return PolygonalSet.from_loops(loops)


def check_window(window) -> Window:
    if isinstance(window, Window):
        return window
    if isinstance(window, dict):
        return Window.from_json(window)
    raise GeometryError("window must be a Window or a window JSON object")


def check_integrand(integrand) -> Integrand:
    from .io import load_integrand

    return load_integrand(integrand)


def check_points(points) -> np.ndarray:
    P = check_array(np.atleast_2d(np.asarray(points, dtype=float)), dtype=float)
    if P.shape[1] != 2:
        raise ValueError("points must have two coordinates")
    return P
