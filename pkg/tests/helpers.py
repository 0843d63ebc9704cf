"""Shared generators and independent scalar oracles for the tests."""
from __future__ import annotations

import math

import numpy as np

from anisoperim.geometry import PolygonalSet


def star_polygon(rng, n, r_lo=0.3, r_hi=1.6, center=(0.0, 0.0)):
    """Random simple polygon: vertices at sorted angles, random radii.

    Angular gaps stay below π so the polygon is star-shaped about ``center``.
    """
    while True:
        th = np.sort(rng.uniform(0, 2 * np.pi, n))
        gaps = np.diff(np.r_[th, th[0] + 2 * np.pi])
        if gaps.min() > 1e-3 and gaps.max() < np.pi - 1e-3:
            break
    r = rng.uniform(r_lo, r_hi, n)
    return np.column_stack([center[0] + r * np.cos(th), center[1] + r * np.sin(th)])


def random_arc_points(rng, max_edges=16, box=10.0):
    k = int(rng.integers(1, max_edges + 1))
    return rng.uniform(-box, box, size=(k + 1, 2))


def staircase(n_steps=10, size=1.0, far=5.0):
    """Region below-left of a descending axis staircase from (0, size) to (size, 0)."""
    h = size / n_steps
    pts = [(-far, size)]
    for i in range(n_steps):
        pts.append((i * h, size - i * h))
        pts.append(((i + 1) * h, size - i * h))
    pts.append((size, -far))
    pts.append((-far, -far))
    # material on the left: walk the staircase left-to-right along its top
    loop = np.array(pts)[::-1]
    return PolygonalSet.from_loops([loop])


# -- scalar oracles: written straight from the defining formulas -----------

def oracle_value(family, v, **params):
    x, y = float(v[0]), float(v[1])
    if family == "euclidean":
        return math.hypot(x, y)
    if family == "ellipse":
        (a, b), (c, d) = params["matrix"]
        return math.sqrt(x * (a * x + b * y) + y * (c * x + d * y))
    if family == "p_norm":
        p = params["p"]
        return (abs(x) ** p + abs(y) ** p) ** (1 / p)
    if family == "asymmetric_shift":
        cx, cy = params["shift"]
        return math.hypot(x, y) + cx * x + cy * y
    if family == "crystalline_l1":
        return abs(x) + abs(y)
    if family == "crystalline_linf":
        return max(abs(x), abs(y))
    raise ValueError(family)


def oracle_arc_energy(points, family, **params):
    total = 0.0
    for (x0, y0), (x1, y1) in zip(points[:-1], points[1:]):
        total += oracle_value(family, (y1 - y0, -(x1 - x0)), **params)
    return total


def oracle_chord_energy(points, family, **params):
    (x0, y0), (x1, y1) = points[0], points[-1]
    return oracle_value(family, (y1 - y0, -(x1 - x0)), **params)
