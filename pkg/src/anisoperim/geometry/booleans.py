"""Set operations on polygonal sets.

``set_difference`` and ``set_union`` are general boolean operations backed
by shapely. ``replace_arc`` is the specialised splice used by descent: when
the enclosed region's boundary is exactly ``arc ∪ chord`` the competitor is
obtained by cutting the arc out of its loop and closing it with the chord,
which is exact and keeps every surviving vertex bit-for-bit.
"""
from __future__ import annotations

import numpy as np
import shapely
from shapely.geometry import Polygon
from shapely.geometry.polygon import orient

from .arcs import Arc
from .sets import GeometryError, PolygonalSet


def to_shapely(E: PolygonalSet):
    """Region with odd nesting depth (equivalently, winding number one)."""
    geom = Polygon()
    for L in E.loops:
        geom = geom.symmetric_difference(Polygon(L))
    return geom


def from_shapely(geom, validate: bool = True) -> PolygonalSet:
    """Convert a shapely areal geometry to a normalised polygonal set.

    With ``validate=False`` results with pinch points (polygons touching at
    a vertex) are accepted as they are.
    """
    stack = [geom]
    polys = []
    while stack:
        g = stack.pop()
        if isinstance(g, Polygon):
            polys.append(g)
        elif hasattr(g, "geoms"):
            stack.extend(g.geoms)
    loops = []
    for p in polys:
        if p.is_empty or p.area == 0:
            continue
        p = orient(p, 1.0)
        loops.append(np.asarray(p.exterior.coords)[:-1])
        loops.extend(np.asarray(r.coords)[:-1] for r in p.interiors)
    return PolygonalSet.from_loops(loops, normalize=True, validate=validate)


def set_difference(E: PolygonalSet, G: PolygonalSet) -> PolygonalSet:
    """``E \\ G`` as a normalised polygonal set."""
    if not G.loops:
        return E
    return from_shapely(shapely.difference(to_shapely(E), to_shapely(G)))


def set_union(E: PolygonalSet, G: PolygonalSet) -> PolygonalSet:
    """``E ∪ G`` as a normalised polygonal set."""
    if not G.loops:
        return E
    return from_shapely(shapely.union(to_shapely(E), to_shapely(G)))


def set_intersection(E: PolygonalSet, G: PolygonalSet) -> PolygonalSet:
    return from_shapely(shapely.intersection(to_shapely(E), to_shapely(G)))


def replace_arc(E: PolygonalSet, arc: Arc, validate: bool = True) -> PolygonalSet:
    """Replace ``arc`` by its chord inside its loop.

    The result is ``E \\ G`` when the enclosed region ``G`` is material and
    ``E ∪ G`` otherwise; the loop's orientation takes care of both cases.
    """
    L = E.loops[arc.loop]
    n = len(L)
    m = (arc.last_edge - arc.first_edge) % n + 1
    if m >= n:
        raise GeometryError("cannot splice an arc covering the whole loop")
    kept = L[(arc.last_edge + 1 + np.arange(n - m + 1)) % n]
    new_loop = np.vstack([arc.x1, arc.x2, kept])
    loops = list(E.loops)
    loops[arc.loop] = new_loop
    return PolygonalSet.from_loops(loops, normalize=True, validate=validate)


def remove_loop(E: PolygonalSet, index: int, validate: bool = True) -> PolygonalSet:
    """Delete one loop: removes an island or fills a hole."""
    loops = [L for i, L in enumerate(E.loops) if i != index]
    return PolygonalSet.from_loops(loops, normalize=False, validate=validate)


def symmetric_difference_area(E: PolygonalSet, F: PolygonalSet) -> float:
    return float(shapely.symmetric_difference(to_shapely(E), to_shapely(F)).area)


def insert_points(E: PolygonalSet, loop: int, edge_points: dict) -> PolygonalSet:
    """Insert extra (collinear) vertices on edges of a loop.

    ``edge_points`` maps an edge index to a list of points ordered along it.
    The represented set is unchanged; the result is deliberately not
    normalised.
    """
    L = E.loops[loop]
    rows = []
    for i, v in enumerate(L):
        rows.append(v)
        rows.extend(edge_points.get(i, ()))
    loops = list(E.loops)
    loops[loop] = np.asarray(rows)
    return PolygonalSet(tuple(loops))
