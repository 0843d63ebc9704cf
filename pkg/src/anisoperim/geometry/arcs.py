"""Boundary arcs, their chords, and the Jordan region they enclose."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .._config import TOL
from ._predicates import chord_hits, point_segment_distance, rot_cw, signed_area
from .sets import GeometryError, PolygonalSet


class DegenerateChordError(GeometryError):
    """The chord runs along the boundary over a positive length."""


class DegenerateRegionError(GeometryError):
    """No interior point of the enclosed region can be sampled robustly."""


@dataclass(frozen=True, eq=False)
class Arc:
    """A contiguous run of boundary edges of one loop.

    ``first_edge``/``last_edge`` index edges of loop ``loop`` (cyclically);
    the arc starts at ``points[0]`` on ``first_edge`` and ends at
    ``points[-1]`` on ``last_edge``. Interior points are loop vertices.
    """

    loop: int
    first_edge: int
    last_edge: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise GeometryError("an arc needs at least one edge")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_polyline(cls, points) -> "Arc":
        pts = np.asarray(points, dtype=float)
        return cls(loop=-1, first_edge=0, last_edge=len(pts) - 2, points=pts)

    @classmethod
    def on_loop(cls, E: PolygonalSet, loop: int, start: int, n_edges: int) -> "Arc":
        """Arc of ``n_edges`` edges starting at vertex ``start`` of a loop."""
        L = E.loops[loop]
        n = len(L)
        if not 1 <= n_edges < n:
            raise GeometryError("an open arc must have between 1 and n-1 edges")
        idx = (start + np.arange(n_edges + 1)) % n
        return cls(loop, start % n, (start + n_edges - 1) % n, L[idx])

    @property
    def x1(self) -> np.ndarray:
        return self.points[0]

    @property
    def x2(self) -> np.ndarray:
        return self.points[-1]

    @property
    def n_edges(self) -> int:
        return len(self.points) - 1

    @property
    def displacements(self) -> np.ndarray:
        return np.diff(self.points, axis=0)

    @property
    def lengths(self) -> np.ndarray:
        return np.hypot(*self.displacements.T)

    @property
    def normals(self) -> np.ndarray:
        d = self.displacements
        return rot_cw(d) / np.hypot(*d.T)[:, None]

    def edge_indices(self, loop_size: int) -> np.ndarray:
        m = (self.last_edge - self.first_edge) % loop_size + 1
        return (self.first_edge + np.arange(m)) % loop_size

    def spread(self) -> float:
        """Largest angle between any two edge normals of the arc."""
        N = self.normals
        c = np.clip(N @ N.T, -1.0, 1.0)
        s = N[:, 0][:, None] * N[:, 1][None, :] - N[:, 1][:, None] * N[:, 0][None, :]
        return float(np.abs(np.arctan2(s, c)).max())

    def is_flat(self, flat_tol: float) -> bool:
        return self.spread() <= flat_tol


@dataclass(frozen=True, eq=False)
class Chord:
    start: np.ndarray
    end: np.ndarray

    @property
    def length(self) -> float:
        return math.hypot(*(self.end - self.start))

    @property
    def normal(self) -> np.ndarray:
        """Constant outward normal of the competitor along the chord."""
        return rot_cw(self.end - self.start) / self.length


def net_normal(arc: Arc) -> np.ndarray:
    """Integral of the outward normal over the arc, summed edge by edge.

    Because every edge contributes ``rot_cw(d)``, the sum telescopes to
    ``rot_cw(x2 - x1)``.
    """
    d = arc.displacements
    return np.array([math.fsum(d[:, 1]), -math.fsum(d[:, 0])])


def chord_of(arc: Arc) -> Chord:
    return Chord(arc.x1.copy(), arc.x2.copy())


def _in_arc(edge_ids: np.ndarray, arc: Arc, n: int):
    """Position of each loop edge inside the arc, or -1."""
    pos = (edge_ids - arc.first_edge) % n
    m = (arc.last_edge - arc.first_edge) % n + 1
    return np.where(pos < m, pos, -1)


def shorten_chord(arc: Arc, E: PolygonalSet, eps: float = TOL.on_segment):
    """Shorten the chord of ``arc`` until it meets ``∂E`` only at its ends.

    Returns ``(arc, chord)`` (unchanged if the chord is already clean), or
    ``None`` if the first boundary point met from either end lies off the
    arc. Raises :class:`DegenerateChordError` when the chord overlaps a
    boundary edge over a positive length.
    """
    a, b = arc.x1, arc.x2
    L = math.hypot(*(b - a))
    if L <= eps:
        raise DegenerateChordError("arc endpoints coincide")
    P, Q, lid, eid = E.edges()
    s, k, overlap = chord_hits(a, b, P, Q, eps)
    if overlap.any():
        raise DegenerateChordError("chord runs along the boundary")
    se = eps / L
    inner = (s > se) & (s < 1 - se)
    if not inner.any():
        return arc, chord_of(arc)
    s, k = s[inner], k[inner]
    n = len(E.loops[arc.loop])
    pos = np.where(lid[k] == arc.loop, _in_arc(eid[k], arc, n), -1)

    # first hit seen from x1: keep x1, end the arc at the hit point
    s_min = s.min()
    at = np.abs(s - s_min) * L <= eps
    if np.all(pos[at] >= 0):
        j = int(pos[at][pos[at] >= 0].min())
        p = a + s_min * (b - a)
        pts = np.vstack([arc.points[: j + 1], p])
        new = Arc(arc.loop, arc.first_edge, (arc.first_edge + j) % n, _dedupe(pts))
        return new, chord_of(new)

    # first hit seen from x2: keep x2, start the arc at the hit point
    s_max = s.max()
    at = np.abs(s - s_max) * L <= eps
    if np.all(pos[at] >= 0):
        j = int(pos[at][pos[at] >= 0].max())
        p = a + s_max * (b - a)
        pts = np.vstack([p, arc.points[j + 1:]])
        new = Arc(arc.loop, (arc.first_edge + j) % n, arc.last_edge, _dedupe(pts))
        return new, chord_of(new)
    return None


def _dedupe(pts, eps=TOL.merge):
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.hypot(*np.diff(pts, axis=0).T) > eps
    out = pts[keep]
    if len(out) >= 2 and math.hypot(*(pts[-1] - out[-1])) > 0:
        out[-1] = pts[-1]
    return out


def enclosed_region(arc: Arc, chord: Optional[Chord] = None) -> PolygonalSet:
    """The bounded region enclosed by the arc and its chord, as a CCW loop."""
    pts = arc.points
    if chord is not None and (np.any(chord.start != pts[0]) or np.any(chord.end != pts[-1])):
        raise GeometryError("chord does not join the arc endpoints")
    if len(pts) < 3 or abs(signed_area(pts)) <= TOL.merge * max(1.0, float(arc.lengths.sum())):
        raise DegenerateRegionError("arc and chord enclose no area")
    V = pts if signed_area(pts) > 0 else pts[::-1]
    return PolygonalSet((V,))


class RegionSide(str, Enum):
    inside_E = "inside_E"
    outside_E = "outside_E"


def interior_point(G: PolygonalSet) -> np.ndarray:
    """A point of the single-loop region ``G`` well away from its boundary."""
    V = G.loops[0]
    W = np.roll(V, -1, axis=0)
    lengths = np.hypot(*(W - V).T)
    for k in np.argsort(-lengths):
        m = 0.5 * (V[k] + W[k])
        others = np.arange(len(V)) != k
        d = float(point_segment_distance(m, V[others], W[others]).min())
        if d > 10 * TOL.on_segment:
            inward = -rot_cw(W[k] - V[k]) / lengths[k]
            return m + 0.5 * d * inward
    raise DegenerateRegionError("region is too thin to sample")


def classify_region(G: PolygonalSet, E: PolygonalSet) -> RegionSide:
    """Decide whether the enclosed region lies in ``E`` or in its complement."""
    x = interior_point(G)
    if E.distance_to_boundary(x) <= TOL.on_segment:
        raise DegenerateRegionError("sample point too close to the boundary")
    return RegionSide.inside_E if bool(E.contains(x)[0]) else RegionSide.outside_E


def orientation_side(arc: Arc) -> RegionSide:
    """Classification read off the orientation of ``arc + chord``.

    Material lies left of the arc, so the region is material exactly when
    the closed polygon (arc, then chord back) turns counter-clockwise.
    """
    return RegionSide.inside_E if signed_area(arc.points) > 0 else RegionSide.outside_E
