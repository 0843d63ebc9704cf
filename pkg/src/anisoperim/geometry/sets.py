"""Polygonal sets of finite perimeter and observation windows.

A :class:`PolygonalSet` is a finite union of simple, pairwise disjoint,
oriented loops. The material always lies to the *left* of the direction of
travel, so counter-clockwise loops bound material and clockwise loops are
holes. With that convention the outward unit normal of an edge ``d`` is
``rot_cw(d) / |d|`` for every loop.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .._config import TOL
from ._predicates import (
    clip_to_convex,
    clip_to_disk,
    cross,
    point_segment_distance,
    rot_cw,
    signed_area,
    winding_number,
)


class GeometryError(ValueError):
    """A polygonal set or window violates its invariants."""


def normalize_loop(V, tol=TOL) -> np.ndarray:
    """Merge near-duplicate vertices and drop collinear ones.

    Returns an array with fewer than three rows when the loop degenerates.
    """
    V = np.asarray(V, dtype=float)
    changed = True
    while changed and len(V) >= 3:
        changed = False
        nxt = np.roll(V, -1, axis=0)
        keep = np.hypot(*(nxt - V).T) > tol.merge
        if not keep.all():
            V = V[keep]
            changed = True
            continue
        prev = np.roll(V, 1, axis=0)
        u = V - prev
        w = nxt - V
        nu = np.hypot(*u.T)
        nw = np.hypot(*w.T)
        sin = cross(u, w) / (nu * nw)
        cos = np.einsum("ij,ij->i", u, w) / (nu * nw)
        straight = (np.abs(sin) <= tol.collinear) & (cos > 0)
        if straight.any():
            # drop one at a time from each run so long straight runs collapse cleanly
            idx = np.nonzero(straight)[0]
            drop = np.zeros(len(V), dtype=bool)
            drop[idx[0]] = True
            last = idx[0]
            for k in idx[1:]:
                if k != last + 1:
                    drop[k] = True
                    last = k
            V = V[~drop]
            changed = True
    return V


@dataclass(frozen=True, eq=False)
class PolygonalSet:
    """Bounded planar set whose boundary is a disjoint union of simple loops."""

    loops: tuple = field(default_factory=tuple)

    def __post_init__(self):
        loops = tuple(np.array(L, dtype=float, copy=True).reshape(-1, 2) for L in self.loops)
        for L in loops:
            L.setflags(write=False)
        object.__setattr__(self, "loops", loops)

    # -- construction ------------------------------------------------
    @classmethod
    def from_loops(cls, loops: Iterable, normalize: bool = True, validate: bool = True) -> "PolygonalSet":
        out = []
        for L in loops:
            L = np.asarray(L, dtype=float)
            if normalize:
                L = normalize_loop(L)
            if len(L) >= 3:
                out.append(L)
            elif not normalize:
                raise GeometryError("a loop needs at least three vertices")
        E = cls(tuple(out))
        if validate:
            E.validate()
        return E

    def normalized(self) -> "PolygonalSet":
        return PolygonalSet.from_loops(self.loops, normalize=True, validate=False)

    # -- basic queries -----------------------------------------------
    def __len__(self) -> int:
        return len(self.loops)

    @property
    def n_vertices(self) -> int:
        return sum(len(L) for L in self.loops)

    def edges(self):
        """All edges as arrays ``(P, Q, loop_id, edge_id)``."""
        if not self.loops:
            z = np.empty((0, 2))
            return z, z, np.empty(0, int), np.empty(0, int)
        P = np.concatenate(self.loops)
        Q = np.concatenate([np.roll(L, -1, axis=0) for L in self.loops])
        lid = np.concatenate([np.full(len(L), i) for i, L in enumerate(self.loops)])
        eid = np.concatenate([np.arange(len(L)) for L in self.loops])
        return P, Q, lid, eid

    def loop_areas(self) -> list[float]:
        return [signed_area(L) for L in self.loops]

    @property
    def area(self) -> float:
        return math.fsum(self.loop_areas())

    @property
    def perimeter(self) -> float:
        P, Q, _, _ = self.edges()
        return math.fsum(np.hypot(*(Q - P).T))

    def outward_normals(self) -> list[np.ndarray]:
        """Per-loop arrays of outward unit normals, one row per edge."""
        out = []
        for L in self.loops:
            d = np.roll(L, -1, axis=0) - L
            n = np.hypot(*d.T)
            if np.any(n <= 0):
                raise GeometryError("degenerate (zero-length) edge")
            out.append(rot_cw(d) / n[:, None])
        return out

    def winding(self, points) -> np.ndarray:
        P = np.atleast_2d(np.asarray(points, dtype=float))
        w = np.zeros(len(P), dtype=int)
        for L in self.loops:
            w += winding_number(P, L)
        return w

    def contains(self, points) -> np.ndarray:
        """Membership of points; points on the boundary are unspecified."""
        return self.winding(points) > 0

    def distance_to_boundary(self, point) -> float:
        P, Q, _, _ = self.edges()
        if len(P) == 0:
            return math.inf
        return float(point_segment_distance(np.asarray(point, float), P, Q).min())

    def bounds(self):
        V = np.concatenate(self.loops) if self.loops else np.zeros((1, 2))
        return V.min(axis=0), V.max(axis=0)

    # -- validation --------------------------------------------------
    def validate(self, tol=TOL) -> "PolygonalSet":
        """Check simplicity, disjointness, orientation and edge lengths."""
        for i, L in enumerate(self.loops):
            if len(L) < 3:
                raise GeometryError(f"loop {i} has fewer than three vertices")
            if not np.all(np.isfinite(L)):
                raise GeometryError(f"loop {i} has non-finite coordinates")
            d = np.roll(L, -1, axis=0) - L
            if np.any(np.hypot(*d.T) <= tol.merge):
                raise GeometryError(f"loop {i} has a zero-length edge")
        P, Q, lid, eid = self.edges()
        m = len(P)
        if m:
            bad = _find_intersecting_pair(P, Q, lid, eid, [len(L) for L in self.loops], tol.merge)
            if bad is not None:
                raise GeometryError(f"boundary is not simple: edges {bad[0]} and {bad[1]} intersect")
            # the winding number must be 1 just left of every edge and 0 just right
            mid = 0.5 * (P + Q)
            d = Q - P
            n = rot_cw(d) / np.hypot(*d.T)[:, None]
            h = np.hypot(*d.T) * 1e-6
            w_in = self.winding(mid - h[:, None] * n)
            w_out = self.winding(mid + h[:, None] * n)
            if np.any(w_in != 1) or np.any(w_out != 0):
                raise GeometryError("loop orientations are inconsistent with their nesting")
        return self

    def is_valid(self) -> bool:
        try:
            self.validate()
        except GeometryError:
            return False
        return True

    # -- misc --------------------------------------------------------
    def transformed(self, fn) -> "PolygonalSet":
        return PolygonalSet(tuple(fn(L) for L in self.loops))

    def to_json(self) -> dict:
        return {
            "loops": [L.tolist() for L in self.loops],
            "orientations": ["ccw" if a > 0 else "cw" for a in self.loop_areas()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PolygonalSet":
        if not isinstance(obj, dict) or "loops" not in obj:
            raise GeometryError("set JSON must be an object with a 'loops' key")
        loops = [np.asarray(L, dtype=float) for L in obj["loops"]]
        for L in loops:
            if L.ndim != 2 or L.shape[1] != 2:
                raise GeometryError("each loop must be a list of [x, y] pairs")
        orient = obj.get("orientations")
        if orient is not None:
            if len(orient) != len(loops):
                raise GeometryError("'orientations' must have one entry per loop")
            for i, (o, L) in enumerate(zip(orient, loops)):
                a = signed_area(L)
                if o not in ("ccw", "cw") or (o == "ccw") != (a > 0):
                    raise GeometryError(f"loop {i} vertex order does not match orientation {o!r}")
        return cls.from_loops(loops, normalize=False)

    def equals(self, other: "PolygonalSet", atol: float = 0.0) -> bool:
        if len(self.loops) != len(other.loops):
            return False
        return all(A.shape == B.shape and np.allclose(A, B, rtol=0, atol=atol)
                   for A, B in zip(self.loops, other.loops))


def _segments_intersect(P, Q, R, S, eps):
    """Pairwise test ``P[i]Q[i]`` vs ``R[j]S[j]`` (broadcast); touching counts."""
    d1 = Q - P
    d2 = S - R
    o1 = cross(d1, R - P)
    o2 = cross(d1, S - P)
    o3 = cross(d2, P - R)
    o4 = cross(d2, Q - R)
    proper = (o1 * o2 < 0) & (o3 * o4 < 0)
    # touching/collinear configurations fall back to distances
    dist = np.minimum.reduce([
        _pt_seg(R, P, Q), _pt_seg(S, P, Q), _pt_seg(P, R, S), _pt_seg(Q, R, S)
    ])
    return proper | (dist <= eps)


def _pt_seg(p, A, B):
    d = B - A
    dd = np.einsum("...j,...j->...", d, d)
    t = np.clip(np.einsum("...j,...j->...", p - A, d) / np.where(dd > 0, dd, 1.0), 0, 1)
    return np.linalg.norm(p - (A + t[..., None] * d), axis=-1)


def _find_intersecting_pair(P, Q, lid, eid, sizes, eps):
    m = len(P)
    i, j = np.triu_indices(m, k=1)
    same = lid[i] == lid[j]
    n = np.asarray(sizes)[lid[i]]
    adjacent = same & (((eid[j] - eid[i]) % n == 1) | ((eid[i] - eid[j]) % n == 1))
    cand = ~adjacent
    hit = np.zeros(len(i), dtype=bool)
    if cand.any():
        ii, jj = i[cand], j[cand]
        hit[cand] = _segments_intersect(P[ii], Q[ii], P[jj], Q[jj], eps)
    # adjacent edges may only share their common vertex: reject fold-backs
    if adjacent.any():
        ii, jj = i[adjacent], j[adjacent]
        a = Q[ii] - P[ii]
        b = Q[jj] - P[jj]
        sin = cross(a, b) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
        # orient the pair so that b follows a
        follows = np.all(np.isclose(Q[ii], P[jj]), axis=1)
        cos = np.where(follows, 1, -1) * np.einsum("ij,ij->i", a, b) / (
            np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
        # a triangle's edges are mutually adjacent; only check genuine fold-backs
        fold = (np.abs(sin) <= 1e-14) & (cos < 0)
        hit[adjacent] = fold
    k = np.nonzero(hit)[0]
    if len(k) == 0:
        return None
    return (int(lid[i[k[0]]]), int(eid[i[k[0]]])), (int(lid[j[k[0]]]), int(eid[j[k[0]]]))


@dataclass(frozen=True, eq=False)
class Window:
    """Open, bounded, convex observation window (a disk or a convex polygon)."""

    shape: str
    center: Optional[tuple] = None
    radius: Optional[float] = None
    vertices: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.shape == "disk":
            if self.radius is None or not self.radius > 0:
                raise GeometryError("disk window needs a positive radius")
            object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        elif self.shape == "polygon":
            V = np.asarray(self.vertices, dtype=float)
            if V.ndim != 2 or V.shape[1] != 2 or len(V) < 3:
                raise GeometryError("polygon window needs at least three vertices")
            if signed_area(V) < 0:
                V = V[::-1].copy()
            d = np.roll(V, -1, axis=0) - V
            turn = cross(d, np.roll(d, -1, axis=0))
            if np.any(turn < -1e-12 * np.abs(turn).max()) or signed_area(V) <= 0:
                raise GeometryError("polygon window must be convex with nonempty interior")
            V.setflags(write=False)
            object.__setattr__(self, "vertices", V)
        else:
            raise GeometryError(f"unknown window shape {self.shape!r}")

    @classmethod
    def disk(cls, center, radius) -> "Window":
        return cls("disk", center=tuple(center), radius=float(radius))

    @classmethod
    def polygon(cls, vertices) -> "Window":
        return cls("polygon", vertices=np.asarray(vertices, dtype=float))

    @classmethod
    def rectangle(cls, xmin, ymin, xmax, ymax) -> "Window":
        return cls.polygon([[xmin, ymin], [xmax, ymin], [xmax, ymax], [xmin, ymax]])

    def clip(self, A, B):
        """Parameter intervals of segments ``A[k]B[k]`` inside the closed window."""
        if self.shape == "disk":
            return clip_to_disk(A, B, self.center, self.radius)
        return clip_to_convex(A, B, self.vertices)

    def depth(self, points) -> np.ndarray:
        """Signed clearance to the window boundary (positive inside)."""
        P = np.atleast_2d(np.asarray(points, dtype=float))
        if self.shape == "disk":
            return self.radius - np.hypot(*(P - np.asarray(self.center)).T)
        V = self.vertices
        W = np.roll(V, -1, axis=0)
        e = W - V
        n = rot_cw(e) / np.hypot(*e.T)[:, None]
        return -np.max(np.einsum("pkj,kj->pk", P[:, None, :] - V[None], n), axis=1)

    def contains_strictly(self, points, margin: float = TOL.window_margin) -> np.ndarray:
        return self.depth(points) > margin

    def boundary_polygon(self, n: int = 256) -> np.ndarray:
        if self.shape == "disk":
            t = 2 * np.pi * np.arange(n) / n
            return np.column_stack([self.center[0] + self.radius * np.cos(t),
                                    self.center[1] + self.radius * np.sin(t)])
        return np.asarray(self.vertices)

    def to_json(self) -> dict:
        if self.shape == "disk":
            return {"shape": "disk", "center": list(self.center), "radius": self.radius}
        return {"shape": "polygon", "vertices": self.vertices.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Window":
        if not isinstance(obj, dict) or "shape" not in obj:
            raise GeometryError("window JSON must be an object with a 'shape' key")
        try:
            if obj["shape"] == "disk":
                return cls.disk(obj["center"], obj["radius"])
            if obj["shape"] == "polygon":
                return cls.polygon(obj["vertices"])
        except KeyError as exc:
            raise GeometryError(f"window JSON missing {exc.args[0]!r}") from None
        raise GeometryError(f"unknown window shape {obj['shape']!r}")


def square(x0=0.0, y0=0.0, side=1.0) -> PolygonalSet:
    return PolygonalSet.from_loops([[[x0, y0], [x0 + side, y0], [x0 + side, y0 + side], [x0, y0 + side]]])


def regular_polygon(n: int, radius=1.0, center=(0.0, 0.0), phase=0.0) -> np.ndarray:
    t = phase + 2 * np.pi * np.arange(n) / n
    return np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)])
