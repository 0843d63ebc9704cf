"""Diagnostics and brute-force oracles.

These routines are deliberately written independently of the descent
machinery (plain loops, no shared enumeration code) so that tests can use
them to cross-check it.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
import shapely

from .energy import phi
from .geometry import GeometryError, PolygonalSet, Window, to_shapely
from .geometry._predicates import clip_to_disk
from .norms import Integrand


@dataclass
class FlatnessReport:
    """Segment decomposition of every loop.

    ``runs[l]`` lists ``(first_edge, n_edges)`` for the maximal runs of
    loop ``l``; ``per_loop_spread[l]`` is the largest total turning inside
    one run and ``max_sagitta`` the largest distance of a run vertex from
    the segment joining the run's ends.
    """

    tol: float
    runs: list = field(default_factory=list)
    per_loop_spread: list = field(default_factory=list)
    max_spread: float = 0.0
    max_sagitta: float = 0.0

    @property
    def is_union_of_segments(self) -> bool:
        return self.max_spread <= self.tol

    def to_json(self) -> dict:
        out = asdict(self)
        out["is_union_of_segments"] = self.is_union_of_segments
        return out


def _turns(L: np.ndarray) -> np.ndarray:
    """Signed turning angle from edge ``i`` to edge ``i+1``."""
    d = np.roll(L, -1, axis=0) - L
    ang = np.arctan2(d[:, 1], d[:, 0])
    return (np.roll(ang, -1) - ang + math.pi) % (2 * math.pi) - math.pi


def flatness(E: PolygonalSet, tol: float) -> FlatnessReport:
    """Split each loop into maximal runs of edges joined at turns ``≤ tol``."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    rep = FlatnessReport(tol=float(tol))
    for L in E.loops:
        n = len(L)
        turns = _turns(L)
        breaks = [i for i in range(n) if abs(turns[i]) > tol]
        runs, spreads = [], []
        if not breaks:
            runs.append((0, n))
            spreads.append(float(np.abs(turns).sum()))
        else:
            for a, b in zip(breaks, breaks[1:] + [breaks[0] + n]):
                first, m = (a + 1) % n, b - a
                inner = [turns[(first + j) % n] for j in range(m - 1)]
                spreads.append(float(sum(abs(t) for t in inner)))
                runs.append((first, m))
        sag = 0.0
        for first, m in runs:
            pts = L[(first + np.arange(m + 1)) % n]
            p, q = pts[0], pts[-1]
            d = q - p
            ln = math.hypot(*d)
            if ln == 0:
                sag = max(sag, float(np.hypot(*(pts - p).T).max()))
            else:
                h = np.abs(d[0] * (pts[:, 1] - p[1]) - d[1] * (pts[:, 0] - p[0])).max() / ln
                sag = max(sag, float(h))
        rep.runs.append(runs)
        rep.per_loop_spread.append(max(spreads))
        rep.max_sagitta = max(rep.max_sagitta, sag)
    rep.max_spread = max(rep.per_loop_spread, default=0.0)
    return rep


def replaceable_spread(E: PolygonalSet, window: Window, anchor_offset: float = 1e-10,
                       max_arc_edges: int = 16) -> float:
    """Largest normal spread over arcs that descent could still replace."""
    from .minimize.descent import DescentParams, admissible_arcs

    p = DescentParams(max_arc_edges=max_arc_edges, anchor_offset=anchor_offset)
    return max((arc.spread() for _, arc in admissible_arcs(E, window, p)), default=0.0)


def interior_corner_turn(E: PolygonalSet, window: Window, anchor_offset: float = 1e-10) -> float:
    """Largest turning angle at a vertex whose two edges lie strictly in the window.

    Edges crossing the window boundary are first split just inside it, so
    this measures every corner of ``∂E`` that lies in the window.
    """
    worst = 0.0
    for L in E.loops:
        pts = []
        ins = window.contains_strictly(L)
        for a, b, ia, ib in zip(L, np.roll(L, -1, axis=0), ins, np.roll(ins, -1)):
            pts.append(a)
            t0, t1 = window.clip(a[None], b[None])
            ln = math.hypot(*(b - a))
            ts = ([] if ia else [t0[0] + anchor_offset / ln]) + ([] if ib else [t1[0] - anchor_offset / ln])
            pts.extend(a + t * (b - a) for t in ts if t0[0] < t < t1[0])
        V = np.array(pts)
        keep = np.hypot(*(np.roll(V, -1, axis=0) - V).T) > 1e-12
        V = V[keep]
        inside = window.contains_strictly(V)
        turns = _turns(V)
        n = len(V)
        for i in range(n):
            if inside[i] and inside[(i + 1) % n] and inside[(i + 2) % n]:
                worst = max(worst, abs(float(turns[i])))
    return worst


def density_ratio(E: PolygonalSet, x, r: float) -> float:
    """``H¹(∂E ∩ B(x, r)) / r`` by exact segment/disk clipping."""
    x = np.asarray(x, dtype=float)
    if not r > 0:
        raise ValueError("r must be positive")
    if E.distance_to_boundary(x) > 1e-9:
        raise ValueError("x is not on the boundary")
    P, Q, _, _ = E.edges()
    t0, t1 = clip_to_disk(P, Q, x, r)
    return math.fsum((t1 - t0) * np.hypot(*(Q - P).T)) / r


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_open_segment(p, a, b, eps) -> bool:
    ln = math.hypot(b[0] - a[0], b[1] - a[1])
    if ln == 0 or abs(_orient(a, b, p)) > eps * ln:
        return False
    t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / (ln * ln)
    return eps / ln < t < 1 - eps / ln


def detect_crossings(E: PolygonalSet, eps: float = 1e-12) -> list:
    """Points where boundary edges cross or touch away from shared vertices.

    Plain all-pairs scan; works on invalid input as well.
    """
    edges = []
    for li, L in enumerate(E.loops):
        n = len(L)
        for i in range(n):
            edges.append((li, i, n, tuple(L[i]), tuple(L[(i + 1) % n])))
    found = []
    for (la, ia, na, a0, a1), (lb, ib, nb, b0, b1) in itertools.combinations(edges, 2):
        adjacent = la == lb and ((ia + 1) % na == ib or (ib + 1) % nb == ia)
        o1, o2 = _orient(a0, a1, b0), _orient(a0, a1, b1)
        o3, o4 = _orient(b0, b1, a0), _orient(b0, b1, a1)
        if o1 * o2 < 0 and o3 * o4 < 0:
            t = o3 / (o3 - o4)
            found.append((a0[0] + t * (a1[0] - a0[0]), a0[1] + t * (a1[1] - a0[1])))
            continue
        touch = next((p for p, (s0, s1) in ((b0, (a0, a1)), (b1, (a0, a1)), (a0, (b0, b1)), (a1, (b0, b1)))
                      if _on_open_segment(p, s0, s1, eps)), None)
        if touch is None and not adjacent:
            # distinct edges sharing a vertex: a pinch point or loops touching
            touch = next((p for p in (a0, a1) if p in (b0, b1)), None)
        if touch is not None:
            found.append(tuple(touch))
    uniq = []
    for p in found:
        if not any(abs(p[0] - q[0]) <= eps and abs(p[1] - q[1]) <= eps for q in uniq):
            uniq.append(p)
    return [np.array(p) for p in uniq]


@dataclass
class BruteForceResult:
    energy: float
    best: PolygonalSet
    n_competitors: int


MAX_INSIDE_VERTICES = 8
MAX_VERTEX_BUDGET = 6


def _pin_crossings(E: PolygonalSet, window: Window, offset: float) -> PolygonalSet:
    loops = []
    for L in E.loops:
        rows = []
        inside = window.contains_strictly(L)
        n = len(L)
        for i in range(n):
            a, b = L[i], L[(i + 1) % n]
            rows.append(a)
            if inside[i] and inside[(i + 1) % n]:
                continue
            t0, t1 = window.clip(a[None], b[None])
            t0, t1 = float(t0[0]), float(t1[0])
            ln = math.hypot(*(b - a))
            extra = []
            if not inside[i] and t1 > t0:
                extra.append(t0 + offset / ln)
            if not inside[(i + 1) % n] and t1 > t0:
                extra.append(t1 - offset / ln)
            for t in sorted(extra):
                p = a + t * (b - a)
                if t0 < t < t1 and window.contains_strictly(p)[0]:
                    rows.append(p)
        loops.append(np.array(rows))
    return PolygonalSet(tuple(loops))


def brute_force_search(E: PolygonalSet, window: Window, integrand: Integrand,
                       vertex_budget: int = 4, pin_offset: float = 1e-10) -> BruteForceResult:
    """Exhaustive search over chord competitors of a tiny instance.

    Every crossing edge is pinned just inside the window. Competitors
    delete up to ``vertex_budget`` of the original vertices lying strictly
    inside the window (joining the neighbours by chords) and optionally
    drop whole loops lying inside the window. A competitor counts when it
    is a valid set and differs from ``E`` only on a compact subset of the
    window.
    """
    if not 0 <= vertex_budget <= MAX_VERTEX_BUDGET:
        raise ValueError(f"vertex_budget must be in [0, {MAX_VERTEX_BUDGET}]")
    inside = [(li, i) for li, L in enumerate(E.loops)
              for i, ok in enumerate(window.contains_strictly(L)) if ok]
    if len(inside) > MAX_INSIDE_VERTICES:
        raise ValueError(f"more than {MAX_INSIDE_VERTICES} vertices inside the window")
    base = _pin_crossings(E, window, pin_offset)
    # map original inside vertices to rows of the pinned loops
    rows = {}
    for li, L in enumerate(E.loops):
        B = base.loops[li]
        j = 0
        for i, v in enumerate(L):
            while not np.array_equal(B[j], v):
                j += 1
            rows[(li, i)] = j
    removable_loops = [li for li, L in enumerate(E.loops) if window.contains_strictly(L).all()]
    E_geom = to_shapely(E)
    best_e = phi(E, window, integrand).total
    best = E
    count = 0
    for k in range(1, vertex_budget + 1):
        for subset in itertools.combinations(inside, k):
            count += 1
            drop = {}
            for li, i in subset:
                drop.setdefault(li, set()).add(rows[(li, i)])
            loops = [np.delete(B, sorted(drop.get(li, ())), axis=0) for li, B in enumerate(base.loops)]
            cand = _admissible(loops, E_geom, window)
            if cand is not None:
                e = phi(cand, window, integrand).total
                if e < best_e:
                    best_e, best = e, cand
    for k in range(1, len(removable_loops) + 1):
        for subset in itertools.combinations(removable_loops, k):
            count += 1
            loops = [B for li, B in enumerate(base.loops) if li not in subset]
            cand = _admissible(loops, E_geom, window)
            if cand is not None:
                e = phi(cand, window, integrand).total
                if e < best_e:
                    best_e, best = e, cand
    return BruteForceResult(energy=best_e, best=best, n_competitors=count)


def _admissible(loops, E_geom, window: Window) -> Optional[PolygonalSet]:
    if any(len(L) < 3 for L in loops):
        return None
    try:
        F = PolygonalSet.from_loops(loops, normalize=True, validate=True)
    except GeometryError:
        return None
    diff = shapely.symmetric_difference(E_geom, to_shapely(F))
    if diff.area == 0:
        return F
    coords = shapely.get_coordinates(diff)
    if not np.all(window.contains_strictly(coords)):
        return None
    return F


def brute_force_best_competitor(E: PolygonalSet, window: Window, integrand: Integrand,
                                vertex_budget: int = 4) -> float:
    """Smallest windowed energy over the exhaustive competitor class."""
    return brute_force_search(E, window, integrand, vertex_budget).energy
