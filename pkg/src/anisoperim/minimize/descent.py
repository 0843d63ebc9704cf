"""Chord-replacement descent.

Each step picks an admissible boundary arc, i.e. a non-flat run of edges
whose enclosed region with its chord is compactly contained in the window
and free of other boundary, and replaces it by the chord. The energy drops
by exactly the arc's Jensen gap. Loops lying entirely inside the window
are removed (islands) or filled (holes) outright.

Arc endpoints are loop vertices. So that boundary crossing the window can
still be straightened right up to the window, every edge that crosses
``∂A`` gets an auxiliary vertex (an *anchor*) just inside the window.
"""
from __future__ import annotations

import csv
import heapq
import io
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .._config import TOL
from ..energy import jensen_gap, phi
from ..geometry import (
    Arc,
    DegenerateChordError,
    DegenerateRegionError,
    GeometryError,
    PolygonalSet,
    RegionSide,
    Window,
    classify_region,
    enclosed_region,
    insert_points,
    orientation_side,
    remove_loop,
    replace_arc,
    shorten_chord,
)
from ..geometry._predicates import point_segment_distance, rot_cw, winding_number
from ..norms import Integrand


class ReplacementError(RuntimeError):
    """A selected candidate failed its post-conditions; the step is aborted."""


@dataclass(frozen=True)
class DescentParams:
    """Knobs of :func:`descend`.

    ``gain_tol`` is relative: descent stops once the best available gain is
    below ``gain_tol`` times the current energy. ``anchor_offset`` is the
    distance (scene units) from the window boundary at which anchors are
    placed on crossing edges.
    """

    gain_tol: float = 1e-10
    flat_tol: float = 1e-6
    max_arc_edges: int = 16
    max_steps: int = 2000
    arc_enumeration: str = "all_subarcs"
    anchor_offset: float = 1e-10

    def __post_init__(self):
        if not self.gain_tol > 0:
            raise ValueError("gain_tol must be positive")
        if self.flat_tol < 0:
            raise ValueError("flat_tol must be non-negative")
        if self.max_arc_edges < 2:
            raise ValueError("max_arc_edges must be at least 2")
        if self.max_steps < 0:
            raise ValueError("max_steps must be non-negative")
        if self.arc_enumeration not in ("all_subarcs", "sliding_window"):
            raise ValueError("arc_enumeration must be 'all_subarcs' or 'sliding_window'")
        if not self.anchor_offset > 0:
            raise ValueError("anchor_offset must be positive")


@dataclass(frozen=True, eq=False)
class Candidate:
    """A competitor move on ``base`` (the anchored copy of the current set)."""

    kind: str  # "arc" or "loop"
    base: PolygonalSet
    gain: float
    loop: int
    arc: Optional[Arc] = None

    @property
    def chord(self):
        return None if self.arc is None else (self.arc.x1, self.arc.x2)


# -- anchors ----------------------------------------------------------------

def anchored(E: PolygonalSet, window: Window, offset: float) -> PolygonalSet:
    """Copy of ``E`` with anchor vertices on every edge crossing ``∂A``."""
    out = E
    for li, L in enumerate(E.loops):
        W = np.roll(L, -1, axis=0)
        inside = window.contains_strictly(L)
        nxt_inside = np.roll(inside, -1)
        crossing = ~(inside & nxt_inside)
        if not crossing.any():
            continue
        idx = np.nonzero(crossing)[0]
        t0, t1 = window.clip(L[idx], W[idx])
        extra = {}
        for j, a, b, s0, s1 in zip(idx, L[idx], W[idx], t0, t1):
            length = math.hypot(*(b - a))
            span = (s1 - s0) * length
            if span <= 0:
                continue
            pts = []
            if not inside[j]:
                p = _anchor(a, b, s0, +1, span, length, offset, window)
                if p is not None:
                    pts.append(p)
            if not nxt_inside[j]:
                p = _anchor(a, b, s1, -1, span, length, offset, window)
                if p is not None:
                    pts.append(p)
            if len(pts) == 2 and np.hypot(*(pts[1] - pts[0])) <= TOL.merge:
                pts = pts[:1]
            if pts:
                extra[int(j)] = pts
        if extra:
            out = insert_points(out, li, extra)
    return out


def _anchor(a, b, s_edge, direction, span, length, offset, window):
    off = offset
    while 2 * off < span:
        t = s_edge + direction * off / length
        p = a + t * (b - a)
        if window.contains_strictly(p)[0]:
            if min(np.hypot(*(p - a)), np.hypot(*(p - b))) > TOL.merge:
                return p
            return None
        off *= 10
    return None


# -- enumeration ------------------------------------------------------------

def _loop_tables(L, window, integrand, K):
    n = len(L)
    idx = (np.arange(n)[:, None] + np.arange(K + 1)[None, :]) % n
    inside = window.contains_strictly(L)
    all_in = np.logical_and.accumulate(inside[idx], axis=1)
    d = np.roll(L, -1, axis=0) - L
    e = integrand(rot_cw(d))
    cum = np.concatenate([np.zeros((n, 1)), np.cumsum(e[idx[:, :K]], axis=1)], axis=1)
    chord = L[idx] - L[:, None, :]
    ce = np.zeros((n, K + 1))
    ce[:, 1:] = integrand(rot_cw(chord[:, 1:].reshape(-1, 2))).reshape(n, K)
    gains = cum - ce
    ang = np.arctan2(d[:, 1], d[:, 0])
    rel = (ang[idx[:, :K]] - ang[:, None] + np.pi) % (2 * np.pi) - np.pi
    spread = np.zeros((n, K + 1))
    spread[:, 1:] = np.maximum.accumulate(rel, axis=1) - np.minimum.accumulate(rel, axis=1)
    return all_in, gains, spread


def _arc_lengths(n, p: DescentParams):
    K = min(p.max_arc_edges, n - 1)
    if p.arc_enumeration == "sliding_window":
        return K, [K]
    return K, list(range(2, K + 1))


def _region_is_clear(E: PolygonalSet, arc: Arc) -> bool:
    """No boundary component other than the arc reaches into the region."""
    G = arc.points
    GW = np.roll(G, -1, axis=0)
    probes = []
    for li, L in enumerate(E.loops):
        if li != arc.loop:
            probes.append(L[0])
            continue
        n = len(L)
        rest = L[(arc.last_edge + 1 + np.arange(n - ((arc.last_edge - arc.first_edge) % n + 1) + 1)) % n]
        far = np.minimum(np.hypot(*(rest - arc.x1).T), np.hypot(*(rest - arc.x2).T)) > TOL.on_segment
        if far.any():
            probes.append(rest[np.argmax(far)])
    if not probes:
        return True
    probes = np.asarray(probes)
    if np.any(winding_number(probes, G) != 0):
        return False
    dist = np.array([point_segment_distance(q, G, GW).min() for q in probes])
    return bool(np.all(dist > TOL.on_segment))


def _island_candidates(E, window, integrand):
    out = []
    for li, L in enumerate(E.loops):
        if not np.all(window.contains_strictly(L)):
            continue
        others = [M[0] for j, M in enumerate(E.loops) if j != li]
        if others and np.any(winding_number(np.asarray(others), L) != 0):
            continue
        d = np.roll(L, -1, axis=0) - L
        out.append((math.fsum(integrand(rot_cw(d))), li))
    return out


_UNCHECKED, _FINAL, _CUT = 0, 1, 2
MAX_CORNER_HALVINGS = 30


def _corner_arc(E: PolygonalSet, loop: int, i: int, h: float) -> Arc:
    """Arc cutting the corner at vertex ``i+1`` at fraction ``h`` of both edges."""
    L = E.loops[loop]
    n = len(L)
    u, v, w = L[i % n], L[(i + 1) % n], L[(i + 2) % n]
    pts = np.array([v + h * (u - v), v, v + h * (w - v)])
    return Arc(loop, i % n, (i + 1) % n, pts)


def find_replaceable_arc(E: PolygonalSet, window: Window, integrand: Integrand,
                         params: DescentParams = DescentParams(),
                         min_gain: Optional[float] = None) -> Optional[Candidate]:
    """Best admissible move with gain above ``min_gain``, or ``None``.

    ``min_gain`` defaults to ``params.gain_tol`` times the current energy.

    Candidates are ranked by gain, then fewer arc edges, then lower loop and
    start index. Admissibility (non-flat, window containment, chord meeting
    the boundary only at its ends after shortening, region free of other
    boundary) is checked lazily in rank order, so only the top of the list
    pays for the chord intersection tests.

    A two-edge arc that fails the checks is retried as a corner cut: the
    chord then joins interior points of the two edges at fraction ``h`` from
    the corner, with ``h`` halved until the cut is admissible.
    """
    if min_gain is None:
        min_gain = params.gain_tol * phi(E, window, integrand).total
    base = anchored(E, window, params.anchor_offset)
    heap = []
    seq = 0
    for gain, li in _island_candidates(base, window, integrand):
        if gain > min_gain:
            heap.append((-gain, 0, li, -1, seq, _FINAL, None))
            seq += 1
    for li, L in enumerate(base.loops):
        n = len(L)
        if n < 3:
            continue
        K, ks = _arc_lengths(n, params)
        if K < 2:
            continue
        all_in, gains, spread = _loop_tables(L, window, integrand, K)
        for k in ks:
            ok = all_in[:, k] & (spread[:, k] > params.flat_tol) & (gains[:, k] > min_gain)
            for i in np.nonzero(ok)[0]:
                heap.append((-float(gains[i, k]), k, li, int(i), seq, _UNCHECKED, None))
                seq += 1
        if 2 not in ks:
            # sliding windows still need corners for the cut fallback
            ok = all_in[:, 2] & (spread[:, 2] > params.flat_tol) & (0.5 * gains[:, 2] > min_gain)
            for i in np.nonzero(ok)[0]:
                heap.append((-0.5 * float(gains[i, 2]), 2, li, int(i), seq, _CUT, 0.5))
                seq += 1
    heapq.heapify(heap)

    def push(gain, k, li, i, state, payload):
        nonlocal seq
        heapq.heappush(heap, (-gain, k, li, i, seq, state, payload))
        seq += 1

    while heap:
        neg_gain, k, li, i, _, state, payload = heapq.heappop(heap)
        if state == _FINAL:
            if payload is None:
                return Candidate("loop", base, -neg_gain, li)
            return Candidate("arc", base, -neg_gain, li, payload)
        if state == _CUT:
            arc = _corner_arc(base, li, i, payload)
            try:
                clean = shorten_chord(arc, base)
            except DegenerateChordError:
                clean = None
            if clean is not None and clean[0] is arc and _region_is_clear(base, arc):
                return Candidate("arc", base, jensen_gap(arc, integrand), li, arc)
            if payload > 0.5 ** MAX_CORNER_HALVINGS and -0.5 * neg_gain > min_gain:
                push(-0.5 * neg_gain, 2, li, i, _CUT, 0.5 * payload)
            continue
        arc = Arc.on_loop(base, li, i, k)
        try:
            res = shorten_chord(arc, base)
        except DegenerateChordError:
            res = None
        if res is not None and res[0] is arc and _region_is_clear(base, arc):
            return Candidate("arc", base, -neg_gain, li, arc)
        if k == 2 and -0.5 * neg_gain > min_gain:
            push(-0.5 * neg_gain, 2, li, i, _CUT, 0.5)
        if res is None or res[0] is arc:
            continue
        new_arc = res[0]
        if new_arc.n_edges < 2 or new_arc.spread() <= params.flat_tol:
            continue
        if not np.all(window.contains_strictly(new_arc.points)):
            continue
        g = jensen_gap(new_arc, integrand)
        if g > min_gain and _region_is_clear(base, new_arc):
            push(g, new_arc.n_edges, li, i, _FINAL, new_arc)
    return None


def admissible_arcs(E: PolygonalSet, window: Window, params: DescentParams = DescentParams()):
    """Yield every admissible arc (after shortening), flat or not.

    Used as a diagnostic: at a fixed point of descent every arc yielded
    here should be flat.
    """
    base = anchored(E, window, params.anchor_offset)
    for li, L in enumerate(base.loops):
        n = len(L)
        K, ks = _arc_lengths(n, params)
        if K < 2:
            continue
        inside = window.contains_strictly(L)
        for k in ks:
            for i in range(n):
                if not inside[(i + np.arange(k + 1)) % n].all():
                    continue
                arc = Arc.on_loop(base, li, i, k)
                try:
                    res = shorten_chord(arc, base)
                except DegenerateChordError:
                    continue
                if res is None or res[0].n_edges < 2:
                    continue
                if _region_is_clear(base, res[0]):
                    yield base, res[0]


# -- application ------------------------------------------------------------

def apply_replacement(cand: Candidate, window: Optional[Window] = None) -> tuple[PolygonalSet, dict]:
    """Build the competitor for ``cand`` and check its post-conditions.

    Returns ``(F, info)`` where ``info`` records the region side, the area
    of the modified region and its vertices.
    """
    E = cand.base
    if cand.kind == "loop":
        L = E.loops[cand.loop]
        area = float(abs(0.5 * np.sum(L[:, 0] * np.roll(L[:, 1], -1) - np.roll(L[:, 0], -1) * L[:, 1])))
        side = RegionSide.inside_E if PolygonalSet((L,)).area > 0 else RegionSide.outside_E
        try:
            F = remove_loop(E, cand.loop)
        except GeometryError as exc:
            raise ReplacementError(f"loop removal produced an invalid set: {exc}") from exc
        region = L
    else:
        arc = cand.arc
        try:
            G = enclosed_region(arc)
            side = classify_region(G, E)
        except DegenerateRegionError as exc:
            raise ReplacementError(str(exc)) from exc
        if side != orientation_side(arc):
            raise ReplacementError("point-in-set and orientation classifications disagree")
        try:
            F = replace_arc(E, arc)
        except GeometryError as exc:
            raise ReplacementError(f"chord replacement produced an invalid set: {exc}") from exc
        area = G.area
        region = G.loops[0]
        expected = E.area - area if side == RegionSide.inside_E else E.area + area
        if abs(F.area - expected) > 1e-9 * max(1.0, abs(E.area)):
            raise ReplacementError("area bookkeeping failed after chord replacement")
    if window is not None and not np.all(window.contains_strictly(region)):
        raise ReplacementError("modified region is not compactly contained in the window")
    return F, {"side": side.value, "region_area": area, "region": region}


# -- descent ----------------------------------------------------------------

class Termination(str, Enum):
    converged_flat = "converged_flat"
    gain_below_tol = "gain_below_tol"
    max_steps = "max_steps"


@dataclass
class Step:
    kind: str
    arc_start: list
    arc_end: list
    chord_start: list
    chord_end: list
    n_arc_edges: int
    region_side: str
    region_area: float
    energy_before: float
    energy_after: float
    gain: float


@dataclass
class DescentTrace:
    steps: list = field(default_factory=list)
    termination: Termination = Termination.converged_flat
    final_energy: float = 0.0
    initial_energy: float = 0.0

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    @property
    def energies(self) -> list:
        if not self.steps:
            return [self.initial_energy]
        return [self.steps[0].energy_before] + [s.energy_after for s in self.steps]

    def to_json(self) -> dict:
        return {
            "termination": self.termination.value,
            "initial_energy": self.initial_energy,
            "final_energy": self.final_energy,
            "n_steps": self.n_steps,
            "steps": [asdict(s) for s in self.steps],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["step", "kind", "n_arc_edges", "region_side", "region_area",
                "energy_before", "energy_after", "gain",
                "chord_start_x", "chord_start_y", "chord_end_x", "chord_end_y"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for k, s in enumerate(self.steps):
            w.writerow([k, s.kind, s.n_arc_edges, s.region_side, repr(s.region_area),
                        repr(s.energy_before), repr(s.energy_after), repr(s.gain),
                        *(repr(float(c)) for c in (*s.chord_start, *s.chord_end))])
        return buf.getvalue()


def descend(E0: PolygonalSet, window: Window, integrand: Integrand,
            params: DescentParams = DescentParams(), callback=None):
    """Repeat chord replacement until no admissible move gains enough.

    Returns ``(E_final, trace)``. ``callback(step_index, E, candidate)``
    is invoked before each replacement when given.
    """
    E = E0
    current = phi(E, window, integrand).total
    trace = DescentTrace(initial_energy=current)
    for step in range(params.max_steps + 1):
        threshold = params.gain_tol * current
        cand = find_replaceable_arc(E, window, integrand, params, min_gain=threshold)
        if cand is None:
            any_left = find_replaceable_arc(E, window, integrand, params, min_gain=-math.inf)
            trace.termination = (Termination.gain_below_tol if any_left is not None
                                 else Termination.converged_flat)
            break
        if step == params.max_steps:
            trace.termination = Termination.max_steps
            break
        if callback is not None:
            callback(step, E, cand)
        F, info = apply_replacement(cand, window)
        after = phi(F, window, integrand).total
        if cand.kind == "loop":
            a = b = cand.base.loops[cand.loop][0]
            n_edges = len(cand.base.loops[cand.loop])
        else:
            a, b = cand.arc.x1, cand.arc.x2
            n_edges = cand.arc.n_edges
        trace.steps.append(Step(
            kind=cand.kind,
            arc_start=a.tolist(), arc_end=b.tolist(),
            chord_start=a.tolist(), chord_end=b.tolist(),
            n_arc_edges=int(n_edges),
            region_side=info["side"], region_area=float(info["region_area"]),
            energy_before=current, energy_after=after, gain=cand.gain,
        ))
        E, current = F, after
    trace.final_energy = current
    return E, trace
