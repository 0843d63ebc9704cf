"""Anisotropic perimeter of polygonal sets, and arc/chord energies."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import Arc, PolygonalSet, Window, net_normal
from .geometry._predicates import rot_cw
from .norms import Integrand, IntegrandError


@dataclass(frozen=True, eq=False)
class EnergyBreakdown:
    """Per-edge contributions to the windowed energy.

    ``edge_ids`` holds ``(loop, edge)`` pairs; the remaining arrays are
    aligned with it.
    """

    total: float
    per_loop: tuple
    edge_ids: tuple
    normals: np.ndarray
    lengths: np.ndarray
    values: np.ndarray
    contributions: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["loop", "edge", "normal_x", "normal_y", "length", "value", "contribution"])
        for (li, ei), n, L, v, c in zip(self.edge_ids, self.normals, self.lengths,
                                        self.values, self.contributions):
            w.writerow([li, ei, repr(float(n[0])), repr(float(n[1])), repr(float(L)),
                        repr(float(v)), repr(float(c))])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"total": self.total, "per_loop": list(self.per_loop)}


def phi(E: PolygonalSet, window: Optional[Window], integrand: Integrand) -> EnergyBreakdown:
    """``Φ(E; A)``: integrand of the outward normal over ``∂E ∩ A``.

    Edges are clipped to the closed window, so edges lying on ``∂A`` count
    in full. ``window=None`` means the whole plane.
    """
    P, Q, lid, eid = E.edges()
    if len(P) == 0:
        z = np.empty(0)
        return EnergyBreakdown(0.0, (), (), np.empty((0, 2)), z, z, z)
    d = Q - P
    full = np.hypot(d[:, 0], d[:, 1])
    normals = rot_cw(d) / full[:, None]
    if window is None:
        lengths = full
    else:
        t0, t1 = window.clip(P, Q)
        lengths = (t1 - t0) * full
    values = integrand(normals)
    contrib = values * lengths
    per_loop = tuple(math.fsum(contrib[lid == i]) for i in range(len(E.loops)))
    return EnergyBreakdown(
        total=math.fsum(contrib),
        per_loop=per_loop,
        edge_ids=tuple(zip(lid.tolist(), eid.tolist())),
        normals=normals,
        lengths=lengths,
        values=values,
        contributions=contrib,
    )


def energy(E: PolygonalSet, window: Optional[Window], integrand: Integrand) -> float:
    return phi(E, window, integrand).total


def arc_energy(arc: Arc, integrand: Integrand) -> float:
    """Sum over the arc's edges of integrand(normal) times length."""
    return math.fsum(integrand(rot_cw(arc.displacements)))


def chord_energy(arc: Arc, integrand: Integrand) -> float:
    """Energy of the straight chord, read off the arc's net normal.

    The net normal of the arc equals the chord's length times its constant
    normal, so by homogeneity the chord costs ``integrand(net_normal)``.
    """
    v = net_normal(arc)
    if not np.any(v):
        raise IntegrandError("closed arc: the chord has zero length")
    return float(integrand(v))


def segment_energy(x1, x2, integrand: Integrand) -> float:
    """Energy of the segment ``x1 -> x2`` with material on its left."""
    d = np.asarray(x2, float) - np.asarray(x1, float)
    L = math.hypot(*d)
    return float(integrand(rot_cw(d) / L)) * L


def jensen_gap(arc: Arc, integrand: Integrand) -> float:
    """``arc_energy - chord_energy``; non-negative for convex integrands."""
    return arc_energy(arc, integrand) - chord_energy(arc, integrand)
