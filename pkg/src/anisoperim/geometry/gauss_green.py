"""Length bookkeeping for boundary measures under set operations.

For polygonal sets the Gauss-Green measure of ``E`` is a finite sum of
oriented segments ``ν_E H¹⌞s``. Splitting every edge of ``E`` at its
contacts with ``∂F`` classifies each piece as lying in ``F⁽⁰⁾``, ``F⁽¹⁾``
or on ``∂F`` with equal or opposite normal. The formulas for
``μ_{E \\ F}`` and ``∂*(E ∪ F)`` are then checked against boundaries of
the boolean results computed independently by shapely, comparing total
variation and vector moments ``∫ φ dμ`` for quadratic test functions ``φ``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import shapely
from shapely.geometry import LineString, MultiLineString

from .._config import TOL
from ._predicates import cross, rot_cw
from .booleans import from_shapely, to_shapely
from .sets import PolygonalSet, Window

# 3-point Gauss-Legendre on [0, 1]: exact for the quadratic test functions
_GL_X = 0.5 + 0.5 * np.array([-math.sqrt(3 / 5), 0.0, math.sqrt(3 / 5)])
_GL_W = np.array([5 / 18, 8 / 18, 5 / 18])


@dataclass
class Pieces:
    """Oriented boundary segments ``(start, end, normal)``."""

    a: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    b: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    normal: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))

    @property
    def length(self) -> float:
        return math.fsum(np.hypot(*(self.b - self.a).T))

    def moments(self, sign: float = 1.0) -> np.ndarray:
        """``∫ φ ν dH¹`` for ``φ ∈ {1, x, y, x², xy, y²}`` (12 numbers)."""
        if len(self.a) == 0:
            return np.zeros(12)
        L = np.hypot(*(self.b - self.a).T)
        X = self.a[:, None, :] + _GL_X[None, :, None] * (self.b - self.a)[:, None, :]
        x, y = X[..., 0], X[..., 1]
        phis = np.stack([np.ones_like(x), x, y, x * x, x * y, y * y])  # (6, m, 3)
        integ = (phis * _GL_W).sum(axis=-1) * L  # (6, m)
        return sign * np.concatenate([integ @ self.normal[:, 0], integ @ self.normal[:, 1]])

    def __add__(self, other: "Pieces") -> "Pieces":
        return Pieces(np.vstack([self.a, other.a]), np.vstack([self.b, other.b]),
                      np.vstack([self.normal, other.normal]))

    def clipped(self, window: Optional[Window]) -> "Pieces":
        if window is None or len(self.a) == 0:
            return self
        t0, t1 = window.clip(self.a, self.b)
        keep = t1 > t0
        d = self.b - self.a
        return Pieces(self.a[keep] + t0[keep, None] * d[keep],
                      self.a[keep] + t1[keep, None] * d[keep], self.normal[keep])


def boundary_pieces(E: PolygonalSet) -> Pieces:
    P, Q, _, _ = E.edges()
    if len(P) == 0:
        return Pieces()
    d = Q - P
    return Pieces(P.copy(), Q.copy(), rot_cw(d) / np.hypot(*d.T)[:, None])


def classify_boundary(E: PolygonalSet, F: PolygonalSet, eps: float = TOL.on_segment) -> dict:
    """Split ``∂E`` against ``F`` into the four classes.

    Keys: ``"F0"`` (outside F), ``"F1"`` (inside F), ``"same"`` (on ∂F with
    ``ν_E = ν_F``) and ``"opposite"`` (on ∂F with ``ν_E = -ν_F``).
    """
    out = {k: ([], [], []) for k in ("F0", "F1", "same", "opposite")}
    PE, QE, _, _ = E.edges()
    PF, QF, _, _ = F.edges()
    dF = QF - PF
    lenF = np.hypot(*dF.T)
    nF = rot_cw(dF) / lenF[:, None] if len(PF) else np.empty((0, 2))
    for a, b in zip(PE, QE):
        d = b - a
        L = math.hypot(*d)
        u = d / L
        nE = rot_cw(d) / L
        params = [0.0, 1.0]
        if len(PF):
            sp = (PF - a) @ u
            sq = (QF - a) @ u
            hp = cross(u, PF - a)
            hq = cross(u, QF - a)
            for sv, hv in ((sp, hp), (sq, hq)):
                touch = (np.abs(hv) <= eps) & (sv > 0) & (sv < L)
                params.extend((sv[touch] / L).tolist())
            cr = (np.sign(hp) * np.sign(hq) < 0) & (np.abs(hp) > eps) & (np.abs(hq) > eps)
            if cr.any():
                t = hp[cr] / (hp[cr] - hq[cr])
                s = (sp[cr] + t * (sq[cr] - sp[cr])) / L
                params.extend(s[(s > 0) & (s < 1)].tolist())
        params = np.unique(np.clip(params, 0.0, 1.0))
        for s0, s1 in zip(params[:-1], params[1:]):
            if (s1 - s0) * L <= eps:
                continue
            p0 = a + s0 * d
            p1 = a + s1 * d
            mid = 0.5 * (p0 + p1)
            key = None
            if len(PF):
                # is the fragment carried by an edge of F?
                h0 = np.abs(cross(dF, p0 - PF)) / lenF
                h1 = np.abs(cross(dF, p1 - PF)) / lenF
                tm = np.einsum("ij,ij->i", mid - PF, dF) / lenF**2
                on = (h0 <= eps) & (h1 <= eps) & (tm > 0) & (tm < 1)
                if on.any():
                    k = int(np.nonzero(on)[0][0])
                    key = "same" if float(nF[k] @ nE) > 0 else "opposite"
            if key is None:
                key = "F1" if bool(F.contains(mid)[0]) else "F0"
            out[key][0].append(p0)
            out[key][1].append(p1)
            out[key][2].append(nE)
    return {k: Pieces(np.array(v[0]).reshape(-1, 2), np.array(v[1]).reshape(-1, 2),
                      np.array(v[2]).reshape(-1, 2)) for k, v in out.items()}


@dataclass
class GaussGreenReport:
    terms: dict
    residuals: dict
    scale: float
    tol: float

    @property
    def passes(self) -> bool:
        return all(r <= self.tol * max(self.scale, 1.0) for r in self.residuals.values())

    def to_json(self) -> dict:
        return {"terms": self.terms, "residuals": self.residuals, "scale": self.scale,
                "tol": self.tol, "passes": self.passes}


def _shapely_boundary_length_in(boundary_of: PolygonalSet, region: PolygonalSet) -> float:
    lines = [LineString(np.vstack([L, L[:1]])) for L in boundary_of.loops]
    if not lines or not region.loops:
        return 0.0
    return float(shapely.intersection(MultiLineString(lines), to_shapely(region)).length)


def check_gauss_green_identities(E: PolygonalSet, F: PolygonalSet,
                                 window: Optional[Window] = None,
                                 tol: float = 1e-9) -> GaussGreenReport:
    """Verify the set-operation identities for Gauss-Green measures.

    Checks, restricted to ``window`` when given:

    * ``μ_{E\\F} = μ_E⌞F⁽⁰⁾ − μ_F⌞E⁽¹⁾ + ν_E H¹⌞{ν_E = −ν_F}``
    * ``∂*(E∪F) ≈ (F⁽⁰⁾∩∂*E) ∪ (E⁽⁰⁾∩∂*F) ∪ {ν_E = ν_F}``
    * the three-way decomposition of ``∂F`` (and ``∂E``) into density-1,
      density-0 and reduced-boundary parts of the other set, cross-checked
      against shapely's line/polygon intersection length.

    Residuals are absolute; the report passes when each is below
    ``tol`` times the total perimeter.
    """
    cE = classify_boundary(E, F)
    cF = classify_boundary(F, E)
    clip = lambda p: p.clipped(window)  # noqa: E731
    cE = {k: clip(v) for k, v in cE.items()}
    cF = {k: clip(v) for k, v in cF.items()}

    diff = from_shapely(shapely.difference(to_shapely(E), to_shapely(F)), validate=False)
    union = from_shapely(shapely.union(to_shapely(E), to_shapely(F)), validate=False)
    mu_diff = clip(boundary_pieces(diff))
    mu_union = clip(boundary_pieces(union))

    terms = {
        "E_in_F0": cE["F0"].length,
        "E_in_F1": cE["F1"].length,
        "F_in_E0": cF["F0"].length,
        "F_in_E1": cF["F1"].length,
        "nu_equal": cE["same"].length,
        "nu_opposite": cE["opposite"].length,
        "perimeter_E_minus_F": mu_diff.length,
        "perimeter_E_union_F": mu_union.length,
    }
    rhs_diff_moments = cE["F0"].moments() - cF["F1"].moments() + cE["opposite"].moments()
    rhs_union_moments = cE["F0"].moments() + cF["F0"].moments() + cE["same"].moments()
    res = {
        "difference_length": abs(mu_diff.length
                                 - (terms["E_in_F0"] + terms["F_in_E1"] + terms["nu_opposite"])),
        "difference_moments": float(np.abs(mu_diff.moments() - rhs_diff_moments).max()),
        "union_length": abs(mu_union.length - (terms["E_in_F0"] + terms["F_in_E0"] + terms["nu_equal"])),
        "union_moments": float(np.abs(mu_union.moments() - rhs_union_moments).max()),
        "shared_boundary_symmetry": abs(cE["same"].length - cF["same"].length)
        + abs(cE["opposite"].length - cF["opposite"].length),
    }
    for name, X, Y, cX in (("E", E, F, cE), ("F", F, E, cF)):
        total = clip(boundary_pieces(X)).length
        parts = cX["F0"].length + cX["F1"].length + cX["same"].length + cX["opposite"].length
        res[f"decomposition_{name}"] = abs(total - parts)
        if window is None:
            closed = _shapely_boundary_length_in(X, Y)
            res[f"closure_length_{name}"] = abs(closed - (cX["F1"].length + cX["same"].length
                                                          + cX["opposite"].length))
    scale = E.perimeter + F.perimeter
    return GaussGreenReport(terms=terms, residuals=res, scale=scale, tol=tol)
