"""Low-level planar predicates, vectorised over edge arrays."""
from __future__ import annotations

import math

import numpy as np

from .._config import TOL


def cross(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def rot_cw(v):
    """Rotate by -90 degrees: (x, y) -> (y, -x)."""
    v = np.asarray(v, dtype=float)
    return np.stack([v[..., 1], -v[..., 0]], axis=-1)


def signed_area(V) -> float:
    V = np.asarray(V, dtype=float)
    x, y = V[:, 0], V[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * math.fsum(x * yn - xn * y)


def point_segment_distance(p, A, B):
    """Distance from point(s) ``p`` to segments ``A[k]B[k]``."""
    p = np.asarray(p, dtype=float)
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    d = B - A
    dd = np.einsum("ij,ij->i", d, d)
    t = np.einsum("...j,...j->...", p - A, d) / np.where(dd > 0, dd, 1.0)
    t = np.clip(t, 0.0, 1.0)
    proj = A + t[..., None] * d
    return np.hypot(*(p - proj).T) if p.ndim == 1 else np.linalg.norm(p - proj, axis=-1)


def winding_number(points, V) -> np.ndarray:
    """Winding number of closed polygon ``V`` around each of ``points``."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    V = np.asarray(V, dtype=float)
    A = V[None, :, :]
    B = np.roll(V, -1, axis=0)[None, :, :]
    px = P[:, None, 0]
    py = P[:, None, 1]
    is_left = (B[..., 0] - A[..., 0]) * (py - A[..., 1]) - (px - A[..., 0]) * (B[..., 1] - A[..., 1])
    up = (A[..., 1] <= py) & (B[..., 1] > py) & (is_left > 0)
    down = (A[..., 1] > py) & (B[..., 1] <= py) & (is_left < 0)
    return up.sum(axis=1) - down.sum(axis=1)


def chord_hits(a, b, P, Q, eps: float = TOL.on_segment):
    """Intersections of segment ``ab`` with each segment ``P[k]Q[k]``.

    Returns ``(s, k, overlap)`` where ``s`` are hit parameters along ``ab``
    (``a + s (b - a)``), ``k`` the matching edge indices, and ``overlap`` a
    boolean mask of edges that run collinearly along ``ab`` for a length
    exceeding ``eps``. Touching within ``eps`` counts as a hit.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a
    L = math.hypot(*d)
    u = d / L
    # frame aligned with the chord
    rel_p = P - a
    rel_q = Q - a
    sp = rel_p @ u
    sq = rel_q @ u
    hp = cross(u, rel_p)
    hq = cross(u, rel_q)

    near_p = np.abs(hp) <= eps
    near_q = np.abs(hq) <= eps
    collinear = near_p & near_q
    lo = np.minimum(sp, sq)
    hi = np.maximum(sp, sq)
    ov_lo = np.maximum(lo, 0.0)
    ov_hi = np.minimum(hi, L)
    overlap = collinear & (ov_hi - ov_lo > eps)

    s_list = []
    k_list = []
    # proper crossings (endpoints on opposite sides)
    crossing = (~collinear) & (np.sign(hp) * np.sign(hq) < 0) & ~near_p & ~near_q
    if np.any(crossing):
        idx = np.nonzero(crossing)[0]
        t = hp[idx] / (hp[idx] - hq[idx])
        s = (sp[idx] + t * (sq[idx] - sp[idx])) / L
        ok = (s >= -eps / L) & (s <= 1 + eps / L)
        s_list.append(s[ok])
        k_list.append(idx[ok])
    # edge endpoints touching the chord
    for near, sv in ((near_p, sp), (near_q, sq)):
        idx = np.nonzero(near & ~overlap)[0]
        if len(idx):
            ok = (sv[idx] >= -eps) & (sv[idx] <= L + eps)
            s_list.append(sv[idx][ok] / L)
            k_list.append(idx[ok])
    if s_list:
        s_all = np.concatenate(s_list)
        k_all = np.concatenate(k_list)
    else:
        s_all = np.empty(0)
        k_all = np.empty(0, dtype=int)
    return s_all, k_all, overlap


def clip_to_disk(A, B, center, radius):
    """Parameter interval ``[t0, t1]`` of each segment inside the closed disk.

    Segments that miss the disk get ``t0 = t1 = 0``.
    """
    A = np.atleast_2d(A)
    d = np.atleast_2d(B) - A
    f = A - np.asarray(center, dtype=float)
    a = np.einsum("ij,ij->i", d, d)
    bq = 2 * np.einsum("ij,ij->i", f, d)
    c = np.einsum("ij,ij->i", f, f) - radius * radius
    disc = bq * bq - 4 * a * c
    ok = (disc > 0) & (a > 0)
    sq = np.sqrt(np.where(ok, disc, 0.0))
    # stable quadratic roots
    qq = -0.5 * (bq + np.copysign(sq, bq))
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(ok, qq / np.where(a > 0, a, 1.0), 0.0)
        r2 = np.where(ok & (qq != 0), c / np.where(qq != 0, qq, 1.0), 0.0)
    t0 = np.clip(np.minimum(r1, r2), 0.0, 1.0)
    t1 = np.clip(np.maximum(r1, r2), 0.0, 1.0)
    t1 = np.where(ok & (t1 > t0), t1, t0)
    return np.where(ok, t0, 0.0), np.where(ok, t1, 0.0)


def clip_to_convex(A, B, W, eps: float = TOL.on_segment):
    """Parameter interval of each segment inside a closed convex CCW polygon ``W``.

    A segment whose endpoints both lie within ``eps`` of the inner side of
    an edge line is not cut by that edge, so boundary edges lying on the
    window boundary count in full. Transversal segments are cut at the
    exact edge line.
    """
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    t0 = np.zeros(len(A))
    t1 = np.ones(len(A))
    W = np.asarray(W, dtype=float)
    for P, Q in zip(W, np.roll(W, -1, axis=0)):
        e = Q - P
        n = np.array([e[1], -e[0]]) / math.hypot(*e)  # outward
        ha = (A - P) @ n  # <= 0 inside
        hb = (B - P) @ n
        free = (ha <= eps) & (hb <= eps)
        out = (ha > eps) & (hb > eps)
        den = hb - ha
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(free | out, 0.0, -ha / np.where(den == 0, 1.0, den))
        t0 = np.where(~free & (den < 0), np.maximum(t0, t), t0)
        t1 = np.where(~free & (den > 0), np.minimum(t1, t), t1)
        t1 = np.where(out, -1.0, t1)
    empty = t1 <= t0
    return np.where(empty, 0.0, t0), np.where(empty, 0.0, t1)
