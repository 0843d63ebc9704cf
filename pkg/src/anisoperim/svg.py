"""Minimal SVG rendering of a set, its window and highlighted chords."""
from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .geometry import PolygonalSet, Window


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def render_svg(E: PolygonalSet, window: Optional[Window] = None, chords: Iterable = (),
               size: int = 480) -> str:
    """SVG text: ``E`` filled (even-odd), ``∂E`` stroked, window dashed, chords in red."""
    if window is not None:
        B = window.boundary_polygon()
        lo, hi = B.min(axis=0), B.max(axis=0)
    elif E.loops:
        lo, hi = E.bounds()
    else:
        lo, hi = np.zeros(2), np.ones(2)
    span = float(max(hi - lo)) or 1.0
    pad = 0.05 * span
    lo = lo - pad
    span += 2 * pad
    scale = size / span

    def xy(p):
        # flip y so the picture has the usual orientation
        return _fmt((p[0] - lo[0]) * scale), _fmt(size - (p[1] - lo[1]) * scale)

    def pt(p):
        return ",".join(xy(p))

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">']
    if window is not None:
        clip = " ".join(pt(p) for p in window.boundary_polygon())
        parts.append(f'<clipPath id="w"><polygon points="{clip}"/></clipPath>')
    d = " ".join("M " + " L ".join(pt(p) for p in L) + " Z" for L in E.loops)
    if d:
        attr = ' clip-path="url(#w)"' if window is not None else ""
        parts.append(f'<path d="{d}" fill="#9ecae1" fill-rule="evenodd" stroke="#08519c" '
                     f'stroke-width="1.5"{attr}/>')
    if window is not None:
        parts.append(f'<polygon points="{clip}" fill="none" stroke="#555" '
                     f'stroke-dasharray="6,4" stroke-width="1"/>')
    for a, b in chords:
        (ax, ay), (bx, by) = xy(a), xy(b)
        parts.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                     f'stroke="#d62728" stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
