"""Rectangle competitor against a pair of parallel lines.

Two parallel boundary lines ``L_i = {x·t = (-1)^i}`` cannot bound a global
minimizer in the plane: cutting the rectangle ``R_{ρ,1} = {|x·s| ≤ ρ,
|x·t| ≤ 1}`` out of the slab (or adding it to the complement) trades
boundary of energy at least ``4ρb`` on the lines for two short sides of
energy at most ``4a``, where ``a = max(‖s‖, ‖-s‖)`` and
``b = min(‖t‖, ‖-t‖)``. The trade wins as soon as ``ρ > a/b``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..energy import phi
from ..geometry import PolygonalSet, Window
from ..norms import Integrand


@dataclass(frozen=True)
class BernsteinReport:
    a: float
    b: float
    rho: float
    rho_min: float
    delta: float
    energy_E: float
    energy_F: float
    window_energy_E: float
    window_energy_F: float
    chain_lhs: float
    chain_rhs: float
    chain_holds: bool
    passes: bool
    explanation: str

    def to_json(self) -> dict:
        return asdict(self)


def _frame(s, t):
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if s.shape != (2,) or t.shape != (2,):
        raise ValueError("s and t must be 2-vectors")
    if abs(np.hypot(*s) - 1) > 1e-12 or abs(np.hypot(*t) - 1) > 1e-12:
        raise ValueError("s and t must be unit vectors")
    if abs(s @ t) > 1e-12:
        raise ValueError("s and t must be orthogonal")
    return s, t


def _uv_loop(s, t, uv):
    """Loop given in ``(x·s, x·t)`` coordinates, listed counter-clockwise in that frame."""
    uv = np.asarray(uv, dtype=float)
    V = uv[:, :1] * s + uv[:, 1:] * t
    # (s, t) may be a left-handed frame; the loop must still turn counter-clockwise
    if s[0] * t[1] - s[1] * t[0] < 0:
        V = V[::-1]
    return V


def _box(s, t, u0, u1, v0, v1):
    return _uv_loop(s, t, [[u0, v0], [u1, v0], [u1, v1], [u0, v1]])


def two_line_configuration(s=(1.0, 0.0), t=(0.0, 1.0), extent: float = 100.0,
                           side: str = "slab") -> PolygonalSet:
    """Bounded stand-in for the two-line configuration.

    ``side="slab"`` is the strip between the lines, ``side="complement"``
    the two half-planes outside it; both are truncated at ``|x·s|`` and
    ``|x·t|`` equal to ``extent``.
    """
    s, t = _frame(s, t)
    if side == "slab":
        loops = [_box(s, t, -extent, extent, -1.0, 1.0)]
    elif side == "complement":
        loops = [_box(s, t, -extent, extent, 1.0, extent),
                 _box(s, t, -extent, extent, -extent, -1.0)]
    else:
        raise ValueError("side must be 'slab' or 'complement'")
    return PolygonalSet.from_loops(loops)


def rectangle_competitor(s, t, rho: float, extent: float, side: str = "slab") -> PolygonalSet:
    """``E \\ R_{ρ,1}`` for the slab, ``E ∪ R_{ρ,1}`` for its complement.

    Built directly in the ``(s, t)`` frame so that the new sides sit exactly
    on the lines even when the frame is rotated.
    """
    s, t = _frame(s, t)
    if side == "slab":
        loops = [_box(s, t, -extent, -rho, -1.0, 1.0), _box(s, t, rho, extent, -1.0, 1.0)]
    elif side == "complement":
        e = extent
        loops = [_uv_loop(s, t, [[-e, -e], [e, -e], [e, -1], [rho, -1], [rho, 1], [e, 1], [e, e],
                                 [-e, e], [-e, 1], [-rho, 1], [-rho, -1], [-e, -1]])]
    else:
        raise ValueError("side must be 'slab' or 'complement'")
    return PolygonalSet.from_loops(loops)


def rectangle(s, t, sigma: float, tau: float) -> PolygonalSet:
    s, t = _frame(s, t)
    return PolygonalSet.from_loops([_box(s, t, -sigma, sigma, -tau, tau)])


def _check_fattening(E: PolygonalSet, window: Window, t: np.ndarray):
    P, Q, _, _ = E.edges()
    t0, t1 = window.clip(P, Q)
    hit = t1 > t0
    on_lines = (np.abs(np.abs(P @ t) - 1) <= 1e-12) & (np.abs(np.abs(Q @ t) - 1) <= 1e-12)
    if np.any(hit & ~on_lines):
        raise ValueError("the fattened rectangle meets boundary other than the two lines")


def bernstein_check(integrand: Integrand, rho: float, delta: float = 0.1,
                    s=(1.0, 0.0), t=(0.0, 1.0), side: str = "slab") -> BernsteinReport:
    """Compare the two-line configuration with its rectangle competitor.

    Energies ``energy_E``/``energy_F`` are taken over the closed rectangle
    ``R_{ρ,1}``; ``window_energy_*`` over the fattened open window
    ``R_{ρ+δ,1+δ}``. Both differences agree since the sets coincide
    outside ``R_{ρ,1}``. ``passes`` requires ``ρ > a/b`` (so the chain
    ``4ρb > 4a`` holds) and a strictly cheaper competitor.
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    if not delta > 0:
        raise ValueError("delta must be positive")
    s, t = _frame(s, t)
    a = float(max(integrand(s), integrand(-s)))
    b = float(min(integrand(t), integrand(-t)))
    rho_min = a / b
    extent = 10.0 * (rho + delta + 1.0)
    E = two_line_configuration(s, t, extent, side)
    R = rectangle(s, t, rho, 1.0)
    F = rectangle_competitor(s, t, rho, extent, side)

    closed_R = Window.polygon(R.loops[0])
    fat = Window.polygon(rectangle(s, t, rho + delta, 1.0 + delta).loops[0])
    _check_fattening(E, fat, t)

    eE = phi(E, closed_R, integrand).total
    eF = phi(F, closed_R, integrand).total
    wE = phi(E, fat, integrand).total
    wF = phi(F, fat, integrand).total
    lhs, rhs = 4 * rho * b, 4 * a
    chain = lhs > rhs
    cheaper = wF < wE
    if rho <= rho_min:
        why = (f"rho={rho:g} does not exceed rho_min=a/b={rho_min:g}; "
               "the competitor is not guaranteed to be cheaper")
    elif not cheaper:
        why = "competitor energy is not strictly smaller"
    else:
        why = "rectangle competitor strictly beats the two-line configuration"
    return BernsteinReport(
        a=a, b=b, rho=float(rho), rho_min=rho_min, delta=float(delta),
        energy_E=eE, energy_F=eF, window_energy_E=wE, window_energy_F=wF,
        chain_lhs=lhs, chain_rhs=rhs, chain_holds=chain,
        passes=bool(rho > rho_min and chain and cheaper), explanation=why,
    )
