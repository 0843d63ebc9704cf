"""Anisotropic perimeter of planar polygonal sets and chord-replacement descent."""
from .energy import EnergyBreakdown, arc_energy, chord_energy, jensen_gap, phi
from .estimator import ChordDescent
from .geometry import Arc, PolygonalSet, Window
from .minimize import (
    DescentParams,
    DescentTrace,
    bernstein_check,
    descend,
    find_replaceable_arc,
)
from .norms import Integrand, comparability_bounds, strict_convexity_check

__version__ = "0.1.0"

__all__ = [
    "Arc", "ChordDescent", "DescentParams", "DescentTrace", "EnergyBreakdown", "Integrand",
    "PolygonalSet", "Window", "arc_energy", "bernstein_check", "chord_energy",
    "comparability_bounds", "descend", "find_replaceable_arc", "jensen_gap", "phi",
    "strict_convexity_check",
]
