"""Chord-replacement descent and the rectangle competitor."""
from .bernstein import (
    BernsteinReport,
    bernstein_check,
    rectangle,
    rectangle_competitor,
    two_line_configuration,
)
from .descent import (
    Candidate,
    DescentParams,
    DescentTrace,
    ReplacementError,
    Step,
    Termination,
    admissible_arcs,
    anchored,
    apply_replacement,
    descend,
    find_replaceable_arc,
)

__all__ = [
    "BernsteinReport", "bernstein_check", "rectangle", "rectangle_competitor", "two_line_configuration",
    "Candidate", "DescentParams", "DescentTrace", "ReplacementError", "Step", "Termination",
    "admissible_arcs", "anchored", "apply_replacement", "descend", "find_replaceable_arc",
]
