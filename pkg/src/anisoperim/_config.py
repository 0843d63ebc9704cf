"""Centralised numerical tolerances.

Every epsilon used by the geometric predicates lives here so that the
whole package agrees on what "on a segment" or "collinear" means.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    #: distance (scene units) under which a point is considered on a segment
    on_segment: float = 1e-9
    #: vertices closer than this are merged by normalisation
    merge: float = 1e-12
    #: |sin| of the turning angle under which a vertex is dropped as collinear
    collinear: float = 1e-12
    #: required clearance between a modified region and the window boundary
    window_margin: float = 0.0
    #: angular separation (radians) below which two directions are parallel
    parallel: float = 1e-6


TOL = Tolerances()
