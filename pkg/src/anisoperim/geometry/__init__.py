"""Polygonal sets, windows, arcs, chords and set operations."""
from .arcs import (
    Arc,
    Chord,
    DegenerateChordError,
    DegenerateRegionError,
    RegionSide,
    chord_of,
    classify_region,
    enclosed_region,
    interior_point,
    net_normal,
    orientation_side,
    shorten_chord,
)
from .booleans import (
    from_shapely,
    insert_points,
    remove_loop,
    replace_arc,
    set_difference,
    set_intersection,
    set_union,
    symmetric_difference_area,
    to_shapely,
)
from .gauss_green import (
    GaussGreenReport,
    check_gauss_green_identities,
    classify_boundary,
)
from .sets import (
    GeometryError,
    PolygonalSet,
    Window,
    normalize_loop,
    regular_polygon,
    square,
)


def outward_normals(E: PolygonalSet):
    """Per-loop outward unit normals of ``E`` (one row per edge)."""
    return E.outward_normals()


__all__ = [
    "Arc", "Chord", "DegenerateChordError", "DegenerateRegionError", "GaussGreenReport",
    "GeometryError", "PolygonalSet", "RegionSide", "Window", "check_gauss_green_identities",
    "chord_of", "classify_boundary", "classify_region", "enclosed_region", "from_shapely",
    "insert_points", "interior_point", "net_normal", "normalize_loop", "orientation_side",
    "outward_normals", "regular_polygon", "remove_loop", "replace_arc", "set_difference",
    "set_intersection", "set_union", "shorten_chord", "square", "symmetric_difference_area",
    "to_shapely",
]
