"""JSON scene, window and integrand files.

Scene files look like::

    {"schema_version": 1,
     "set": {"loops": [[[x, y], ...], ...], "orientations": ["ccw", ...]},
     "window": {"shape": "disk", "center": [x, y], "radius": r}}

``window`` may be omitted or ``null``. Floats are written with ``repr``
precision, so a load/save/load cycle reproduces coordinates exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .geometry import GeometryError, PolygonalSet, Window
from .norms import Integrand, IntegrandError, builtin_integrands

SCHEMA_VERSION = 1


class SceneError(ValueError):
    """Malformed input file; ``code`` is a stable machine-readable tag."""

    def __init__(self, code: str, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, path: Optional[str] = None):
        super().__init__(message)
        self.code = code
        self.line = line
        self.column = column
        self.path = path

    def to_json(self) -> dict:
        out = {"code": self.code, "message": str(self)}
        for key in ("path", "line", "column"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out


@dataclass(frozen=True)
class Scene:
    set: PolygonalSet
    window: Optional[Window] = None

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "set": self.set.to_json(),
            "window": None if self.window is None else self.window.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "Scene":
        if not isinstance(obj, dict) or "set" not in obj:
            raise SceneError("schema_error", "scene must be an object with a 'set' key")
        _check_version(obj)
        try:
            E = PolygonalSet.from_json(obj["set"])
            W = None if obj.get("window") is None else Window.from_json(obj["window"])
        except GeometryError as exc:
            raise SceneError("geometry_error", str(exc)) from exc
        return cls(E, W)


def _check_version(obj: dict):
    v = obj.get("schema_version", SCHEMA_VERSION)
    if v != SCHEMA_VERSION:
        raise SceneError("schema_error", f"unsupported schema_version {v!r}")


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, full float precision)."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def read_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SceneError("io_error", f"cannot read {path}: {exc.strerror}", path=str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError("parse_error", exc.msg, line=exc.lineno, column=exc.colno,
                         path=str(path)) from exc


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def _tag(exc: SceneError, path) -> SceneError:
    if exc.path is None:
        exc.path = str(path)
    return exc


def load_scene(path) -> Scene:
    try:
        return Scene.from_json(read_json(path))
    except SceneError as exc:
        raise _tag(exc, path) from None


def save_scene(path, E: PolygonalSet, window: Optional[Window] = None):
    write_json(path, Scene(E, window).to_json())


def load_window(path) -> Window:
    obj = read_json(path)
    try:
        if isinstance(obj, dict):
            _check_version(obj)
            if "window" in obj and "shape" not in obj:
                obj = obj["window"]
        return Window.from_json(obj)
    except GeometryError as exc:
        raise SceneError("geometry_error", str(exc), path=str(path)) from exc
    except SceneError as exc:
        raise _tag(exc, path) from None


def save_window(path, window: Window):
    write_json(path, {"schema_version": SCHEMA_VERSION, **window.to_json()})


def load_integrand(spec) -> Integrand:
    """Integrand from a JSON file, or a built-in name such as ``"euclidean"``."""
    if isinstance(spec, Integrand):
        return spec
    if isinstance(spec, dict):
        obj = spec
    else:
        p = Path(spec)
        if not p.exists() and str(spec) in builtin_integrands():
            return builtin_integrands()[str(spec)]
        obj = read_json(p)
    try:
        if isinstance(obj, dict):
            _check_version(obj)
            obj = {k: v for k, v in obj.items() if k != "schema_version"}
        return Integrand.from_json(obj)
    except IntegrandError as exc:
        path = None if isinstance(spec, dict) else str(spec)
        raise SceneError("integrand_error", str(exc), path=path) from exc


def save_integrand(path, integrand: Integrand):
    write_json(path, {"schema_version": SCHEMA_VERSION, **integrand.to_json()})
