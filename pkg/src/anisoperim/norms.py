"""Anisotropic integrands on the plane.

An integrand assigns a positive cost to every direction of the unit circle
and is extended to ``R^2 \\ {0}`` by 1-homogeneity. All families are
evaluated in closed form except ``tabulated``, which interpolates linearly
in angle between user-supplied samples.

Evaluation is vectorised: pass a single vector of shape ``(2,)`` or a stack
of shape ``(m, 2)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ._config import TOL

FAMILIES = (
    "euclidean",
    "ellipse",
    "p_norm",
    "asymmetric_shift",
    "crystalline_l1",
    "crystalline_linf",
    "tabulated",
)


class IntegrandError(ValueError):
    """Raised for invalid integrand parameters or evaluation domains."""


@dataclass(frozen=True)
class Integrand:
    """A positive, 1-homogeneous, possibly asymmetric surface tension.

    Use the named constructors (:meth:`euclidean`, :meth:`ellipse`, ...)
    rather than the raw dataclass fields.
    """

    family: str
    matrix: Optional[tuple] = None
    p: Optional[float] = None
    shift: Optional[tuple] = None
    samples: Optional[tuple] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise IntegrandError(f"unknown integrand family {self.family!r}")
        if self.family == "ellipse":
            M = np.asarray(self.matrix, dtype=float)
            if M.shape != (2, 2) or not np.allclose(M, M.T, rtol=0, atol=1e-14):
                raise IntegrandError("ellipse matrix must be symmetric 2x2")
            if np.linalg.eigvalsh(M).min() <= 0:
                raise IntegrandError("ellipse matrix must be positive definite")
        elif self.family == "p_norm":
            if self.p is None or not (1.0 < self.p < math.inf):
                raise IntegrandError("p_norm requires 1 < p < inf")
        elif self.family == "asymmetric_shift":
            c = np.asarray(self.shift, dtype=float)
            if c.shape != (2,) or np.hypot(*c) >= 1.0:
                raise IntegrandError("asymmetric_shift requires a plane vector with |c| < 1")
        elif self.family == "tabulated":
            s = np.asarray(self.samples, dtype=float)
            if s.ndim != 2 or s.shape[1] != 2 or len(s) < 2:
                raise IntegrandError("tabulated samples must be a list of (angle, value) pairs")
            if np.any(np.diff(s[:, 0]) <= 0):
                raise IntegrandError("tabulated samples must be sorted by strictly increasing angle")
            if s[0, 0] < 0 or s[-1, 0] >= 360:
                raise IntegrandError("tabulated angles must lie in [0, 360)")
            if np.any(s[:, 1] <= 0):
                raise IntegrandError("tabulated values must be positive")

    # -- constructors -------------------------------------------------
    @classmethod
    def euclidean(cls) -> "Integrand":
        return cls("euclidean")

    @classmethod
    def ellipse(cls, matrix) -> "Integrand":
        M = np.asarray(matrix, dtype=float)
        return cls("ellipse", matrix=tuple(map(tuple, M.tolist())))

    @classmethod
    def p_norm(cls, p: float) -> "Integrand":
        return cls("p_norm", p=float(p))

    @classmethod
    def asymmetric_shift(cls, shift) -> "Integrand":
        return cls("asymmetric_shift", shift=tuple(float(x) for x in shift))

    @classmethod
    def crystalline_l1(cls) -> "Integrand":
        return cls("crystalline_l1")

    @classmethod
    def crystalline_linf(cls) -> "Integrand":
        return cls("crystalline_linf")

    @classmethod
    def tabulated(cls, samples) -> "Integrand":
        return cls("tabulated", samples=tuple((float(a), float(v)) for a, v in samples))

    # -- metadata -----------------------------------------------------
    @property
    def strictly_convex_declared(self) -> Optional[bool]:
        """``True``/``False`` for closed-form families, ``None`` if unknown."""
        if self.family in ("crystalline_l1", "crystalline_linf"):
            return False
        if self.family == "tabulated":
            return None
        return True

    @property
    def symmetric(self) -> bool:
        if self.family == "asymmetric_shift":
            return self.shift == (0.0, 0.0)
        if self.family == "tabulated":
            theta = np.radians(np.asarray(self.samples)[:, 0])
            u = np.column_stack([np.cos(theta), np.sin(theta)])
            return bool(np.allclose(self(u), self(-u), rtol=1e-12, atol=0))
        return True

    # -- evaluation ---------------------------------------------------
    def __call__(self, v) -> np.ndarray | float:
        v = np.asarray(v, dtype=float)
        single = v.ndim == 1
        V = np.atleast_2d(v)
        x, y = V[:, 0], V[:, 1]
        fam = self.family
        if fam == "euclidean":
            out = np.hypot(x, y)
        elif fam == "ellipse":
            (a, b), (_, d) = self.matrix
            out = np.sqrt(np.maximum(a * x * x + 2 * b * x * y + d * y * y, 0.0))
        elif fam == "p_norm":
            p = self.p
            ax, ay = np.abs(x), np.abs(y)
            m = np.maximum(ax, ay)
            safe = np.where(m > 0, m, 1.0)
            out = np.where(m > 0, m * ((ax / safe) ** p + (ay / safe) ** p) ** (1.0 / p), 0.0)
        elif fam == "asymmetric_shift":
            cx, cy = self.shift
            out = np.hypot(x, y) + cx * x + cy * y
        elif fam == "crystalline_l1":
            out = np.abs(x) + np.abs(y)
        elif fam == "crystalline_linf":
            out = np.maximum(np.abs(x), np.abs(y))
        else:
            s = np.asarray(self.samples)
            r = np.hypot(x, y)
            ang = np.degrees(np.arctan2(y, x)) % 360.0
            out = r * np.interp(ang, s[:, 0], s[:, 1], period=360.0)
        return float(out[0]) if single else out

    def to_json(self) -> dict:
        params: dict[str, Any] = {}
        if self.family == "ellipse":
            params["matrix"] = [list(r) for r in self.matrix]
        elif self.family == "p_norm":
            params["p"] = self.p
        elif self.family == "asymmetric_shift":
            params["shift"] = list(self.shift)
        elif self.family == "tabulated":
            params["samples"] = [list(s) for s in self.samples]
        return {"family": self.family, "params": params}

    @classmethod
    def from_json(cls, obj: dict | str) -> "Integrand":
        """Build an integrand from ``{"family": ..., "params": {...}}``.

        ``params`` keys per family: ``ellipse`` -> ``matrix`` (2x2),
        ``p_norm`` -> ``p``, ``asymmetric_shift`` -> ``shift`` ([cx, cy]),
        ``tabulated`` -> ``samples`` ([[degrees, value], ...] sorted by
        angle). The remaining families take no parameters.
        """
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "family" not in obj:
            raise IntegrandError("integrand JSON must be an object with a 'family' key")
        fam = obj["family"]
        params = obj.get("params", {}) or {}
        try:
            if fam == "ellipse":
                return cls.ellipse(params["matrix"])
            if fam == "p_norm":
                return cls.p_norm(params["p"])
            if fam == "asymmetric_shift":
                return cls.asymmetric_shift(params["shift"])
            if fam == "tabulated":
                return cls.tabulated(params["samples"])
        except KeyError as exc:
            raise IntegrandError(f"missing parameter {exc.args[0]!r} for family {fam!r}") from None
        return cls(fam)


def evaluate(integrand: Integrand, v) -> float:
    """Value of the 1-homogeneous extension at a non-zero vector ``v``."""
    v = np.asarray(v, dtype=float)
    if v.shape != (2,):
        raise IntegrandError("expected a single plane vector")
    if not np.any(v):
        raise IntegrandError("integrand is undefined at the zero vector")
    return integrand(v)


def builtin_integrands() -> dict[str, Integrand]:
    """The built-in convex integrands used throughout the test suite."""
    return {
        "euclidean": Integrand.euclidean(),
        "ellipse": Integrand.ellipse([[1.0, 0.0], [0.0, 4.0]]),
        "p_norm": Integrand.p_norm(1.5),
        "asymmetric_shift": Integrand.asymmetric_shift((0.5, 0.0)),
        "crystalline_l1": Integrand.crystalline_l1(),
        "crystalline_linf": Integrand.crystalline_linf(),
    }


def strictly_convex_builtins() -> dict[str, Integrand]:
    return {k: v for k, v in builtin_integrands().items() if v.strictly_convex_declared}


def unit_directions(n_samples: int, extra_degrees=()) -> np.ndarray:
    theta = 2 * np.pi * np.arange(n_samples) / n_samples
    if len(extra_degrees):
        theta = np.unique(np.concatenate([theta, np.radians(np.asarray(extra_degrees, float))]))
    return np.column_stack([np.cos(theta), np.sin(theta)])


@dataclass(frozen=True)
class ConvexityReport:
    is_strict: bool
    worst_pair: tuple
    worst_slack: float
    n_pairs: int


def strict_convexity_check(integrand: Integrand, n_samples: int = 360,
                           margin_tol: float = 1e-9) -> ConvexityReport:
    """Sample the strict triangle inequality on pairs of unit vectors.

    Pairs whose angular separation is within ``TOL.parallel`` of 0 or pi
    are skipped. The slack ``f(u) + f(v) - f(u + v)`` is minimised over all
    remaining pairs; the integrand is reported strictly convex when that
    minimum exceeds ``margin_tol``. This is a sampling certificate only.
    """
    if n_samples < 8:
        raise ValueError("n_samples must be at least 8")
    if margin_tol < 0:
        raise ValueError("margin_tol must be non-negative")
    extra = np.asarray(integrand.samples)[:, 0] if integrand.family == "tabulated" else ()
    U = unit_directions(n_samples, extra)
    vals = integrand(U)
    i, j = np.triu_indices(len(U), k=1)
    sep = np.abs(np.arctan2(U[i, 0] * U[j, 1] - U[i, 1] * U[j, 0], np.sum(U[i] * U[j], axis=1)))
    keep = (sep > TOL.parallel) & (sep < np.pi - TOL.parallel)
    i, j = i[keep], j[keep]
    slack = vals[i] + vals[j] - integrand(U[i] + U[j])
    k = int(np.argmin(slack))
    worst = float(slack[k])
    return ConvexityReport(
        is_strict=worst > margin_tol,
        worst_pair=(tuple(U[i[k]].tolist()), tuple(U[j[k]].tolist())),
        worst_slack=worst,
        n_pairs=int(len(i)),
    )


@dataclass(frozen=True)
class ComparabilityBounds:
    c_lower: float
    C_upper: float

    def __post_init__(self):
        if not (0 < self.c_lower <= self.C_upper):
            raise ValueError("comparability bounds must satisfy 0 < c <= C")


def comparability_bounds(integrand: Integrand, n_samples: int = 360) -> ComparabilityBounds:
    """Min and max of the integrand over sampled unit directions.

    Tabulated integrands are sampled at their nodes as well, where the
    piecewise-linear interpolant attains its extrema.
    """
    if n_samples < 8:
        raise ValueError("n_samples must be at least 8")
    extra = np.asarray(integrand.samples)[:, 0] if integrand.family == "tabulated" else ()
    vals = integrand(unit_directions(n_samples, extra))
    return ComparabilityBounds(float(vals.min()), float(vals.max()))
