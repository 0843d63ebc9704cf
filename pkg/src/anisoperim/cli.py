"""Command-line front end.

Every command prints a JSON report on stdout and, when an output
directory is given (``--out`` or ``$ANISOPERIM_OUT``), writes the artifacts
selected by ``--emit`` there. Failures exit with status 2 and a JSON error
object on stderr.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .energy import phi
from .geometry import GeometryError, check_gauss_green_identities
from .io import (
    SCHEMA_VERSION,
    SceneError,
    dumps,
    load_integrand,
    load_scene,
    load_window,
    save_scene,
)
from .minimize import DescentParams, ReplacementError, bernstein_check, descend
from .norms import IntegrandError, comparability_bounds, strict_convexity_check
from .svg import render_svg
from .verify import detect_crossings, flatness, interior_corner_turn, replaceable_spread

OUT_ENV = "ANISOPERIM_OUT"
COMMANDS = ("energy", "minimize", "bernstein", "convexity", "verify")
EMITS = ("svg", "csv", "json")


@dataclass
class RunConfig:
    command: str
    scene: Optional[str] = None
    integrand: str = "euclidean"
    window: Optional[str] = None
    gain_tol: Optional[float] = None
    flat_tol: Optional[float] = None
    max_steps: Optional[int] = None
    out: Optional[str] = None
    emit: tuple = EMITS
    rho: Optional[float] = None
    delta: float = 0.1
    samples: int = 360
    other: Optional[str] = None

    def params(self) -> DescentParams:
        kw = {}
        for name in ("gain_tol", "flat_tol", "max_steps"):
            if getattr(self, name) is not None:
                kw[name] = getattr(self, name)
        return DescentParams(**kw)


class UsageError(ValueError):
    pass


def _load(cfg: RunConfig):
    if cfg.scene is None:
        raise UsageError(f"{cfg.command} needs --scene")
    scene = load_scene(cfg.scene)
    window = load_window(cfg.window) if cfg.window else scene.window
    return scene.set, window


def _report(cfg: RunConfig, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": cfg.command, **body}


def _cmd_energy(cfg: RunConfig, out: dict):
    E, window = _load(cfg)
    integrand = load_integrand(cfg.integrand)
    br = phi(E, window, integrand)
    out["csv"] = ("energy.csv", br.to_csv())
    out["svg"] = ("scene.svg", render_svg(E, window))
    return _report(cfg, {"integrand": integrand.to_json(), **br.to_json()})


def _cmd_minimize(cfg: RunConfig, out: dict):
    E, window = _load(cfg)
    if window is None:
        raise UsageError("minimize needs a window (--window or in the scene)")
    integrand = load_integrand(cfg.integrand)
    params = cfg.params()
    F, trace = descend(E, window, integrand, params)
    flat = replaceable_spread(F, window, params.anchor_offset, params.max_arc_edges)
    out["csv"] = ("trace.csv", trace.to_csv())
    out["svg"] = ("final.svg", render_svg(F, window, [(s.chord_start, s.chord_end)
                                                      for s in trace.steps if s.kind == "arc"]))
    out["scene"] = ("final_scene.json", F, window)
    return _report(cfg, {
        "integrand": integrand.to_json(),
        "trace": trace.to_json(),
        "flatness": {"replaceable_spread": flat, "flat_tol": params.flat_tol,
                     "passes": flat <= params.flat_tol},
        "final_set": F.to_json(),
    })


def _cmd_bernstein(cfg: RunConfig, out: dict):
    if cfg.rho is None:
        raise UsageError("bernstein needs --rho")
    integrand = load_integrand(cfg.integrand)
    rep = bernstein_check(integrand, cfg.rho, cfg.delta)
    return _report(cfg, {"integrand": integrand.to_json(), **rep.to_json()})


def _cmd_convexity(cfg: RunConfig, out: dict):
    integrand = load_integrand(cfg.integrand)
    rep = strict_convexity_check(integrand, cfg.samples)
    bounds = comparability_bounds(integrand, cfg.samples)
    return _report(cfg, {
        "integrand": integrand.to_json(),
        "strictly_convex_declared": integrand.strictly_convex_declared,
        "symmetric": integrand.symmetric,
        "is_strict": rep.is_strict,
        "worst_slack": rep.worst_slack,
        "worst_pair": [list(v) for v in rep.worst_pair],
        "n_pairs": rep.n_pairs,
        "c_lower": bounds.c_lower,
        "C_upper": bounds.C_upper,
    })


def _cmd_verify(cfg: RunConfig, out: dict):
    scene = load_scene(cfg.scene) if cfg.scene else None
    if scene is None:
        raise UsageError("verify needs --scene")
    E = scene.set
    window = load_window(cfg.window) if cfg.window else scene.window
    tol = cfg.flat_tol if cfg.flat_tol is not None else DescentParams().flat_tol
    body = {
        "valid": E.is_valid(),
        "crossings": [p.tolist() for p in detect_crossings(E)],
        "flatness": flatness(E, tol).to_json(),
    }
    if window is not None:
        body["replaceable_spread"] = replaceable_spread(E, window)
        body["interior_corner_turn"] = interior_corner_turn(E, window)
    if cfg.other is not None:
        F = load_scene(cfg.other).set
        body["gauss_green"] = check_gauss_green_identities(E, F, window).to_json()
    return _report(cfg, body)


HANDLERS = {
    "energy": _cmd_energy,
    "minimize": _cmd_minimize,
    "bernstein": _cmd_bernstein,
    "convexity": _cmd_convexity,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig) -> dict:
    """Execute one command, write artifacts, and return the JSON report."""
    if cfg.command not in HANDLERS:
        raise UsageError(f"unknown command {cfg.command!r}")
    artifacts: dict = {}
    report = HANDLERS[cfg.command](cfg, artifacts)
    out_dir = cfg.out or os.environ.get(OUT_ENV)
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        name = {"minimize": "trace.json"}.get(cfg.command, f"{cfg.command}.json")
        if "json" in cfg.emit:
            (d / name).write_text(dumps(report))
            if "scene" in artifacts:
                fname, F, window = artifacts["scene"]
                save_scene(d / fname, F, window)
        for kind in ("csv", "svg"):
            if kind in cfg.emit and kind in artifacts:
                fname, text = artifacts[kind]
                (d / fname).write_text(text)
    return report


def _emit_list(text: str) -> tuple:
    items = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in items if s not in EMITS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown emit kind(s): {', '.join(bad)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="anisoperim", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--scene")
    ap.add_argument("--integrand", default="euclidean",
                    help="integrand JSON file or built-in name")
    ap.add_argument("--window")
    ap.add_argument("--other", help="second scene for the set-operation identities (verify)")
    ap.add_argument("--gain-tol", type=float)
    ap.add_argument("--flat-tol", type=float)
    ap.add_argument("--max-steps", type=int)
    ap.add_argument("--out")
    ap.add_argument("--emit", type=_emit_list, default=EMITS)
    ap.add_argument("--rho", type=float)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--samples", type=int, default=360)
    return ap




def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        if exc.code:
            _error("usage_error", "invalid command line")
        return int(exc.code or 0)
    cfg = RunConfig(
        command=ns.command, scene=ns.scene, integrand=ns.integrand, window=ns.window,
        gain_tol=ns.gain_tol, flat_tol=ns.flat_tol, max_steps=ns.max_steps, out=ns.out,
        emit=ns.emit, rho=ns.rho, delta=ns.delta, samples=ns.samples, other=ns.other,
    )
    try:
        report = run(cfg)
    except SceneError as exc:
        return _error(exc.code, str(exc), **{k: v for k, v in exc.to_json().items()
                                             if k not in ("code", "message")})
    except UsageError as exc:
        return _error("usage_error", str(exc))
    except IntegrandError as exc:
        return _error("integrand_error", str(exc))
    except GeometryError as exc:
        return _error("geometry_error", str(exc))
    except ReplacementError as exc:
        return _error("replacement_error", str(exc))
    except ValueError as exc:
        return _error("value_error", str(exc))
    sys.stdout.write(dumps(report))
    return 0


def _error(code: str, message: str, **extra) -> int:
    sys.stderr.write(dumps({"error": {"code": code, "message": message, **extra}}))
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
