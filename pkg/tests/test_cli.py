import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from anisoperim.cli import RunConfig, main, run
from anisoperim.geometry import PolygonalSet, Window, square
from anisoperim.io import (
    load_scene,
    load_window,
    save_integrand,
    save_scene,
    save_window,
)
from anisoperim.minimize import descend
from anisoperim.norms import Integrand

FIXTURES = Path(__file__).parent / "fixtures" / "tiny"


@pytest.fixture
def files(tmp_path):
    save_scene(tmp_path / "square.json", square(0, 0, 1))
    save_integrand(tmp_path / "euclidean.json", Integrand.euclidean())
    save_integrand(tmp_path / "ellipse_diag14.json", Integrand.ellipse([[1, 0], [0, 4]]))
    save_window(tmp_path / "disk.json", Window.disk((0, 0), 1))
    return tmp_path


def _run(capsys, argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_energy_ellipse_square(files, capsys):
    code, out, _ = _run(capsys, ["energy", "--scene", files / "square.json",
                                 "--integrand", files / "ellipse_diag14.json"])
    assert code == 0
    rep = json.loads(out)
    # horizontal sides carry weight 2, vertical sides weight 1
    assert rep["total"] == pytest.approx(6.0, abs=1e-12)
    assert rep["schema_version"] == 1


def test_bernstein_command(files, capsys):
    code, out, _ = _run(capsys, ["bernstein", "--integrand", files / "euclidean.json", "--rho", 2])
    assert code == 0
    rep = json.loads(out)
    assert rep["passes"] is True
    assert rep["energy_E"] == pytest.approx(8.0, abs=1e-12)
    assert rep["energy_F"] == pytest.approx(4.0, abs=1e-12)


def test_convexity_command(capsys):
    code, out, _ = _run(capsys, ["convexity", "--integrand", "crystalline_l1", "--samples", 90])
    assert code == 0
    assert json.loads(out)["is_strict"] is False


def test_minimize_artifacts_match_library(files, capsys):
    scene = FIXTURES / "corner.json"
    out_dir = files / "out"
    code, out, _ = _run(capsys, ["minimize", "--scene", scene, "--integrand", files / "euclidean.json",
                                 "--window", files / "disk.json", "--out", out_dir])
    assert code == 0
    for name in ("trace.json", "trace.csv", "final.svg", "final_scene.json"):
        assert (out_dir / name).is_file()
    rep = json.loads((out_dir / "trace.json").read_text())
    assert rep["flatness"]["passes"] is True
    s = load_scene(scene)
    F, trace = descend(s.set, Window.disk((0, 0), 1), Integrand.euclidean())
    assert rep["trace"]["final_energy"] == trace.final_energy
    assert load_scene(out_dir / "final_scene.json").set.equals(F)
    assert (out_dir / "final.svg").read_text().startswith("<svg")
    assert (out_dir / "trace.csv").read_text().startswith("step,kind,")


def test_emit_selects_artifacts(files, capsys):
    out_dir = files / "only_csv"
    code, _, _ = _run(capsys, ["minimize", "--scene", FIXTURES / "corner.json", "--out", out_dir,
                               "--emit", "csv"])
    assert code == 0
    assert sorted(p.name for p in out_dir.iterdir()) == ["trace.csv"]


def test_output_dir_from_environment(files, capsys, monkeypatch):
    out_dir = files / "env_out"
    monkeypatch.setenv("ANISOPERIM_OUT", str(out_dir))
    code, _, _ = _run(capsys, ["energy", "--scene", files / "square.json"])
    assert code == 0
    assert (out_dir / "energy.json").is_file()


def test_reports_are_byte_identical(files):
    cfg = dict(command="minimize", scene=str(FIXTURES / "zigzag.json"), integrand="p_norm")
    for tag in ("a", "b"):
        run(RunConfig(out=str(files / tag), **cfg))
    for name in ("trace.json", "trace.csv", "final.svg", "final_scene.json"):
        assert (files / "a" / name).read_bytes() == (files / "b" / name).read_bytes()


def test_parse_error_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "set": {\n    "loops": [[0, 0],,]\n  }\n}\n')
    code, out, err = _run(capsys, ["energy", "--scene", bad])
    assert code == 2 and out == ""
    e = json.loads(err)["error"]
    assert e["code"] == "parse_error"
    assert e["line"] == 3
    assert e["column"] > 1


def test_validation_errors_are_typed(tmp_path, capsys):
    bowtie = {"schema_version": 1, "set": {"loops": [[[0, 0], [1, 1], [1, 0], [0, 1]]]}}
    (tmp_path / "bowtie.json").write_text(json.dumps(bowtie))
    code, _, err = _run(capsys, ["energy", "--scene", tmp_path / "bowtie.json"])
    assert code == 2
    assert json.loads(err)["error"]["code"] == "geometry_error"

    (tmp_path / "v2.json").write_text(json.dumps({"schema_version": 2, "set": {"loops": []}}))
    code, _, err = _run(capsys, ["energy", "--scene", tmp_path / "v2.json"])
    assert json.loads(err)["error"]["code"] == "schema_error"

    code, _, err = _run(capsys, ["energy", "--scene", tmp_path / "missing.json"])
    assert json.loads(err)["error"]["code"] == "io_error"

    code, _, err = _run(capsys, ["bernstein"])
    assert code == 2
    assert json.loads(err)["error"]["code"] == "usage_error"


def test_verify_command(files, capsys):
    save_scene(files / "half.json", PolygonalSet.from_loops([[[0.5, 0], [1, 0], [1, 1], [0.5, 1]]]))
    code, out, _ = _run(capsys, ["verify", "--scene", files / "square.json", "--other", files / "half.json"])
    assert code == 0
    rep = json.loads(out)
    assert rep["valid"] is True and rep["crossings"] == []
    assert rep["gauss_green"]["passes"] is True


def test_scene_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    L = rng.uniform(-1, 1, (3, 2))
    u, v = L[1] - L[0], L[2] - L[0]
    if u[0] * v[1] - u[1] * v[0] < 0:
        L = L[::-1]
    E = PolygonalSet.from_loops([L * np.pi * 1e3])
    W = Window.polygon([[-1e4, -1e4], [1e4, -1e4], [1e4, 1e4], [-1e4, 1e4]])
    save_scene(tmp_path / "a.json", E, W)
    s1 = load_scene(tmp_path / "a.json")
    save_scene(tmp_path / "b.json", s1.set, s1.window)
    s2 = load_scene(tmp_path / "b.json")
    for A, B in zip(E.loops, s2.set.loops):
        assert np.max(np.abs(A - B)) <= 1e-15 * max(1.0, np.max(np.abs(A)))
    assert s2.window.to_json() == W.to_json()
    save_window(tmp_path / "w.json", W)
    assert load_window(tmp_path / "w.json").to_json() == W.to_json()


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "anisoperim", "energy", "--scene",
                          str(files / "square.json")], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["total"] == pytest.approx(4.0)
