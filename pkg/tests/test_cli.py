import json
import subprocess
import sys

import pytest

from bifcascade import cli
from bifcascade.errors import LevelError, NoConvergenceError
from bifcascade.render import read_ppm
from bifcascade.verification import CheckResult


def run(tmp_path, command, cfg, out="out"):
    path = tmp_path / f"{command}.json"
    path.write_text(json.dumps(cfg))
    return cli.main([command, "--config", str(path), "--out", str(tmp_path / out)])


def load(tmp_path, name, out="out"):
    return json.loads((tmp_path / out / name).read_text())


HALVES = {"generator": {"kind": "constant", "p": 1, "q": 2, "length": 4}}


def test_cascade_writes_trace(tmp_path):
    assert run(tmp_path, "cascade", {"cascade": {"arguments": HALVES}}) == 1  # wrong key shape
    assert run(tmp_path, "cascade", {"cascade": HALVES}) == 0
    doc = load(tmp_path, "trace.json")
    assert doc["summary"]["depth"] == 4
    assert doc["mlc_rate"]["max"] == 0
    rows = (tmp_path / "out" / "trace.csv").read_text().strip().splitlines()
    assert len(rows) == 1 + 4


def test_cascade_empty_is_config_error(tmp_path):
    assert run(tmp_path, "cascade", {"cascade": {"arguments": []}}) == 1


def test_fast_decay_floor_field(tmp_path):
    cfg = {"cascade": {"arguments": ["1/3", "1/8", {"p": 1, "q": 256}]}}
    assert run(tmp_path, "cascade", cfg) == 0
    assert load(tmp_path, "trace.json")["summary"]["orbit_distance_floor"] > 0.01


def test_precision_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("CASCADE_PRECISION", "30")
    assert run(tmp_path, "cascade", {"cascade": HALVES}) == 0
    assert load(tmp_path, "trace.json")["spec"]["precision"] == 30
    monkeypatch.setenv("CASCADE_PRECISION", "many")
    assert run(tmp_path, "cascade", {"cascade": HALVES}) == 1


def test_numerical_failure_writes_error(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise LevelError(3, NoConvergenceError("no convergence", 1.0))

    monkeypatch.setattr(cli, "run_cascade", boom)
    assert run(tmp_path, "cascade", {"cascade": HALVES}) == 2
    err = load(tmp_path, "error.json")
    assert err["level"] == 3 and err["cause"] == "NoConvergenceError"


def test_criteria_sequences(tmp_path):
    assert run(tmp_path, "criteria", {"criteria": {"sequence": ["1/2"] * 6}}) == 0
    doc = load(tmp_path, "criteria.json")
    assert doc["milnor_series"]["verdict"] == "diverging"
    assert 0.6 - float(doc["theorem2_condition"]["margin"]) == pytest.approx(2 ** -0.5)
    tower = {"criteria": {"generator": {"kind": "tower", "q0": 2, "length": 6}}}
    assert run(tmp_path, "criteria", tower) == 0
    doc = load(tmp_path, "criteria.json")
    assert doc["milnor_series"]["verdict"] == "diverging"
    assert doc["theorem2_condition"]["verdict"] == "satisfied"


def test_criteria_config_errors(tmp_path):
    assert run(tmp_path, "criteria", {"criteria": {"sequence": ["2/4", "1/2"]}}) == 1
    assert run(tmp_path, "criteria", {"criteria": {"sequence": ["1/2"]}}) == 1
    assert run(tmp_path, "criteria", {"criteria": {"sequence": ["1/2"] * 3, "a": 2}}) == 1
    assert run(tmp_path, "criteria", {}) == 1


def test_verify_default_and_loose(tmp_path):
    assert run(tmp_path, "verify", {}) == 0
    assert load(tmp_path, "verify.json")["all_hard_checks_passed"]
    assert run(tmp_path, "verify", {"tol": 1e-3}, out="loose") == 0
    checks = {c["name"]: c for c in load(tmp_path, "verify.json", "loose")["checks"]}
    assert checks["yoccoz_containment"]["passed"]


def test_verify_bad_constant(tmp_path):
    assert run(tmp_path, "verify", {"constants": {"K": 0}}) == 1
    assert run(tmp_path, "verify", {"constants": {"Z": 1}}) == 1


def test_verify_hard_failure_exit(tmp_path, monkeypatch):
    monkeypatch.setattr(cli.verification, "run_all",
                        lambda *a: [CheckResult("x", True, False, 1.0, 0.0)])
    assert run(tmp_path, "verify", {}) == 2


def test_render_with_overlay(tmp_path):
    cfg = {"cascade": HALVES,
           "image": {"center": [-1.4011, 0], "width": 0.01, "pixels": [40, 30], "max_iter": 128,
                     "overlay_cascade": True}}
    assert run(tmp_path, "render", cfg) == 0
    rgb = read_ppm((tmp_path / "out" / "render.ppm").read_bytes())
    assert rgb.shape == (30, 40, 3)


def test_render_errors(tmp_path):
    assert run(tmp_path, "render", {"image": {"pixels": [0, 0]}}) == 1
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    cfg = {"image": {"pixels": [4, 4], "max_iter": 4}}
    assert run(tmp_path, "render", cfg, out="blocker/sub") == 1


def test_missing_config_file(tmp_path):
    assert cli.main(["cascade", "--config", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path)]) == 1


def test_module_entry_point(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"criteria": {"sequence": ["1/3", "1/8", "1/256"]}}))
    proc = subprocess.run([sys.executable, "-m", "bifcascade", "criteria", "--config", str(cfg),
                           "--out", str(tmp_path / "o")], capture_output=True)
    assert proc.returncode == 0
    assert (tmp_path / "o" / "criteria.json").exists()
