"""End-to-end CLI tests via subprocess.

Every artifact the CLI writes is re-parsed here; determinism is checked
byte for byte.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from gaborlab.hermite_bargmann import SampledSignal


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "gaborlab.cli", *args],
        capture_output=True, text=True, timeout=600,
    )


def test_analyze_stdout_report():
    proc = run_cli("analyze", "--rect", "0.5,0.5", "--n", "1")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["schema"] == "frame-report/1"
    assert doc["density_classification"] == "frame"
    assert doc["wexler_raz_residual"] < 1e-9
    assert doc["config"]["command"] == "analyze"
    assert doc["config"]["n"] == 1


def test_analyze_not_frame_and_csv(tmp_path):
    out = tmp_path / "report.json"
    csv = tmp_path / "report.csv"
    proc = run_cli("analyze", "--square", "0.75", "--n", "1",
                   "--json", str(out), "--csv", str(csv))
    assert proc.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["density_classification"] == "not-frame"
    assert doc["wexler_raz_residual"] is None
    lines = csv.read_text().splitlines()
    assert lines[0].startswith("#")
    header_at = next(i for i, ln in enumerate(lines) if not ln.startswith("#"))
    assert lines[header_at] == "key,value"
    assert any(ln.startswith("density_classification,") for ln in lines)


def test_dual_refuses_at_critical_density(tmp_path):
    proc = run_cli("dual", "--square", "0.6", "--n", "1",
                   "--json", str(tmp_path / "never.json"))
    assert proc.returncode == 2
    assert "gaborlab: error" in proc.stderr
    assert not (tmp_path / "never.json").exists()


def test_dual_artifacts(tmp_path):
    out = tmp_path / "dual.json"
    csv = tmp_path / "dual.csv"
    proc = run_cli("dual", "--square", "0.5", "--n", "0",
                   "--tmax", "4", "--json", str(out), "--csv", str(csv))
    assert proc.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == "dual-window/1"
    assert doc["residuals"]["wexler_raz"] < 1e-9
    assert doc["norms"]["m1_quadrature"] <= doc["norms"]["m1_bound"]
    sig = SampledSignal.from_csv(csv)
    assert sig.length == 2 * int(4 / (1.0 / 64.0)) + 1
    assert float(np.max(np.abs(sig.samples))) > 0.1


def test_sweep_artifacts(tmp_path):
    out = tmp_path / "sweep.json"
    csv = tmp_path / "sweep.csv"
    proc = run_cli("sweep", "--base-square", "1.0", "--scale-from", "0.6",
                   "--scale-to", "0.8", "--steps", "3", "--n", "0",
                   "--json", str(out), "--csv", str(csv))
    assert proc.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == "sweep/1"
    assert len(doc["rows"]) == 3
    lines = [ln for ln in csv.read_text().splitlines() if not ln.startswith("#")]
    assert lines[0].split(",")[:3] == ["q", "s", "rho"]
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert data.shape == (3, 8)
    # Larger q means denser lattice: lower-bound estimate decreases.
    assert np.all(np.diff(data[:, 7]) <= 1e-12)


def test_zak_check_verdict(tmp_path):
    out = tmp_path / "zak.json"
    proc = run_cli("zak-check", "--n", "1", "--a", "1.0",
                   "--grid", "128,128", "--json", str(out))
    assert proc.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == "zak-check/1"
    assert doc["is_frame"] is False
    proc0 = run_cli("zak-check", "--n", "0", "--grid", "128,128")
    assert json.loads(proc0.stdout)["is_frame"] is True


def test_elliptic_check_values():
    proc = run_cli("elliptic-check", "--square", "1.0")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["schema"] == "elliptic-check/1"
    assert doc["legendre_residual"] < 1e-12
    assert abs(doc["eta1"][0] - np.pi) < 1e-9


def test_stft_grid(tmp_path):
    csv = tmp_path / "stft.csv"
    proc = run_cli("stft", "--n", "0", "--signal-order", "0",
                   "--grid", "1,1,9,9", "--csv", str(csv))
    assert proc.returncode == 0
    lines = [ln for ln in csv.read_text().splitlines() if not ln.startswith("#")]
    assert len(lines) == 1 + 81


def test_json_determinism(tmp_path):
    out = tmp_path / "rep.json"
    args = ("analyze", "--square", "0.4", "--n", "0", "--json", str(out))
    run_cli(*args)
    first = out.read_bytes()
    run_cli(*args)
    assert out.read_bytes() == first


def test_config_file_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 1}))
    proc = run_cli("analyze", "--square", "0.4", "--n", "0",
                   "--config", str(cfg))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 1

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"no-such-flag": 3}))
    proc = run_cli("analyze", "--square", "0.4", "--n", "0",
                   "--config", str(bad))
    assert proc.returncode == 1


def test_usage_errors_exit_one():
    assert run_cli("analyze", "--square", "0.4").returncode == 1
    assert run_cli("analyze", "--square", "0.4", "--rect", "1,1",
                   "--n", "0").returncode == 1
    assert run_cli("analyze", "--lattice", "1,2,3", "--n", "0").returncode == 1
    assert run_cli().returncode == 1
    proc = run_cli("dual", "--square", "0.5", "--n", "0", "--j", "3")
    assert proc.returncode == 1


def test_version_flag():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert proc.stdout.startswith("gaborlab ")
