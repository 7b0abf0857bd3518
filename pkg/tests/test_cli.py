import json
import subprocess
import sys

import pytest

from uuvplan.cli import main


def test_plan(capsys):
    assert main(["plan"]) == 0
    out = capsys.readouterr().out
    assert "length: 10.8995" in out and "(9, 9)" in out


def test_plan_3d_random(capsys):
    assert main(["plan", "--dims", "3", "--ratio", "0.1", "--seed", "2"]) == 0
    assert "status:" in capsys.readouterr().out


def test_oracle(capsys):
    assert main(["oracle", "--dims", "3"]) == 0
    assert "length: 13.5386" in capsys.readouterr().out


def test_simulate(tmp_path, capsys):
    assert main(["simulate", "--out-dir", str(tmp_path), "--variant", "cbnnp", "--dt", "0.02", "--format", "json"]) == 0
    assert (tmp_path / "scenario_cbnnp_trajectory.csv").exists()
    assert json.loads((tmp_path / "scenario_records.json").read_text())[0]["variant"] == "cbnnp"
    assert "cbnnp: 10.8995" in capsys.readouterr().out


def test_sweep(tmp_path, capsys):
    assert main(["sweep", "speeds2d", "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "speeds2d_table.csv").read_text().startswith("algorithm,0.05,0.1")
    assert main(["sweep", "ratio", "--seeds", "3", "--format", "json", "--out-dir", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "ratio_table.json").read_text())["columns"][0] == "ratio"


def test_validate_config(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"version": 1, "variant": "bnnp", "current": {"kind": "static2d", "speed": 0.2}}))
    assert main(["validate-config", "--config", str(good)]) == 0
    assert "config ok" in capsys.readouterr().out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"k_g": 3}))
    assert main(["validate-config", "--config", str(bad)]) != 0
    assert "k_g" in capsys.readouterr().err
    assert main(["plan", "--config", str(tmp_path / "missing.json")]) != 0


def test_config_drives_simulate(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"name": "run1", "map": {"extent": [8, 8]}, "origin": [0, 0], "destination": [7, 5],
                               "current": {"kind": "static2d", "speed": 0.3, "theta_xy": 90},
                               "output_dir": str(tmp_path / "o")}))
    assert main(["simulate", "--config", str(cfg)]) == 0
    assert (tmp_path / "o" / "run1_bnnp_trajectory.csv").exists()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "uuvplan", "oracle"], capture_output=True, text=True)
    assert proc.returncode == 0 and "10.8995" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "uuvplan", "sweep", "nope"], capture_output=True, text=True)
    assert proc.returncode != 0
