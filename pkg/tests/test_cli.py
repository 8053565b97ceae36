import csv
import json
import subprocess
import sys

import pytest

from fdasec.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from fdasec.scenario import table1_path

TABLE1 = str(table1_path())


def rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_simulate_secure_spot(tmp_path, capsys):
    assert main(["simulate", TABLE1, "--out", str(tmp_path)]) == EXIT_OK
    m = rows(tmp_path / "simulate_metrics.csv")[0]
    assert float(m["evm"]) < 1e-12 and float(m["ser"]) == 0
    assert len(rows(tmp_path / "simulate_constellation.csv")) == 40
    assert "ser=0" in capsys.readouterr().out


def test_simulate_off_spot(tmp_path):
    assert main(["simulate", TABLE1, "--range", "36000", "--out", str(tmp_path)]) == EXIT_OK
    assert float(rows(tmp_path / "simulate_metrics.csv")[0]["ser"]) == pytest.approx(0.725)


def test_sweep_range_minimum(tmp_path):
    assert main(["sweep", TABLE1, "--axis", "range", "--out", str(tmp_path)]) == EXIT_OK
    data = rows(tmp_path / "sweep_range.csv")
    assert len(data) == 3001
    best = min(data, key=lambda r: float(r["evm"]))
    assert float(best["range_m"]) == 30e3


def test_sweep_without_axis_values_is_usage_error(tmp_path):
    assert main(["sweep", TABLE1, "--axis", "time", "--out", str(tmp_path)]) == EXIT_USAGE


def test_demo_propagation(tmp_path, capsys):
    code = main(["demo-propagation", TABLE1, "--times", "0,5us,10us,15us,20us", "--out", str(tmp_path)])
    assert code == EXIT_OK
    region = rows(tmp_path / "propagation_region.csv")
    assert len(region) == 5
    last = region[-1]
    assert float(last["propagated_target_m"]) == pytest.approx(36e3)
    assert float(last["ser_at_target"]) == 0
    out = capsys.readouterr().out
    assert "region velocity" in out and "clean" in out


def test_verify_passes(tmp_path):
    assert main(["verify", TABLE1, "--out", str(tmp_path)]) == EXIT_OK
    assert all(r["status"] in ("PASS", "SKIP") for r in rows(tmp_path / "verify.csv"))


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    from fdasec import cli
    from fdasec.verify import CheckResult
    monkeypatch.setattr(cli, "run_checks", lambda sf: [CheckResult("x", "FAIL", 1.0, 0.1)])
    assert main(["verify", TABLE1, "--out", str(tmp_path)]) == EXIT_VERIFY


def test_residual_noise(tmp_path):
    assert main(["residual-noise", TABLE1, "--periods", "10ns,1us", "--out", str(tmp_path)]) == EXIT_OK
    data = rows(tmp_path / "residual_noise.csv")
    assert float(data[0]["evm"]) < float(data[1]["evm"])


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", TABLE1])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == EXIT_USAGE
    bad = tmp_path / "bad.scn"
    bad.write_text("[array]\n")
    assert main(["verify", str(bad), "--out", str(tmp_path)]) == EXIT_USAGE


def test_missing_file_is_io_error(tmp_path):
    assert main(["verify", str(tmp_path / "nope.scn"), "--out", str(tmp_path)]) == EXIT_IO


def test_manifest_and_replay(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", TABLE1, "--axis", "angle", "--seed", "3", "--out", str(a)]) == EXIT_OK
    manifest = json.loads((a / "sweep_manifest.json").read_text())
    assert manifest["seed"] == 3 and manifest["command"] == "sweep"
    assert main(["replay", str(a / "sweep_manifest.json"), "--out", str(b)]) == EXIT_OK
    assert (a / "sweep_angle.csv").read_bytes() == (b / "sweep_angle.csv").read_bytes()
    assert json.loads((b / "sweep_manifest.json").read_text())["outputs"] == manifest["outputs"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fdasec", "verify", TABLE1, "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "checks passed" in proc.stdout
