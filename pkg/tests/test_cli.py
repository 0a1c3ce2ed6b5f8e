"""Command-line interface: artifacts, exit codes, env overrides."""

import csv
import hashlib
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from bellbox.cli import main

pytestmark = pytest.mark.usefixtures("clean_env")


@pytest.fixture
def clean_env(monkeypatch):
    for var in ("BELLBOX_SPECTRUM_STRIDE", "BELLBOX_BURN_IN",
                "BELLBOX_FAULT_TTILDE_STEP"):
        monkeypatch.delenv(var, raising=False)


def _write_config(path: Path, **overrides) -> Path:
    keys = {"N": 6, "mL": 5.0, "seed": 3, "Nk": 4, "n_steps": 60,
            "spectrum_stride": 20, "consistency_tol": 1e-4}
    keys.update(overrides)
    path.write_text("".join(f"{k} = {v}\n" for k, v in keys.items()))
    return path


def _rows(path: Path) -> list[list[str]]:
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_run_writes_artifact_set(tmp_path, capsys):
    cfg = _write_config(tmp_path / "run.cfg")
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0

    names = {p.name for p in out.iterdir()}
    assert names == {"record.json", "spectrum.csv", "fit.csv",
                     "checkpoint.bin", "manifest.json"}
    record = json.loads((out / "record.json").read_text())
    assert record["config"]["N"] == 6
    assert record["n_steps_run"] == 60
    assert len(record["snapshots"]) == 3

    fit_rows = _rows(out / "fit.csv")
    assert fit_rows[0][:3] == ["t_over_L", "c", "c_stderr"]
    assert len(fit_rows) == 4

    spec_rows = _rows(out / "spectrum.csv")
    assert spec_rows[0] == ["t_over_L", "s", "re_lambda", "im_lambda", "abs_lambda"]
    assert len(spec_rows) == 1 + 3 * 36    # full spectrum per snapshot

    summary = capsys.readouterr().out
    assert "run: N=6" in summary
    assert "stopped: n_steps after 60 steps" in summary


def test_run_manifest_covers_all_artifacts(tmp_path):
    cfg = _write_config(tmp_path / "run.cfg", dump_probabilities="true")
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0

    manifest = json.loads((out / "manifest.json").read_text())
    listed = {entry["path"] for entry in manifest["files"]}
    on_disk = {p.name for p in out.iterdir()} - {"manifest.json"}
    assert listed == on_disk
    assert "probabilities.csv" in listed
    for entry in manifest["files"]:
        blob = (out / entry["path"]).read_bytes()
        assert hashlib.sha256(blob).hexdigest() == entry["sha256"]
        assert len(blob) == entry["bytes"]
    assert manifest["config"]["N"] == 6
    assert manifest["started"] <= manifest["finished"]

    prob_rows = _rows(out / "probabilities.csv")
    assert len(prob_rows) == 1 + 1 + 3     # header, t=0, one per snapshot
    for row in prob_rows[1:]:
        assert sum(map(float, row[1:])) == pytest.approx(1.0, abs=1e-9)


def test_run_rejects_bad_config(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("N = 1\n")
    code = main(["run", "--config", str(bad), "--out", str(tmp_path / "o")])
    assert code == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "config"
    assert "N" in err["message"]


def test_run_missing_config_is_io_error(tmp_path, capsys):
    code = main(["run", "--config", str(tmp_path / "nope.cfg"),
                 "--out", str(tmp_path / "o")])
    assert code == 2
    assert json.loads(capsys.readouterr().err.strip())["error"] == "io"


def test_run_fault_injection_exits_3(tmp_path, capsys, monkeypatch):
    cfg = _write_config(tmp_path / "run.cfg", consistency_tol=1e-8)
    monkeypatch.setenv("BELLBOX_FAULT_TTILDE_STEP", "5")
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 3
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "integrity"
    assert "lost track" in err["message"]


def test_env_overrides_reach_the_record(tmp_path, monkeypatch):
    cfg = _write_config(tmp_path / "run.cfg")
    monkeypatch.setenv("BELLBOX_SPECTRUM_STRIDE", "30")
    monkeypatch.setenv("BELLBOX_BURN_IN", "0.5")
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    record = json.loads((out / "record.json").read_text())
    assert record["config"]["spectrum_stride"] == 30
    assert record["config"]["burn_in"] == 0.5
    assert len(record["snapshots"]) == 2


def test_env_override_must_be_integer(tmp_path, capsys, monkeypatch):
    cfg = _write_config(tmp_path / "run.cfg")
    monkeypatch.setenv("BELLBOX_SPECTRUM_STRIDE", "often")
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "BELLBOX_SPECTRUM_STRIDE" in capsys.readouterr().err


def test_spectrum_reanalysis_matches_run(tmp_path, capsys):
    # no stop rule fires, so the checkpoint lands exactly on the last snapshot
    cfg = _write_config(tmp_path / "run.cfg", N=7, n_steps=100,
                        spectrum_stride=25, c_span=1e9, c_ceiling=1e9)
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    redo = tmp_path / "redo"
    assert main(["spectrum", "--checkpoint", str(out / "checkpoint.bin"),
                 "--out", str(redo)]) == 0

    record = json.loads((out / "record.json").read_text())
    last = record["snapshots"][-1]
    spectrum = json.loads((redo / "spectrum.json").read_text())
    assert spectrum["step"] == record["n_steps_run"]
    assert spectrum["N"] == 7
    assert spectrum["t_over_L"] == last["t_over_L"]
    assert spectrum["c"] == last["c"]
    assert spectrum["n_modes_used"] == last["n_modes_used"]
    assert spectrum["dispersion"] == last["dispersion"]

    run_rows = _rows(out / "spectrum.csv")
    redo_rows = _rows(redo / "spectrum.csv")
    assert redo_rows == [run_rows[0]] + run_rows[-49:]
    assert "spectrum: step=100" in capsys.readouterr().out


def test_spectrum_rejects_corrupt_checkpoint(tmp_path, capsys):
    bad = tmp_path / "checkpoint.bin"
    bad.write_bytes(b"BELLBOX1" + b"\x00" * 40)
    code = main(["spectrum", "--checkpoint", str(bad), "--out", str(tmp_path / "o")])
    assert code == 2
    assert json.loads(capsys.readouterr().err.strip())["error"] == "config"


def _write_sweep_spec(path: Path) -> Path:
    path.write_text(
        "N = 6, 7\nmL = 5.0\nseed = 3\nn_steps = 80\n"
        "spectrum_stride = 20\nconsistency_tol = 1e-4\n")
    return path


def test_sweep_writes_per_value_dirs_and_summary(tmp_path, capsys):
    spec = _write_sweep_spec(tmp_path / "sweep.cfg")
    out = tmp_path / "sweep"
    assert main(["sweep", "--spec", str(spec), "--out", str(out), "--jobs", "1"]) == 0

    assert (out / "N_6" / "record.json").exists()
    assert (out / "N_7" / "checkpoint.bin").exists()
    summary = json.loads((out / "sweep.json").read_text())
    assert summary["axis"] == "N"
    assert summary["values"] == [6, 7]
    assert summary["failures"] == []
    assert summary["scaling"] is None         # needs >= 3 records

    rows = _rows(out / "sweep.csv")
    assert rows[0][0] == "N"
    assert [r[0] for r in rows[1:]] == ["6", "7"]
    table = capsys.readouterr().out
    assert "sweep over N: 2 records, 0 failures" in table


def test_sweep_is_deterministic_across_jobs(tmp_path):
    spec = _write_sweep_spec(tmp_path / "sweep.cfg")
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    assert main(["sweep", "--spec", str(spec), "--out", str(out1), "--jobs", "1"]) == 0
    assert main(["sweep", "--spec", str(spec), "--out", str(out2), "--jobs", "2"]) == 0
    assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()
    for sub in ("N_6", "N_7"):
        a = json.loads((out1 / sub / "record.json").read_text())
        b = json.loads((out2 / sub / "record.json").read_text())
        assert a["snapshots"] == b["snapshots"]


def test_sweep_reports_failures_with_exit_3(tmp_path, capsys):
    spec = tmp_path / "sweep.cfg"
    spec.write_text(
        "N = 6, 7\nseed = 3\nn_steps = 40\nspectrum_stride = 20\n"
        "consistency_tol = 1e-300\n")
    out = tmp_path / "sweep"
    code = main(["sweep", "--spec", str(spec), "--out", str(out)])
    assert code == 3
    summary = json.loads((out / "sweep.json").read_text())
    assert len(summary["failures"]) == 2
    assert "lost track" in summary["failures"][0]["error"]
    assert "failed: N=6" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    cfg = _write_config(tmp_path / "run.cfg", n_steps=40)
    proc = subprocess.run(
        [sys.executable, "-m", "bellbox.cli", "run", "--config", str(cfg),
         "--out", str(tmp_path / "out")],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert "stopped: n_steps after 40 steps" in proc.stdout
    assert (tmp_path / "out" / "manifest.json").exists()
