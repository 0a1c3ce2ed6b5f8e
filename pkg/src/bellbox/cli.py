"""Command-line front end: run, sweep, spectrum.

Exit codes are stable: 0 success, 2 configuration or input problems, 3
numerical-integrity violations.  Errors are also emitted as a one-line
JSON object on stderr so wrapping scripts can parse failures.

Environment overrides (applied after the config file is read):
    BELLBOX_SPECTRUM_STRIDE   snapshot stride
    BELLBOX_BURN_IN           relaxation-fit burn-in (t/L)
    BELLBOX_FAULT_TTILDE_STEP test hook: corrupt the cumulative matrix at
                              this step to exercise integrity detection
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (RelaxationRecord, SweepResult, power_law_to_dict,
                       record_to_dict, run_experiment, run_sweep,
                       scaling_to_dict)
from .bell import read_checkpoint, write_checkpoint
from .config import RunConfig, parse_config_file, parse_sweep_file
from .errors import ConfigError, IntegrityError
from .spectral import (column_dispersion, eigen_spectrum, slope_fit,
                       write_spectrum_csv)


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _apply_env_overrides(cfg: RunConfig) -> RunConfig:
    stride = os.environ.get("BELLBOX_SPECTRUM_STRIDE")
    burn_in = os.environ.get("BELLBOX_BURN_IN")
    if stride is not None:
        try:
            cfg = replace(cfg, spectrum_stride=int(stride))
        except ValueError:
            raise ConfigError(f"BELLBOX_SPECTRUM_STRIDE={stride!r} is not an integer")
    if burn_in is not None:
        try:
            cfg = replace(cfg, burn_in=float(burn_in))
        except ValueError:
            raise ConfigError(f"BELLBOX_BURN_IN={burn_in!r} is not a number")
    return cfg


def _fault_step() -> int | None:
    raw = os.environ.get("BELLBOX_FAULT_TTILDE_STEP")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"BELLBOX_FAULT_TTILDE_STEP={raw!r} is not an integer")


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_fit_csv(path: Path, record: RelaxationRecord) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_over_L", "c", "c_stderr", "r2", "dispersion",
                         "v0_tv_distance"])
        for s in record.snapshots:
            writer.writerow([_fmt(s.t_over_L), _fmt(s.c), _fmt(s.c_stderr),
                             _fmt(s.c_r2), _fmt(s.dispersion),
                             _fmt(0.5 * s.stationary_gap)])


def _write_probabilities_csv(path: Path, record: RelaxationRecord) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        n_sites = record.initial_born.size
        writer.writerow(["t_over_L"] + [f"p_{i}" for i in range(n_sites)])
        writer.writerow([_fmt(0.0)] + [_fmt(p) for p in record.initial_born])
        for s in record.snapshots:
            if s.born is not None:
                writer.writerow([_fmt(s.t_over_L)] + [_fmt(p) for p in s.born])


def _write_manifest(out: Path, cfg_payload: dict, files: list[Path],
                    started: str) -> None:
    manifest = {
        "version": __version__,
        "started": started,
        "finished": _now(),
        "config": cfg_payload,
        "files": [{"path": f.name, "sha256": _sha256(f), "bytes": f.stat().st_size}
                  for f in files],
    }
    _write_json(out / "manifest.json", manifest)


def _emit_record(out: Path, record: RelaxationRecord, started: str) -> list[Path]:
    """Write the per-run artifact set; manifest last.  Returns file list."""
    lat = record.config.lattice
    record_path = out / "record.json"
    _write_json(record_path, record_to_dict(record))
    spectrum_path = out / "spectrum.csv"
    write_spectrum_csv(spectrum_path,
                       [(s.t_over_L, s.eigenvalues) for s in record.snapshots])
    fit_path = out / "fit.csv"
    _write_fit_csv(fit_path, record)
    checkpoint_path = out / "checkpoint.bin"
    write_checkpoint(checkpoint_path, lat.N, record.n_steps_run, lat.epsilon,
                     lat.L, record.final_psi, record.final_ttilde)
    files = [record_path, spectrum_path, fit_path, checkpoint_path]
    if record.config.dump_probabilities:
        prob_path = out / "probabilities.csv"
        _write_probabilities_csv(prob_path, record)
        files.append(prob_path)
    _write_manifest(out, record_to_dict(record)["config"], files, started)
    return files


def _summarize_run(record: RelaxationRecord) -> None:
    lat = record.config.lattice
    print(f"run: N={lat.N} mL={_fmt(lat.mL)} bc={lat.bc} Nk={lat.Nk} "
          f"seed={lat.seed} LdP={_fmt(record.momentum_spread)}")
    print(f"stopped: {record.stop_reason} after {record.n_steps_run} steps "
          f"({len(record.snapshots)} snapshots)")
    print(f"integrity: max transport gap {_fmt(record.max_transport_gap)}, "
          f"{record.repair_count} column repairs, "
          f"{record.renorm_count} renormalizations")
    if record.fit is not None:
        fit = record.fit
        if fit.detected:
            print(f"fit: c0={_fmt(fit.c0)}  L/t_eq={_fmt(fit.slope)} "
                  f"+- {_fmt(fit.slope_err)}  t_eq/L={_fmt(fit.t_eq_over_L)} "
                  f"+- {_fmt(fit.t_eq_err)}  r2={_fmt(fit.r2)}")
        else:
            print("fit: no relaxation detected (non-positive slope)")
    else:
        print(f"fit: unavailable ({record.fit_note})")


def cmd_run(config_path: str, out_dir: str) -> int:
    started = _now()
    cfg = _apply_env_overrides(parse_config_file(config_path))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    record = run_experiment(cfg, _corrupt_ttilde_step=_fault_step())
    _emit_record(out, record, started)
    _summarize_run(record)
    return 0


def cmd_sweep(spec_path: str, out_dir: str, jobs: int) -> int:
    started = _now()
    base, axis, values = parse_sweep_file(spec_path)
    base = _apply_env_overrides(base)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    result = run_sweep(base, axis, values, jobs=jobs,
                       progress=lambda msg: print(f"  {msg}"))
    files: list[Path] = []
    for value, record in zip_records(result):
        sub = out / f"{axis}_{value}"
        sub.mkdir(exist_ok=True)
        files.extend(_emit_record(sub, record, started))

    combined = out / "sweep.csv"
    _write_sweep_csv(combined, result)
    files.append(combined)
    summary_path = out / "sweep.json"
    _write_json(summary_path, {
        "axis": result.axis,
        "values": result.values,
        "failures": [{"value": v, "error": msg} for v, msg in result.failures],
        "scaling": scaling_to_dict(result.scaling),
        "power_law": power_law_to_dict(result.power_law),
    })
    files.append(summary_path)
    _write_manifest(out, {"axis": axis, "values": values}, files, started)

    _print_sweep_table(result)
    if result.failures:
        for value, msg in result.failures:
            print(f"failed: {axis}={value}: {msg}", file=sys.stderr)
        return 3 if len(result.records) < 3 else 0
    return 0


def zip_records(result: SweepResult):
    """Pair each successful record with its axis value, in axis order."""
    failed = {v for v, _ in result.failures}
    values = [v for v in result.values if v not in failed]
    return zip(values, result.records)


def _write_sweep_csv(path: Path, result: SweepResult) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([result.axis, "LdP", "c0", "slope", "slope_err",
                         "t_eq_over_L", "t_eq_err", "r2", "stop_reason"])
        for value, rec in zip_records(result):
            fit = rec.fit
            if fit is None:
                writer.writerow([value, _fmt(rec.momentum_spread)] + [""] * 6
                                + [rec.stop_reason])
            else:
                writer.writerow([value, _fmt(rec.momentum_spread), _fmt(fit.c0),
                                 _fmt(fit.slope), _fmt(fit.slope_err),
                                 _fmt(fit.t_eq_over_L), _fmt(fit.t_eq_err),
                                 _fmt(fit.r2), rec.stop_reason])


def _print_sweep_table(result: SweepResult) -> None:
    print(f"sweep over {result.axis}: {len(result.records)} records, "
          f"{len(result.failures)} failures")
    header = f"{result.axis:>8s} {'LdP':>8s} {'L/t_eq':>12s} {'t_eq/L':>12s} {'r2':>8s}"
    print(header)
    for value, rec in zip_records(result):
        fit = rec.fit
        if fit is None or not fit.detected:
            print(f"{value!s:>8s} {rec.momentum_spread:8.4g} {'-':>12s} {'-':>12s} {'-':>8s}")
        else:
            print(f"{value!s:>8s} {rec.momentum_spread:8.4g} "
                  f"{fit.slope:12.6g} {fit.t_eq_over_L:12.6g} {fit.r2:8.4f}")
    if result.scaling is not None:
        s = result.scaling
        print(f"scaling {s.model}: slope={_fmt(s.slope)} +- {_fmt(s.slope_err)}  "
              f"intercept={_fmt(s.intercept)} +- {_fmt(s.intercept_err)}  "
              f"r2={_fmt(s.r2)}")
    if result.power_law is not None:
        p = result.power_law
        print(f"power law: exponent={_fmt(p.exponent)} +- {_fmt(p.exponent_err)}  "
              f"r2={_fmt(p.r2)}")


def cmd_spectrum(checkpoint_path: str, out_dir: str) -> int:
    cp = read_checkpoint(checkpoint_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t_over_L = cp.step * cp.epsilon / cp.L
    snap = eigen_spectrum(cp.ttilde, cp.step, t_over_L)
    fit = slope_fit(snap.eigenvalues)
    spectrum_path = out / "spectrum.csv"
    write_spectrum_csv(spectrum_path, [(t_over_L, snap.eigenvalues)])
    dispersion = column_dispersion(cp.ttilde)
    _write_json(out / "spectrum.json", {
        "step": cp.step, "t_over_L": float(f"{t_over_L:.12g}"),
        "N": cp.N, "degenerate": snap.degenerate,
        "c": None if not fit.available else float(f"{fit.c:.12g}"),
        "c_r2": None if not fit.available else float(f"{fit.r2:.12g}"),
        "n_modes_used": fit.n_used,
        "dispersion": float(f"{dispersion:.12g}"),
    })
    print(f"spectrum: step={cp.step} t/L={_fmt(t_over_L)} "
          f"degenerate={snap.degenerate} "
          f"c={_fmt(fit.c) if fit.available else 'n/a'} "
          f"dispersion={_fmt(dispersion)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellbox",
        description="Stochastic jump dynamics on a 2D box lattice: "
                    "simulation, spectra and relaxation fits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single run from a config file")
    p_run.add_argument("--config", required=True, help="key = value config file")
    p_run.add_argument("--out", required=True, help="output directory")

    p_sweep = sub.add_parser("sweep", help="axis sweep from a sweep spec")
    p_sweep.add_argument("--spec", required=True,
                         help="config file with one comma-separated axis")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--jobs", type=int, default=1,
                         help="concurrent runs (default 1)")

    p_spec = sub.add_parser("spectrum", help="re-analyze a checkpoint")
    p_spec.add_argument("--checkpoint", required=True, help="checkpoint.bin path")
    p_spec.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args.config, args.out)
        if args.command == "sweep":
            return cmd_sweep(args.spec, args.out, args.jobs)
        return cmd_spectrum(args.checkpoint, args.out)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    except IntegrityError as exc:
        print(json.dumps({"error": "integrity", "message": str(exc)}), file=sys.stderr)
        return 3
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
