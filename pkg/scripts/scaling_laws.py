"""Reproduce one of the three equilibrium-time scaling laws.

Writes a sweep spec for the chosen axis and hands it to the CLI, so the
output directory carries the full per-run artifact set plus sweep.csv /
sweep.json with the straight-line fit.

    python3 scripts/scaling_laws.py --axis N  --out runs/spacing
    python3 scripts/scaling_laws.py --axis mL --out runs/mass --jobs 2
    python3 scripts/scaling_laws.py --axis Nk --out runs/spread --full

--full switches from the desk-scale grids to the heavyweight ones
(N=30 reference lattice, more axis points; hours of wall time).
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bellbox.cli import main as cli_main

DESK = {
    "N": dict(axis_line="N = 15, 17, 20, 25", fixed={"mL": 5.0}),
    "mL": dict(axis_line="mL = 5, 10, 20", fixed={"N": 21}),
    "Nk": dict(axis_line="Nk = 4, 5, 6", fixed={"N": 21, "mL": 20.0}),
}
FULL = {
    "N": dict(axis_line="N = 15, 17, 20, 25, 30, 45", fixed={"mL": 5.0}),
    "mL": dict(axis_line="mL = 5, 10, 20, 30, 40", fixed={"N": 30}),
    "Nk": dict(axis_line="Nk = 4, 5, 6, 7, 8", fixed={"N": 30, "mL": 20.0}),
}

COMMON = {
    "seed": 7,
    "n_steps": 90000,
    "spectrum_stride": 250,
    "consistency_tol": 1e-4,   # column repairs at node sites sit near 1e-5
}


def build_spec(axis: str, full: bool) -> str:
    grid = (FULL if full else DESK)[axis]
    lines = [grid["axis_line"]]
    for key, value in {**grid["fixed"], **COMMON}.items():
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--axis", choices=("N", "mL", "Nk"), required=True)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--full", action="store_true",
                        help="paper-scale grids instead of desk-scale ones")
    args = parser.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    spec_path = out / "sweep.spec"
    spec_path.write_text(build_spec(args.axis, args.full))
    print(f"sweep spec -> {spec_path}")
    return cli_main(["sweep", "--spec", str(spec_path), "--out", str(out),
                     "--jobs", str(args.jobs)])


if __name__ == "__main__":
    raise SystemExit(run())
