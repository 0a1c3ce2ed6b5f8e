"""Run configuration: dataclasses plus the plain-text config file format.

A config file is a flat list of ``key = value`` lines (``#`` starts a
comment).  Recognized keys and defaults:

    N                 lattice sites per direction (required, >= 2)
    L                 box length (default 1.0; only mL is physical)
    mL                dimensionless mass, m*L (default 5.0)
    bc                boundary condition, "dirichlet" or "periodic"
    Nk                modes per direction in the initial state (default 4)
    epsilon_factor    time step epsilon = epsilon_factor * L / N (default 0.02)
    seed              RNG seed for the initial phases (default 0)
    n_steps           hard cap on the number of time steps (default 20000)
    spectrum_stride   steps between spectral snapshots (default n_steps // 20)
    burn_in           t/L below which snapshots are excluded from the
                      relaxation fit (default 5.0)
    c_span            stop the run once c(t) has grown by this much past the
                      first post-burn-in snapshot (default 3.0)
    c_ceiling         stop once c(t) exceeds this value outright, as a
                      backstop when the span rule cannot trigger; fit
                      points above it are excluded (default 8.0)
    mode_floor        eigenvalue moduli below this are treated as solver
                      noise and left out of the spectrum slope fit
                      (default 1e-12)
    consistency_tol   abort threshold for the L1 gap between the cumulative
                      transport probabilities and |psi(t)|^2 (default 1e-8)
    dump_probabilities  also write per-snapshot site probabilities (default false)
    validate_stochasticity  track worst column-sum / negativity deviations of
                      every per-step T and snapshot cumulative product
                      (default false; adds two reductions per step)

A sweep file uses the same syntax with exactly one key carrying a
comma-separated list of values; that key is the swept axis.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError

BOUNDARY_CONDITIONS = ("dirichlet", "periodic")

# Keys a sweep may vary.  One record is run per value, all other keys shared.
SWEEPABLE_KEYS = ("N", "mL", "Nk", "epsilon_factor")


@dataclass(frozen=True)
class LatticeConfig:
    """Static description of the lattice, the particle and the initial state."""

    N: int
    mL: float = 5.0
    bc: str = "dirichlet"
    L: float = 1.0
    Nk: int = 4
    epsilon_factor: float = 0.02
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 2:
            raise ConfigError(f"N must be an integer >= 2, got {self.N!r}")
        if self.mL <= 0:
            raise ConfigError(f"mL must be positive, got {self.mL!r}")
        if self.L <= 0:
            raise ConfigError(f"L must be positive, got {self.L!r}")
        if self.bc not in BOUNDARY_CONDITIONS:
            raise ConfigError(f"bc must be one of {BOUNDARY_CONDITIONS}, got {self.bc!r}")
        if not isinstance(self.Nk, int) or not 1 <= self.Nk <= self.N:
            raise ConfigError(f"Nk must be an integer in [1, N], got {self.Nk!r}")
        if self.epsilon_factor <= 0:
            raise ConfigError(f"epsilon_factor must be positive, got {self.epsilon_factor!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")

    @property
    def a(self) -> float:
        return self.L / self.N

    @property
    def m(self) -> float:
        return self.mL / self.L

    @property
    def epsilon(self) -> float:
        return self.epsilon_factor * self.L / self.N

    @property
    def n_sites(self) -> int:
        return self.N * self.N


@dataclass(frozen=True)
class RunConfig:
    """A lattice plus the run protocol around it."""

    lattice: LatticeConfig
    n_steps: int = 20000
    spectrum_stride: int | None = None  # None: n_steps // 20
    burn_in: float = 5.0
    c_span: float = 3.0
    c_ceiling: float = 8.0
    mode_floor: float = 1e-12
    n_fit_modes: int = 25
    renorm_interval: int = 1000
    p_floor: float = 1e-14
    consistency_tol: float = 1e-8
    dump_probabilities: bool = False
    validate_stochasticity: bool = False

    def __post_init__(self):
        if self.n_steps < 1:
            raise ConfigError(f"n_steps must be >= 1, got {self.n_steps!r}")
        if self.spectrum_stride is not None and self.spectrum_stride < 1:
            raise ConfigError(f"spectrum_stride must be >= 1, got {self.spectrum_stride!r}")
        if self.burn_in < 0:
            raise ConfigError(f"burn_in must be >= 0, got {self.burn_in!r}")
        if self.c_span <= 0 or self.c_ceiling <= 0:
            raise ConfigError("c_span and c_ceiling must be positive")
        if self.mode_floor <= 0:
            raise ConfigError(f"mode_floor must be positive, got {self.mode_floor!r}")
        if self.n_fit_modes < 3:
            raise ConfigError(f"n_fit_modes must be >= 3, got {self.n_fit_modes!r}")
        if self.renorm_interval < 1:
            raise ConfigError(f"renorm_interval must be >= 1, got {self.renorm_interval!r}")
        if self.consistency_tol <= 0:
            raise ConfigError(f"consistency_tol must be positive, got {self.consistency_tol!r}")

    @property
    def stride(self) -> int:
        if self.spectrum_stride is not None:
            return self.spectrum_stride
        return max(1, self.n_steps // 20)


# ===== config file parsing =====

_LATTICE_KEYS = {
    "N": int,
    "L": float,
    "mL": float,
    "bc": str,
    "Nk": int,
    "epsilon_factor": float,
    "seed": int,
}
_RUN_KEYS = {
    "n_steps": int,
    "spectrum_stride": int,
    "burn_in": float,
    "c_span": float,
    "c_ceiling": float,
    "mode_floor": float,
    "consistency_tol": float,
    "dump_probabilities": bool,
    "validate_stochasticity": bool,
}


def _parse_scalar(key: str, raw: str, typ):
    raw = raw.strip()
    try:
        if typ is bool:
            lowered = raw.lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: cannot parse {raw!r} as {typ.__name__}") from exc


def _read_pairs(path: str | Path) -> dict[str, str]:
    pairs: dict[str, str] = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        if key in pairs:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        pairs[key] = raw.strip()
    return pairs


def _build_run_config(values: dict[str, object]) -> RunConfig:
    if "N" not in values:
        raise ConfigError("config is missing the required key 'N'")
    lat_kwargs = {k: v for k, v in values.items() if k in _LATTICE_KEYS}
    run_kwargs = {k: v for k, v in values.items() if k in _RUN_KEYS}
    return RunConfig(lattice=LatticeConfig(**lat_kwargs), **run_kwargs)


def parse_config_file(path: str | Path) -> RunConfig:
    """Parse a flat key = value config file into a RunConfig."""
    values: dict[str, object] = {}
    for key, raw in _read_pairs(path).items():
        typ = _LATTICE_KEYS.get(key) or _RUN_KEYS.get(key)
        if typ is None:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = _parse_scalar(key, raw, typ)
    return _build_run_config(values)


def parse_sweep_file(path: str | Path) -> tuple[RunConfig, str, list]:
    """Parse a sweep spec: a config file with one comma-separated axis.

    Returns (base_config, axis_key, axis_values).  The base config carries
    the first axis value so it validates; callers substitute the rest.
    """
    values: dict[str, object] = {}
    axis: str | None = None
    axis_values: list = []
    for key, raw in _read_pairs(path).items():
        typ = _LATTICE_KEYS.get(key) or _RUN_KEYS.get(key)
        if typ is None:
            raise ConfigError(f"unknown config key {key!r}")
        if "," in raw:
            if key not in SWEEPABLE_KEYS:
                raise ConfigError(f"key {key!r} cannot be swept (allowed: {SWEEPABLE_KEYS})")
            if axis is not None:
                raise ConfigError(f"sweep may vary only one axis, found {axis!r} and {key!r}")
            axis = key
            axis_values = [_parse_scalar(key, part, typ) for part in raw.split(",") if part.strip()]
            if len(axis_values) < 2:
                raise ConfigError(f"sweep axis {key!r} needs at least 2 values")
            if len(set(axis_values)) != len(axis_values):
                raise ConfigError(f"sweep axis {key!r} has duplicate values")
            values[key] = axis_values[0]
        else:
            values[key] = _parse_scalar(key, raw, typ)
    if axis is None:
        raise ConfigError("sweep file has no comma-separated axis to sweep")
    return _build_run_config(values), axis, axis_values


def with_axis_value(base: RunConfig, axis: str, value) -> RunConfig:
    """Return a copy of base with one lattice parameter replaced."""
    if axis not in SWEEPABLE_KEYS:
        raise ConfigError(f"not a sweepable axis: {axis!r}")
    return replace(base, lattice=replace(base.lattice, **{axis: value}))
