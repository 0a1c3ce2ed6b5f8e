"""Experiment orchestration, equilibrium-time fits and scaling laws.

A run steps the wavefunction and the cumulative transition matrix
together, captures spectral snapshots on a fixed stride, and summarizes
relaxation by fitting c(t) = c0 + (t/L) / (t_eq/L).  Sweeps repeat runs
along one lattice axis and condense them into a straight-line scaling fit:

    vs_a    L/t_eq  against  a/L       (lattice-spacing law)
    vs_mass t_eq/L  against  mL        (mass law)
    vs_dp2  L/t_eq  against  (L dP)^2  (momentum-spread law)

plus a log-log power-law probe of L/t_eq against L dP for spread sweeps.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .bell import CumulativeTransition, sample_step, transition_matrix, transport_gap
from .config import RunConfig, SWEEPABLE_KEYS
from .errors import ConfigError, IntegrityError
from .evolve import born_probability, current_matrix, evolution_operator, propagate
from .lattice import (build_hamiltonian, build_initial_state, momentum_spread,
                      state_momentum_spread)
from .spectral import column_dispersion, eigen_spectrum, slope_fit

RECORD_SCHEMA_VERSION = 1

SCALING_MODELS = ("vs_a", "vs_mass", "vs_dp2")
_MODEL_FOR_AXIS = {"N": "vs_a", "mL": "vs_mass", "Nk": "vs_dp2"}


# ===== fits =====

@dataclass(frozen=True)
class RelaxationFit:
    """Line fit c(t/L) = c0 + slope * t/L; t_eq is the inverse slope."""

    c0: float
    c0_err: float
    slope: float          # L / t_eq
    slope_err: float
    t_eq_over_L: float
    t_eq_err: float
    r2: float
    n_points: int
    t_window: tuple[float, float]
    detected: bool        # False when the slope is not positive


def relaxation_fit(t_over_L: np.ndarray, c: np.ndarray, burn_in: float = 5.0,
                   c_ceiling: float = math.inf) -> RelaxationFit:
    """OLS of c against t/L over the trusted window.

    Points before burn_in are excluded (the early spectrum is still
    organizing), as are points above c_ceiling and non-finite ones.  Needs
    at least 5 surviving points.  A non-positive slope is returned as a
    valid "no relaxation detected" fit rather than an error.
    """
    t_over_L = np.asarray(t_over_L, dtype=float)
    c = np.asarray(c, dtype=float)
    keep = np.isfinite(c) & (t_over_L >= burn_in) & (c <= c_ceiling)
    x, y = t_over_L[keep], c[keep]
    n = x.size
    if n < 5:
        raise ConfigError(
            f"relaxation fit needs >= 5 usable points, got {n} "
            f"(burn_in={burn_in}, c_ceiling={c_ceiling})")
    xbar, ybar = x.mean(), y.mean()
    sxx = float(((x - xbar) ** 2).sum())
    slope = float(((x - xbar) * (y - ybar)).sum()) / sxx
    c0 = ybar - slope * xbar
    resid = y - (c0 + slope * x)
    ss_res = float((resid**2).sum())
    ss_tot = float(((y - ybar) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    sigma2 = ss_res / (n - 2)
    slope_err = math.sqrt(sigma2 / sxx)
    c0_err = math.sqrt(sigma2 * (1.0 / n + xbar**2 / sxx))
    detected = slope > 0.0
    if detected:
        t_eq = 1.0 / slope
        t_eq_err = slope_err / slope**2
    else:
        t_eq, t_eq_err = math.inf, math.nan
    return RelaxationFit(c0=c0, c0_err=c0_err, slope=slope, slope_err=slope_err,
                         t_eq_over_L=t_eq, t_eq_err=t_eq_err, r2=r2, n_points=n,
                         t_window=(float(x[0]), float(x[-1])), detected=detected)


@dataclass(frozen=True)
class ScalingFit:
    """Weighted straight-line fit of equilibrium times along one axis."""

    model: str
    x: np.ndarray
    y: np.ndarray
    y_err: np.ndarray
    slope: float
    slope_err: float
    intercept: float
    intercept_err: float
    r2: float
    n_records: int        # fitted records, excluding any appended origin


def _weighted_line(x: np.ndarray, y: np.ndarray, y_err: np.ndarray):
    w = 1.0 / y_err**2
    sw = w.sum()
    swx = (w * x).sum()
    swy = (w * y).sum()
    swxx = (w * x * x).sum()
    swxy = (w * x * y).sum()
    det = sw * swxx - swx**2
    intercept = (swxx * swy - swx * swxy) / det
    slope = (sw * swxy - swx * swy) / det
    intercept_err = math.sqrt(swxx / det)
    slope_err = math.sqrt(sw / det)
    pred = intercept + slope * x
    ybar_w = swy / sw
    ss_res = (w * (y - pred) ** 2).sum()
    ss_tot = (w * (y - ybar_w) ** 2).sum()
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, slope_err, intercept, intercept_err, float(r2)


def _check_shared_parameters(records: list["RelaxationRecord"], axis: str) -> None:
    ref = records[0].config.lattice
    for rec in records[1:]:
        lat = rec.config.lattice
        if replace(lat, **{axis: getattr(ref, axis)}) != ref:
            raise ConfigError(
                f"records mix parameters beyond the swept axis {axis!r}: "
                f"{lat} vs {ref}")


def scaling_fit(records: list["RelaxationRecord"], model: str) -> ScalingFit:
    """Condense sweep records into the straight-line law for one model.

    Weights come from the per-record equilibrium-time standard errors.
    For vs_a and vs_dp2 the origin is appended as a data point (a box with
    vanishing spacing or spread does not relax), carrying the median error
    of the real points; the mass law has no such anchor.
    """
    if model not in SCALING_MODELS:
        raise ConfigError(f"unknown scaling model {model!r}")
    usable = [r for r in records if r.fit is not None and r.fit.detected]
    if len(usable) < 3:
        raise ConfigError(f"scaling fit needs >= 3 fitted records, got {len(usable)}")
    axis = {"vs_a": "N", "vs_mass": "mL", "vs_dp2": "Nk"}[model]
    _check_shared_parameters(usable, axis)

    if model == "vs_a":
        x = np.array([1.0 / r.config.lattice.N for r in usable])
    elif model == "vs_mass":
        x = np.array([r.config.lattice.mL for r in usable])
    else:
        x = np.array([r.momentum_spread**2 for r in usable])
    if model == "vs_mass":
        y = np.array([r.fit.t_eq_over_L for r in usable])
        y_err = np.array([r.fit.t_eq_err for r in usable])
    else:
        y = np.array([r.fit.slope for r in usable])
        y_err = np.array([r.fit.slope_err for r in usable])

    if model in ("vs_a", "vs_dp2"):
        x = np.append(x, 0.0)
        y = np.append(y, 0.0)
        y_err = np.append(y_err, np.median(y_err))
    slope, slope_err, intercept, intercept_err, r2 = _weighted_line(x, y, y_err)
    return ScalingFit(model=model, x=x, y=y, y_err=y_err, slope=slope,
                      slope_err=slope_err, intercept=intercept,
                      intercept_err=intercept_err, r2=r2, n_records=len(usable))


@dataclass(frozen=True)
class PowerLawFit:
    """log-log fit y = prefactor * x^exponent of L/t_eq against L dP."""

    exponent: float
    exponent_err: float
    prefactor: float
    r2: float
    n_records: int


def power_law_probe(records: list["RelaxationRecord"]) -> PowerLawFit:
    """Exponent of L/t_eq against L dP across a momentum-spread sweep."""
    usable = [r for r in records if r.fit is not None and r.fit.detected]
    if len(usable) < 3:
        raise ConfigError(f"power-law probe needs >= 3 fitted records, got {len(usable)}")
    _check_shared_parameters(usable, "Nk")
    x = np.log([r.momentum_spread for r in usable])
    y = np.log([r.fit.slope for r in usable])
    n = x.size
    xbar, ybar = x.mean(), y.mean()
    sxx = float(((x - xbar) ** 2).sum())
    exponent = float(((x - xbar) * (y - ybar)).sum()) / sxx
    intercept = ybar - exponent * xbar
    resid = y - (intercept + exponent * x)
    ss_res = float((resid**2).sum())
    ss_tot = float(((y - ybar) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    err = math.sqrt(ss_res / (n - 2) / sxx) if n > 2 else math.nan
    return PowerLawFit(exponent=exponent, exponent_err=err,
                       prefactor=math.exp(intercept), r2=r2, n_records=n)


# ===== running one experiment =====

@dataclass(frozen=True)
class SnapshotRow:
    """Diagnostics captured every spectrum_stride steps."""

    step: int
    t_over_L: float
    c: float
    c_stderr: float
    c_r2: float
    n_modes_used: int
    lambda1: float          # modulus of the leading subdominant eigenvalue
    unit_distance: float    # |lambda^0 - 1|
    degenerate: bool
    transport_gap: float    # L1(ttilde P0, born)
    stationary_gap: float   # L1(v0, born); NaN while degenerate
    dispersion: float       # max pairwise column L1 distance of ttilde
    tracked_tv: dict[str, float]
    eigenvalues: np.ndarray
    born: np.ndarray | None = None


@dataclass(frozen=True)
class WalkerSpec:
    """Ensemble request: n walkers, RNG seed, steps at which to histogram."""

    n_walkers: int
    seed: int = 0
    checkpoints: tuple[int, ...] = ()


@dataclass(frozen=True)
class WalkerRecord:
    n_walkers: int
    seed: int
    steps: list[int]
    counts: np.ndarray      # (len(steps), n_sites) occupation histograms
    expected: np.ndarray    # matching master-equation distributions


@dataclass
class RelaxationRecord:
    """Everything one run produced: series, fit, integrity bookkeeping."""

    config: RunConfig
    momentum_spread: float          # L * dP of the initial state
    snapshots: list[SnapshotRow]
    stop_reason: str                # c_span | c_ceiling | n_steps
    n_steps_run: int
    fit: RelaxationFit | None
    fit_note: str
    repair_count: int               # repaired columns, summed over steps
    steps_with_repairs: int
    worst_repair_excess: float
    frozen_count: int
    renorm_count: int
    max_colsum_drift: float
    max_transport_gap: float
    initial_born: np.ndarray
    final_psi: np.ndarray
    final_ttilde: np.ndarray
    walkers: WalkerRecord | None = None
    stochasticity: dict | None = None   # worst-case deviations, when validated

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t_over_L for s in self.snapshots])

    @property
    def cs(self) -> np.ndarray:
        return np.array([s.c for s in self.snapshots])


def _validate_distribution(name: str, dist: np.ndarray, n_sites: int) -> np.ndarray:
    dist = np.asarray(dist, dtype=float)
    if dist.shape != (n_sites,):
        raise ConfigError(f"tracked distribution {name!r} has shape {dist.shape}, "
                          f"expected ({n_sites},)")
    if (dist < 0).any() or abs(dist.sum() - 1.0) > 1e-9:
        raise ConfigError(f"tracked distribution {name!r} is not a probability vector")
    return dist


def run_experiment(cfg: RunConfig, *, psi0: np.ndarray | None = None,
                   track: dict[str, np.ndarray] | None = None,
                   walkers: WalkerSpec | None = None,
                   progress: Callable[[str], None] | None = None,
                   _corrupt_ttilde_step: int | None = None) -> RelaxationRecord:
    """Step the Bell process until a stop rule fires; return the record.

    Snapshots are captured every cfg.stride steps.  The run ends at the
    first snapshot where c has grown by c_span past its value at the first
    post-burn-in snapshot ("c_span"), where c exceeds c_ceiling outright
    ("c_ceiling"), or at the n_steps cap ("n_steps").  Each snapshot also
    verifies that the cumulative matrix still transports P(0) onto the
    Born distribution within consistency_tol; a violation aborts the run.

    track maps names to extra initial distributions whose transported
    total-variation distance to the Born distribution is recorded per
    snapshot.  walkers requests an ensemble advanced site-by-site through
    the same one-step matrices, histogrammed at the given steps.

    _corrupt_ttilde_step is a test hook that deliberately damages the
    cumulative matrix at one step so integrity detection can be exercised.
    """
    lat = cfg.lattice
    H = build_hamiltonian(lat)
    U = evolution_operator(H, lat.epsilon)
    if psi0 is None:
        psi = build_initial_state(lat).psi.copy()
    else:
        psi = np.asarray(psi0, dtype=np.complex128).copy()
        if psi.shape != (lat.n_sites,):
            raise ConfigError(f"psi0 has shape {psi.shape}, expected ({lat.n_sites},)")
        norm = np.linalg.norm(psi)
        if not 0.999999 < norm < 1.000001:
            raise ConfigError(f"psi0 is not normalized (|psi| = {norm:.6g})")
    ldp = state_momentum_spread(lat, H, psi) if psi0 is not None else momentum_spread(lat)

    P0 = born_probability(psi)
    tracked = {name: _validate_distribution(name, d, lat.n_sites)
               for name, d in (track or {}).items()}

    walker_sites = None
    walker_rng = None
    walker_steps: list[int] = []
    walker_counts: list[np.ndarray] = []
    walker_expected: list[np.ndarray] = []
    checkpoint_set: set[int] = set()
    if walkers is not None:
        if walkers.n_walkers < 1:
            raise ConfigError("walker ensemble must have at least 1 walker")
        walker_rng = np.random.default_rng(walkers.seed)
        counts0 = walker_rng.multinomial(walkers.n_walkers, P0)
        walker_sites = np.repeat(np.arange(lat.n_sites), counts0)
        checkpoint_set = set(walkers.checkpoints)

    cum = CumulativeTransition.identity(lat.n_sites, cfg.renorm_interval)
    stride = cfg.stride
    sto = None
    if cfg.validate_stochasticity:
        sto = {"t_colsum_dev": 0.0, "t_min_entry": math.inf,
               "ttilde_colsum_dev": 0.0, "ttilde_min_entry": math.inf,
               "checked_steps": 0, "checked_snapshots": 0}
    snapshots: list[SnapshotRow] = []
    repair_count = 0
    steps_with_repairs = 0
    worst_excess = 0.0
    frozen_count = 0
    max_gap = 0.0
    anchor_c = None
    stop_reason = "n_steps"
    step = 0

    while step < cfg.n_steps:
        step += 1
        psi_next = propagate(U, psi)
        J = current_matrix(psi, psi_next, U)
        P = born_probability(psi)
        result = transition_matrix(J, P, cfg.p_floor)
        repair_count += result.repaired_columns.size
        if result.repaired_columns.size:
            steps_with_repairs += 1
            worst_excess = max(worst_excess, float(result.repair_excess.max()))
        frozen_count += result.frozen_columns.size
        if sto is not None:
            sto["t_colsum_dev"] = max(sto["t_colsum_dev"],
                                      float(np.abs(result.T.sum(axis=0) - 1.0).max()))
            sto["t_min_entry"] = min(sto["t_min_entry"], float(result.T.min()))
            sto["checked_steps"] += 1
        cum.apply(result.T)
        if walker_sites is not None:
            walker_sites = sample_step(result.T, walker_sites, walker_rng)
        psi = psi_next

        if _corrupt_ttilde_step == step:
            cum.matrix[:, 0] *= 1.5

        if step in checkpoint_set:
            walker_steps.append(step)
            walker_counts.append(np.bincount(walker_sites, minlength=lat.n_sites))
            walker_expected.append(cum.transport(P0))

        if step % stride == 0:
            t_over_L = step * lat.epsilon / lat.L
            P_now = born_probability(psi)
            gap = transport_gap(cum, P0, P_now)
            max_gap = max(max_gap, gap)
            if gap > cfg.consistency_tol:
                raise IntegrityError(
                    f"cumulative transition product lost track of the Born "
                    f"distribution: L1 gap {gap:.3e} > tol {cfg.consistency_tol:.1e} "
                    f"at step {step} (t/L={t_over_L:.4g}; {repair_count} column "
                    f"repairs so far, worst excess {worst_excess:.3e})")
            if sto is not None:
                sto["ttilde_colsum_dev"] = max(sto["ttilde_colsum_dev"],
                                               float(np.abs(cum.matrix.sum(axis=0) - 1.0).max()))
                sto["ttilde_min_entry"] = min(sto["ttilde_min_entry"],
                                              float(cum.matrix.min()))
                sto["checked_snapshots"] += 1
            snap = eigen_spectrum(cum.matrix, step, t_over_L)
            fit = slope_fit(snap.eigenvalues, cfg.n_fit_modes, cfg.mode_floor)
            stationary_gap = (float("nan") if snap.degenerate
                              else float(np.abs(snap.stationary - P_now).sum()))
            tv = {name: 0.5 * float(np.abs(cum.transport(d) - P_now).sum())
                  for name, d in tracked.items()}
            snapshots.append(SnapshotRow(
                step=step, t_over_L=t_over_L, c=fit.c, c_stderr=fit.stderr,
                c_r2=fit.r2, n_modes_used=fit.n_used,
                lambda1=float(np.abs(snap.eigenvalues[1])) if snap.eigenvalues.size > 1 else 0.0,
                unit_distance=snap.unit_distance, degenerate=snap.degenerate,
                transport_gap=gap, stationary_gap=stationary_gap,
                dispersion=column_dispersion(cum.matrix),
                tracked_tv=tv, eigenvalues=snap.eigenvalues,
                born=P_now.copy() if cfg.dump_probabilities else None))
            if progress is not None:
                progress(f"step {step} t/L={t_over_L:.4g} c={fit.c:.4g}")
            if fit.available:
                if anchor_c is None and t_over_L >= cfg.burn_in:
                    anchor_c = fit.c
                if fit.c >= cfg.c_ceiling:
                    stop_reason = "c_ceiling"
                    break
                if anchor_c is not None and fit.c - anchor_c >= cfg.c_span:
                    stop_reason = "c_span"
                    break

    times = np.array([s.t_over_L for s in snapshots])
    cs = np.array([s.c for s in snapshots])
    usable = np.isfinite(cs) & (times >= cfg.burn_in) & (cs <= cfg.c_ceiling)
    fit = None
    fit_note = ""
    if usable.sum() >= 5:
        fit = relaxation_fit(times, cs, cfg.burn_in, cfg.c_ceiling)
    else:
        fit_note = (f"only {int(usable.sum())} usable snapshots past "
                    f"burn_in={cfg.burn_in}; no relaxation fit")

    return RelaxationRecord(
        config=cfg, momentum_spread=ldp, snapshots=snapshots,
        stop_reason=stop_reason, n_steps_run=step, fit=fit, fit_note=fit_note,
        repair_count=repair_count, steps_with_repairs=steps_with_repairs,
        worst_repair_excess=worst_excess, frozen_count=frozen_count,
        renorm_count=cum.renorm_count, max_colsum_drift=cum.max_colsum_drift,
        max_transport_gap=max_gap, initial_born=P0, final_psi=psi,
        final_ttilde=cum.matrix,
        walkers=(WalkerRecord(n_walkers=walkers.n_walkers, seed=walkers.seed,
                              steps=walker_steps,
                              counts=np.array(walker_counts, dtype=np.int64),
                              expected=np.array(walker_expected))
                 if walkers is not None else None),
        stochasticity=sto)


# ===== sweeps =====

@dataclass
class SweepResult:
    axis: str
    values: list
    records: list[RelaxationRecord]
    failures: list[tuple[object, str]]
    scaling: ScalingFit | None
    power_law: PowerLawFit | None


def run_sweep(base: RunConfig, axis: str, values: list, jobs: int = 1,
              progress: Callable[[str], None] | None = None) -> SweepResult:
    """Run one record per axis value and fit the matching scaling law.

    Records are computed independently (threads share the BLAS pool) and
    merged in axis order.  Scaling/power-law fits run when at least 3
    records succeeded; individual failures are collected, not fatal.
    """
    if axis not in SWEEPABLE_KEYS:
        raise ConfigError(f"not a sweepable axis: {axis!r}")
    configs = [replace(base, lattice=replace(base.lattice, **{axis: v})) for v in values]

    records: dict[int, RelaxationRecord] = {}
    failures: list[tuple[object, str]] = []
    if jobs <= 1:
        for i, cfg in enumerate(configs):
            try:
                records[i] = run_experiment(cfg)
                if progress is not None:
                    progress(f"{axis}={values[i]} done "
                             f"({records[i].stop_reason}, {records[i].n_steps_run} steps)")
            except (ConfigError, IntegrityError) as exc:
                failures.append((values[i], str(exc)))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(run_experiment, cfg): i
                       for i, cfg in enumerate(configs)}
            for fut in concurrent.futures.as_completed(futures):
                i = futures[fut]
                try:
                    records[i] = fut.result()
                    if progress is not None:
                        progress(f"{axis}={values[i]} done "
                                 f"({records[i].stop_reason}, {records[i].n_steps_run} steps)")
                except (ConfigError, IntegrityError) as exc:
                    failures.append((values[i], str(exc)))

    ordered = [records[i] for i in sorted(records)]
    scaling = None
    power_law = None
    model = _MODEL_FOR_AXIS.get(axis)
    fitted = [r for r in ordered if r.fit is not None and r.fit.detected]
    if model is not None and len(fitted) >= 3:
        scaling = scaling_fit(ordered, model)
        if axis == "Nk":
            power_law = power_law_probe(ordered)
    return SweepResult(axis=axis, values=list(values), records=ordered,
                       failures=failures, scaling=scaling, power_law=power_law)


# ===== serialization =====

def _j(x):
    """JSON-safe float rounded to 12 significant digits; None if not finite."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def fit_to_dict(fit: RelaxationFit | None) -> dict | None:
    if fit is None:
        return None
    return {"c0": _j(fit.c0), "c0_err": _j(fit.c0_err),
            "slope": _j(fit.slope), "slope_err": _j(fit.slope_err),
            "t_eq_over_L": _j(fit.t_eq_over_L), "t_eq_err": _j(fit.t_eq_err),
            "r2": _j(fit.r2), "n_points": fit.n_points,
            "t_window": [_j(fit.t_window[0]), _j(fit.t_window[1])],
            "detected": fit.detected}


def record_to_dict(record: RelaxationRecord) -> dict:
    """JSON document for one run (no bulk arrays; those go to CSV files)."""
    lat = record.config.lattice
    cfg = record.config
    return {
        "schema_version": RECORD_SCHEMA_VERSION,
        "config": {
            "N": lat.N, "L": _j(lat.L), "mL": _j(lat.mL), "bc": lat.bc,
            "Nk": lat.Nk, "epsilon_factor": _j(lat.epsilon_factor),
            "seed": lat.seed, "n_steps": cfg.n_steps,
            "spectrum_stride": cfg.stride, "burn_in": _j(cfg.burn_in),
            "c_span": _j(cfg.c_span), "c_ceiling": _j(cfg.c_ceiling),
            "mode_floor": _j(cfg.mode_floor),
            "consistency_tol": _j(cfg.consistency_tol),
            "dump_probabilities": cfg.dump_probabilities,
            "validate_stochasticity": cfg.validate_stochasticity,
        },
        "momentum_spread": _j(record.momentum_spread),
        "stop_reason": record.stop_reason,
        "n_steps_run": record.n_steps_run,
        "snapshots": [{
            "step": s.step, "t_over_L": _j(s.t_over_L), "c": _j(s.c),
            "c_stderr": _j(s.c_stderr), "c_r2": _j(s.c_r2),
            "n_modes_used": s.n_modes_used, "lambda1": _j(s.lambda1),
            "unit_distance": _j(s.unit_distance), "degenerate": s.degenerate,
            "transport_gap": _j(s.transport_gap),
            "stationary_gap": _j(s.stationary_gap),
            "dispersion": _j(s.dispersion),
            "tracked_tv": {k: _j(v) for k, v in s.tracked_tv.items()},
        } for s in record.snapshots],
        "fit": fit_to_dict(record.fit),
        "fit_note": record.fit_note,
        "repairs": {
            "repair_count": record.repair_count,
            "steps_with_repairs": record.steps_with_repairs,
            "worst_repair_excess": _j(record.worst_repair_excess),
            "frozen_count": record.frozen_count,
        },
        "renorm_count": record.renorm_count,
        "max_colsum_drift": _j(record.max_colsum_drift),
        "max_transport_gap": _j(record.max_transport_gap),
        "stochasticity": (None if record.stochasticity is None else
                          {k: (v if isinstance(v, int) else _j(v))
                           for k, v in record.stochasticity.items()}),
    }


def scaling_to_dict(fit: ScalingFit | None) -> dict | None:
    if fit is None:
        return None
    return {"model": fit.model,
            "x": [_j(v) for v in fit.x],
            "y": [_j(v) for v in fit.y],
            "y_err": [_j(v) for v in fit.y_err],
            "slope": _j(fit.slope), "slope_err": _j(fit.slope_err),
            "intercept": _j(fit.intercept), "intercept_err": _j(fit.intercept_err),
            "r2": _j(fit.r2), "n_records": fit.n_records}


def power_law_to_dict(fit: PowerLawFit | None) -> dict | None:
    if fit is None:
        return None
    return {"exponent": _j(fit.exponent), "exponent_err": _j(fit.exponent_err),
            "prefactor": _j(fit.prefactor), "r2": _j(fit.r2),
            "n_records": fit.n_records}
