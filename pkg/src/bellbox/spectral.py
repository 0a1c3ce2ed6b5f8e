"""Spectral diagnostics of cumulative transition matrices.

Relaxation shows up in the spectrum of T~(t): the dominant eigenvalue
stays pinned at 1 (column stochasticity) while the rest of the spectrum
sinks.  Writing the moduli of the leading eigenvalues as

    |lambda^s(t)| ~ exp(-c(t) * s),

the decay rate c(t) is a scalar summary of how far equilibration has
progressed; it is read off by a straight-line fit of ln|lambda^s| against
the mode index s.

Double precision bounds what the fit can see: nonsymmetric eigensolvers
return moduli no smaller than roughly 1e-16 regardless of the true value,
so late-time spectra develop a flat noise tail.  Including that tail in
the fit caps the measurable c near 1.4 with 25 modes; excluding moduli
below a floor safely above the noise (default 1e-12) keeps the fit honest
out to c of roughly 9, where fewer than 3 resolvable modes remain.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IntegrityError


@dataclass(frozen=True)
class SpectrumSnapshot:
    """Eigen-decomposition summary of one cumulative transition matrix."""

    step: int
    time: float
    eigenvalues: np.ndarray    # complex, sorted by decreasing modulus
    unit_distance: float       # |lambda^0 - 1|
    degenerate: bool           # more than one eigenvalue within tol of 1
    stationary: np.ndarray     # dominant eigenvector, clamped and sum-normalized


def eigen_spectrum(matrix: np.ndarray, step: int, time: float,
                   unit_tol: float = 1e-8) -> SpectrumSnapshot:
    """Full spectrum of a cumulative transition matrix, dominant-first.

    Raises IntegrityError when the dominant eigenvalue has drifted further
    than unit_tol from 1: products of column-stochastic matrices must keep
    it there, so a drift means the accumulation went numerically wrong.
    """
    w, V = np.linalg.eig(matrix)
    order = np.argsort(-np.abs(w), kind="stable")
    w = w[order]
    unit_distance = float(np.abs(w[0] - 1.0))
    if unit_distance > unit_tol:
        raise IntegrityError(
            f"dominant eigenvalue {w[0]:.12g} is {unit_distance:.3e} from 1 "
            f"(tol {unit_tol:.1e}) at step {step}")
    degenerate = bool((np.abs(w - 1.0) <= unit_tol).sum() > 1)

    v0 = V[:, order[0]]
    pivot = v0[np.argmax(np.abs(v0))]
    v0 = (v0 * np.conj(pivot) / np.abs(pivot)).real  # rotate the arbitrary phase away
    if v0.sum() < 0:
        v0 = -v0
    v0 = np.maximum(v0, 0.0)
    total = v0.sum()
    if total > 0:
        v0 = v0 / total
    return SpectrumSnapshot(step=step, time=time, eigenvalues=w,
                            unit_distance=unit_distance, degenerate=degenerate,
                            stationary=v0)


@dataclass(frozen=True)
class SlopeFit:
    """Straight-line fit of ln|lambda^s| vs s over the leading modes."""

    c: float        # decay rate, minus the fitted slope
    stderr: float   # standard error of the slope
    r2: float
    n_used: int
    available: bool


def slope_fit(eigenvalues: np.ndarray, n_modes: int = 25,
              min_modulus: float = 1e-12) -> SlopeFit:
    """Fit the exponential decay rate c of the leading eigenvalue moduli.

    Modes with modulus below min_modulus sit at or under the eigensolver's
    noise floor and are excluded, shortening the fit range; fewer than 3
    usable points means no fit.
    """
    mods = np.abs(eigenvalues[:n_modes])
    s = np.arange(mods.size, dtype=float)
    keep = mods > min_modulus
    n_used = int(keep.sum())
    if n_used < 3:
        return SlopeFit(c=np.nan, stderr=np.nan, r2=np.nan, n_used=n_used,
                        available=False)
    x, y = s[keep], np.log(mods[keep])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float((resid**2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    sxx = float(((x - x.mean()) ** 2).sum())
    stderr = np.sqrt(ss_res / (n_used - 2) / sxx) if n_used > 2 else np.nan
    return SlopeFit(c=float(-slope), stderr=float(stderr), r2=r2,
                    n_used=n_used, available=True)


def dominant_eigenvector_distance(snapshot: SpectrumSnapshot, P: np.ndarray) -> float:
    """L1 distance between the stationary candidate and a distribution.

    NaN when the unit eigenvalue is degenerate: the eigenvector returned by
    the solver is then an arbitrary mix and the comparison means nothing.
    """
    if snapshot.degenerate:
        return float("nan")
    return float(np.abs(snapshot.stationary - P).sum())


def column_dispersion(matrix: np.ndarray, exact_limit: int = 512,
                      n_sample: int = 64) -> float:
    """Max pairwise L1 distance between columns (0 = fully equilibrated).

    All pairs when the dimension is at most exact_limit, otherwise an
    evenly spaced deterministic subset of n_sample columns.
    """
    n = matrix.shape[1]
    if n <= exact_limit:
        cols = np.arange(n)
    else:
        cols = np.unique(np.linspace(0, n - 1, n_sample).astype(int))
    sub = matrix[:, cols]
    worst = 0.0
    for i in range(cols.size):
        worst = max(worst, float(np.abs(sub - sub[:, i:i + 1]).sum(axis=0).max()))
    return worst


def power_iteration(matrix: np.ndarray, tol: float = 1e-13,
                    max_iter: int = 100_000) -> tuple[float, np.ndarray]:
    """Dominant eigenpair by plain power iteration from the uniform vector.

    Independent of the LAPACK route; intended as a cross-check for
    matrices with a simple dominant eigenvalue.  Returns (eigenvalue,
    L1-normalized eigenvector).
    """
    n = matrix.shape[0]
    v = np.full(n, 1.0 / n)
    lam = 1.0
    for _ in range(max_iter):
        w = matrix @ v
        lam = float((w @ v) / (v @ v))
        norm = np.abs(w).sum()
        if norm == 0.0:
            raise IntegrityError("power iteration hit the zero vector")
        w = w / norm
        if np.abs(w - v).sum() < tol:
            return lam, w
        v = w
    return lam, v


def write_spectrum_csv(path: str | Path,
                       rows: list[tuple[float, np.ndarray]]) -> None:
    """One CSV row per (snapshot, mode), dominant mode first per snapshot."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_over_L", "s", "re_lambda", "im_lambda", "abs_lambda"])
        for t_over_L, eigenvalues in rows:
            for s, lam in enumerate(eigenvalues):
                writer.writerow([f"{t_over_L:.12g}", s,
                                 f"{lam.real:.12g}", f"{lam.imag:.12g}",
                                 f"{abs(lam):.12g}"])
