"""Stochastic jump process driven by the two-time current.

Each time step turns the current J and the source-site probabilities P
into a column-stochastic transition matrix T: probability flows from site
m to site n with rate max(J_nm, 0) / P_m, and whatever is left stays put.
Products of these matrices transport any initial distribution forward;
when the initial distribution is the Born one, the transported
distribution tracks |psi(t)|^2.

Two defensive rules keep T stochastic in edge cases:

* columns whose source probability sits below a floor are frozen to the
  identity (no flow out of numerically empty sites),
* columns whose off-diagonal outflow exceeds 1 (possible only through the
  discretization error of J) get the diagonal zeroed and the off-diagonal
  entries rescaled to sum to 1.  Every such repair is recorded, since it
  injects a small transport error.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError

CHECKPOINT_MAGIC = b"BELLBOX1"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class TransitionResult:
    """One-step transition matrix plus the bookkeeping of its edge cases."""

    T: np.ndarray
    frozen_columns: np.ndarray   # source probability below the floor
    repaired_columns: np.ndarray  # off-diagonal outflow exceeded 1
    repair_excess: np.ndarray    # outflow minus 1, per repaired column


def transition_matrix(J: np.ndarray, P: np.ndarray, p_floor: float = 1e-14) -> TransitionResult:
    """Column-stochastic T from the current J and source probabilities P."""
    n = P.shape[0]
    safe = P > p_floor
    T = np.zeros_like(J)
    T[:, safe] = np.maximum(J[:, safe], 0.0) / P[safe]
    np.fill_diagonal(T, 0.0)

    outflow = T.sum(axis=0)
    over = safe & (outflow > 1.0)
    repaired = np.flatnonzero(over)
    if repaired.size:
        T[:, repaired] /= outflow[repaired]

    diag = np.where(safe, np.maximum(1.0 - T.sum(axis=0), 0.0), 1.0)
    diag[repaired] = 0.0
    T[np.arange(n), np.arange(n)] = diag
    return TransitionResult(
        T=T,
        frozen_columns=np.flatnonzero(~safe),
        repaired_columns=repaired,
        repair_excess=outflow[repaired] - 1.0,
    )


def master_step(T: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Advance a distribution one step: P' = T P."""
    return T @ P


def master_step_gain_loss(T: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Same step written as P' = P + gains - losses over off-diagonal flow.

    Algebraically identical to master_step for a column-stochastic T;
    kept as the physically transparent form.
    """
    off = T.copy()
    np.fill_diagonal(off, 0.0)
    gains = off @ P
    losses = off.sum(axis=0) * P
    return P + gains - losses


@dataclass
class CumulativeTransition:
    """Running product T~(t) = T(t-eps) ... T(0) with periodic column renorm.

    Column sums of the product drift from 1 only through rounding; every
    renorm_interval steps we rescale each column back and log that it
    happened, tracking the worst drift seen.
    """

    matrix: np.ndarray
    renorm_interval: int = 1000
    steps: int = 0
    renorm_count: int = 0
    max_colsum_drift: float = 0.0

    @classmethod
    def identity(cls, n_sites: int, renorm_interval: int = 1000) -> "CumulativeTransition":
        return cls(matrix=np.eye(n_sites), renorm_interval=renorm_interval)

    def apply(self, T: np.ndarray) -> None:
        self.matrix = T @ self.matrix
        self.steps += 1
        if self.steps % self.renorm_interval == 0:
            colsum = self.matrix.sum(axis=0)
            self.max_colsum_drift = max(self.max_colsum_drift, np.abs(colsum - 1.0).max())
            self.matrix /= colsum
            self.renorm_count += 1

    def transport(self, P0: np.ndarray) -> np.ndarray:
        """Distribution after transporting P0 through all applied steps."""
        return self.matrix @ P0


def transport_gap(cumulative: CumulativeTransition, P0: np.ndarray, P_now: np.ndarray) -> float:
    """L1 distance between the transported distribution and P_now."""
    return float(np.abs(cumulative.transport(P0) - P_now).sum())


# ===== trajectory sampling =====

def sample_step(T: np.ndarray, sites: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Advance an ensemble of walkers one step through T.

    Walkers are grouped by current site so each occupied column's CDF is
    built once; draws use inverse-CDF sampling.  Order of random draws is
    fixed by the stable site sort, so results are reproducible per seed.
    """
    new_sites = np.empty_like(sites)
    order = np.argsort(sites, kind="stable")
    sorted_sites = sites[order]
    starts = np.flatnonzero(np.r_[True, sorted_sites[1:] != sorted_sites[:-1]])
    ends = np.r_[starts[1:], sites.size]
    for s, e in zip(starts, ends):
        col = sorted_sites[s]
        cdf = np.cumsum(T[:, col])
        cdf[-1] = max(cdf[-1], 1.0)  # colsum rounds just under 1: keep draws in range
        draws = rng.random(e - s)
        new_sites[order[s:e]] = np.searchsorted(cdf, draws, side="right")
    return new_sites


def is_primitive(T: np.ndarray, max_power: int | None = None) -> bool:
    """Whether some power of T's nonzero pattern is entrywise positive.

    Runs boolean reachability through repeated pattern products, up to
    max_power (default: the matrix dimension).  A True answer certifies a
    unique stationary distribution for the chain of this single T.
    """
    n = T.shape[0]
    if max_power is None:
        max_power = n
    A = (T > 0).astype(np.float64)
    if (A.sum(axis=0) == 0).any() or (A.sum(axis=1) == 0).any():
        return False
    B = A.copy()
    for _ in range(max_power):
        if B.min() > 0:
            return True
        B = ((B @ A) > 0).astype(np.float64)
    return bool(B.min() > 0)


# ===== checkpoints =====

@dataclass(frozen=True)
class Checkpoint:
    N: int
    step: int
    epsilon: float
    L: float
    psi: np.ndarray
    ttilde: np.ndarray


_HEADER = struct.Struct("<8sIIQdd")  # magic, version, N, step, epsilon, L


def write_checkpoint(path: str | Path, N: int, step: int, epsilon: float,
                     L: float, psi: np.ndarray, ttilde: np.ndarray) -> None:
    """Binary snapshot of (psi, cumulative T) at a given step, little-endian."""
    n_sites = N * N
    if psi.shape != (n_sites,) or ttilde.shape != (n_sites, n_sites):
        raise ConfigError("checkpoint arrays do not match N")
    header = _HEADER.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, N, step, epsilon, L)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(psi, dtype="<c16").tobytes())
        fh.write(np.ascontiguousarray(ttilde, dtype="<f8").tobytes())


def read_checkpoint(path: str | Path) -> Checkpoint:
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise ConfigError(f"checkpoint {path}: truncated header")
    magic, version, N, step, epsilon, L = _HEADER.unpack_from(blob)
    if magic != CHECKPOINT_MAGIC:
        raise ConfigError(f"checkpoint {path}: bad magic {magic!r}")
    if version != CHECKPOINT_VERSION:
        raise ConfigError(f"checkpoint {path}: version {version} unsupported, "
                          f"expected {CHECKPOINT_VERSION}")
    n_sites = N * N
    expected = _HEADER.size + 16 * n_sites + 8 * n_sites * n_sites
    if len(blob) != expected:
        raise ConfigError(f"checkpoint {path}: expected {expected} bytes, got {len(blob)}")
    offset = _HEADER.size
    psi = np.frombuffer(blob, dtype="<c16", count=n_sites, offset=offset).copy()
    offset += 16 * n_sites
    ttilde = np.frombuffer(blob, dtype="<f8", count=n_sites * n_sites, offset=offset)
    return Checkpoint(N=N, step=step, epsilon=epsilon, L=L, psi=psi,
                      ttilde=ttilde.reshape(n_sites, n_sites).copy())
