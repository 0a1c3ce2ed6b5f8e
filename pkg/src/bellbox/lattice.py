"""Lattice geometry, Hamiltonians and initial wavefunctions.

A particle lives on an N x N grid of sites inside a square box of side L,
lattice spacing a = L/N.  Sites are addressed by a flat index

    n = i1 * N + i2,    i1, i2 in 0..N-1,

i.e. row-major over the two coordinates.  The Hamiltonian is the discrete
kinetic term H = (1/2m) (p1^2 + p2^2) with the second derivative replaced
by the three-point stencil, either truncated at the walls (dirichlet) or
wrapped around (periodic).  Both versions separate into a sum of 1D
operators, so eigenpairs come in closed form as products of 1D modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import LatticeConfig
from .errors import ConfigError


def site_index(i1: int, i2: int, N: int) -> int:
    """Flat site index for grid coordinates (i1, i2)."""
    return i1 * N + i2


def site_coords(n: int, N: int) -> tuple[int, int]:
    """Grid coordinates (i1, i2) for a flat site index."""
    return divmod(n, N)


def laplacian_1d(N: int, bc: str) -> np.ndarray:
    """Stencil matrix 2*I - shifts for one direction (no 1/(2 m a^2) factor).

    dirichlet keeps the full diagonal of 2 and simply drops hopping across
    the walls; periodic adds the corner hops so every row sums to zero.
    """
    D = 2.0 * np.eye(N)
    off = np.arange(N - 1)
    D[off, off + 1] = -1.0
    D[off + 1, off] = -1.0
    if bc == "periodic":
        D[0, N - 1] += -1.0
        D[N - 1, 0] += -1.0
    elif bc != "dirichlet":
        raise ConfigError(f"unknown boundary condition {bc!r}")
    return D


def build_hamiltonian(lat: LatticeConfig) -> np.ndarray:
    """Dense real-symmetric Hamiltonian on the flat site index."""
    D = laplacian_1d(lat.N, lat.bc) / (2.0 * lat.m * lat.a**2)
    eye = np.eye(lat.N)
    # flat index n = i1*N + i2: the first kron factor acts on i1
    return np.kron(D, eye) + np.kron(eye, D)


# ===== closed-form eigenpairs =====

def mode_energy_1d(lat: LatticeConfig, k: int) -> float:
    """Energy of the k-th 1D mode.

    dirichlet: k = 1..N, E = (2 - 2 cos(k pi / (N+1))) / (2 m a^2)
    periodic:  k = 0..N-1, E = (2 - 2 cos(2 pi k / N)) / (2 m a^2)
    """
    _check_wavenumber(lat, k)
    if lat.bc == "dirichlet":
        theta = k * np.pi / (lat.N + 1)
    else:
        theta = 2.0 * np.pi * k / lat.N
    return (2.0 - 2.0 * np.cos(theta)) / (2.0 * lat.m * lat.a**2)


def mode_vector_1d(lat: LatticeConfig, k: int) -> np.ndarray:
    """Normalized 1D eigenvector for wavenumber k.

    dirichlet modes are real standing waves sin((i+1) k pi / (N+1));
    periodic modes are complex plane waves exp(2 pi i k j / N).
    """
    _check_wavenumber(lat, k)
    j = np.arange(lat.N)
    if lat.bc == "dirichlet":
        v = np.sin((j + 1) * k * np.pi / (lat.N + 1))
        return v * np.sqrt(2.0 / (lat.N + 1))
    return np.exp(2j * np.pi * k * j / lat.N) / np.sqrt(lat.N)


def _check_wavenumber(lat: LatticeConfig, k: int) -> None:
    if lat.bc == "dirichlet":
        if not 1 <= k <= lat.N:
            raise ConfigError(f"dirichlet wavenumber must be in 1..N, got {k}")
    else:
        if not 0 <= k < lat.N:
            raise ConfigError(f"periodic wavenumber must be in 0..N-1, got {k}")


def mode_vector(lat: LatticeConfig, k: tuple[int, int]) -> np.ndarray:
    """Flat 2D eigenvector for the wavenumber pair (k1, k2)."""
    return np.kron(mode_vector_1d(lat, k[0]), mode_vector_1d(lat, k[1]))


def mode_energy(lat: LatticeConfig, k: tuple[int, int]) -> float:
    return mode_energy_1d(lat, k[0]) + mode_energy_1d(lat, k[1])


def band_wavenumbers(lat: LatticeConfig) -> list[tuple[int, int]]:
    """Wavenumber pairs of the Nk^2 lowest-band modes used in initial states.

    dirichlet: k1, k2 in 1..Nk; periodic: k1, k2 in 0..Nk-1.
    """
    if lat.bc == "dirichlet":
        rng = range(1, lat.Nk + 1)
    else:
        rng = range(lat.Nk)
    return [(k1, k2) for k1 in rng for k2 in rng]


# ===== initial states =====

@dataclass(frozen=True)
class InitialState:
    """A band superposition: psi plus the modes it was assembled from."""

    psi: np.ndarray            # flat complex wavefunction, unit norm
    wavenumbers: list[tuple[int, int]]
    energies: np.ndarray       # one per mode, same order as wavenumbers
    phases: np.ndarray         # seeded U[0, 2 pi) phases, same order


def build_initial_state(lat: LatticeConfig) -> InitialState:
    """Equal-amplitude superposition of the Nk^2 lowest modes, random phases.

    Each mode enters with amplitude 1/Nk and an independent uniform phase
    drawn from default_rng(seed) in band order (k1 outer, k2 inner), so a
    (config, seed) pair pins the state exactly.
    """
    ks = band_wavenumbers(lat)
    rng = np.random.default_rng(lat.seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, len(ks))
    psi = np.zeros(lat.n_sites, dtype=np.complex128)
    amp = 1.0 / lat.Nk
    for phase, k in zip(phases, ks):
        psi += amp * np.exp(1j * phase) * mode_vector(lat, k)
    psi /= np.linalg.norm(psi)
    energies = np.array([mode_energy(lat, k) for k in ks])
    return InitialState(psi=psi, wavenumbers=ks, energies=energies, phases=phases)


def eigenstate(lat: LatticeConfig, k: tuple[int, int]) -> np.ndarray:
    """Single normalized eigenmode as a flat complex wavefunction."""
    return mode_vector(lat, k).astype(np.complex128)


def momentum_spread(lat: LatticeConfig) -> float:
    """Dimensionless momentum spread L * dP of the band superposition.

    dP = sqrt(2 m dE) with dE the population standard deviation of the
    retained mode energies.  The m and a^2 factors cancel, so L*dP depends
    only on N, Nk and the boundary condition.
    """
    lat_modes = band_wavenumbers(lat)
    energies = np.array([mode_energy(lat, k) for k in lat_modes])
    return lat.L * np.sqrt(2.0 * lat.m * energies.std())


def state_momentum_spread(lat: LatticeConfig, H: np.ndarray, psi: np.ndarray) -> float:
    """L * dP for an arbitrary normalized state, via energy moments of H.

    Agrees with momentum_spread for equal-amplitude band superpositions
    (there the energy distribution is uniform over the retained modes) and
    extends to any wavefunction, e.g. single eigenstates, where it is 0.
    """
    Hpsi = H @ psi
    mean = np.vdot(psi, Hpsi).real
    second = np.vdot(Hpsi, Hpsi).real
    dE = np.sqrt(max(second - mean * mean, 0.0))
    return lat.L * np.sqrt(2.0 * lat.m * dE)
