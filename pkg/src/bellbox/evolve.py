"""Unitary time evolution and the two-time probability current.

Time advances in fixed steps of epsilon via the exact propagator
U = exp(-i epsilon H), built from the dense eigendecomposition of H.  H is
real symmetric, so U is complex symmetric; we symmetrize explicitly to
remove rounding noise, since the antisymmetry of the current matrix leans
on U_nm = U_mn.
"""

from __future__ import annotations

import numpy as np


def evolution_operator(H: np.ndarray, epsilon: float) -> np.ndarray:
    """Exact step propagator exp(-i epsilon H), explicitly symmetrized."""
    w, V = np.linalg.eigh(H)
    U = (V * np.exp(-1j * epsilon * w)) @ V.T
    return (U + U.T) / 2.0


def propagate(U: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """One time step of the wavefunction."""
    return U @ psi


def born_probability(psi: np.ndarray) -> np.ndarray:
    """Site occupation probabilities |psi_n|^2."""
    return np.abs(psi) ** 2


def current_matrix(psi: np.ndarray, psi_next: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Antisymmetric two-time current J between sites over one step.

    J_nm = Re(psi_n(t+eps)^* U_nm psi_m(t)) - (n <-> m).  Because the same
    U propagates psi, the net flow into a site equals its probability
    change: sum_m J_nm = P_n(t+eps) - P_n(t) up to rounding.
    """
    A = (np.conj(psi_next)[:, None] * U * psi[None, :]).real
    return A - A.T
