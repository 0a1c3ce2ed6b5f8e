"""One-step evolution operator, Born probabilities and two-time currents."""

import numpy as np
import pytest

from bellbox.config import LatticeConfig
from bellbox.evolve import (born_probability, current_matrix,
                            evolution_operator, propagate)
from bellbox.lattice import build_hamiltonian, build_initial_state, eigenstate


@pytest.mark.parametrize("bc", ["dirichlet", "periodic"])
def test_evolution_operator_is_unitary(bc):
    lat = LatticeConfig(N=6, mL=5.0, bc=bc)
    U = evolution_operator(build_hamiltonian(lat), lat.epsilon)
    assert np.allclose(U.conj().T @ U, np.eye(36), atol=1e-12)


def test_evolution_operator_is_symmetric():
    # H is real symmetric, so exp(-i eps H) is complex symmetric; the
    # explicit symmetrization makes that exact at the bit level
    lat = LatticeConfig(N=6)
    U = evolution_operator(build_hamiltonian(lat), lat.epsilon)
    assert np.array_equal(U, U.T)


def test_repeated_steps_match_direct_power():
    lat = LatticeConfig(N=6, seed=2)
    H = build_hamiltonian(lat)
    U = evolution_operator(H, lat.epsilon)
    psi = build_initial_state(lat).psi
    stepped = psi.copy()
    for _ in range(25):
        stepped = propagate(U, stepped)
    direct = np.linalg.matrix_power(U, 25) @ psi
    assert np.abs(born_probability(stepped) - born_probability(direct)).sum() < 1e-10


def test_norm_and_energy_are_conserved():
    lat = LatticeConfig(N=7, seed=1)
    H = build_hamiltonian(lat)
    U = evolution_operator(H, lat.epsilon)
    psi = build_initial_state(lat).psi
    e0 = np.vdot(psi, H @ psi).real
    for _ in range(200):
        psi = propagate(U, psi)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
    assert np.vdot(psi, H @ psi).real == pytest.approx(e0, rel=1e-12)


def test_eigenstate_only_picks_up_a_phase():
    lat = LatticeConfig(N=8, bc="periodic")
    H = build_hamiltonian(lat)
    U = evolution_operator(H, lat.epsilon)
    psi = eigenstate(lat, (1, 2))
    out = propagate(U, psi)
    phase = np.vdot(psi, out)
    assert abs(abs(phase) - 1.0) < 1e-12
    assert np.allclose(out, phase * psi, atol=1e-12)


def test_born_probability_ground_state_is_uniform():
    # N=2 closed box: the (1,1) mode weights all four sites equally
    lat = LatticeConfig(N=2, Nk=1)
    P = born_probability(eigenstate(lat, (1, 1)))
    assert np.allclose(P, 0.25, atol=1e-14)
    assert P.sum() == pytest.approx(1.0, abs=1e-14)


def test_current_is_antisymmetric():
    lat = LatticeConfig(N=6, seed=4)
    U = evolution_operator(build_hamiltonian(lat), lat.epsilon)
    psi = build_initial_state(lat).psi
    J = current_matrix(psi, propagate(U, psi), U)
    assert np.array_equal(J, -J.T)
    assert np.all(np.diag(J) == 0.0)


@pytest.mark.parametrize("bc", ["dirichlet", "periodic"])
def test_current_satisfies_continuity(bc):
    # row sums of J are exactly the one-step probability change
    lat = LatticeConfig(N=7, bc=bc, seed=9)
    U = evolution_operator(build_hamiltonian(lat), lat.epsilon)
    psi = build_initial_state(lat).psi
    psi_next = propagate(U, psi)
    J = current_matrix(psi, psi_next, U)
    dP = born_probability(psi_next) - born_probability(psi)
    assert np.abs(J.sum(axis=1) - dP).max() < 1e-13


def test_current_epsilon_orders():
    # J is odd under time reversal, so only odd powers of the step size
    # appear: nearest-neighbour currents are O(eps), currents between
    # sites two hops apart are O(eps^3)
    lat = LatticeConfig(N=8, bc="periodic", seed=3)
    H = build_hamiltonian(lat)
    psi = build_initial_state(lat).psi

    def currents(eps):
        U = evolution_operator(H, eps)
        J = current_matrix(psi, propagate(U, psi), U)
        return J[0, 1], J[0, 9]   # (0,0)->(0,1) neighbour, (0,0)->(1,1) diagonal

    eps = lat.epsilon
    near1, far1 = currents(eps)
    near2, far2 = currents(eps / 2)
    assert near1 / near2 == pytest.approx(2.0, rel=0.05)
    assert far1 / far2 == pytest.approx(8.0, rel=0.05)
