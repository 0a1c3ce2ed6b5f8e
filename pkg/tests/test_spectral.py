"""Spectral analysis of cumulative transition matrices."""

import csv

import numpy as np
import pytest

from bellbox.errors import IntegrityError
from bellbox.spectral import (column_dispersion, dominant_eigenvector_distance,
                              eigen_spectrum, power_iteration, slope_fit,
                              write_spectrum_csv)


def test_slope_fit_recovers_exact_exponential():
    s = np.arange(25)
    fit = slope_fit(np.exp(-0.5 * s))
    assert fit.available
    assert fit.c == pytest.approx(0.5, abs=1e-12)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)
    assert fit.stderr == pytest.approx(0.0, abs=1e-12)
    assert fit.n_used == 25


def test_slope_fit_ignores_modes_below_floor():
    # decay rate 1.2: modes s >= 24 drop under 1e-12 and must be excluded
    s = np.arange(40)
    lams = np.exp(-1.2 * s)
    fit = slope_fit(lams, n_modes=40)
    assert fit.n_used == int((lams > 1e-12).sum())
    assert fit.c == pytest.approx(1.2, abs=1e-9)

    # a noise tail must not drag the fitted rate down
    noisy = np.where(lams > 1e-16, lams, 1e-16)
    fit_noisy = slope_fit(noisy, n_modes=40)
    assert fit_noisy.c == pytest.approx(1.2, abs=1e-9)


def test_slope_fit_unavailable_with_too_few_modes():
    fit = slope_fit(np.array([1.0, 1e-13, 1e-14, 1e-15]))
    assert not fit.available
    assert fit.n_used == 1
    assert np.isnan(fit.c)


def test_eigen_spectrum_against_bisection_oracle():
    # 3x3 column-stochastic matrix with a real spectrum; roots of the
    # characteristic polynomial are located by sign-change bisection,
    # fully independent of the LAPACK eigensolver
    A = np.array([[0.6, 0.1, 0.2],
                  [0.3, 0.8, 0.3],
                  [0.1, 0.1, 0.5]])

    def charpoly(lam):
        B = A - lam * np.eye(3)
        return (B[0, 0] * (B[1, 1] * B[2, 2] - B[1, 2] * B[2, 1])
                - B[0, 1] * (B[1, 0] * B[2, 2] - B[1, 2] * B[2, 0])
                + B[0, 2] * (B[1, 0] * B[2, 1] - B[1, 1] * B[2, 0]))

    grid = np.linspace(-1.05, 1.05, 4201)
    vals = [charpoly(g) for g in grid]
    roots = []
    for i in range(len(grid) - 1):
        lo, hi = grid[i], grid[i + 1]
        flo, fhi = vals[i], vals[i + 1]
        if flo == 0.0:
            roots.append(lo)
            continue
        if flo * fhi < 0:
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fmid = charpoly(mid)
                if flo * fmid <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            roots.append(0.5 * (lo + hi))
    assert len(roots) == 3

    snap = eigen_spectrum(A, step=1, time=0.1)
    assert np.allclose(np.sort(np.abs(snap.eigenvalues)), np.sort(roots), atol=1e-10)
    assert not snap.degenerate
    assert snap.unit_distance < 1e-12


def test_eigen_spectrum_rank_one_projector():
    # T~ = pi 1^T: fully relaxed, spectrum {1, 0, 0, ...}, v0 = pi
    pi = np.array([0.1, 0.2, 0.3, 0.25, 0.15])
    A = np.outer(pi, np.ones(5))
    snap = eigen_spectrum(A, step=10, time=1.0)
    mods = np.abs(snap.eigenvalues)
    assert mods[0] == pytest.approx(1.0, abs=1e-12)
    assert mods[1:].max() < 1e-12
    assert np.allclose(snap.stationary, pi, atol=1e-12)
    assert dominant_eigenvector_distance(snap, pi) < 1e-12
    assert not snap.degenerate


def test_eigen_spectrum_identity_is_degenerate():
    snap = eigen_spectrum(np.eye(4), step=0, time=0.0)
    assert snap.degenerate
    assert np.isnan(dominant_eigenvector_distance(snap, np.full(4, 0.25)))


def test_eigen_spectrum_flags_unit_drift():
    A = 1.01 * np.outer(np.full(3, 1 / 3), np.ones(3))
    with pytest.raises(IntegrityError, match="dominant eigenvalue"):
        eigen_spectrum(A, step=5, time=0.5)
    # a rotation has |lambda| = 1 but lambda^0 far from 1 in the plane
    R = np.array([[0.0, -1.0], [1.0, 0.0]])
    with pytest.raises(IntegrityError):
        eigen_spectrum(R, step=5, time=0.5)


def test_power_iteration_agrees_with_eig():
    rng = np.random.default_rng(4)
    T = rng.random((12, 12)) + 0.1
    T /= T.sum(axis=0)
    lam, v = power_iteration(T)
    snap = eigen_spectrum(T, step=1, time=0.1)
    assert lam == pytest.approx(1.0, abs=1e-10)
    assert np.abs(v - snap.stationary).sum() < 1e-8


def test_column_dispersion():
    pi = np.array([0.4, 0.6])
    assert column_dispersion(np.outer(pi, np.ones(2))) == 0.0
    assert column_dispersion(np.eye(2)) == pytest.approx(2.0)
    # sampled path stays within the exact maximum
    rng = np.random.default_rng(9)
    T = rng.random((600, 600))
    T /= T.sum(axis=0)
    exact = column_dispersion(T, exact_limit=600)
    sampled = column_dispersion(T, exact_limit=512, n_sample=64)
    assert 0.0 <= sampled <= exact + 1e-12


def test_write_spectrum_csv(tmp_path):
    path = tmp_path / "spec.csv"
    lams = np.array([1.0 + 0j, 0.5 - 0.25j])
    write_spectrum_csv(path, [(0.5, lams), (1.0, lams * 0.1)])
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t_over_L", "s", "re_lambda", "im_lambda", "abs_lambda"]
    assert len(rows) == 5
    assert rows[1] == ["0.5", "0", "1", "0", "1"]
    assert float(rows[2][4]) == pytest.approx(abs(0.5 - 0.25j), rel=1e-12)
    # second snapshot restarts the mode index
    assert rows[3][0] == "1" and rows[3][1] == "0"
