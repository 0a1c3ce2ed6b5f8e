"""Stochastic jump dynamics for a particle in a 2D box lattice.

The package simulates a discrete-time jump process whose one-step
transition matrices are built from the quantum probability current, and
quantifies how fast arbitrary initial distributions relax onto the Born
distribution via the spectra of cumulative transition matrices.
"""

__version__ = "0.1.0"

from .analysis import (PowerLawFit, RelaxationFit, RelaxationRecord, ScalingFit,
                       SnapshotRow, SweepResult, WalkerRecord, WalkerSpec,
                       power_law_probe, record_to_dict, relaxation_fit,
                       run_experiment, run_sweep, scaling_fit)
from .bell import (Checkpoint, CumulativeTransition, TransitionResult,
                   is_primitive, master_step, master_step_gain_loss,
                   read_checkpoint, sample_step, transition_matrix,
                   transport_gap, write_checkpoint)
from .config import (LatticeConfig, RunConfig, parse_config_file,
                     parse_sweep_file)
from .errors import ConfigError, IntegrityError
from .evolve import (born_probability, current_matrix, evolution_operator,
                     propagate)
from .lattice import (InitialState, band_wavenumbers, build_hamiltonian,
                      build_initial_state, eigenstate, laplacian_1d,
                      mode_energy, mode_vector, momentum_spread, site_coords,
                      site_index, state_momentum_spread)
from .spectral import (SlopeFit, SpectrumSnapshot, column_dispersion,
                       dominant_eigenvector_distance, eigen_spectrum,
                       power_iteration, slope_fit)

__all__ = [
    "__version__",
    "ConfigError", "IntegrityError",
    "LatticeConfig", "RunConfig", "parse_config_file", "parse_sweep_file",
    "InitialState", "band_wavenumbers", "build_hamiltonian",
    "build_initial_state", "eigenstate", "laplacian_1d", "mode_energy",
    "mode_vector", "momentum_spread", "site_coords", "site_index",
    "state_momentum_spread",
    "born_probability", "current_matrix", "evolution_operator", "propagate",
    "Checkpoint", "CumulativeTransition", "TransitionResult", "is_primitive",
    "master_step", "master_step_gain_loss", "read_checkpoint", "sample_step",
    "transition_matrix", "transport_gap", "write_checkpoint",
    "SlopeFit", "SpectrumSnapshot", "column_dispersion",
    "dominant_eigenvector_distance", "eigen_spectrum", "power_iteration",
    "slope_fit",
    "PowerLawFit", "RelaxationFit", "RelaxationRecord", "ScalingFit",
    "SnapshotRow", "SweepResult", "WalkerRecord", "WalkerSpec",
    "power_law_probe", "record_to_dict", "relaxation_fit", "run_experiment",
    "run_sweep", "scaling_fit",
]
