"""Kicked, dipole-coupled planar quantum rotor pairs and their classical counterpart."""

__version__ = "0.1.0"

from .config import Arrangement, ConfigError, CouplingConstants, RotorPairConfig
from .mathieu import MathieuProblem, OneCoordinateBasis, evaluate_basis, fourier_grid_oracle, solve_basis
from .quantum import (
    QuantumState,
    RotorBases,
    SpectralEvolution,
    TruncationError,
    apply_kick_bessel,
    apply_kick_grid,
    build_bases,
    expand,
    ground_state,
    propagate,
)
from .observables import (
    FocalPoint,
    OrientationTrace,
    analytic_isolated,
    density_grid,
    find_focal_time,
    kicked_evolution,
    orientation_factor,
    orientation_trace,
    probability_within,
    theta_density,
)
from .classical import ClassicalConfig, classical_orientation, evolve_pair, kick_impulse
from .squeezing import PulseSchedule, accumulative_squeeze
