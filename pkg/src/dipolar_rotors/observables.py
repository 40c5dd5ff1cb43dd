"""Orientation factor, focal times, and probability-density snapshots."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy import optimize, special

from .config import RotorPairConfig
from .quantum import (
    QuantumState,
    SpectralEvolution,
    _cos_matrix,
    build_bases,
    grid_angles,
    ground_state,
    kick_and_expand,
)

LONG_WINDOW = (7.0, 2e-3)
SHORT_WINDOW = (0.15, 5e-4)


class FocalTimeError(RuntimeError):
    """No interior minimum of O(t) inside the scanned window."""


class FocalPoint(NamedTuple):
    t_c: float
    O_min: float


@dataclass
class OrientationTrace:
    times: np.ndarray
    values: np.ndarray
    config: dict = field(default_factory=dict)
    # optional exact evaluator, used to polish focal times beyond the sampling grid
    evaluator: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have the same shape")

    def __len__(self):
        return len(self.times)


def orientation_factor(state: QuantumState) -> float:
    """``O = <2 - cos th1 - cos th2> = 2 - 2 <cos xi cos eta>``."""
    if state.representation == "coeffs":
        D = state.coeffs
        cx, ce = _cos_matrix(state.bases.xi), _cos_matrix(state.bases.eta)
        return 2.0 - 2.0 * np.vdot(D, cx @ D @ ce).real / np.sum(np.abs(D) ** 2)
    rho = np.abs(state.amplitudes) ** 2
    c = np.cos(grid_angles(state.grid_size))
    return 2.0 - 2.0 * float(c @ rho @ c / rho.sum())


def analytic_isolated(P, t):
    """Orientation factor of two uncoupled rotors kicked once: ``2 - 2 J1(2P sin t)``."""
    return 2.0 - 2.0 * special.j1(2.0 * np.asarray(P) * np.sin(t))


def sample_times(t_max: float, dt: float) -> np.ndarray:
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    return dt * np.arange(int(round(t_max / dt)) + 1)


def kicked_evolution(config: RotorPairConfig) -> SpectralEvolution:
    bases = build_bases(config)
    D = kick_and_expand(ground_state(config), config.kick_strength, bases, config.grid_size)
    return SpectralEvolution(D, bases)


def orientation_trace(config: RotorPairConfig, t_max: float = SHORT_WINDOW[0], dt: float = SHORT_WINDOW[1]) -> OrientationTrace:
    """O(t) after a single kick of the ground state at ``t = 0``."""
    times = sample_times(t_max, dt)
    evo = kicked_evolution(config)
    return OrientationTrace(times, evo.orientation_many(times), config.echo(), evaluator=evo.orientation)


def _refine(times, values, i, evaluator=None) -> FocalPoint:
    y0, y1, y2 = values[i - 1 : i + 2]
    h = times[i + 1] - times[i]
    denom = y0 - 2 * y1 + y2
    shift = 0.5 * (y0 - y2) / denom if denom > 0 else 0.0
    t_par = times[i] + shift * h
    o_par = y1 - 0.25 * (y0 - y2) * shift
    if evaluator is None:
        return FocalPoint(float(t_par), float(o_par))
    res = optimize.minimize_scalar(
        evaluator, bounds=(times[i - 1], times[i + 1]), method="bounded", options={"xatol": 1e-10}
    )
    return FocalPoint(float(res.x), float(res.fun))


def local_minima(values: np.ndarray) -> np.ndarray:
    """Indices of interior discrete local minima (strict on the left)."""
    v = np.asarray(values)
    return np.nonzero((v[1:-1] < v[:-2]) & (v[1:-1] <= v[2:]))[0] + 1


def find_focal_time(source, t_max: float = SHORT_WINDOW[0], dt: float = SHORT_WINDOW[1], tie_tol: float = 1e-9) -> FocalPoint:
    """Refined time and value of the lowest interior minimum of O(t).

    ``source`` is an :class:`OrientationTrace` or a :class:`RotorPairConfig`
    (scanned over ``[0, t_max]``).  Among minima equal within ``tie_tol`` the
    earliest wins.
    """
    trace = orientation_trace(source, t_max, dt) if isinstance(source, RotorPairConfig) else source
    idx = local_minima(trace.values)
    if idx.size == 0:
        raise FocalTimeError(
            f"no interior minimum of O(t) in [{trace.times[0]:.4g}, {trace.times[-1]:.4g}]"
        )
    vals = trace.values[idx]
    i = idx[np.nonzero(vals <= vals.min() + tie_tol)[0][0]]
    return _refine(trace.times, trace.values, i, trace.evaluator)


# --- density snapshots -------------------------------------------------------


def theta_density(state: QuantumState, n: int = 256) -> np.ndarray:
    """``|Psi(theta1, theta2)|^2`` on the uniform ``n x n`` grid, rows = theta1.

    Each (theta1, theta2) node is the image of the (xi, eta) node at half
    spacing, so the field is sampled exactly (spectral synthesis or band-limited
    resampling) rather than interpolated.
    """
    amp = state.grid(2 * n)
    i = np.arange(n)
    I, J = np.meshgrid(i, i, indexing="ij")
    a = amp[(I + J) % (2 * n), (I - J + n) % (2 * n)]
    b = amp[(I + J + n) % (2 * n), (I - J) % (2 * n)]  # second preimage of the double cover
    scale = np.max(np.abs(a))
    if np.max(np.abs(a - b)) > 1e-8 * max(scale, 1e-300):
        raise ValueError("state is not invariant under (xi, eta) -> (xi + pi, eta + pi)")
    rho = np.abs(a) ** 2
    return rho / (rho.sum() * (2 * np.pi / n) ** 2)


def probability_within(rho: np.ndarray, centers, radius: float) -> float:
    """Probability mass within torus distance ``radius`` of any of ``centers``."""
    n = rho.shape[0]
    th = grid_angles(n)
    T1, T2 = np.meshgrid(th, th, indexing="ij")
    mask = np.zeros(rho.shape, dtype=bool)
    for c1, c2 in centers:
        d1 = (T1 - c1 + np.pi) % (2 * np.pi) - np.pi
        d2 = (T2 - c2 + np.pi) % (2 * np.pi) - np.pi
        mask |= d1**2 + d2**2 < radius**2
    return float(rho[mask].sum() * (2 * np.pi / n) ** 2)


def density_grid(state: QuantumState, out, n: int = 256, svg: bool = False, header: dict | None = None) -> Path:
    """Write the (theta1, theta2) density as CSV (and an optional SVG heatmap)."""
    from .io import write_matrix_csv, write_svg_heatmap

    rho = theta_density(state, n)
    path = write_matrix_csv(out, rho, header or {})
    if svg:
        write_svg_heatmap(Path(out).with_suffix(".svg"), rho)
    return path
