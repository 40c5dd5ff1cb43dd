"""Two-rotor wavefunctions on the (xi, eta) torus: kicks and spectral propagation.

With ``xi = (theta1 + theta2)/2`` and ``eta = (theta1 - theta2)/2`` the
field-free Hamiltonian separates into two Mathieu problems.  States live on
the full torus ``[-pi, pi)^2`` in (xi, eta), which covers the physical
(theta1, theta2) torus twice; physical states obey
``psi(xi + pi, eta + pi) = psi(xi, eta)``.  Grid index ``j`` along either axis
corresponds to the angle ``-pi + 2 pi j / N``; rows are xi, columns eta.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

from .config import RotorPairConfig
from .mathieu import MathieuProblem, OneCoordinateBasis, solve_basis

__all__ = [
    "RotorBases",
    "QuantumState",
    "TruncationError",
    "TruncationWarning",
    "build_bases",
    "grid_angles",
    "ground_state",
    "uniform_state",
    "apply_kick_grid",
    "apply_kick_bessel",
    "bessel_tail_mass",
    "expand",
    "propagate",
    "synthesize",
    "parity_mask",
    "forbidden_population",
    "mean_energy",
    "SpectralEvolution",
    "kick",
    "kick_and_expand",
]


class TruncationError(RuntimeError):
    """The retained Mathieu levels miss a significant part of the state."""


class TruncationWarning(RuntimeWarning):
    """A series truncation discards more than the tolerated weight."""


@dataclass(frozen=True, eq=False)
class RotorBases:
    xi: OneCoordinateBasis
    eta: OneCoordinateBasis

    @property
    def pair_energies(self) -> np.ndarray:
        """``(L, L)`` array of ``E_l + E_l'`` in units of E_K."""
        return 0.5 * (self.xi.eigenvalues[:, None] + self.eta.eigenvalues[None, :])

    @property
    def max_harmonic(self) -> int:
        return max(self.xi.problem.max_harmonic, self.eta.problem.max_harmonic)


@functools.lru_cache(maxsize=32)
def build_bases(config: RotorPairConfig) -> RotorBases:
    c = config.coupling
    xi = solve_basis(MathieuProblem(config.v_xi, c.xi0, config.K), config.levels)
    eta = solve_basis(MathieuProblem(config.v_eta, c.eta0, config.K), config.levels)
    return RotorBases(xi, eta)


def grid_angles(n: int) -> np.ndarray:
    return -np.pi + 2 * np.pi * np.arange(n) / n


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Grid amplitudes or Mathieu coefficients of a rotor-pair state.

    Exactly one of ``amplitudes`` (``N x N`` complex) and ``coeffs``
    (``L x L`` complex, with ``bases``) is the primary representation,
    named by ``representation``.
    """

    amplitudes: np.ndarray | None = None
    coeffs: np.ndarray | None = None
    bases: RotorBases | None = None
    grid_size: int | None = None

    def __post_init__(self):
        if (self.amplitudes is None) == (self.coeffs is None):
            raise ValueError("exactly one of amplitudes / coeffs must be given")
        if self.coeffs is not None and self.bases is None:
            raise ValueError("coefficient representation needs bases")
        if self.amplitudes is not None:
            a = np.asarray(self.amplitudes, dtype=complex)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise ValueError(f"amplitudes must be square, got shape {a.shape}")
            object.__setattr__(self, "amplitudes", a)
            object.__setattr__(self, "grid_size", a.shape[0])

    @property
    def representation(self) -> str:
        return "grid" if self.amplitudes is not None else "coeffs"

    @property
    def cell(self) -> float:
        return (2 * np.pi / self.grid_size) ** 2

    def grid(self, n: int | None = None) -> np.ndarray:
        """Amplitudes on an ``n x n`` grid (default: the state's own grid size)."""
        if self.amplitudes is not None:
            if n is None or n == self.grid_size:
                return self.amplitudes
            return _fourier_resample(self.amplitudes, n)
        return synthesize(self.coeffs, self.bases, n or self.grid_size or 256)

    def with_grid(self, n: int | None = None) -> "QuantumState":
        if self.representation == "grid" and (n is None or n == self.grid_size):
            return self
        return QuantumState(amplitudes=self.grid(n))

    def norm(self) -> float:
        if self.amplitudes is not None:
            return float(np.sum(np.abs(self.amplitudes) ** 2) * self.cell)
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def translation_defect(self) -> float:
        """``max |psi(xi + pi, eta + pi) - psi(xi, eta)|`` on the grid."""
        a = self.grid()
        h = a.shape[0] // 2
        return float(np.max(np.abs(np.roll(a, (h, h), axis=(0, 1)) - a)))


def _fourier_resample(a: np.ndarray, n: int) -> np.ndarray:
    """Band-limited resampling of a periodic field to an ``n x n`` grid."""
    m = a.shape[0]
    # the -pi origin carries a phase (-1)^k per harmonic; undo, resample, redo
    k_in = np.fft.fftfreq(m, 1.0 / m)
    spec = np.fft.fft2(a) * np.outer(np.exp(-1j * k_in * np.pi), np.exp(-1j * k_in * np.pi))
    out = np.zeros((n, n), dtype=complex)
    h = min(m, n) // 2
    idx_in = np.r_[0:h, m - h:m]
    idx_out = np.r_[0:h, n - h:n]
    out[np.ix_(idx_out, idx_out)] = spec[np.ix_(idx_in, idx_in)]
    k_out = np.fft.fftfreq(n, 1.0 / n)
    out *= np.outer(np.exp(1j * k_out * np.pi), np.exp(1j * k_out * np.pi))
    return np.fft.ifft2(out) * (n * n) / (m * m)


def uniform_state(n: int = 256) -> QuantumState:
    return QuantumState(amplitudes=np.full((n, n), 1.0 / (2 * np.pi), dtype=complex))


def parity_mask(bases: RotorBases) -> np.ndarray:
    """True where the product f_l g_l' is translation-even (physically allowed)."""
    return np.outer(bases.xi.translation_parity, bases.eta.translation_parity) == 1


def ground_state(config: RotorPairConfig) -> QuantumState:
    """Lowest-energy parity-allowed product state, as coefficients."""
    bases = build_bases(config)
    energy = np.where(parity_mask(bases), bases.pair_energies, np.inf)
    l, lp = np.unravel_index(np.argmin(energy), energy.shape)
    coeffs = np.zeros(energy.shape, dtype=complex)
    coeffs[l, lp] = 1.0
    return QuantumState(coeffs=coeffs, bases=bases, grid_size=config.grid_size)


def apply_kick_grid(state: QuantumState, P: float, n: int | None = None) -> QuantumState:
    """Multiply by ``exp[iP (cos th1 + cos th2)] = exp[2iP cos xi cos eta]``."""
    amp = state.grid(n)
    ang = grid_angles(amp.shape[0])
    phase = np.exp(2j * P * np.outer(np.cos(ang), np.cos(ang)))
    return QuantumState(amplitudes=amp * phase)


def bessel_tail_mass(z: float, n_c: int, extra: int = 400) -> float:
    """``sum_{|n| > n_c} J_n(z)^2``, summed directly over the tail."""
    n = np.arange(n_c + 1, n_c + 1 + extra + int(abs(z)))
    return float(2 * np.sum(special.jv(n, z) ** 2))


def apply_kick_bessel(state: QuantumState, P: float, n_c: int, n: int | None = None, tail_tol: float = 1e-12) -> QuantumState:
    """Kick via the truncated series ``J_0 + 2 sum_{n=1}^{n_c} i^n J_n(2P cos xi) cos(n eta)``."""
    if n_c < 1:
        raise ValueError(f"n_c must be >= 1, got {n_c}")
    tail = bessel_tail_mass(2 * P, n_c)
    if tail > tail_tol:
        warnings.warn(
            f"Bessel series truncated at n_c={n_c} drops tail mass {tail:.3e} at P={P}",
            TruncationWarning,
            stacklevel=2,
        )
    amp = state.grid(n)
    ang = grid_angles(amp.shape[0])
    orders = np.arange(1, n_c + 1)
    jn = special.jv(orders[:, None], 2 * P * np.cos(ang)[None, :])  # (n_c, N_xi)
    cosn = np.cos(orders[:, None] * ang[None, :])  # (n_c, N_eta)
    factor = special.j0(2 * P * np.cos(ang))[:, None] + 2 * np.einsum(
        "n,nx,ny->xy", 1j ** orders, jn, cosn
    )
    return QuantumState(amplitudes=amp * factor)


def _quadrature_size(bases: RotorBases, n: int) -> int:
    need = 2 * bases.max_harmonic + 2
    while n < need:
        n *= 2
    return n


def expand(state: QuantumState, bases: RotorBases, capture_tol: float = 1e-8) -> np.ndarray:
    """Coefficients ``D[l, l'] = <f_l g_l' | psi>`` by grid quadrature."""
    if state.representation == "coeffs" and state.bases is bases:
        return state.coeffs
    n = _quadrature_size(bases, state.grid_size)
    amp = state.grid(n)
    F, G = bases.xi.on_grid(n), bases.eta.on_grid(n)
    D = (F.T @ amp @ G) * (2 * np.pi / n) ** 2
    total = state.norm()
    captured = float(np.sum(np.abs(D) ** 2))
    if captured < total * (1 - capture_tol):
        raise TruncationError(
            f"retained {F.shape[1]}x{G.shape[1]} levels capture norm {captured:.10f} of {total:.10f}"
        )
    return D


def synthesize(D: np.ndarray, bases: RotorBases, n: int) -> np.ndarray:
    F, G = bases.xi.on_grid(n), bases.eta.on_grid(n)
    return F @ D @ G.T


def propagate(D: np.ndarray, bases: RotorBases, t: float, n: int | None = 256) -> QuantumState:
    """Free evolution for time ``t``; returns a coefficient state.

    Grid amplitudes are available through ``state.grid(n)``.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    Dt = D * np.exp(-1j * bases.pair_energies * t)
    return QuantumState(coeffs=Dt, bases=bases, grid_size=n)


def forbidden_population(D: np.ndarray, bases: RotorBases) -> float:
    return float(np.sum(np.abs(D[~parity_mask(bases)]) ** 2))


def mean_energy(D: np.ndarray, bases: RotorBases) -> float:
    w = np.abs(D) ** 2
    return float(np.sum(w * bases.pair_energies) / np.sum(w))


@functools.lru_cache(maxsize=64)
def _cos_matrix(basis: OneCoordinateBasis) -> np.ndarray:
    """``<f_l | cos a | f_k>``, exact by quadrature on a sufficiently fine grid."""
    n = 16
    while n < 2 * basis.problem.max_harmonic + 4:
        n *= 2
    F = basis.on_grid(n)
    c = np.cos(grid_angles(n))
    return (F.T * c) @ F * (2 * np.pi / n)


class SpectralEvolution:
    """Free evolution of a fixed coefficient matrix, with fast observables.

    ``orientation(t)`` evaluates ``2 - 2 <cos xi cos eta>`` directly in the
    Mathieu basis, so no grid synthesis is needed per time sample.
    """

    def __init__(self, D: np.ndarray, bases: RotorBases):
        self.D = np.asarray(D, dtype=complex)
        self.bases = bases
        self.energies = bases.pair_energies
        self.cx = _cos_matrix(bases.xi)
        self.ce = _cos_matrix(bases.eta)
        self.weight = float(np.sum(np.abs(self.D) ** 2))

    def coeffs(self, t: float) -> np.ndarray:
        return self.D * np.exp(-1j * self.energies * t)

    def state(self, t: float, n: int = 256) -> QuantumState:
        return propagate(self.D, self.bases, t, n)

    def orientation(self, t: float) -> float:
        Dt = self.coeffs(t)
        val = np.vdot(Dt, self.cx @ Dt @ self.ce).real / self.weight
        return 2.0 - 2.0 * val

    def orientation_many(self, times) -> np.ndarray:
        return np.array([self.orientation(t) for t in np.asarray(times, dtype=float)])


def kick(state: QuantumState, P: float, n: int = 256) -> QuantumState:
    """Exact kick on an ``n x n`` grid; coefficient states are synthesized first."""
    return apply_kick_grid(state, P, n)


def kick_and_expand(state: QuantumState, P: float, bases: RotorBases, n: int = 256) -> np.ndarray:
    """Kick and re-expand in the Mathieu basis, picking a grid fine enough for exactness."""
    n = max(n, _kick_grid_size(bases, P))
    return expand(apply_kick_grid(state, P, n), bases)


def _kick_grid_size(bases: RotorBases, P: float) -> int:
    # kicked state bandwidth <= basis bandwidth + Bessel spread of exp(2iP cos) (~2P + 40)
    need = 2 * (bases.max_harmonic + int(math.ceil(2 * P)) + 40)
    n = 128
    while n < need:
        n *= 2
    return n
