"""Periodic Mathieu eigenfunctions for one separated rotor coordinate.

Solves

    f''(a) + [eps - 2 v cos 2(a + a0)] f(a) = 0,   f(a + 2 pi) = f(a)

by diagonalizing the Fourier-coefficient recurrence of each of the four
Mathieu classes (ce with even harmonics, se with odd harmonics, ce with odd
harmonics, se with even harmonics).  Eigenfunctions are normalized to unit
L2 norm on [-pi, pi), i.e. the classical ``pi`` normalization divided by
``sqrt(pi)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import linalg

__all__ = [
    "BASIS_CLASSES",
    "MathieuProblem",
    "OneCoordinateBasis",
    "BasisError",
    "assemble_recurrence_matrix",
    "solve_basis",
    "evaluate_basis",
    "fourier_grid_oracle",
    "write_basis_csv",
]

BASIS_CLASSES = ("ce-even", "se-odd", "ce-odd", "se-even")

# (first harmonic, harmonic step, is cosine series) per class
_CLASS_LAYOUT = {
    "ce-even": (0, 2, True),
    "se-odd": (1, 2, False),
    "ce-odd": (1, 2, True),
    "se-even": (2, 2, False),
}


class BasisError(ValueError):
    """Invalid Mathieu problem or failed eigen-solve."""


@dataclass(frozen=True)
class MathieuProblem:
    """One separated coordinate: strength ``v``, phase ``alpha0``, truncation ``K``.

    Each class is expanded in ``K + 1`` harmonics, so the highest harmonic kept
    is ``2K + 2``.
    """

    v: float
    alpha0: float = 0.0
    K: int = 48

    def __post_init__(self):
        if not np.isfinite(self.v):
            raise BasisError(f"v must be finite, got {self.v!r}")
        if self.K < 2:
            raise BasisError(f"K must be >= 2, got {self.K}")

    @property
    def max_harmonic(self) -> int:
        return 2 * self.K + 2


@dataclass(frozen=True, eq=False)
class OneCoordinateBasis:
    """Lowest ``L`` Mathieu eigenpairs in a full Fourier representation.

    ``cos_coeffs[l, m]`` and ``sin_coeffs[l, m]`` multiply ``cos(m a)`` and
    ``sin(m a)`` for ``m = 0 .. max_harmonic``.
    """

    problem: MathieuProblem
    eigenvalues: np.ndarray
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray
    class_labels: tuple[str, ...]
    translation_parity: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def energies(self) -> np.ndarray:
        """Energies in units of the rotational constant, ``E = eps / 2``."""
        return 0.5 * self.eigenvalues

    def on_grid(self, n: int) -> np.ndarray:
        """Basis functions sampled on the uniform grid ``-pi + 2 pi j / n``.

        Returns an ``(n, L)`` array; cached per grid size.
        """
        if n not in self._cache:
            alphas = -np.pi + 2 * np.pi * np.arange(n) / n
            self._cache[n] = _synthesize(self.cos_coeffs, self.sin_coeffs, alphas).T.copy()
        return self._cache[n]


def _class_harmonics(cls: str, K: int) -> np.ndarray:
    first, step, _ = _CLASS_LAYOUT[cls]
    return first + step * np.arange(K + 1)


def assemble_recurrence_matrix(problem: MathieuProblem, cls: str) -> np.ndarray:
    """Symmetric ``(K+1, K+1)`` matrix whose eigenvalues are the characteristic values.

    Only the unshifted problem is represented; ``problem.alpha0`` is ignored here.
    The ce-even ``m = 0`` row/column is rescaled by ``sqrt(2)`` to make the
    matrix symmetric.
    """
    if cls not in _CLASS_LAYOUT:
        raise BasisError(f"unknown Mathieu class {cls!r}; expected one of {BASIS_CLASSES}")
    K, v = problem.K, float(problem.v)
    if K < 2:
        raise BasisError(f"K must be >= 2, got {K}")
    m = _class_harmonics(cls, K)
    mat = np.diag(m.astype(float) ** 2)
    off = np.full(K, v)
    if cls == "ce-even":
        off[0] *= math.sqrt(2.0)
    elif cls == "ce-odd":
        mat[0, 0] += v
    elif cls == "se-odd":
        mat[0, 0] -= v
    mat += np.diag(off, 1) + np.diag(off, -1)
    return mat


def _class_eigenpairs(problem: MathieuProblem, cls: str) -> tuple[np.ndarray, np.ndarray]:
    mat = assemble_recurrence_matrix(problem, cls)
    try:
        vals, vecs = linalg.eigh(mat)
    except linalg.LinAlgError as exc:
        raise BasisError(f"eigensolver failed for class {cls} at v={problem.v}") from exc
    if cls == "ce-even":
        vecs = vecs.copy()
        vecs[0] /= math.sqrt(2.0)
    # unit L2 norm on [-pi, pi): the cosine/sine series has norm^2 = pi * sum(c^2)
    vecs = vecs / math.sqrt(math.pi)
    # deterministic sign: largest-magnitude coefficient positive
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    return vals, vecs * signs


def _shift(cos_c: np.ndarray, sin_c: np.ndarray, alpha0: float) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of ``f(a + alpha0)`` given those of ``f(a)``."""
    if alpha0 == 0.0:
        return cos_c, sin_c
    m = np.arange(cos_c.shape[-1])
    c, s = np.cos(m * alpha0), np.sin(m * alpha0)
    # exact zeros where the trig factors vanish analytically (e.g. alpha0 = pi/2)
    c[np.abs(c) < 1e-14] = 0.0
    s[np.abs(s) < 1e-14] = 0.0
    # cos m(a+a0) = cos ma cos ma0 - sin ma sin ma0 ; sin m(a+a0) = sin ma cos ma0 + cos ma sin ma0
    new_cos = cos_c * c + sin_c * s
    new_sin = sin_c * c - cos_c * s
    return new_cos, new_sin


def solve_basis(problem: MathieuProblem, L: int) -> OneCoordinateBasis:
    """Lowest ``L`` eigenpairs merged over the four classes, ascending in eps."""
    if L < 1 or L > 2 * problem.K:
        raise BasisError(f"level count L={L} must satisfy 1 <= L <= 2K = {2 * problem.K}")
    nharm = problem.max_harmonic + 1
    vals, labels, cos_rows, sin_rows = [], [], [], []
    for cls in BASIS_CLASSES:
        ev, vecs = _class_eigenpairs(problem, cls)
        harm = _class_harmonics(cls, problem.K)
        is_cos = _CLASS_LAYOUT[cls][2]
        full = np.zeros((len(ev), nharm))
        full[:, harm] = vecs.T
        vals.append(ev)
        labels.extend([cls] * len(ev))
        cos_rows.append(full if is_cos else np.zeros_like(full))
        sin_rows.append(np.zeros_like(full) if is_cos else full)
    vals = np.concatenate(vals)
    cos_all = np.vstack(cos_rows)
    sin_all = np.vstack(sin_rows)
    order = np.argsort(vals, kind="stable")[:L]
    cos_c, sin_c = _shift(cos_all[order], sin_all[order], float(problem.alpha0))
    lab = tuple(labels[i] for i in order)
    parity = np.array([1 if c in ("ce-even", "se-even") else -1 for c in lab], dtype=int)
    return OneCoordinateBasis(
        problem=problem,
        eigenvalues=vals[order].copy(),
        cos_coeffs=cos_c,
        sin_coeffs=sin_c,
        class_labels=lab,
        translation_parity=parity,
    )


def _synthesize(cos_c: np.ndarray, sin_c: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    m = np.arange(cos_c.shape[-1])
    phase = np.outer(m, np.asarray(alphas, dtype=float))
    return cos_c @ np.cos(phase) + sin_c @ np.sin(phase)


def evaluate_basis(basis: OneCoordinateBasis, level: int, alphas) -> np.ndarray:
    """Values of eigenfunction ``level`` at ``alphas``."""
    if not 0 <= level < len(basis):
        raise IndexError(f"level {level} out of range for basis with {len(basis)} levels")
    alphas = np.asarray(alphas, dtype=float)
    out = _synthesize(basis.cos_coeffs[level], basis.sin_coeffs[level], alphas.ravel())
    return out.reshape(alphas.shape)


def fourier_grid_oracle(problem: MathieuProblem, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Fourier-grid Hamiltonian for ``-1/2 d^2 + v cos 2(a + a0)`` on ``N`` points.

    Independent of the recurrence: the kinetic operator is built from the
    plane-wave representation and the potential is diagonal on the grid.
    Returns ``(eps, vectors)`` with ``eps = 2E`` ascending and ``vectors[:, l]``
    sampled at ``-pi + 2 pi j / N`` with unit L2 norm.
    """
    if N < 8 * problem.K:
        raise BasisError(f"grid size N={N} must be >= 8K = {8 * problem.K}")
    alphas = -np.pi + 2 * np.pi * np.arange(N) / N
    k = np.fft.fftfreq(N, d=1.0 / N)
    # kinetic matrix F^H diag(k^2/2) F applied column by column
    kinetic = np.real(np.fft.ifft(0.5 * k[:, None] ** 2 * np.fft.fft(np.eye(N), axis=0), axis=0))
    ham = kinetic + np.diag(problem.v * np.cos(2 * (alphas + problem.alpha0)))
    vals, vecs = linalg.eigh(0.5 * (ham + ham.T))
    vecs = vecs / math.sqrt(2 * np.pi / N)
    return 2.0 * vals, vecs


def write_basis_csv(basis: OneCoordinateBasis, path) -> Path:
    """Dump nonzero coefficients as ``class, level, epsilon, m, cos_coeff, sin_coeff``."""
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["class", "level", "epsilon", "m", "cos_coeff", "sin_coeff"])
            for lvl, (cls, eps) in enumerate(zip(basis.class_labels, basis.eigenvalues)):
                for m in range(basis.cos_coeffs.shape[1]):
                    c, s = basis.cos_coeffs[lvl, m], basis.sin_coeffs[lvl, m]
                    if c != 0.0 or s != 0.0:
                        w.writerow([cls, lvl, repr(float(eps)), m, repr(float(c)), repr(float(s))])
    except OSError as exc:
        raise OSError(f"cannot write basis CSV to {path}: {exc}") from exc
    return path
