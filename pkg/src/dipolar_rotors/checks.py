"""Quick invariant suite behind ``dipolar-rotors validate``."""

from __future__ import annotations

import warnings
from typing import Callable, NamedTuple

import numpy as np

from .config import RotorPairConfig
from .mathieu import MathieuProblem, fourier_grid_oracle, solve_basis
from .observables import analytic_isolated, orientation_factor, orientation_trace
from .quantum import (
    apply_kick_bessel,
    apply_kick_grid,
    build_bases,
    expand,
    forbidden_population,
    ground_state,
    mean_energy,
    uniform_state,
)


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str


def _basis_vs_oracle():
    worst_eig = worst_orth = 0.0
    for v in (0.0, 0.5, 1.5, 15.0, 30.0, 45.0):
        for a0 in (0.0, np.pi / 2):
            p = MathieuProblem(v, a0, 48)
            b = solve_basis(p, 64)
            eps, _ = fourier_grid_oracle(p, 8 * p.K)
            worst_eig = max(worst_eig, float(np.max(np.abs(b.eigenvalues - eps[: len(b)]))))
            F = b.on_grid(512)
            gram = F.T @ F * (2 * np.pi / 512)
            worst_orth = max(worst_orth, float(np.max(np.abs(gram - np.eye(len(b))))))
    return worst_eig < 1e-8 and worst_orth < 1e-10, f"eig dev {worst_eig:.2e}, orth dev {worst_orth:.2e}"


def _kick_equivalence():
    cfg = RotorPairConfig("A", 30.0, 10.0)
    gs = ground_state(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        a = apply_kick_bessel(gs, 10.0, 40, n=256).amplitudes
    b = apply_kick_grid(gs, 10.0, n=256).amplitudes
    dev = float(np.max(np.abs(a - b)))
    return dev < 1e-8, f"max |bessel - grid| = {dev:.2e}"


def _unitarity_parity():
    cfg = RotorPairConfig("A", 30.0, 10.0)
    bases = build_bases(cfg)
    kicked = apply_kick_grid(ground_state(cfg), 10.0, 512)
    D = expand(kicked, bases)
    drift = e_dev = 0.0
    e0 = mean_energy(D, bases)
    for t in np.linspace(0.0, 7.0, 15):
        Dt = D * np.exp(-1j * bases.pair_energies * t)
        drift = max(drift, abs(np.sum(np.abs(Dt) ** 2) - 1.0))
        e_dev = max(e_dev, abs(mean_energy(Dt, bases) - e0))
    forb = forbidden_population(D, bases)
    ok = drift < 1e-10 and forb < 1e-20 and e_dev < 1e-10 * max(1.0, abs(e0))
    return ok, f"norm drift {drift:.2e}, forbidden {forb:.2e}, energy dev {e_dev:.2e}"


def _isolated_rotor():
    cfg = RotorPairConfig("A", 0.0, 10.0)
    tr = orientation_trace(cfg, 7.0, 2e-2)
    dev = float(np.max(np.abs(tr.values - analytic_isolated(10.0, tr.times))))
    return dev < 1e-6, f"max |O - (2 - 2 J1)| = {dev:.2e}"


def _bounds():
    u = orientation_factor(uniform_state(128))
    cfg = RotorPairConfig("A", 30.0, 10.0)
    tr = orientation_trace(cfg, 0.5, 5e-3)
    ok = abs(u - 2.0) < 1e-12 and tr.values.min() >= 0.0 and tr.values.max() <= 4.0
    return ok, f"uniform O = {u:.15f}, trace range [{tr.values.min():.4f}, {tr.values.max():.4f}]"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "basis-vs-grid-oracle": _basis_vs_oracle,
    "kick-bessel-vs-grid": _kick_equivalence,
    "unitarity-parity-energy": _unitarity_parity,
    "isolated-rotor-analytic": _isolated_rotor,
    "orientation-bounds": _bounds,
}


def run_checks() -> list[CheckResult]:
    out = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail))
    return out

