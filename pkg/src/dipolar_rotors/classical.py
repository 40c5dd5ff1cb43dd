"""Classical kicked rotor pairs.

Time is measured in ``I/P`` and the coupling ``gamma_cl = E_D / 2I`` in
``(P/I)^2``.  In the normal coordinates ``q1 = th1 + th2`` and
``q2 = th1 - th2`` the field-free motion splits into two pendulums
``q'' = k sin q`` with

    arrangement A:  k1 = 6 gamma_cl,  k2 = -2 gamma_cl
    arrangement B:  k1 = 0,           k2 = 4 gamma_cl
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import Arrangement, ConfigError
from .observables import OrientationTrace

__all__ = [
    "ClassicalConfig",
    "ClassicalEnsemble",
    "IntegratorError",
    "Trajectory",
    "pendulum_constants",
    "kick_impulse",
    "initial_ensemble",
    "integrate",
    "evolve_pair",
    "classical_orientation",
    "energy_audit",
    "trajectory",
]


class IntegratorError(RuntimeError):
    """Energy drift of the fixed-step integrator exceeded its tolerance."""


@dataclass(frozen=True)
class ClassicalConfig:
    arrangement: Arrangement = Arrangement.A
    gamma_cl: float = 0.0
    M: int = 256
    dt: float = 1e-3
    t_max: float = 4.0
    energy_tol: float = 1e-6
    # Boltzmann weight exp(-beta W12) on the initial angles; None = uniform
    thermal_beta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "arrangement", Arrangement.parse(self.arrangement))
        if not (self.gamma_cl >= 0 and math.isfinite(self.gamma_cl)):
            raise ConfigError("gamma_cl", f"must be a finite number >= 0, got {self.gamma_cl}")
        if self.M < 64:
            raise ConfigError("M", f"must be >= 64, got {self.M}")
        if not self.dt > 0:
            raise ConfigError("dt", f"must be > 0, got {self.dt}")
        if not self.t_max >= 0:
            raise ConfigError("t_max", f"must be >= 0, got {self.t_max}")

    def echo(self) -> dict:
        return {
            "arrangement": self.arrangement.value,
            "gamma_cl": self.gamma_cl,
            "M": self.M,
            "dt": self.dt,
            "t_max": self.t_max,
            "thermal_beta": self.thermal_beta,
        }


@dataclass
class ClassicalEnsemble:
    theta1: np.ndarray
    theta2: np.ndarray
    omega1: np.ndarray
    omega2: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.weights)


@dataclass
class Trajectory:
    """Normal-coordinate history ``q[t, 2, S]``, ``w[t, 2, S]`` of one or more pendulum pairs."""

    times: np.ndarray
    q: np.ndarray
    w: np.ndarray
    k: np.ndarray = field(default_factory=lambda: np.zeros(2))


def pendulum_constants(arrangement, gamma_cl: float) -> np.ndarray:
    arrangement = Arrangement.parse(arrangement)
    if arrangement is Arrangement.A:
        return np.array([6.0 * gamma_cl, -2.0 * gamma_cl])
    return np.array([0.0, 4.0 * gamma_cl])


def kick_impulse(theta):
    """Angular velocity imparted by the delta pulse, ``-sin(theta)``."""
    return -np.sin(theta)


def _dipolar_form(arrangement: Arrangement, t1, t2):
    if arrangement is Arrangement.A:
        return np.cos(t1) * np.cos(t2) - 2 * np.sin(t1) * np.sin(t2)
    return np.cos(t1 - t2)


def initial_ensemble(config: ClassicalConfig, kicked: bool = True) -> ClassicalEnsemble:
    """Uniform tensor grid of angles at rest, reduced by reflection and exchange symmetry.

    The orientation average is invariant under ``(t1, t2) -> (-t1, -t2)`` and
    ``(t1, t2) -> (t2, t1)``, so each orbit of the grid is represented once with
    its multiplicity as weight.
    """
    M = config.M
    i, j = np.meshgrid(np.arange(M), np.arange(M), indexing="ij")
    i, j = i.ravel(), j.ravel()
    ri, rj = (M - i) % M, (M - j) % M
    codes = np.stack([i * M + j, j * M + i, ri * M + rj, rj * M + ri])
    canon = codes.min(axis=0)
    reps, counts = np.unique(canon, return_counts=True)
    ci, cj = reps // M, reps % M
    th = -np.pi + 2 * np.pi * np.arange(M) / M
    t1, t2 = th[ci], th[cj]
    w = counts.astype(float)
    if config.thermal_beta is not None:
        W = 2.0 * config.gamma_cl * _dipolar_form(config.arrangement, t1, t2)
        w = w * np.exp(-config.thermal_beta * (W - W.min()))
    w /= w.sum()
    if kicked:
        o1, o2 = kick_impulse(t1), kick_impulse(t2)
    else:
        o1 = o2 = np.zeros_like(t1)
    return ClassicalEnsemble(t1, t2, o1, o2, w)


def _energy(q, w, k):
    return 0.5 * w**2 + k * np.cos(q)


def _rk4_step(q, w, k, dt):
    """Classical RK4 on ``(q, w)``, written out for ``q'' = k sin q``.

    With accelerations ``a_i`` the stage positions are ``q + dt/2 w``,
    ``q + dt/2 w + dt^2/4 a1`` and ``q + dt w + dt^2/2 a2``, so the update needs
    no intermediate velocities.
    """
    h2 = dt * dt
    a1 = k * np.sin(q)
    a2 = k * np.sin(q + 0.5 * dt * w)
    a3 = k * np.sin(q + 0.5 * dt * w + 0.25 * h2 * a1)
    a4 = k * np.sin(q + dt * w + 0.5 * h2 * a2)
    qn = q + dt * w + h2 / 6 * (a1 + a2 + a3)
    wn = w + dt / 6 * (a1 + 2 * (a2 + a3) + a4)
    return qn, wn


def integrate(q0, w0, k, t_max: float, dt: float, energy_tol: float | None = None, observer=None, check_every: int = 10):
    """Fixed-step RK4 for independent pendulums ``q'' = k sin q``.

    ``q0``, ``w0`` have shape ``(P, S)`` with one constant per row in ``k``;
    rows with ``k == 0`` advance by exact free flight.  ``observer(step, q, w)``
    is called after every step (and at step 0).  Returns final ``(q, w)``.
    """
    q = np.array(q0, dtype=float)
    w = np.array(w0, dtype=float)
    k = np.asarray(k, dtype=float).reshape(-1)
    n = int(round(t_max / dt))
    live = [r for r in range(len(k)) if k[r] != 0]
    free = [r for r in range(len(k)) if k[r] == 0]
    e0 = {r: _energy(q[r], w[r], k[r]) for r in live}
    scale = {r: abs(k[r]) + 0.5 * w[r] ** 2 for r in live}
    if observer is not None:
        observer(0, q, w)
    for step in range(1, n + 1):
        for r in live:
            q[r], w[r] = _rk4_step(q[r], w[r], k[r], dt)
        for r in free:
            q[r] += dt * w[r]
        if energy_tol is not None and (step % check_every == 0 or step == n):
            for r in live:
                drift = np.abs(_energy(q[r], w[r], k[r]) - e0[r]) / scale[r]
                s = int(np.argmax(drift))
                if drift[s] > energy_tol:
                    raise IntegratorError(
                        f"energy drift {drift[s]:.3e} > {energy_tol:.1e} at t={step * dt:.4g} "
                        f"(pendulum q{r + 1}, sample {s}, q0={np.asarray(q0)[r][s]:.6g}); reduce dt"
                    )
        if observer is not None:
            observer(step, q, w)
    return q, w


def _to_normal(theta1, theta2, omega1, omega2):
    q = np.stack([np.add(theta1, theta2), np.subtract(theta1, theta2)]).astype(float)
    w = np.stack([np.add(omega1, omega2), np.subtract(omega1, omega2)]).astype(float)
    return q.reshape(2, -1), w.reshape(2, -1)


def evolve_pair(theta0, omega0, t: float, arrangement, gamma_cl: float, dt: float = 1e-3, energy_tol: float | None = 1e-6):
    """Angles ``(theta1(t), theta2(t))`` from initial angles and angular velocities."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    t1, t2 = np.asarray(theta0[0], float), np.asarray(theta0[1], float)
    shape = np.broadcast(t1, t2).shape
    q, w = _to_normal(t1, t2, omega0[0], omega0[1])
    k = pendulum_constants(arrangement, gamma_cl)
    n = max(1, int(math.ceil(t / dt - 1e-12))) if t > 0 else 0
    if n:
        q, w = integrate(q, w, k, t, t / n, energy_tol)
    return (0.5 * (q[0] + q[1])).reshape(shape), (0.5 * (q[0] - q[1])).reshape(shape)


def trajectory(theta0, omega0, t_max: float, arrangement, gamma_cl: float, dt: float = 1e-3) -> Trajectory:
    """Full normal-coordinate history, for audits and plotting."""
    q, w = _to_normal(np.atleast_1d(theta0[0]), np.atleast_1d(theta0[1]), np.atleast_1d(omega0[0]), np.atleast_1d(omega0[1]))
    k = pendulum_constants(arrangement, gamma_cl)
    qs, ws = [], []
    integrate(q, w, k, t_max, dt, observer=lambda s, q, w: (qs.append(q.copy()), ws.append(w.copy())))
    return Trajectory(dt * np.arange(len(qs)), np.array(qs), np.array(ws), k)


def energy_audit(traj: Trajectory) -> float:
    """Max relative drift of ``w^2/2 + k cos q`` over the trajectory, per pendulum."""
    k = np.asarray(traj.k, dtype=float)[:, None]
    e = _energy(traj.q, traj.w, k)
    scale = np.abs(k) + 0.5 * traj.w[0] ** 2
    scale = np.where(scale > 0, scale, 1.0)
    return float(np.max(np.abs(e - e[0]) / scale))


def classical_orientation(config: ClassicalConfig) -> OrientationTrace:
    """Ensemble-averaged ``O(t) = <2 - cos th1 - cos th2>`` after a kick at ``t = 0``."""
    ens = initial_ensemble(config)
    q, w = _to_normal(ens.theta1, ens.theta2, ens.omega1, ens.omega2)
    k = pendulum_constants(config.arrangement, config.gamma_cl)
    n = int(round(config.t_max / config.dt))
    values = np.empty(n + 1)
    weights = ens.weights

    def observe(step, q, w):
        # cos th1 + cos th2 = 2 cos(q1/2) cos(q2/2)
        values[step] = 2.0 - 2.0 * float(weights @ (np.cos(0.5 * q[0]) * np.cos(0.5 * q[1])))

    integrate(q, w, k, config.t_max, config.dt, config.energy_tol, observer=observe)
    return OrientationTrace(config.dt * np.arange(n + 1), values, config.echo())
