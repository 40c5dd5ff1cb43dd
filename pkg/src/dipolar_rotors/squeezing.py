"""Accumulative squeezing: each pulse is fired at the focal minimum left by the previous one."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .config import RotorPairConfig
from .observables import FocalPoint, FocalTimeError, OrientationTrace, _refine
from .quantum import (
    SpectralEvolution,
    build_bases,
    forbidden_population,
    ground_state,
    kick_and_expand,
)

SEARCH_WINDOW = 2 * np.pi  # free-rotor revival period
SEARCH_DT = 5e-4


@dataclass
class PulseSchedule:
    kick_times: list[float] = field(default_factory=list)
    strengths: list[float] = field(default_factory=list)
    focal: list[FocalPoint] = field(default_factory=list)

    def __post_init__(self):
        t = np.asarray(self.kick_times)
        if t.size and (t[0] != 0.0 or np.any(np.diff(t) <= 0)):
            raise ValueError("kick times must start at 0 and increase strictly")

    @property
    def minima(self) -> np.ndarray:
        return np.array([f.O_min for f in self.focal])

    def rows(self):
        for k, (tk, pk, fp) in enumerate(zip(self.kick_times, self.strengths, self.focal), start=1):
            yield k, tk, pk, fp.t_c, fp.O_min


def squeeze_truncation(config: RotorPairConfig, n_pulses: int) -> RotorPairConfig:
    """Enlarge the Mathieu truncation for the momentum spread of ``n_pulses`` kicks.

    Each kick at P = 10 pushes the occupied levels up by roughly 20-30 per
    coordinate; the capture check in ``expand`` remains the actual guard.
    """
    p = max(config.kick_strength, 1.0)
    levels = max(config.levels, int(96 * p / 10) + int(32 * p / 10) * (n_pulses - 1))
    K = max(config.K, levels // 2 + 16)
    return dataclasses.replace(config, K=K, levels=levels, grid_size=max(config.grid_size, 512))


def _scan_to_minimum(evo: SpectralEvolution, dt: float, window: float):
    """Sample O(t) forward from 0 until the first discrete local minimum."""
    times, values = [0.0, dt], [evo.orientation(0.0), evo.orientation(dt)]
    n_max = int(np.ceil(window / dt))
    for j in range(2, n_max + 1):
        t = j * dt
        times.append(t)
        values.append(evo.orientation(t))
        if values[-2] < values[-3] and values[-2] <= values[-1]:
            fp = _refine(np.array(times), np.array(values), len(values) - 2, evo.orientation)
            return np.array(times), np.array(values), fp
    raise FocalTimeError(f"no local minimum of O(t) within the search window {window:.4g}")


def accumulative_squeeze(
    config: RotorPairConfig,
    n_pulses: int,
    P: float | None = None,
    strengths=None,
    dt: float = SEARCH_DT,
    window: float = SEARCH_WINDOW,
    tail: float = 0.0,
    auto_truncation: bool = True,
) -> tuple[PulseSchedule, OrientationTrace]:
    """Greedy pulse train from the ground state; kick ``k+1`` lands on the minimum after kick ``k``.

    Returns the schedule and the concatenated O(t) trace (absolute times).
    The last interval is scanned to its own minimum, then extended by ``tail``.
    """
    if n_pulses < 1:
        raise ValueError(f"n_pulses must be >= 1, got {n_pulses}")
    if strengths is None:
        strengths = [config.kick_strength if P is None else P] * n_pulses
    strengths = [float(s) for s in strengths]
    if len(strengths) != n_pulses:
        raise ValueError(f"got {len(strengths)} strengths for {n_pulses} pulses")
    if auto_truncation:
        config = squeeze_truncation(dataclasses.replace(config, kick_strength=max(strengths)), n_pulses)
    bases = build_bases(config)
    state = ground_state(config)
    schedule = PulseSchedule()
    all_t, all_o = [], []
    t_kick = 0.0
    for k, strength in enumerate(strengths):
        D = kick_and_expand(state, strength, bases, config.grid_size)
        if forbidden_population(D, bases) > 1e-20:
            raise RuntimeError("kick populated translation-odd products")
        evo = SpectralEvolution(D, bases)
        times, values, fp = _scan_to_minimum(evo, dt, window)
        # the post-kick sample at t=0 duplicates the previous segment's endpoint
        keep = (times < fp.t_c) & ((times > 0) if k else True)
        seg_t = list(times[keep])
        seg_o = list(values[keep])
        if k == n_pulses - 1 and tail > 0:
            extra = fp.t_c + dt * np.arange(0, int(np.ceil(tail / dt)) + 1)
            seg_t += list(extra)
            seg_o += list(evo.orientation_many(extra))
        else:
            seg_t.append(fp.t_c)
            seg_o.append(fp.O_min)
        all_t.extend(t_kick + np.asarray(seg_t))
        all_o.extend(seg_o)
        schedule.kick_times.append(t_kick)
        schedule.strengths.append(strength)
        schedule.focal.append(FocalPoint(t_kick + fp.t_c, fp.O_min))
        state = evo.state(fp.t_c)
        t_kick += fp.t_c
    echo = dict(config.echo(), n_pulses=n_pulses)
    return schedule, OrientationTrace(np.array(all_t), np.array(all_o), echo)
