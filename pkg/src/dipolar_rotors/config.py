"""Rotor-pair configuration and the coupling constants of the two arrangements.

Units: energy in the rotational constant ``E_K = hbar^2 / 2I``, time in
``hbar / E_K``.  The dipole moment, field envelope, separation and dielectric
constant enter only through ``gamma = E_D / E_K`` and the kick strength ``P``
(in units of ``hbar``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple


class Arrangement(str, enum.Enum):
    A = "A"  # coplanar rotors
    B = "B"  # coaxial rotors

    @classmethod
    def parse(cls, value) -> "Arrangement":
        if isinstance(value, cls):
            return value
        text = str(value).strip().upper()
        if text in ("A", "COPLANAR"):
            return cls.A
        if text in ("B", "COAXIAL"):
            return cls.B
        raise ValueError(f"unknown arrangement {value!r}; expected 'A' or 'B'")


class CouplingConstants(NamedTuple):
    """``W = gamma * [c_xi cos 2(xi + xi0) + c_eta cos 2(eta + eta0)]``."""

    c_xi: float
    c_eta: float
    xi0: float
    eta0: float


COUPLING = {
    Arrangement.A: CouplingConstants(1.5, 0.5, 0.0, math.pi / 2),
    Arrangement.B: CouplingConstants(0.0, 1.0, 0.0, 0.0),
}


class ConfigError(ValueError):
    """Out-of-range or inconsistent configuration value."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def default_bessel_cutoff(P: float) -> int:
    return int(math.ceil(2 * P)) + 20


@dataclass(frozen=True)
class RotorPairConfig:
    """Physical and numerical parameters of one quantum run.

    ``levels`` Mathieu levels are kept per coordinate out of the ``4(K+1)``
    available; the kick is evaluated on a ``grid_size x grid_size`` grid.
    ``bessel_cutoff=None`` selects ``ceil(2P) + 20``.
    """

    arrangement: Arrangement = Arrangement.A
    gamma: float = 0.0
    kick_strength: float = 10.0
    K: int = 48
    levels: int = 96
    bessel_cutoff: int | None = None
    grid_size: int = 256
    _resolved_cutoff: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "arrangement", Arrangement.parse(self.arrangement))
        if not (self.gamma >= 0 and math.isfinite(self.gamma)):
            raise ConfigError("gamma", f"must be a finite number >= 0, got {self.gamma}")
        if not (self.kick_strength >= 0 and math.isfinite(self.kick_strength)):
            raise ConfigError("kick_strength", f"must be a finite number >= 0, got {self.kick_strength}")
        if self.K < 8:
            raise ConfigError("K", f"must be >= 8, got {self.K}")
        if not 1 <= self.levels <= 2 * self.K:
            raise ConfigError("levels", f"must lie in [1, 2K={2 * self.K}], got {self.levels}")
        n = self.grid_size
        if n < 128 or n & (n - 1):
            raise ConfigError("grid_size", f"must be a power of two >= 128, got {n}")
        cutoff = default_bessel_cutoff(self.kick_strength) if self.bessel_cutoff is None else int(self.bessel_cutoff)
        if cutoff < default_bessel_cutoff(self.kick_strength):
            raise ConfigError(
                "bessel_cutoff",
                f"must be >= ceil(2P)+20 = {default_bessel_cutoff(self.kick_strength)}, got {cutoff}",
            )
        object.__setattr__(self, "_resolved_cutoff", cutoff)

    @property
    def coupling(self) -> CouplingConstants:
        return COUPLING[self.arrangement]

    @property
    def n_c(self) -> int:
        return self._resolved_cutoff

    @property
    def v_xi(self) -> float:
        return self.coupling.c_xi * self.gamma

    @property
    def v_eta(self) -> float:
        return self.coupling.c_eta * self.gamma

    def refined(self, factor: int = 2) -> "RotorPairConfig":
        """Same physics with every truncation control multiplied by ``factor``."""
        return RotorPairConfig(
            arrangement=self.arrangement,
            gamma=self.gamma,
            kick_strength=self.kick_strength,
            K=self.K * factor,
            levels=self.levels * factor,
            bessel_cutoff=self.n_c * factor,
            grid_size=self.grid_size * factor,
        )

    def echo(self) -> dict:
        return {
            "arrangement": self.arrangement.value,
            "gamma": self.gamma,
            "kick_strength": self.kick_strength,
            "K": self.K,
            "levels": self.levels,
            "bessel_cutoff": self.n_c,
            "grid_size": self.grid_size,
        }
