"""Self-describing CSV / SVG output and the flat key=value experiment configuration."""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .config import Arrangement, ConfigError

OUT_ENV = "DIPOLAR_ROTORS_OUT"

MODES = ("quantum", "classical", "density", "squeeze", "validate")
_MODE_ALIASES = {"quantum-trace": "quantum", "classical-trace": "classical"}


# --- writers -------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _header_lines(header: dict) -> list[str]:
    lines = [f"# dipolar_rotors {__version__}"]
    lines += [f"# {k} = {_fmt(v)}" for k, v in header.items()]
    return lines


def _write(path, lines: list[str]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def write_columns_csv(path, columns: dict, header: dict | None = None) -> Path:
    names = list(columns)
    data = [np.asarray(columns[n]) for n in names]
    lines = _header_lines(header or {}) + [",".join(names)]
    lines += [",".join(_fmt(c[i]) for c in data) for i in range(len(data[0]))]
    return _write(path, lines)


def write_trace_csv(path, trace, header: dict | None = None, value_name: str = "O") -> Path:
    return write_columns_csv(path, {"t": trace.times, value_name: trace.values}, {**trace.config, **(header or {})})


def write_schedule_csv(path, schedule, header: dict | None = None) -> Path:
    rows = list(schedule.rows())
    cols = {name: [r[i] for r in rows] for i, name in enumerate(("k", "t_k", "P_k", "t_c_k", "O_min_k"))}
    return write_columns_csv(path, cols, header)


def write_matrix_csv(path, matrix: np.ndarray, header: dict | None = None) -> Path:
    lines = _header_lines(header or {})
    lines += [",".join(repr(float(x)) for x in row) for row in np.asarray(matrix)]
    return _write(path, lines)


def write_state_csv(path, state, header: dict | None = None, n: int | None = None) -> Path:
    """``|psi|^2`` on the (xi, eta) grid; row = xi index."""
    return write_matrix_csv(path, np.abs(state.grid(n)) ** 2, header)


def read_matrix_csv(path) -> tuple[dict, np.ndarray]:
    header, rows = {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            if "=" in line:
                k, v = line[1:].split("=", 1)
                header[k.strip()] = v.strip()
        elif line.strip():
            rows.append([float(x) for x in line.split(",")])
    return header, np.array(rows)


def write_svg_heatmap(path, matrix: np.ndarray, max_cells: int = 128) -> Path:
    """Linear grayscale heatmap, white = maximum; rows drawn top to bottom."""
    m = np.asarray(matrix, dtype=float)
    while m.shape[0] > max_cells and m.shape[0] % 2 == 0:
        m = m.reshape(m.shape[0] // 2, 2, m.shape[1]).mean(axis=1)
    while m.shape[1] > max_cells and m.shape[1] % 2 == 0:
        m = m.reshape(m.shape[0], m.shape[1] // 2, 2).mean(axis=2)
    lo, hi = float(m.min()), float(m.max())
    g = np.zeros_like(m) if hi == lo else (m - lo) / (hi - lo)
    levels = np.rint(255 * g).astype(int)
    rows, cols = m.shape
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{4 * cols}" height="{4 * rows}" '
        f'viewBox="0 0 {cols} {rows}" shape-rendering="crispEdges">'
    ]
    for i in range(rows):
        for j in range(cols):
            v = levels[i, j]
            lines.append(f'<rect x="{j}" y="{i}" width="1" height="1" fill="rgb({v},{v},{v})"/>')
    lines.append("</svg>")
    return _write(path, lines)


# --- configuration ---------------------------------------------------------------


def _default_out() -> str:
    return os.environ.get(OUT_ENV, "out")


@dataclass(frozen=True)
class ExperimentSpec:
    """One CLI run.  ``gammas`` / ``arrangements`` describe sweeps (each a tuple).

    ``gammas`` holds the quantum ``gamma`` or, in classical mode, ``gamma_cl``.
    ``windows`` lists ``(t_max, dt)`` pairs for trace modes.  ``times`` lists the
    density snapshot times; the entry ``"focal"`` means the focal time.
    """

    mode: str = "quantum"
    arrangements: tuple = ("A",)
    gammas: tuple = (0.0,)
    kick_strength: float = 10.0
    n_pulses: int = 1
    grid_size: int = 256
    levels: int = 96
    K: int = 48
    bessel_cutoff: int | None = None
    windows: tuple = ()
    ensemble_size: int = 256
    times: tuple = ("0", "focal")
    out: str = ""
    svg: bool = False
    jobs: int = 1

    def __post_init__(self):
        mode = _MODE_ALIASES.get(self.mode, self.mode)
        if mode not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}, got {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        try:
            arrs = tuple(Arrangement.parse(a).value for a in self.arrangements)
        except ValueError as exc:
            raise ConfigError("arrangement", str(exc)) from None
        object.__setattr__(self, "arrangements", arrs)
        for g in self.gammas:
            if not (g >= 0 and math.isfinite(g)):
                raise ConfigError("gamma", f"must be a finite number >= 0, got {g}")
        if not self.kick_strength >= 0:
            raise ConfigError("kick_strength", f"must be >= 0, got {self.kick_strength}")
        if self.n_pulses < 1:
            raise ConfigError("n_pulses", f"must be >= 1, got {self.n_pulses}")
        if self.jobs < 1:
            raise ConfigError("jobs", f"must be >= 1, got {self.jobs}")
        if not self.windows:
            default = ((4.0, 1e-3),) if mode == "classical" else ((0.15, 5e-4),)
            object.__setattr__(self, "windows", default)
        for t_max, dt in self.windows:
            if not dt > 0:
                raise ConfigError("dt", f"must be > 0, got {dt}")
            if not t_max > 0:
                raise ConfigError("t_max", f"must be > 0, got {t_max}")
        for t in self.times:
            if t != "focal":
                try:
                    if float(t) < 0:
                        raise ValueError
                except ValueError:
                    raise ConfigError("times", f"entries must be 'focal' or numbers >= 0, got {t!r}") from None
        if not self.out:
            object.__setattr__(self, "out", _default_out())
        # surface numerical-control range errors at parse time
        if mode in ("quantum", "density", "squeeze"):
            for g in self.gammas:
                self.quantum_config(self.arrangements[0], g)
        if mode == "classical":
            self.classical_config(self.arrangements[0], self.gammas[0], *self.windows[0])

    def quantum_config(self, arrangement, gamma):
        from .config import RotorPairConfig

        return RotorPairConfig(
            arrangement=arrangement,
            gamma=gamma,
            kick_strength=self.kick_strength,
            K=self.K,
            levels=self.levels,
            bessel_cutoff=self.bessel_cutoff,
            grid_size=self.grid_size,
        )

    def classical_config(self, arrangement, gamma_cl, t_max, dt):
        from .classical import ClassicalConfig

        return ClassicalConfig(arrangement=arrangement, gamma_cl=gamma_cl, M=self.ensemble_size, dt=dt, t_max=t_max)

    def echo(self) -> str:
        """Configuration text that parses back to an identical spec."""
        lines = [
            f"mode = {self.mode}",
            f"arrangement = {','.join(self.arrangements)}",
            f"gamma = {','.join(repr(float(g)) for g in self.gammas)}",
            f"kick_strength = {self.kick_strength!r}",
            f"n_pulses = {self.n_pulses}",
            f"grid_size = {self.grid_size}",
            f"levels = {self.levels}",
            f"K = {self.K}",
            f"bessel_cutoff = {'auto' if self.bessel_cutoff is None else self.bessel_cutoff}",
            f"windows = {','.join(f'{t!r}:{d!r}' for t, d in self.windows)}",
            f"ensemble_size = {self.ensemble_size}",
            f"times = {','.join(self.times)}",
            f"out = {self.out}",
            f"svg = {str(self.svg).lower()}",
            f"jobs = {self.jobs}",
        ]
        return "\n".join(lines) + "\n"


PRESETS = {
    "fig2a": dict(mode="quantum", arrangements=("A",), gammas=(0.0, 1.0, 3.0, 30.0), kick_strength=10.0,
                  windows=((7.0, 2e-3), (0.15, 5e-4))),
    "fig2b": dict(mode="quantum", arrangements=("B",), gammas=(0.0, 1.0, 3.0, 30.0), kick_strength=10.0,
                  windows=((7.0, 2e-3), (0.15, 5e-4))),
    "fig3": dict(mode="classical", arrangements=("A", "B"), gammas=(0.0, 15.0, 30.0, 45.0), windows=((4.0, 1e-3),)),
    "fig4": dict(mode="density", arrangements=("A",), gammas=(30.0, 1.0), kick_strength=10.0, times=("0", "focal")),
    "fig5": dict(mode="squeeze", arrangements=("A", "B"), gammas=(0.0, 1.0, 3.0, 5.0, 10.0, 30.0), kick_strength=10.0,
                 n_pulses=7),
}


def _split(v: str) -> list[str]:
    return [x.strip() for x in v.split(",") if x.strip()]


def _as_int(key, v):
    try:
        return int(v)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {v!r}") from None


def _as_float(key, v):
    try:
        return float(v)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {v!r}") from None


def _as_bool(key, v):
    t = v.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(key, f"expected a boolean, got {v!r}")


def _convert(key: str, value: str) -> dict:
    if key == "mode":
        return {"mode": value.strip()}
    if key == "arrangement":
        return {"arrangements": tuple(_split(value))}
    if key == "gamma":
        return {"gammas": tuple(_as_float(key, x) for x in _split(value))}
    if key in ("kick_strength",):
        return {key: _as_float(key, value)}
    if key in ("n_pulses", "grid_size", "levels", "K", "ensemble_size", "jobs"):
        return {key: _as_int(key, value)}
    if key == "bessel_cutoff":
        return {key: None if value.strip() == "auto" else _as_int(key, value)}
    if key == "windows":
        pairs = []
        for item in _split(value):
            t, sep, d = item.partition(":")
            if not sep:
                raise ConfigError(key, f"expected t_max:dt pairs, got {item!r}")
            pairs.append((_as_float(key, t), _as_float(key, d)))
        return {"windows": tuple(pairs)}
    if key == "times":
        return {"times": tuple(_split(value))}
    if key == "out":
        return {"out": value.strip()}
    if key == "svg":
        return {"svg": _as_bool(key, value)}
    raise ConfigError(key, "unknown key")


KEYS = ("mode", "arrangement", "gamma", "kick_strength", "n_pulses", "grid_size", "levels", "K", "bessel_cutoff",
        "t_max", "dt", "windows", "ensemble_size", "times", "out", "svg", "jobs", "preset")


def parse_config(text: str = "", overrides: dict | None = None) -> ExperimentSpec:
    """Parse ``key = value`` lines (``#`` comments allowed); ``overrides`` win over the text.

    ``preset = <name>`` loads a named preset first; ``t_max``/``dt``
    set a single trace window.
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key = key.strip()
        if key not in KEYS:
            raise ConfigError(key, f"unknown key (line {lineno})")
        raw[key] = value.strip()
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        raw[key] = str(value)

    fields: dict = {}
    if "preset" in raw:
        name = raw.pop("preset")
        if name not in PRESETS:
            raise ConfigError("preset", f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
        fields.update(PRESETS[name])
    t_max = raw.pop("t_max", None)
    dt = raw.pop("dt", None)
    for key, value in raw.items():
        fields.update(_convert(key, value))
    if t_max is not None or dt is not None:
        mode = _MODE_ALIASES.get(fields.get("mode", "quantum"), fields.get("mode", "quantum"))
        base_t, base_dt = (4.0, 1e-3) if mode == "classical" else (0.15, 5e-4)
        fields["windows"] = ((
            _as_float("t_max", t_max) if t_max is not None else base_t,
            _as_float("dt", dt) if dt is not None else base_dt,
        ),)
    return ExperimentSpec(**fields)


def replace(spec: ExperimentSpec, **changes) -> ExperimentSpec:
    return dataclasses.replace(spec, **changes)
