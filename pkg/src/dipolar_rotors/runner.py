"""Execute an :class:`ExperimentSpec`: sweeps over arrangement and coupling, file output."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .classical import IntegratorError, classical_orientation
from .config import ConfigError
from .io import ExperimentSpec, write_schedule_csv, write_trace_csv
from .observables import FocalTimeError, density_grid, find_focal_time, kicked_evolution, orientation_trace
from .quantum import TruncationError, ground_state
from .squeezing import accumulative_squeeze

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT, EXIT_IO = 0, 1, 2, 3


class InvariantError(RuntimeError):
    pass


def _tag(x: float) -> str:
    return f"{x:g}".replace(".", "p")


def _quantum_job(spec, arr, gamma, out: Path):
    cfg = spec.quantum_config(arr, gamma)
    files, lines = [], []
    for t_max, dt in spec.windows:
        trace = orientation_trace(cfg, t_max, dt)
        if trace.values.min() < 0 or trace.values.max() > 4:
            raise InvariantError(f"O(t) left [0, 4]: range [{trace.values.min()}, {trace.values.max()}]")
        files.append(write_trace_csv(out / f"quantum_{arr}_g{_tag(gamma)}_t{_tag(t_max)}.csv", trace,
                                     {"t_max": t_max, "dt": dt}))
        fp = find_focal_time(trace)
        lines.append(f"quantum {arr} gamma={gamma:g} window={t_max:g}: t_c={fp.t_c:.5g} O_min={fp.O_min:.5g}")
    return files, lines


def _classical_job(spec, arr, gamma, out: Path):
    files, lines = [], []
    for t_max, dt in spec.windows:
        cfg = spec.classical_config(arr, gamma, t_max, dt)
        trace = classical_orientation(cfg)
        files.append(write_trace_csv(out / f"classical_{arr}_g{_tag(gamma)}.csv", trace, value_name="O_classical"))
        fp = find_focal_time(trace)
        lines.append(f"classical {arr} gamma_cl={gamma:g}: t_c={fp.t_c:.5g} O_min={fp.O_min:.5g}")
    return files, lines


def _density_job(spec, arr, gamma, out: Path):
    cfg = spec.quantum_config(arr, gamma)
    files, lines = [], []
    evo = None
    for t in spec.times:
        if t == "focal":
            evo = evo or kicked_evolution(cfg)
            tc = find_focal_time(cfg).t_c
            state, label, when = evo.state(tc, cfg.grid_size), "focal", tc
        elif float(t) == 0.0:
            state, label, when = ground_state(cfg), "t0", 0.0
        else:
            evo = evo or kicked_evolution(cfg)
            state, label, when = evo.state(float(t), cfg.grid_size), f"t{_tag(float(t))}", float(t)
        header = {**cfg.echo(), "time": when}
        files.append(density_grid(state, out / f"density_{arr}_g{_tag(gamma)}_{label}.csv", cfg.grid_size,
                                  svg=spec.svg, header=header))
        lines.append(f"density {arr} gamma={gamma:g} t={when:.5g}")
    return files, lines


def _squeeze_job(spec, arr, gamma, out: Path):
    cfg = spec.quantum_config(arr, gamma)
    schedule, trace = accumulative_squeeze(cfg, spec.n_pulses)
    stem = f"squeeze_{arr}_g{_tag(gamma)}_n{spec.n_pulses}"
    files = [
        write_trace_csv(out / f"{stem}.csv", trace),
        write_schedule_csv(out / f"{stem}_schedule.csv", schedule, trace.config),
    ]
    last = schedule.focal[-1]
    return files, [f"squeeze {arr} gamma={gamma:g}: t_c={last.t_c:.5g} O_min={last.O_min:.5g}"]


_JOBS = {"quantum": _quantum_job, "classical": _classical_job, "density": _density_job, "squeeze": _squeeze_job}


def run(spec: ExperimentSpec, echo=print) -> tuple[int, list[Path]]:
    """Run every (arrangement, gamma) job of ``spec``; returns ``(exit status, files)``."""
    try:
        if spec.mode == "validate":
            from .checks import run_checks

            results = run_checks()
            for r in results:
                echo(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}")
            return (EXIT_OK if all(r.ok for r in results) else EXIT_INVARIANT), []
        out = Path(spec.out)
        job = _JOBS[spec.mode]
        tasks = [(a, g) for a in spec.arrangements for g in spec.gammas]
        with ThreadPoolExecutor(max_workers=spec.jobs) as pool:
            results = list(pool.map(lambda ag: job(spec, ag[0], ag[1], out), tasks))
        files = []
        for f, lines in results:
            files += f
            for line in lines:
                echo(line)
        return EXIT_OK, files
    except ConfigError as exc:
        echo(f"config error: {exc}")
        return EXIT_CONFIG, []
    except (TruncationError, FocalTimeError, IntegratorError, InvariantError) as exc:
        echo(f"invariant violation: {exc}")
        return EXIT_INVARIANT, []
    except OSError as exc:
        echo(f"I/O error: {exc}")
        return EXIT_IO, []
