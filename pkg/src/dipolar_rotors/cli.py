"""Command line: ``dipolar-rotors {quantum,classical,density,squeeze,validate,preset} ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError
from .io import OUT_ENV, PRESETS, parse_config
from .runner import EXIT_CONFIG, EXIT_IO, run

_FLAGS = [
    ("--arrangement", "arrangement", "A or B, comma-separated for a sweep (default A)"),
    ("--gamma", "gamma", "coupling, comma-separated for a sweep; gamma_cl in classical mode (default 0)"),
    ("--kick-strength", "kick_strength", "kick strength P in units of hbar (default 10)"),
    ("--n-pulses", "n_pulses", "pulses for squeeze mode (default 1)"),
    ("--grid-size", "grid_size", "grid points per angle, power of two >= 128 (default 256)"),
    ("--levels", "levels", "Mathieu levels per coordinate, <= 2K (default 96)"),
    ("--K", "K", "Fourier truncation per Mathieu class (default 48)"),
    ("--bessel-cutoff", "bessel_cutoff", "Bessel series cutoff n_c (default ceil(2P)+20)"),
    ("--t-max", "t_max", "trace window length (default 0.15 quantum, 4 classical)"),
    ("--dt", "dt", "trace sampling step (default 5e-4 quantum, 1e-3 classical)"),
    ("--ensemble-size", "ensemble_size", "classical grid size M per angle (default 256)"),
    ("--times", "times", "density snapshot times, numbers or 'focal' (default 0,focal)"),
    ("--jobs", "jobs", "concurrent sweep jobs (default 1)"),
    ("--out", "out", f"output directory (default ${OUT_ENV} or ./out)"),
]


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value configuration file; flags override it")
    for flag, dest, helptext in _FLAGS:
        common.add_argument(flag, dest=dest, default=None, help=helptext)
    common.add_argument("--svg", action="store_const", const="true", default=None, help="also write SVG heatmaps")

    parser = argparse.ArgumentParser(prog="dipolar-rotors", description="Kicked dipole-coupled planar rotor pairs.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("quantum", "orientation factor after a single kick"),
        ("classical", "classical ensemble orientation factor"),
        ("density", "probability-density snapshots in (theta1, theta2)"),
        ("squeeze", "accumulative squeezing pulse train"),
        ("validate", "run the invariant self-check"),
    ]:
        sub.add_parser(name, parents=[common], help=helptext)
    p = sub.add_parser("preset", parents=[common], help="run a named parameter sweep")
    p.add_argument("name", choices=sorted(PRESETS))
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    text = ""
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            print(f"I/O error: cannot read {args.config}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_IO
    overrides = {dest: getattr(args, dest) for _, dest, _ in _FLAGS}
    overrides["svg"] = args.svg
    if args.command == "preset":
        overrides["preset"] = args.name
    else:
        overrides["mode"] = args.command
    try:
        spec = parse_config(text, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status, _ = run(spec)
    return status


if __name__ == "__main__":
    sys.exit(main())
