"""Command-line entry point.

    regalpha run|sweep-alpha|sweep-nu|equilibrium --config cfg [--out DIR]
             [--preset NAME] [--n N] [--dt DT] [--tend T] [--seed S]

Flags override config-file values.  Exit codes: 0 success, 1 bad
configuration or I/O failure, 2 numerical blow-up.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, RunConfig, apply_overrides, load_config
from .harness import cmd_equilibrium, cmd_run, cmd_sweep_alpha, cmd_sweep_nu
from .snapshots import SnapshotError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regalpha",
        description="Pseudo-spectral two-phase flow simulator on the periodic torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("run", "single simulation with CSV diagnostics and snapshots"),
        ("sweep-alpha", "filter-length limit study against NSE-AC"),
        ("sweep-nu", "vanishing-viscosity limit study"),
        ("equilibrium", "long-horizon relaxation run with decay-rate fit"),
    ):
        cmd = sub.add_parser(name, help=help_)
        cmd.add_argument("--config", required=True, help="key = value config file")
        cmd.add_argument("--out", help="output directory (overrides 'outdir')")
        cmd.add_argument("--preset", help="model preset name")
        cmd.add_argument("--n", type=int, help="grid modes per dimension")
        cmd.add_argument("--dt", type=float, help="time step")
        cmd.add_argument("--tend", type=float, help="final time")
        cmd.add_argument("--seed", type=int, help="random seed for data and forcing")
        if name == "sweep-alpha":
            cmd.add_argument("--alphas", help="comma-separated descending list")
        if name == "sweep-nu":
            cmd.add_argument("--nus", help="comma-separated descending list ending at 0")
    return parser


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    apply_overrides(
        cfg,
        outdir=args.out,
        preset=args.preset,
        n=args.n,
        dt=args.dt,
        t_end=args.tend,
        seed=args.seed,
    )
    if getattr(args, "alphas", None):
        cfg.alphas = [float(t) for t in args.alphas.split(",")]
    if getattr(args, "nus", None):
        cfg.nus = [float(t) for t in args.nus.split(",")]
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        if args.command == "run":
            return cmd_run(cfg)
        if args.command == "sweep-alpha":
            return cmd_sweep_alpha(cfg)[0]
        if args.command == "sweep-nu":
            return cmd_sweep_nu(cfg)[0]
        return cmd_equilibrium(cfg)[0]
    except (ConfigError, SnapshotError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
