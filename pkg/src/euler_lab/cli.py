"""Command-line entry point: euler-lab <scenario> --config <path>."""

from __future__ import annotations

import argparse
import sys

from .config import SCENARIOS, load_config
from .scenarios import run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="euler-lab",
        description="Vortex-particle experiments for axisymmetric flows",
    )
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", required=True,
                        help="path to a flat TOML config file")
    parser.add_argument("--output", default=None,
                        help="override the config's output directory")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for the velocity kernel")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if config.scenario != args.scenario:
        print(f"error: config declares scenario {config.scenario!r}, "
              f"command line says {args.scenario!r}", file=sys.stderr)
        return 2
    if args.output is not None:
        config.output_dir = args.output
    if args.threads is not None:
        import numba
        numba.set_num_threads(max(1, min(args.threads,
                                         numba.config.NUMBA_NUM_THREADS)))
    summary = run_scenario(config)
    print(f"{config.scenario}: wrote {config.output_dir} "
          f"({summary['timings']['wall_seconds']:.1f}s)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
