#!/usr/bin/env python3
"""Run every scenario config under configs/ and print a one-line summary each.

Usage: python scripts/run_scenarios.py [configs ...]
With no arguments, all *.toml files in configs/ are run in name order.
"""

import sys
import time
from pathlib import Path

from euler_lab.config import load_config
from euler_lab.scenarios import run_scenario


def main(argv=None) -> int:
    args = sys.argv[1:] if argv is None else argv
    paths = [Path(p) for p in args] or sorted(
        (Path(__file__).resolve().parent.parent / "configs").glob("*.toml"))
    if not paths:
        print("no config files found", file=sys.stderr)
        return 1
    for path in paths:
        config = load_config(path)
        t0 = time.time()
        summary = run_scenario(config)
        keys = sorted(set(summary) - {"config", "version", "timings"})
        print(f"{config.scenario}: {path.name} -> {config.output_dir} "
              f"({time.time() - t0:.0f}s; summary keys: {', '.join(keys)})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
