#!/usr/bin/env python3
"""Emit the four analytic chart CSVs into an output directory."""

import argparse
import pathlib
import sys

from partial_eraser.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="charts", type=pathlib.Path)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    jobs = [
        ("angle_vs_alpha", ["--min", "0", "--max", "1", "--steps", "101"]),
        ("uncertainty_vs_alpha", ["--min", "0", "--max", "1", "--steps", "101"]),
        ("epr_parts_vs_alpha", ["--min", "0", "--max", "1", "--steps", "101"]),
        (
            "inequality_deltas_vs_rho",
            ["--min", "1", "--max", "20", "--steps", "200", "--scale", "log"],
        ),
    ]
    for chart_id, grid in jobs:
        out = args.out_dir / f"{chart_id}.csv"
        code = cli_main(["chart", chart_id, *grid, "--output", str(out)])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
