#!/usr/bin/env python3
"""Sampled mirror-cascade statistics at publication scale.

Runs the two headline configurations: a single detector on one of 100
beams (clicks in 0.5% of the runs) and a 50-detector measurement undone
by an equal counter-battery (half of the runs survive both).
"""

import argparse
import sys

from partial_eraser.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", default=1_000_000, type=int)
    parser.add_argument("--seed", default=606, type=int)
    args = parser.parse_args()

    common = ["--trials", str(args.trials), "--seed", str(args.seed)]
    code = cli_main(["cascade-demo", "--detectors", "1", *common])
    if code != 0:
        return code
    return cli_main(["cascade-demo", "--detectors", "50", "--erase", *common])


if __name__ == "__main__":
    sys.exit(main())
