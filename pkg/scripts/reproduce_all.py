#!/usr/bin/env python3
"""Regenerate every reference artifact into one directory.

Writes table1.csv, figure1.csv and figure2.csv via the CLI entry points and
then runs the seeded statistical soundness suite.  Exits nonzero if any step
fails, so it doubles as a smoke test:

    python3 scripts/reproduce_all.py --out out/
"""

import argparse
import sys

from mcmc_certify import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out", help="output directory (default: out/)")
    parser.add_argument(
        "--replications",
        type=int,
        default=100_000,
        help="replications for the statistical suite (default: 100000)",
    )
    args = parser.parse_args()

    for target in ("table1", "figure1", "figure2"):
        code = cli.main(["reproduce", "--target", target, "--out", args.out])
        if code != 0:
            print(f"reproduce --target {target} failed with exit code {code}", file=sys.stderr)
            return code

    code = cli.main(["simulate-check", "--replications", str(args.replications)])
    if code != 0:
        print("statistical soundness suite reported failures", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
