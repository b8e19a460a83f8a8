#!/usr/bin/env python3
"""Render the figure CSVs produced by `mcmc-certify reproduce`.

matplotlib is intentionally not a package dependency; the CSVs are the
deliverable and any plotter will do.  The essence is two lines per curve:

    rows = [r for r in csv.DictReader(open("out/figure1.csv")) if r["kind"] == label]
    plt.loglog([int(r["N"]) for r in rows], [float(r["value"]) for r in rows], label=label)

This script just loops that over every label in one or more CSV files.

    python3 scripts/plot_figures.py out/figure1.csv out/figure2.csv
"""

import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("files", nargs="+", help="figure CSV files to render")
    parser.add_argument("--save", action="store_true", help="write PNGs next to the CSVs")
    args = parser.parse_args()

    try:
        import matplotlib

        if args.save:
            matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print(
            "matplotlib is not installed (it is not a dependency); "
            "run `pip install matplotlib` or use any CSV plotter.",
            file=sys.stderr,
        )
        return 1

    for path in map(Path, args.files):
        curves: dict[str, list[tuple[int, float]]] = defaultdict(list)
        with path.open() as handle:
            for row in csv.DictReader(handle):
                curves[row["kind"]].append((int(row["N"]), float(row["value"])))

        fig, ax = plt.subplots(figsize=(7, 5))
        for label, points in sorted(curves.items()):
            points.sort()
            ax.loglog([N for N, _ in points], [v for _, v in points], label=label)
        ax.set_xlabel("budget N")
        ax.set_ylabel("worst-case error bound")
        ax.set_title(path.stem)
        ax.legend()
        ax.grid(True, which="both", alpha=0.3)
        if args.save:
            out = path.with_suffix(".png")
            fig.savefig(out, dpi=150, bbox_inches="tight")
            print(f"wrote {out}")

    if not args.save:
        plt.show()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
