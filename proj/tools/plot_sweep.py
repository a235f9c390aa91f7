#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Render a sweep.csv produced by `infhbd simulate --sweep-*`.

Usage: plot_sweep.py sweep.csv [column] [out.png]

Plots `column` (default: mean_waste) against fault_ratio, one line per
(k, tp) pair. Needs matplotlib; everything else in the repo is plot-free.
"""

import csv
import sys


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    path = sys.argv[1]
    column = sys.argv[2] if len(sys.argv) > 2 else "mean_waste"
    out = sys.argv[3] if len(sys.argv) > 3 else "sweep.png"

    with open(path) as handle:
        first = handle.readline()
        if not first.startswith("# infhbd-csv v1 sweep"):
            print(f"{path}: not a sweep CSV", file=sys.stderr)
            return 2
        rows = list(csv.DictReader(handle))
    if not rows or column not in rows[0]:
        print(f"{path}: no '{column}' column", file=sys.stderr)
        return 2

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; data summary instead:", file=sys.stderr)
        for row in rows:
            print(row["k"], row["tp"], row["fault_ratio"], row[column])
        return 0

    series = {}
    for row in rows:
        key = f"k={row['k']} tp={row['tp']}"
        series.setdefault(key, []).append(
            (float(row["fault_ratio"]), float(row[column]))
        )
    for key, points in sorted(series.items()):
        points.sort()
        plt.plot([x for x, _ in points], [y for _, y in points],
                 marker="o", label=key)
    plt.xlabel("node fault ratio")
    plt.ylabel(column)
    plt.legend()
    plt.grid(True, alpha=0.3)
    plt.savefig(out, dpi=150, bbox_inches="tight")
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
