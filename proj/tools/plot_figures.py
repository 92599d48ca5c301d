#!/usr/bin/env python3
"""Plot CSV output of `treepoly figure NAME --out DIR` (dev tool).

Axes are the Comb_5 and Gir_5 coordinates; Bal_5 is the dropped one.
"""

import argparse
import csv
from collections import defaultdict
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def rows(path):
    if not path.exists():
        return []
    with path.open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def xy(row):
    return float(Fraction(row["x"])), float(Fraction(row["y"]))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("directory", type=Path)
    parser.add_argument("--output", type=Path, help="image path (default: DIR/figure.png)")
    args = parser.parse_args()
    d = args.directory

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot([1, 0, 0, 1], [0, 1, 0, 0], color="0.8", lw=0.8)

    for source, pts in group(rows(d / "points.csv"), "source").items():
        ax.scatter(*zip(*map(xy, pts)), s=10, label=source)
    for m, cycle in group(rows(d / "hull.csv"), "m").items():
        pts = [xy(r) for r in sorted(cycle, key=lambda r: int(r["order"]))]
        ax.fill(*zip(*pts), alpha=0.15, label=f"hull m={m}")
    beta = rows(d / "beta.csv")
    if beta:
        ax.plot(*zip(*map(xy, beta)), "k.-", lw=1, label="beta curve")
    for skeleton, pts in group(rows(d / "multinomial.csv"), "skeleton").items():
        ax.scatter(*zip(*map(xy, pts)), s=4, marker="x", label=f"multinomial {skeleton}")

    ax.set_xlabel("Comb_5")
    ax.set_ylabel("Gir_5")
    ax.set_aspect("equal")
    ax.legend(fontsize="small")
    out = args.output or d / "figure.png"
    fig.savefig(out, dpi=150, bbox_inches="tight")
    print(out)


def group(items, key):
    out = defaultdict(list)
    for r in items:
        out[r[key]].append(r)
    return out


if __name__ == "__main__":
    main()
