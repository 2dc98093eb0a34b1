#!/usr/bin/env python3
"""Plot a CSV written by ``rotor entropy-curve`` (needs matplotlib)."""

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv")
    ap.add_argument("--out", default="entropy_curve.png")
    args = ap.parse_args()

    with open(args.csv, newline="") as fh:
        rows = [r for r in csv.DictReader(fh) if not r.get("flag")]
    alpha = [float(r["alpha"]) for r in rows]
    h = [float(r["entropy"]) for r in rows]

    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(alpha, h, lw=1.5)
    ax.set_xlabel(r"$\alpha = \cot\theta$")
    ax.set_ylabel(r"$H_\theta$")
    ax.set_ylim(bottom=0)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
