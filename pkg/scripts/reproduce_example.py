#!/usr/bin/env python3
"""Print the worked numbers for the three-piece map: graph, H, interval, max direction, h(1/4)."""

import argparse
import math
from fractions import Fraction
from pathlib import Path

from rotor.circle_map import load_map, refine
from rotor.entropy_solver import max_entropy_direction, solve_direction
from rotor.genfun import denominator_H, numerator_matrix
from rotor.markov_measure import perron
from rotor.symbolic_graph import build_graph, rotation_interval

DEFAULT_MAP = Path(__file__).resolve().parent.parent / "maps" / "three_piece.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("map", nargs="?", default=str(DEFAULT_MAP))
    ap.add_argument("--alpha", type=Fraction, default=Fraction(1, 4))
    args = ap.parse_args()

    graph = build_graph(refine(load_map(Path(args.map).read_text())))
    for s, layer in zip(range(graph.s0, graph.s0 + graph.rho + 1), graph.layers):
        print(f"A_{s} =", layer.tolist())
    print("H =", denominator_H(graph).to_text())
    N = numerator_matrix(graph)
    for i in range(graph.p):
        print("  ", [N[i][j].to_text() for j in range(graph.p)])
    ri = rotation_interval(graph)
    print(f"rotation interval = [{ri.lo}, {ri.hi}]")

    l, r = perron(graph.A).raw()
    md = max_entropy_direction(graph)
    print(f"lambda = {md.lam:.15f}   h_top = {md.h_top:.15f}")
    print("l =", l.round(15).tolist())
    print("r =", r.round(15).tolist())
    print(f"alpha_max = {md.alpha_max:.16f}   theta_max = {md.theta_max:.12f}")

    sol = solve_direction(graph, args.alpha)
    print(f"alpha = {args.alpha}: x0 = {sol.x0:.12f}, y0 = {sol.y0:.12f}, h = {sol.entropy:.12f}")
    if args.alpha == Fraction(1, 4):
        print(f"  closed form 5/4 ln(golden ratio) = {1.25 * math.log((1 + 5 ** 0.5) / 2):.12f}")


if __name__ == "__main__":
    main()
