"""Command-line entry point: ``rotor <subcommand> MAP [options]``.

Exit codes: 0 success, 2 invalid map (parse or validation), 3 numeric failure.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import circle_map as cm
from .complexity_lab import bounds_report, epsilon_m
from .entropy_solver import entropy_curve, max_entropy_direction, solve_direction
from .errors import InvalidMapError, MapFormatError, RotorError
from .genfun import denominator_H, numerator_matrix
from .markov_measure import build_measure, expected_drift, measure_entropy, perron
from .symbolic_graph import build_graph, rotation_interval, structure_checks
from .word_counts import StripSpec, count_B, count_L_all

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3

SUBCOMMANDS = ("validate", "graph", "rotation-interval", "structure", "counts", "genfun",
               "entropy", "entropy-curve", "max-direction", "measure", "complexity")


def fmt(v) -> str:
    """Reals with 12 significant digits; rationals exactly."""
    if isinstance(v, Fraction):
        return cm.format_rational(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.12g}"


@dataclass
class RunConfig:
    subcommand: str
    map_path: str
    strict_expansion: bool = False
    alpha: Optional[Fraction] = None
    r: Optional[int] = None
    n: Optional[int] = None
    m: Optional[int] = None
    k: Optional[int] = None
    samples: Optional[int] = None
    epsilon: Optional[Fraction] = None
    entries: list[tuple[int, int]] = field(default_factory=list)
    out: Optional[str] = None


def write_output(text: str, out: Optional[str]) -> None:
    """Write to ``out`` atomically (temp file + rename), or to stdout."""
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rotor-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _solution_csv(solutions) -> str:
    degenerate = any(s.status != "ok" for s in solutions)
    header = ["alpha", "x0", "y0", "entropy"] + (["flag"] if degenerate else [])
    rows = []
    for s in solutions:
        row = [fmt(s.alpha_true), fmt(s.x0), fmt(s.y0), fmt(s.entropy)]
        if degenerate:
            row.append("" if s.status == "ok" else s.status)
        rows.append(row)
    return _csv(header, rows)


def _load(cfg: RunConfig):
    with open(cfg.map_path, encoding="utf-8") as fh:
        spec = cm.load_map(fh.read())
    report = cm.validate(spec, strict=cfg.strict_expansion)
    return spec, report


def _pipeline(cfg: RunConfig):
    spec, report = _load(cfg)
    if not report.ok:
        raise InvalidMapError(report)
    partition = cm.refine(spec, strict=cfg.strict_expansion)
    return spec, partition, build_graph(partition)


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ValueError(f"{cfg.subcommand} needs --{' --'.join(missing)}")


def run(cfg: RunConfig) -> int:
    """Execute one subcommand; returns the process exit code."""
    try:
        return _dispatch(cfg)
    except (MapFormatError, InvalidMapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except RotorError as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def _dispatch(cfg: RunConfig) -> int:
    if cfg.subcommand == "validate":
        spec, report = _load(cfg)
        text = report.summary() + "\n"
        if report.ok:
            write_output(text, cfg.out)
            return EXIT_OK
        sys.stdout.write(text)
        print("invalid: " + ", ".join(c.code for c in report.failures), file=sys.stderr)
        return EXIT_INVALID

    spec, partition, graph = _pipeline(cfg)
    sub = cfg.subcommand

    if sub == "graph":
        doc = graph.to_dict()
        doc["refinement_depth"] = partition.refinement_depth
        doc["breakpoints"] = [cm.format_rational(b) for b in partition.breakpoints]
        write_output(json.dumps(doc, indent=2) + "\n", cfg.out)

    elif sub == "rotation-interval":
        ri = rotation_interval(graph)
        write_output(_csv(["lo", "hi"], [[fmt(ri.lo), fmt(ri.hi)]]), cfg.out)

    elif sub == "structure":
        write_output(structure_checks(graph).summary() + "\n", cfg.out)

    elif sub == "counts":
        _require(cfg, "n")
        if cfg.alpha is not None:
            _require(cfg, "r")
            strip = StripSpec(cfg.alpha, cfg.r)
            rows = [[str(n), fmt(cfg.alpha), str(cfg.r), str(count_B(graph, n, strip).total)]
                    for n in range(1, cfg.n + 1)]
            write_output(_csv(["n", "alpha", "r", "total"], rows), cfg.out)
        else:
            rows = []
            for n in range(1, cfg.n + 1):
                for m, cmat in count_L_all(graph, n).items():
                    if cfg.m is None or m == cfg.m:
                        rows.append([str(n), str(m), str(cmat.total)])
            write_output(_csv(["n", "m", "total"], rows), cfg.out)

    elif sub == "genfun":
        lines = [f"H = {denominator_H(graph).to_text()}"]
        if cfg.entries:
            N = numerator_matrix(graph)
            for i, j in cfg.entries:
                lines.append(f"N[{i},{j}] = {N[i][j].to_text()}")
        write_output("\n".join(lines) + "\n", cfg.out)

    elif sub == "entropy":
        _require(cfg, "alpha")
        sol = solve_direction(graph, cfg.alpha)
        write_output(_solution_csv([sol]), cfg.out)

    elif sub == "entropy-curve":
        _require(cfg, "samples")
        curve = entropy_curve(graph, cfg.samples)
        write_output(_solution_csv(curve.solutions), cfg.out)
        if any(s.status != "ok" for s in curve.solutions):
            print("warning: some directions are flagged", file=sys.stderr)

    elif sub == "max-direction":
        md = max_entropy_direction(graph)
        write_output(_csv(["alpha_max", "theta_max", "h_top", "lambda"],
                          [[fmt(md.alpha_max), fmt(md.theta_max), fmt(md.h_top), fmt(md.lam)]]), cfg.out)

    elif sub == "measure":
        _require(cfg, "alpha")
        sol = solve_direction(graph, cfg.alpha)
        if sol.status != "ok":
            print(f"numeric failure: direction is {sol.status}", file=sys.stderr)
            return EXIT_NUMERIC
        mu = build_measure(graph, sol)
        pd = perron(sol.x0 * graph.weighted_matrix(sol.y0))
        l_raw, r_raw = pd.raw()
        h = measure_entropy(mu)
        drift = expected_drift(mu, graph)
        lines = ["Pi:"]
        lines += ["  " + " ".join(fmt(v) for v in row) for row in mu.Pi]
        lines.append("q: " + " ".join(fmt(v) for v in mu.q))
        lines.append("l (first component 1): " + " ".join(fmt(v) for v in l_raw))
        lines.append("r (first component 1): " + " ".join(fmt(v) for v in r_raw))
        lines.append("")
        lines.append(_csv(["alpha", "theta", "measure_entropy", "solver_entropy", "difference", "drift"],
                          [[fmt(cfg.alpha), fmt(sol.theta), fmt(h), fmt(sol.entropy),
                            fmt(h - sol.entropy), fmt(drift)]]).rstrip("\n"))
        write_output("\n".join(lines) + "\n", cfg.out)

    elif sub == "complexity":
        _require(cfg, "alpha", "r", "m", "k")
        rows = bounds_report(partition, graph, cfg.alpha, cfg.r, cfg.m, cfg.k, cfg.epsilon)
        write_output(_csv(["T", "lower", "observed", "upper", "rate"],
                          [[str(x.T), str(x.lower), str(x.observed), str(x.upper), fmt(x.rate)]
                           for x in rows]), cfg.out)
        if cfg.epsilon is None:
            print(f"epsilon = epsilon_{cfg.m} = {fmt(epsilon_m(partition, graph, cfg.m))}", file=sys.stderr)
    else:
        raise ValueError(f"unknown subcommand {sub!r}")
    return EXIT_OK


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _entry(text: str) -> tuple[int, int]:
    try:
        i, j = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"entry must be 'i,j': {text!r}") from None
    return i, j


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rotor", description="Directional entropy of Markov circle maps.")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text):
        p = subs.add_parser(name, help=help_text)
        p.add_argument("map_path", metavar="MAP", help="map file (JSON with breakpoints and lift_values)")
        p.add_argument("--strict", dest="strict_expansion", action="store_true",
                       help="require |slope| > 1 on every piece")
        p.add_argument("--out", help="write output here (atomically) instead of stdout")
        return p

    add("validate", "check the map-class conditions")
    add("graph", "print the weighted transition graph as JSON")
    add("rotation-interval", "exact rotation interval")
    add("structure", "primitivity and rank condition")
    p = add("counts", "weighted word counts as CSV")
    p.add_argument("--n", type=int, required=True, help="largest word length")
    p.add_argument("--m", type=int, help="only this weight")
    p.add_argument("--alpha", type=_rational, help="strip slope (switches to strip counts)")
    p.add_argument("--r", type=int, help="strip half-width")
    p = add("genfun", "denominator H(x,y) and numerator entries")
    p.add_argument("--entry", dest="entries", type=_entry, action="append", default=[],
                   help="numerator entry i,j (0-based); repeatable")
    p = add("entropy", "directional entropy for one direction")
    p.add_argument("--alpha", type=_rational, required=True, help="cot(theta) as p/q")
    p = add("entropy-curve", "entropy over the rotation interval")
    p.add_argument("--samples", type=int, required=True)
    add("max-direction", "direction of maximal directional entropy")
    p = add("measure", "Markov measure for one direction")
    p.add_argument("--alpha", type=_rational, required=True)
    p = add("complexity", "separated-set bounds table")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=_rational)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    try:
        return run(cfg)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
