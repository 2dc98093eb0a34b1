"""Piecewise affine Markov maps of the circle, described by their lift.

A map is given by breakpoints ``0 = d_0 < ... < d_p = 1`` and the lift values
``F(d_0), ..., F(d_p)``; the lift is affine between consecutive breakpoints and
extended to the real line by ``F(x + 1) = F(x) + 1``.  Everything here is exact
``fractions.Fraction`` arithmetic.
"""

from __future__ import annotations

import json
import math
import re
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    InvalidMapError,
    MapFormatError,
    MissingUnitEndpoint,
    RefinementDiverged,
)

REFINEMENT_DEPTH_CAP = 64
# Hard ceiling on refined partition size; reaching it means depth growth is hopeless.
REFINEMENT_SIZE_CAP = 200_000

_RATIONAL = re.compile(r"^(-?\d+)(?:/(-?\d+))?$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction, insisting on lowest terms."""
    if isinstance(text, bool):
        raise MapFormatError(f"expected a rational string, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise MapFormatError(f"expected a rational string, got {text!r}")
    m = _RATIONAL.match(text.strip())
    if m is None:
        raise MapFormatError(f"not a rational: {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den <= 0:
        raise MapFormatError(f"denominator must be positive: {text!r}")
    if math.gcd(num, den) != 1:
        raise MapFormatError(f"rational not in lowest terms: {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def frac_part(q: Fraction) -> Fraction:
    return q - math.floor(q)


@dataclass(frozen=True)
class CircleMapSpec:
    breakpoints: tuple[Fraction, ...]
    lift_values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(Fraction(b) for b in self.breakpoints))
        object.__setattr__(self, "lift_values", tuple(Fraction(v) for v in self.lift_values))

    @property
    def p(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        d, F = self.breakpoints, self.lift_values
        return tuple((F[i + 1] - F[i]) / (d[i + 1] - d[i]) for i in range(self.p))

    def piece_index(self, u: Fraction) -> int:
        """Index i with d_i <= u < d_{i+1}, for u in [0, 1)."""
        return bisect_right(self.breakpoints, u, 0, self.p) - 1

    def lift(self, x) -> Fraction:
        x = Fraction(x)
        k = math.floor(x)
        u = x - k
        i = self.piece_index(u)
        d, F = self.breakpoints, self.lift_values
        return F[i] + (F[i + 1] - F[i]) / (d[i + 1] - d[i]) * (u - d[i]) + k

    def shifted(self, c: int) -> "CircleMapSpec":
        """The same circle map with the lift moved up by the integer ``c``."""
        return CircleMapSpec(self.breakpoints, tuple(v + c for v in self.lift_values))

    def to_json(self) -> str:
        return json.dumps(
            {
                "breakpoints": [format_rational(b) for b in self.breakpoints],
                "lift_values": [format_rational(v) for v in self.lift_values],
            }
        )


def load_map(text: str) -> CircleMapSpec:
    """Parse a map document (JSON object with ``breakpoints`` and ``lift_values``)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapFormatError(f"syntax error: {exc.msg}", exc.pos) from None
    if not isinstance(doc, dict):
        raise MapFormatError("top level must be an object")
    keys = set(doc)
    missing = {"breakpoints", "lift_values"} - keys
    if missing:
        raise MapFormatError(f"missing key(s): {sorted(missing)}")
    extra = keys - {"breakpoints", "lift_values"}
    if extra:
        raise MapFormatError(f"unexpected key(s): {sorted(extra)}")

    parsed = {}
    for key in ("breakpoints", "lift_values"):
        items = doc[key]
        if not isinstance(items, list):
            raise MapFormatError(f"{key} must be an array")
        values = []
        for idx, item in enumerate(items):
            try:
                values.append(parse_rational(item))
            except MapFormatError as exc:
                raise MapFormatError(f"{key}[{idx}]: {exc}") from None
        parsed[key] = values

    d, F = parsed["breakpoints"], parsed["lift_values"]
    if len(d) != len(F):
        raise MapFormatError(f"length mismatch: {len(d)} breakpoints, {len(F)} lift values")
    if len(d) < 2 or d[0] != 0 or d[-1] != 1:
        raise MissingUnitEndpoint("breakpoints must start at 0 and end at 1")
    return CircleMapSpec(tuple(d), tuple(F))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Condition:
    code: str  # the failure code, reported when passed is False
    description: str
    passed: bool
    witness: object = None


@dataclass(frozen=True)
class ValidationReport:
    conditions: tuple[Condition, ...]
    expansion: str  # "strict", "eventual" or "none"
    strict: bool = False

    @property
    def failures(self) -> list[Condition]:
        return [c for c in self.conditions if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = []
        for c in self.conditions:
            status = "pass" if c.passed else "FAIL"
            line = f"{status:4s} {c.code}: {c.description}"
            if not c.passed and c.witness is not None:
                line += f" (witness: {c.witness})"
            lines.append(line)
        lines.append(f"expansion: {self.expansion}")
        return "\n".join(lines)


def _coarse_transitions(spec: CircleMapSpec) -> dict[int, set[int]]:
    """i -> {j : f(int xi_i) meets int xi_j}, without assuming small images."""
    d, F = spec.breakpoints, spec.lift_values
    out: dict[int, set[int]] = {}
    for i in range(spec.p):
        lo, hi = sorted((F[i], F[i + 1]))
        targets = set()
        for s in range(math.floor(lo) - 1, math.ceil(hi) + 1):
            for j in range(spec.p):
                if max(lo, d[j] + s) < min(hi, d[j + 1] + s):
                    targets.add(j)
        out[i] = targets
    return out


def _has_cycle(nodes: set[int], succ: dict[int, set[int]]) -> list[int] | None:
    """Return a cycle inside ``nodes`` (as a vertex list) or None."""
    color = {v: 0 for v in nodes}
    stack_path: list[int] = []

    def visit(v):
        color[v] = 1
        stack_path.append(v)
        for w in succ.get(v, ()):
            if w not in nodes:
                continue
            if color[w] == 1:
                return stack_path[stack_path.index(w):]
            if color[w] == 0:
                found = visit(w)
                if found:
                    return found
        color[v] = 2
        stack_path.pop()
        return None

    for v in sorted(nodes):
        if color[v] == 0:
            found = visit(v)
            if found:
                return found
    return None


def validate(spec: CircleMapSpec, strict: bool = False) -> ValidationReport:
    """Check the map-class conditions and report each with a witness.

    ``strict`` demands |slope| > 1 on every piece; otherwise slopes of magnitude
    one are tolerated as long as no cycle of the transition graph consists only
    of such pieces (every cycle then has slope product > 1).
    """
    d, F = spec.breakpoints, spec.lift_values
    conds = []

    bad = next((i for i in range(spec.p) if d[i] >= d[i + 1]), None)
    conds.append(Condition("NotIncreasing", "breakpoints strictly increasing", bad is None,
                           None if bad is None else (format_rational(d[bad]), format_rational(d[bad + 1]))))
    increasing = bad is None

    deg = F[-1] - F[0]
    conds.append(Condition("DegreeNotOne", "F(1) - F(0) = 1", deg == 1,
                           None if deg == 1 else format_rational(deg)))

    conds.append(Condition("LiftNotNormalized", "F(0) in [0, 1]", 0 <= F[0] <= 1,
                           None if 0 <= F[0] <= 1 else format_rational(F[0])))

    dset = set(d[:-1])
    miss = next((i for i in range(spec.p + 1) if frac_part(F[i]) not in dset), None)
    conds.append(Condition("MarkovViolation", "every F(d_i) mod 1 is a breakpoint", miss is None,
                           None if miss is None else
                           f"F({format_rational(d[miss])}) = {format_rational(F[miss])}"))

    zero = next((i for i in range(spec.p) if F[i] == F[i + 1]), None)
    conds.append(Condition("ZeroSlope", "each piece is non-constant", zero is None, zero))

    expansion = "none"
    witness = None
    if increasing and zero is None:
        slopes = spec.slopes
        small = [i for i, a in enumerate(slopes) if abs(a) < 1]
        unit = {i for i, a in enumerate(slopes) if abs(a) == 1}
        if small:
            witness = f"piece {small[0]} has slope {format_rational(slopes[small[0]])}"
        elif not unit:
            expansion = "strict"
        else:
            cyc = _has_cycle(unit, _coarse_transitions(spec))
            if cyc is None:
                expansion = "eventual"
            else:
                witness = f"cycle {cyc} has slope product 1"
        if expansion == "eventual" and strict:
            witness = f"piece {min(unit)} has |slope| = 1 (strict mode)"
    ok_exp = expansion == "strict" or (expansion == "eventual" and not strict)
    conds.append(Condition("NotExpanding",
                           "|slope| > 1" if strict else "every cycle has slope product > 1",
                           ok_exp, witness))
    return ValidationReport(tuple(conds), expansion, strict)


# ---------------------------------------------------------------------------
# partitions and cylinders


@dataclass(frozen=True)
class MarkovPartition:
    """A Markov partition xi_i = [d_i, d_{i+1}) with the lift values at its endpoints."""

    breakpoints: tuple[Fraction, ...]
    lift_values: tuple[Fraction, ...]
    refinement_depth: int = 0
    _shift: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_shift", self._compute_shifts())

    @property
    def p(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def spec(self) -> CircleMapSpec:
        return CircleMapSpec(self.breakpoints, self.lift_values)

    @property
    def elements(self) -> list[tuple[Fraction, Fraction]]:
        d = self.breakpoints
        return [(d[i], d[i + 1]) for i in range(self.p)]

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return self.spec.slopes

    def image(self, i: int) -> tuple[Fraction, Fraction]:
        """Closed image interval F(closure xi_i)."""
        return tuple(sorted((self.lift_values[i], self.lift_values[i + 1])))

    def shift(self, i: int, j: int) -> int | None:
        """The integer s with F(xi_i) containing xi_j + s, or None if j does not follow i."""
        return self._shift.get((i, j))

    def _compute_shifts(self):
        d = self.breakpoints
        shifts = {}
        for i in range(self.p):
            lo, hi = sorted((self.lift_values[i], self.lift_values[i + 1]))
            for s in range(math.floor(lo) - 1, math.ceil(hi) + 1):
                for j in range(self.p):
                    if lo <= d[j] + s and d[j + 1] + s <= hi:
                        if (i, j) in shifts:
                            # only possible while some image has diameter >= 1
                            shifts[(i, j)] = None
                        else:
                            shifts[(i, j)] = s
        return {k: v for k, v in shifts.items() if v is not None}


def _preimages(spec: CircleMapSpec, targets: set[Fraction]) -> set[Fraction]:
    """All x in [0, 1) whose image mod 1 lies in ``targets``."""
    d, F = spec.breakpoints, spec.lift_values
    out = set()
    for i in range(spec.p):
        lo, hi = sorted((F[i], F[i + 1]))
        a = (F[i + 1] - F[i]) / (d[i + 1] - d[i])
        for t in targets:
            for s in range(math.floor(lo - t), math.ceil(hi - t) + 1):
                y = t + s
                if lo <= y <= hi:
                    x = d[i] + (y - F[i]) / a
                    if x < 1:
                        out.add(x)
    return out


def refine(spec: CircleMapSpec, strict: bool = False, check: bool = True) -> MarkovPartition:
    """Coarsest dynamical refinement on which every element has image diameter < 1.

    With ``check`` the map must pass :func:`validate` first.
    """
    if check:
        report = validate(spec, strict=strict)
        if not report.ok:
            raise InvalidMapError(report)
    base = set(spec.breakpoints[:-1])
    points = set(base)
    for depth in range(REFINEMENT_DEPTH_CAP + 1):
        d = sorted(points) + [Fraction(1)]
        lifts = [spec.lift(x) for x in d[:-1]] + [spec.lift_values[-1]]
        if all(abs(lifts[i + 1] - lifts[i]) < 1 for i in range(len(d) - 1)):
            return MarkovPartition(tuple(d), tuple(lifts), depth)
        if len(points) > REFINEMENT_SIZE_CAP:
            break
        points = base | _preimages(spec, points)
    raise RefinementDiverged(f"no refinement with sub-unit images up to depth {REFINEMENT_DEPTH_CAP}")


@dataclass(frozen=True)
class CylinderInterval:
    word: tuple[int, ...]
    interval: tuple[Fraction, Fraction] | None  # half-open [lo, hi); None when empty

    @property
    def empty(self) -> bool:
        return self.interval is None

    @property
    def length(self) -> Fraction:
        return Fraction(0) if self.interval is None else self.interval[1] - self.interval[0]


def cylinder(partition: MarkovPartition, word: Sequence[int]) -> CylinderInterval:
    """Points whose first ``len(word)`` itinerary symbols equal ``word``.

    States are 0-based.  The computation is done on closed intervals and the
    result reported half-open, so cylinders of one length tile [0, 1).
    """
    word = tuple(word)
    if not word:
        raise ValueError("word must be nonempty")
    if any(not 0 <= w < partition.p for w in word):
        raise ValueError(f"state out of range in {word}")
    d, F = partition.breakpoints, partition.lift_values
    lo, hi = d[word[-1]], d[word[-1] + 1]
    for k in range(len(word) - 2, -1, -1):
        i, j = word[k], word[k + 1]
        s = partition.shift(i, j)
        if s is None:
            return CylinderInterval(word, None)
        a = (F[i + 1] - F[i]) / (d[i + 1] - d[i])
        x1 = d[i] + (lo + s - F[i]) / a
        x2 = d[i] + (hi + s - F[i]) / a
        lo, hi = min(x1, x2), max(x1, x2)
    if lo >= hi:
        return CylinderInterval(word, None)
    return CylinderInterval(word, (lo, hi))


def itinerary(partition: MarkovPartition, x, n: int) -> tuple[int, ...]:
    """First ``n`` symbols of ``x`` (taken mod 1), chosen so that x lies in the
    half-open cylinder of the returned word.

    Following pieces naively breaks at endpoints mapped by decreasing pieces,
    so each symbol is picked among the successors by cylinder membership.
    """
    u = frac_part(Fraction(x))
    if n < 1:
        return ()
    word = (partition.spec.piece_index(u),)
    while len(word) < n:
        for j in range(partition.p):
            if partition.shift(word[-1], j) is None:
                continue
            iv = cylinder(partition, word + (j,)).interval
            if iv is not None and iv[0] <= u < iv[1]:
                word += (j,)
                break
        else:
            raise AssertionError(f"no cylinder extends {word} at {u}")
    return word


def lift_iterate(spec: CircleMapSpec, x, n: int) -> list[Fraction]:
    """Exact orbit ``F^0 x, ..., F^n x`` of the lift."""
    orbit = [Fraction(x)]
    for _ in range(n):
        orbit.append(spec.lift(orbit[-1]))
    return orbit
