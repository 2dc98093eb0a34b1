"""Separated orbit sets inside space-time windows, built by exact iteration.

A window ``W(l1, l2, alpha)`` asks ``l1 + n*alpha <= F^n x <= l2 + n*alpha``.
A separated set of horizon T keeps the T orbit points ``F^0 x .. F^{T-1} x``
inside the window, and any two of its points differ by at least epsilon at
some of those times.  That is the convention under which cylinders of length
T and the strip counts |B_{T, alpha, r}| bound the set size.  Initial points
are taken in [0, 1).
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .circle_map import CircleMapSpec, MarkovPartition, cylinder, lift_iterate
from .errors import EpsilonTooLarge, HorizonCapExceeded
from .symbolic_graph import WeightedGraph
from .word_counts import StripSpec, count_B, enumerate_words

HORIZON_CAP = 16


@dataclass(frozen=True)
class WindowSpec:
    l1: Fraction
    l2: Fraction
    alpha: Fraction  # cot(theta)

    def __post_init__(self):
        for name in ("l1", "l2", "alpha"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not self.l1 < self.l2:
            raise ValueError("window needs l1 < l2")

    @classmethod
    def symmetric(cls, alpha, r: int) -> "WindowSpec":
        return cls(Fraction(-r), Fraction(r), Fraction(alpha))

    @property
    def theta(self) -> float:
        return math.atan2(1.0, float(self.alpha))

    def bounds(self, n: int) -> tuple[Fraction, Fraction]:
        return self.l1 + n * self.alpha, self.l2 + n * self.alpha


def epsilon_m(partition: MarkovPartition, graph: WeightedGraph, m: int) -> Fraction:
    """Minimal length of a nonempty depth-m cylinder."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return min(cylinder(partition, w).length for w in enumerate_words(graph, m))


def orbit_in_window(spec: CircleMapSpec, x, window: WindowSpec, T: int) -> bool:
    """Exact check of the window inequalities for n = 0..T."""
    for n, fx in enumerate(lift_iterate(spec, x, T)):
        lo, hi = window.bounds(n)
        if not lo <= fx <= hi:
            return False
    return True


@dataclass(frozen=True)
class SeparationResult:
    T: int
    epsilon: Fraction
    set_size: int
    points: tuple[Fraction, ...]
    words: tuple[tuple[int, ...], ...]  # itinerary of each point
    surviving_cylinders: int
    lower_bound: Optional[int]
    upper_bound: Optional[int]


def _window_cylinders(partition: MarkovPartition, graph: WeightedGraph, window: WindowSpec, T: int):
    """Words of length T whose cylinder meets the window, with the surviving x-range.

    Yields (word, cyl_lo, cyl_hi, x_lo, x_hi, slope, offset) where F^{T-1} x =
    offset + slope * x on the closed cylinder and [x_lo, x_hi] is the closed
    set of its points obeying the window up to time T-1.
    """
    d, F = partition.breakpoints, partition.lift_values
    slopes = partition.slopes
    out = []

    def clip(lo, hi, slope, offset, n):
        wlo, whi = window.bounds(n)
        a, b = (wlo - offset) / slope, (whi - offset) / slope
        if a > b:
            a, b = b, a
        return max(lo, a), min(hi, b)

    # stack entries: word, cylinder closure (lo, hi), window range (xlo, xhi), F^k = offset + slope*x, v
    stack = []
    for i in reversed(range(partition.p)):
        lo, hi = clip(d[i], d[i + 1], Fraction(1), Fraction(0), 0)
        if lo <= hi:
            stack.append(((i,), d[i], d[i + 1], lo, hi, Fraction(1), Fraction(0), 0))
    while stack:
        word, clo, chi, xlo, xhi, slope, offset, v = stack.pop()
        if len(word) == T:
            out.append((word, clo, chi, xlo, xhi, slope, offset))
            continue
        i = word[-1]
        a = slopes[i]
        for j in reversed(range(partition.p)):
            s = partition.shift(i, j)
            if s is None:
                continue
            # u = F^k x - v lies in xi_i; need F(u) in closure(xi_j) + s
            u1 = d[i] + (d[j] + s - F[i]) / a
            u2 = d[i] + (d[j + 1] + s - F[i]) / a
            ulo, uhi = min(u1, u2), max(u1, u2)
            x1, x2 = (ulo + v - offset) / slope, (uhi + v - offset) / slope
            nclo, nchi = max(clo, min(x1, x2)), min(chi, max(x1, x2))
            if nclo >= nchi:
                continue
            # F^{k+1} x = F(u) + v = F[i] + a * (u - d_i) + v
            nslope = a * slope
            noffset = F[i] + a * (offset - v - d[i]) + v
            nxlo, nxhi = clip(max(xlo, nclo), min(xhi, nchi), nslope, noffset, len(word))
            if nxlo <= nxhi:
                stack.append((word + (j,), nclo, nchi, nxlo, nxhi, nslope, noffset, v + s))
    return out


def separated_set(partition: MarkovPartition, graph: WeightedGraph, window: WindowSpec,
                  epsilon, T: int, m: Optional[int] = None) -> SeparationResult:
    """Greedy (epsilon, W, T)-separated set from cylinder representatives.

    Inside each surviving length-T cylinder the candidates are an epsilon-grid of
    the final image F^{T-1}, anchored at the left end of the window-compatible
    x-range.  Candidates are taken in order of cylinder left endpoint and kept
    when they are separated from everything already kept.  When ``m`` is given
    and T = k*m, the lower bound ceil(3^-k |B_{T, alpha, r}|) is reported too.
    """
    epsilon = Fraction(epsilon)
    if T < 1:
        raise ValueError("horizon T must be >= 1")
    if T > HORIZON_CAP:
        raise HorizonCapExceeded(f"T={T} exceeds cap {HORIZON_CAP}")
    if m is not None and epsilon > epsilon_m(partition, graph, m):
        raise EpsilonTooLarge(f"epsilon {epsilon} exceeds epsilon_{m}")
    spec = partition.spec

    cyls = sorted(_window_cylinders(partition, graph, window, T), key=lambda c: (c[1], c[0]))
    candidates = []
    for word, clo, chi, xlo, xhi, slope, offset in cyls:
        step = epsilon / abs(slope)
        x = xlo
        while x <= xhi:
            if x < chi:
                candidates.append((x, word))
            x += step

    kept_x: list[Fraction] = []
    kept: dict[Fraction, tuple] = {}
    for x, word in candidates:
        if x in kept or not orbit_in_window(spec, x, window, T - 1):
            continue
        orbit = lift_iterate(spec, x, T - 1)
        lo = bisect_right(kept_x, x - epsilon)
        hi = bisect_left(kept_x, x + epsilon)
        if all(max(abs(a - b) for a, b in zip(orbit, kept[y][0])) >= epsilon for y in kept_x[lo:hi]):
            insort(kept_x, x)
            kept[x] = (orbit, word)

    lower = upper = None
    if window.l1 == -window.l2 and window.l2.denominator == 1:
        r = int(window.l2)
        upper = math.floor(1 / epsilon) * count_B(graph, T, StripSpec(window.alpha, r + 1)).total
        if m is not None and T % m == 0:
            k = T // m
            lower = -(-count_B(graph, T, StripSpec(window.alpha, r)).total // 3 ** k)
    return SeparationResult(
        T, epsilon, len(kept_x), tuple(kept_x), tuple(kept[x][1] for x in kept_x),
        len(cyls), lower, upper,
    )


def is_separated(spec: CircleMapSpec, points, window: WindowSpec, epsilon, T: int) -> bool:
    """Brute-force check of the separated-set definition (iterates 0..T-1)."""
    epsilon = Fraction(epsilon)
    orbits = [lift_iterate(spec, x, T - 1) for x in points]
    if not all(orbit_in_window(spec, x, window, T - 1) for x in points):
        return False
    for a in range(len(orbits)):
        for b in range(a + 1, len(orbits)):
            if max(abs(u - w) for u, w in zip(orbits[a], orbits[b])) < epsilon:
                return False
    return True


@dataclass(frozen=True)
class BoundsRow:
    T: int
    lower: int
    observed: int
    upper: int
    rate: float


def bounds_report(partition: MarkovPartition, graph: WeightedGraph, alpha, r: int, m: int,
                  k: int, epsilon=None) -> list[BoundsRow]:
    """Rows (T, lower, observed, upper, ln(observed)/T) for T = m, 2m, ..., k*m."""
    eps_m = epsilon_m(partition, graph, m)
    epsilon = eps_m if epsilon is None else Fraction(epsilon)
    if epsilon > eps_m:
        raise EpsilonTooLarge(f"epsilon {epsilon} exceeds epsilon_{m} = {eps_m}")
    if k * m > HORIZON_CAP:
        raise HorizonCapExceeded(f"T={k * m} exceeds cap {HORIZON_CAP}")
    window = WindowSpec.symmetric(alpha, r)
    rows = []
    for kk in range(1, k + 1):
        res = separated_set(partition, graph, window, epsilon, kk * m, m=m)
        rate = math.log(res.set_size) / res.T if res.set_size else float("-inf")
        rows.append(BoundsRow(res.T, res.lower_bound, res.set_size, res.upper_bound, rate))
    return rows
