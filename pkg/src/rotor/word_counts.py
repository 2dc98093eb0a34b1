"""Exact counts of weighted admissible words.

``M(D)[i, j]`` is the number of words of ``D`` starting at state i and ending at
state j.  Words of length n carry ``n - 1`` transitions; the weight of a word
is the sum of its edge weights.  All counts are Python integers held in numpy
object arrays, so nothing overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import LengthCapExceeded
from .symbolic_graph import WeightedGraph

ENUMERATION_CAP = 20
FINITE_R_CAP = 5000


@dataclass(frozen=True)
class StripSpec:
    """Prefix weights must stay in ``[alpha*j - r, alpha*j + r]`` (closed strip)."""

    alpha: Fraction
    r: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.r < 1:
            raise ValueError("strip half-width r must be positive")

    def bounds(self, j: int) -> tuple[int, int]:
        """Integer weight range allowed after j transitions."""
        return math.ceil(self.alpha * j - self.r), math.floor(self.alpha * j + self.r)

    def admits(self, j: int, v: int) -> bool:
        return self.alpha * j - self.r <= v <= self.alpha * j + self.r


@dataclass(frozen=True)
class CountMatrix:
    counts: np.ndarray  # p x p object array of ints
    n: int
    m: Optional[int] = None
    strip: Optional[StripSpec] = None

    @property
    def total(self) -> int:
        return int(sum(int(c) for c in self.counts.flat))

    def __getitem__(self, ij):
        return int(self.counts[ij])

    def tolist(self) -> list[list[int]]:
        return [[int(c) for c in row] for row in self.counts]


def _obj(a) -> np.ndarray:
    return np.array(np.asarray(a, dtype=np.int64), dtype=object)


def _identity(p: int) -> np.ndarray:
    return _obj(np.eye(p, dtype=np.int64))


def word_weight(graph: WeightedGraph, word: Sequence[int]) -> int:
    return sum(graph.K[word[t - 1]][word[t]] for t in range(1, len(word)))


def is_admissible(graph: WeightedGraph, word: Sequence[int]) -> bool:
    return all(graph.K[word[t - 1]][word[t]] is not None for t in range(1, len(word)))


def count_L(graph: WeightedGraph, n: int, m: int) -> CountMatrix:
    """M(L^n_m) through the layer recursion M(L^{k+1}_m) = sum_s M(L^k_{m-s}) A_s.

    Only weights that can still reach ``m`` after the remaining steps are kept.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p, s0, rho = graph.p, graph.s0, graph.rho
    steps = n - 1
    target = m - steps * s0  # shifted weight
    if target < 0 or target > steps * rho:
        return CountMatrix(np.zeros((p, p), dtype=object), n, m=m)
    layers = [_obj(L) for L in graph.layers]
    S = np.zeros((steps * rho + 1, p, p), dtype=object)
    S[0] = _identity(p)
    lo, hi = 0, 0
    for k in range(1, steps + 1):
        remaining = steps - k
        new_lo = max(0, target - remaining * rho)
        new_hi = min(k * rho, target)
        new = np.zeros_like(S)
        for j, L in enumerate(layers):
            # sources w in [lo, hi] land on w + j; keep only [new_lo, new_hi]
            a, b = max(lo, new_lo - j), min(hi, new_hi - j)
            if a <= b:
                new[a + j:b + j + 1] += S[a:b + 1] @ L
        S, lo, hi = new, new_lo, new_hi
    return CountMatrix(S[target], n, m=m)


def count_L_all(graph: WeightedGraph, n: int) -> dict[int, CountMatrix]:
    """M(L^n_m) for every attainable m, keyed by the (unshifted) weight m."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p, s0, rho = graph.p, graph.s0, graph.rho
    steps = n - 1
    layers = [_obj(L) for L in graph.layers]
    S = np.zeros((steps * rho + 1, p, p), dtype=object)
    S[0] = _identity(p)
    for k in range(1, steps + 1):
        new = np.zeros_like(S)
        width = (k - 1) * rho + 1
        for j, L in enumerate(layers):
            new[j:j + width] += S[:width] @ L
        S = new
    return {w + steps * s0: CountMatrix(S[w], n, m=w + steps * s0) for w in range(steps * rho + 1)}


def _strip_sweep(graph: WeightedGraph, strip: StripSpec, n_max: int,
                 start: Optional[int] = None) -> Iterator[tuple[int, dict[int, np.ndarray]]]:
    """Yield (n, {weight: count matrix}) for words of length n = 1..n_max inside the strip."""
    p = graph.p
    layers = [(graph.s0 + j, _obj(L)) for j, L in enumerate(graph.layers)]
    init = _identity(p) if start is None else _identity(p)[start:start + 1]
    S = {0: init}
    yield 1, S
    for k in range(1, n_max):
        lo, hi = strip.bounds(k)
        new: dict[int, np.ndarray] = {}
        for v, M in S.items():
            for s, L in layers:
                w = v + s
                if lo <= w <= hi:
                    prod = M @ L
                    if w in new:
                        new[w] = new[w] + prod
                    else:
                        new[w] = prod
        S = new
        yield k + 1, S


def count_B(graph: WeightedGraph, n: int, strip: StripSpec) -> CountMatrix:
    """M(B_{n, alpha, r}) by dynamic programming over (step, end state, weight)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = np.zeros((graph.p, graph.p), dtype=object)
    for length, S in _strip_sweep(graph, strip, n):
        if length == n:
            for M in S.values():
                out = out + M
    return CountMatrix(out, n, strip=strip)


def strip_totals(graph: WeightedGraph, strip: StripSpec, n_max: int) -> list[int]:
    """|B_{n, alpha, r}| for n = 1..n_max in a single sweep."""
    totals = []
    for _, S in _strip_sweep(graph, strip, n_max):
        totals.append(sum(int(c) for M in S.values() for c in M.flat))
    return totals


# ---------------------------------------------------------------------------
# brute force


def weight_filter(graph: WeightedGraph, m: int) -> Callable[[tuple[int, ...]], bool]:
    return lambda w: word_weight(graph, w) == m


def strip_filter(graph: WeightedGraph, strip: StripSpec) -> Callable[[tuple[int, ...]], bool]:
    def pred(w):
        v = 0
        for j in range(1, len(w)):
            v += graph.K[w[j - 1]][w[j]]
            if not strip.admits(j, v):
                return False
        return True

    return pred


def enumerate_words(graph: WeightedGraph, n: int,
                    predicate: Optional[Callable[[tuple[int, ...]], bool]] = None) -> list[tuple[int, ...]]:
    """Every admissible word of length n passing ``predicate``, by depth-first search."""
    if n > ENUMERATION_CAP:
        raise LengthCapExceeded(f"n={n} exceeds enumeration cap {ENUMERATION_CAP}")
    if n < 1:
        return []
    succ = [[j for j in range(graph.p) if graph.K[i][j] is not None] for i in range(graph.p)]
    out = []
    stack = [(i,) for i in reversed(range(graph.p))]
    while stack:
        w = stack.pop()
        if len(w) == n:
            if predicate is None or predicate(w):
                out.append(w)
            continue
        for j in reversed(succ[w[-1]]):
            stack.append(w + (j,))
    return out


def words_to_matrix(p: int, words: Iterable[Sequence[int]]) -> np.ndarray:
    M = np.zeros((p, p), dtype=object)
    for w in words:
        M[w[0], w[-1]] += 1
    return M


# ---------------------------------------------------------------------------
# growth-rate estimates


@dataclass(frozen=True)
class FiniteREstimate:
    strip: StripSpec
    n_grid: tuple[int, ...]
    counts: tuple[int, ...]
    rates: tuple[float, ...]  # ln|B_n| / n, nan where the count is 0
    ratio_estimates: tuple[float, ...]  # ln(B_{n_k} / B_{n_{k-1}}) / (n_k - n_{k-1})
    limit: float
    band: float
    monotone: bool
    all_zero: bool = False


def _log_int(c: int) -> float:
    return math.log(c) if c > 0 else float("nan")


def finite_r_entropy(graph: WeightedGraph, strip: StripSpec, n_grid: Sequence[int]) -> FiniteREstimate:
    """Estimate e_{alpha, r} = lim ln|B_{n, alpha, r}| / n from counts on ``n_grid``.

    The limit estimate is the log-ratio of the last two counts per unit length,
    which cancels the constant prefactor; ``band`` is its change from the
    previous log-ratio.  When every count vanishes (alpha outside the rotation
    interval) the estimate is 0 with ``all_zero`` set.
    """
    grid = tuple(int(n) for n in n_grid)
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be strictly increasing and nonempty")
    if grid[-1] > FINITE_R_CAP:
        raise LengthCapExceeded(f"n={grid[-1]} exceeds cap {FINITE_R_CAP}")
    totals = strip_totals(graph, strip, grid[-1])
    counts = tuple(totals[n - 1] for n in grid)
    rates = tuple(_log_int(c) / n for c, n in zip(counts, grid))
    if not any(counts):
        return FiniteREstimate(strip, grid, counts, rates, (), 0.0, 0.0, True, all_zero=True)

    ratios = []
    for (n1, c1), (n2, c2) in zip(zip(grid, counts), zip(grid[1:], counts[1:])):
        if c1 > 0 and c2 > 0:
            ratios.append((math.log(c2) - math.log(c1)) / (n2 - n1))
        else:
            ratios.append(float("nan"))
    finite = [x for x in ratios if not math.isnan(x)]
    if finite:
        limit = finite[-1]
        band = abs(finite[-1] - finite[-2]) if len(finite) >= 2 else float("inf")
    else:
        limit = rates[-1]
        band = float("inf")
    diffs = [b - a for a, b in zip(finite, finite[1:])]
    monotone = all(d >= -1e-12 for d in diffs) or all(d <= 1e-12 for d in diffs)
    return FiniteREstimate(strip, grid, counts, rates, tuple(ratios), limit, band, monotone)
