"""Weighted transition graph of a Markov partition, rotation interval, structure checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .circle_map import MarkovPartition
from .errors import NoCycle, NonContiguousWeights

RANK_SAMPLES = 1024


@dataclass(frozen=True)
class WeightedGraph:
    """Transition graph with integer edge weights.

    ``K[i][j]`` is the weight of edge i -> j, or None when there is no edge.
    States are 0-based.
    """

    K: tuple[tuple[Optional[int], ...], ...]

    def __post_init__(self):
        K = tuple(tuple(None if k is None else int(k) for k in row) for row in self.K)
        if any(len(row) != len(K) for row in K):
            raise ValueError("weight matrix must be square")
        object.__setattr__(self, "K", K)

    @classmethod
    def from_weights(cls, K: Sequence[Sequence[Optional[int]]]) -> "WeightedGraph":
        return cls(tuple(tuple(row) for row in K))

    @classmethod
    def from_layers(cls, layers: dict[int, np.ndarray]) -> "WeightedGraph":
        p = len(next(iter(layers.values())))
        K = [[None] * p for _ in range(p)]
        for s, layer in layers.items():
            for i, j in zip(*np.nonzero(np.asarray(layer))):
                if K[i][j] is not None:
                    raise ValueError(f"edge ({i},{j}) appears in two layers")
                K[i][j] = s
        return cls.from_weights(K)

    @property
    def p(self) -> int:
        return len(self.K)

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return [(i, j, k) for i, row in enumerate(self.K) for j, k in enumerate(row) if k is not None]

    @property
    def A(self) -> np.ndarray:
        return np.array([[0 if k is None else 1 for k in row] for row in self.K], dtype=np.int64)

    @property
    def weight_set(self) -> list[int]:
        return sorted({k for _, _, k in self.edges})

    @property
    def s0(self) -> int:
        return self.weight_set[0]

    @property
    def rho(self) -> int:
        ws = self.weight_set
        return ws[-1] - ws[0]

    @property
    def layers(self) -> list[np.ndarray]:
        """[A_{s0}, A_{s0+1}, ..., A_{s0+rho}] as 0/1 integer arrays."""
        out = [np.zeros((self.p, self.p), dtype=np.int64) for _ in range(self.rho + 1)]
        for i, j, k in self.edges:
            out[k - self.s0][i, j] = 1
        return out

    def shifted(self, c: int) -> "WeightedGraph":
        return WeightedGraph(tuple(tuple(None if k is None else k + c for k in row) for row in self.K))

    def weighted_matrix(self, y: float) -> np.ndarray:
        """sum_j y^j A_{s0+j} with shifted exponents."""
        M = np.zeros((self.p, self.p))
        for i, j, k in self.edges:
            M[i, j] = y ** (k - self.s0)
        return M

    def to_dict(self) -> dict:
        return {"p": self.p, "s0": self.s0, "rho": self.rho, "weights": [list(row) for row in self.K]}


def build_graph(partition: MarkovPartition) -> WeightedGraph:
    """Read off A and the weights k_ij from a refined partition.

    ``A_ij = 1`` iff ``F(xi_i)`` contains ``xi_j + k_ij`` for an integer shift.
    """
    p = partition.p
    K = [[partition.shift(i, j) for j in range(p)] for i in range(p)]
    for i in range(p):
        lo, hi = partition.image(i)
        covered = sum(partition.breakpoints[j + 1] - partition.breakpoints[j]
                      for j in range(p) if K[i][j] is not None)
        if covered != hi - lo:
            raise ValueError(f"image of element {i} is not a union of partition elements; refine first")
    graph = WeightedGraph.from_weights(K)
    ws = graph.weight_set
    if ws != list(range(ws[0], ws[-1] + 1)):
        raise NonContiguousWeights(f"weights {ws} are not a contiguous range")
    return graph


# ---------------------------------------------------------------------------
# rotation interval


@dataclass(frozen=True)
class RotationInterval:
    lo: Fraction
    hi: Fraction

    def __contains__(self, a) -> bool:
        return self.lo <= a <= self.hi


def _karp_min_mean(p: int, edges: list[tuple[int, int, int]]) -> Fraction:
    """Minimum cycle mean (Karp), with every vertex as a zero-cost start."""
    INF = None
    D = [[INF] * p for _ in range(p + 1)]
    D[0] = [0] * p
    for k in range(1, p + 1):
        prev, cur = D[k - 1], D[k]
        for u, v, w in edges:
            if prev[u] is not None and (cur[v] is None or prev[u] + w < cur[v]):
                cur[v] = prev[u] + w
    best = None
    for v in range(p):
        if D[p][v] is None:
            continue
        worst = None
        for k in range(p):
            if D[k][v] is None:
                continue
            val = Fraction(D[p][v] - D[k][v], p - k)
            if worst is None or val > worst:
                worst = val
        if worst is not None and (best is None or worst < best):
            best = worst
    if best is None:
        raise NoCycle("graph has no cycle")
    return best


def rotation_interval(graph: WeightedGraph) -> RotationInterval:
    """[min cycle mean, max cycle mean] of the edge weights, exactly."""
    edges = graph.edges
    lo = _karp_min_mean(graph.p, edges)
    hi = -_karp_min_mean(graph.p, [(u, v, -w) for u, v, w in edges])
    return RotationInterval(lo, hi)


def simple_cycles(graph: WeightedGraph) -> list[tuple[int, ...]]:
    """All simple cycles, each listed once starting from its smallest vertex."""
    succ = {i: [j for j in range(graph.p) if graph.K[i][j] is not None] for i in range(graph.p)}
    out = []
    for start in range(graph.p):
        stack = [(start, (start,))]
        while stack:
            v, path = stack.pop()
            for w in succ[v]:
                if w == start:
                    out.append(path)
                elif w > start and w not in path:
                    stack.append((w, path + (w,)))
    return out


def cycle_mean(graph: WeightedGraph, cycle: Sequence[int]) -> Fraction:
    n = len(cycle)
    total = sum(graph.K[cycle[t]][cycle[(t + 1) % n]] for t in range(n))
    return Fraction(total, n)


# ---------------------------------------------------------------------------
# structure


def primitivity_exponent(A) -> Optional[int]:
    """Smallest k <= (p-1)^2 + 1 with A^k > 0 entrywise, or None (Wielandt bound)."""
    B = np.asarray(A) != 0
    p = B.shape[0]
    P = B.copy()
    for k in range(1, (p - 1) ** 2 + 2):
        if P.all():
            return k
        P = (P.astype(np.int64) @ B.astype(np.int64)) > 0
    return None


@dataclass(frozen=True)
class StructureReport:
    primitive: bool
    primitivity_exponent: Optional[int]
    rank_condition: bool
    rank_method: str  # "structural", "sampled (heuristic)" or "scalar"
    min_sampled_rank: Optional[int]

    def summary(self) -> str:
        prim = f"primitive: {self.primitive}"
        if self.primitive:
            prim += f" (A^{self.primitivity_exponent} > 0)"
        rank = f"rank condition: {self.rank_condition} [{self.rank_method}]"
        if self.min_sampled_rank is not None:
            rank += f", min sampled rank {self.min_sampled_rank}"
        return prim + "\n" + rank


def structure_checks(graph: WeightedGraph, samples: int = RANK_SAMPLES) -> StructureReport:
    """Primitivity (exact) and the rank condition rank A(1, e^{i phi}) > 1.

    The rank condition is settled structurally when two nonzero rows of A have
    different supports (such rows can never be proportional); otherwise it is
    sampled at ``samples`` angles, which is only a heuristic.
    """
    A = graph.A
    k = primitivity_exponent(A)
    p = graph.p
    if p == 1:
        return StructureReport(k is not None, k, False, "scalar", 1)

    supports = {tuple(row) for row in A if row.any()}
    if len(supports) >= 2:
        return StructureReport(k is not None, k, True, "structural", None)

    min_rank = p
    for phi in np.linspace(0.0, 2 * np.pi, samples, endpoint=False):
        M = np.zeros((p, p), dtype=complex)
        for i, j, w in graph.edges:
            M[i, j] = np.exp(1j * phi * (w - graph.s0))
        min_rank = min(min_rank, int(np.linalg.matrix_rank(M, tol=1e-9)))
    return StructureReport(k is not None, k, min_rank > 1, "sampled (heuristic)", min_rank)
