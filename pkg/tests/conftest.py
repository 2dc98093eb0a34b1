from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from rotor.circle_map import load_map, refine
from rotor.symbolic_graph import WeightedGraph, build_graph

MAPS = Path(__file__).resolve().parent.parent / "maps"


@pytest.fixture(scope="session")
def three_piece_spec():
    return load_map((MAPS / "three_piece.json").read_text())


@pytest.fixture(scope="session")
def partition(three_piece_spec):
    return refine(three_piece_spec)


@pytest.fixture(scope="session")
def graph(partition):
    return build_graph(partition)


def closed_form(alpha: float) -> tuple[float, float]:
    """Minimal solution for the three-piece map, solved by hand from H = 1 - x - x^2 y - x^3 y."""
    x = (alpha - math.sqrt(5 * alpha**2 - 4 * alpha + 1)) / (2 * alpha - 1)
    return x, (1 - x) / (x**3 + x**2)


def closed_entropy(alpha: float) -> float:
    x, y = closed_form(alpha)
    return -math.log(x) - alpha * math.log(y)


@st.composite
def weighted_graphs(draw, max_p: int = 4, max_weight: int = 2, min_edges: int = 1):
    """Random weighted graphs with every state having an outgoing edge."""
    p = draw(st.integers(1, max_p))
    low = draw(st.integers(-1, 1))
    cell = st.one_of(st.none(), st.integers(low, low + max_weight))
    K = [[draw(cell) for _ in range(p)] for _ in range(p)]
    for i in range(p):
        if all(k is None for k in K[i]):
            K[i][draw(st.integers(0, p - 1))] = low
    return WeightedGraph.from_weights(K)


def random_graph(rng: np.random.Generator, p: int, density: float = 0.6, weights=(0, 1, 2)) -> WeightedGraph:
    K = [[int(rng.choice(weights)) if rng.random() < density else None for _ in range(p)] for _ in range(p)]
    for i in range(p):
        if all(k is None for k in K[i]):
            K[i][int(rng.integers(p))] = int(rng.choice(weights))
    return WeightedGraph.from_weights(K)


def primitive_random_graph(rng: np.random.Generator, p: int, weights=(0, 1)) -> WeightedGraph:
    """Random graph with a positive diagonal and a Hamiltonian cycle, hence primitive."""
    while True:
        g = random_graph(rng, p, 0.5, weights)
        K = [list(row) for row in g.K]
        for i in range(p):
            if K[i][i] is None:
                K[i][i] = int(rng.choice(weights))
            nxt = (i + 1) % p
            if K[i][nxt] is None:
                K[i][nxt] = int(rng.choice(weights))
        g = WeightedGraph.from_weights(K)
        if len(g.weight_set) > 1:
            return g


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
