"""Directional complexity and entropy for piecewise affine Markov circle maps."""

from .circle_map import CircleMapSpec, MarkovPartition, load_map, refine, validate
from .entropy_solver import max_entropy_direction, solve_direction
from .symbolic_graph import WeightedGraph, build_graph, rotation_interval

__all__ = [
    "CircleMapSpec",
    "MarkovPartition",
    "WeightedGraph",
    "build_graph",
    "load_map",
    "max_entropy_direction",
    "refine",
    "rotation_interval",
    "solve_direction",
    "validate",
]
