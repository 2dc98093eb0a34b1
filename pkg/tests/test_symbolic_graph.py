from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings

from rotor.symbolic_graph import (
    WeightedGraph,
    cycle_mean,
    primitivity_exponent,
    rotation_interval,
    simple_cycles,
    structure_checks,
)

from conftest import weighted_graphs

A0 = np.array([[0, 1, 1], [0, 0, 1], [0, 0, 1]])
A1 = np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0]])


def test_fixture_layers(graph):
    assert graph.s0 == 0 and graph.rho == 1
    assert np.array_equal(graph.layers[0], A0)
    assert np.array_equal(graph.layers[1], A1)
    assert np.array_equal(graph.A, A0 + A1)


def test_from_layers_round_trip(graph):
    assert WeightedGraph.from_layers({0: A0, 1: A1}) == graph
    assert WeightedGraph.from_weights(graph.to_dict()["weights"]) == graph


def test_from_layers_rejects_overlap():
    with pytest.raises(ValueError):
        WeightedGraph.from_layers({0: np.eye(2), 1: np.eye(2)})


def test_rotation_interval_fixture(graph):
    ri = rotation_interval(graph)
    assert (ri.lo, ri.hi) == (0, Fr(1, 2))
    assert Fr(1, 4) in ri and Fr(3, 4) not in ri


def test_primitivity(graph):
    assert primitivity_exponent(graph.A) == 3
    assert primitivity_exponent(np.array([[0, 1], [1, 0]])) is None


def test_structure_fixture(graph):
    rep = structure_checks(graph)
    assert rep.primitive and rep.rank_condition
    assert rep.rank_method == "structural"


def test_structure_sampled_branch():
    # rows share a support, and every weight is equal: A(1, e^{i phi}) has rank 1
    g = WeightedGraph.from_weights([[0, 0], [0, 0]])
    rep = structure_checks(g, samples=16)
    assert rep.rank_method.startswith("sampled")
    assert not rep.rank_condition


@settings(max_examples=80, deadline=None)
@given(weighted_graphs())
def test_rotation_interval_matches_cycle_enumeration(g):
    means = [cycle_mean(g, c) for c in simple_cycles(g)]
    ri = rotation_interval(g)
    assert (ri.lo, ri.hi) == (min(means), max(means))


@settings(max_examples=50, deadline=None)
@given(weighted_graphs())
def test_shift_covariance(g):
    ri, sh = rotation_interval(g), rotation_interval(g.shifted(2))
    assert (sh.lo, sh.hi) == (ri.lo + 2, ri.hi + 2)
    assert g.shifted(2).s0 == g.s0 + 2 and g.shifted(2).rho == g.rho
