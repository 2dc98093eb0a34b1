import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotor.entropy_solver import (
    arccot,
    asymptotic_count,
    chebyshev_grid,
    entropy_curve,
    layer_spectral_radius,
    log_asymptotic_count,
    max_entropy_direction,
    solve_direction,
)
from rotor.errors import DegenerateEntry
from rotor.symbolic_graph import WeightedGraph, rotation_interval
from rotor.word_counts import count_L

from conftest import closed_entropy, closed_form, primitive_random_graph

GOLD = (math.sqrt(5) - 1) / 2


def test_quarter_direction(graph):
    sol = solve_direction(graph, Fr(1, 4))
    assert sol.status == "ok"
    assert sol.x0 == pytest.approx(GOLD, abs=1e-12)
    assert sol.y0 == pytest.approx(GOLD, abs=1e-12)
    assert sol.entropy == pytest.approx(1.25 * math.log((1 + math.sqrt(5)) / 2), abs=1e-12)
    assert sol.residual_H < 1e-12 and sol.residual_stationarity < 1e-12
    assert sol.spectral_radius == pytest.approx(1, abs=1e-12)
    assert sol.flags["Q_nonzero"] and sol.flags["f_nonzero_diag"]


@settings(max_examples=40, deadline=None)
@given(st.floats(0.03, 0.47))
def test_matches_closed_form(graph, alpha):
    sol = solve_direction(graph, alpha)
    x, y = closed_form(alpha)
    assert sol.x0 == pytest.approx(x, abs=1e-10)
    assert sol.y0 == pytest.approx(y, rel=1e-9)


def test_outside_and_boundary(graph):
    out = solve_direction(graph, Fr(3, 4))
    assert out.status == "AlphaOutsideInterval" and out.entropy == 0
    lo = solve_direction(graph, 0)
    hi = solve_direction(graph, Fr(1, 2))
    assert lo.on_boundary and hi.on_boundary
    # both endpoints are carried by a single cycle: entropy collapses
    assert lo.entropy < 1e-6 and hi.entropy < 1e-6


def test_drift_is_monotone(graph):
    drifts = [layer_spectral_radius(graph, y)[1] for y in np.geomspace(1e-6, 1e6, 60)]
    assert all(b >= a - 1e-12 for a, b in zip(drifts, drifts[1:]))


def test_max_direction(graph):
    md = max_entropy_direction(graph)
    assert md.alpha_max == pytest.approx(0.2821918053244515, abs=1e-12)
    assert md.lam == pytest.approx(1.839286755214161, abs=1e-12)
    assert md.theta_max == pytest.approx(arccot(md.alpha_max))
    sol = solve_direction(graph, md.alpha_max)
    assert sol.y0 == pytest.approx(1, abs=1e-9)
    assert sol.entropy == pytest.approx(md.h_top, abs=1e-9)


def test_arccot_branch():
    assert arccot(0) == pytest.approx(math.pi / 2)
    assert 0 < arccot(-3) < math.pi and arccot(-3) > math.pi / 2


def test_curve_shape(graph):
    curve = entropy_curve(graph, 41)
    h = curve.entropies
    assert all(s.status == "ok" for s in curve.solutions)
    assert np.all(np.diff(curve.alphas) > 0)
    assert h.max() <= max_entropy_direction(graph).h_top + 1e-12
    # concave on the sampled grid
    a = curve.alphas
    for k in range(1, len(a) - 1):
        chord = h[k - 1] + (h[k + 1] - h[k - 1]) * (a[k] - a[k - 1]) / (a[k + 1] - a[k - 1])
        assert h[k] >= chord - 1e-10
    assert np.allclose(h, [closed_entropy(v) for v in a], atol=1e-9)


def test_curve_threads_match(graph, monkeypatch):
    serial = entropy_curve(graph, 15, threads=1)
    monkeypatch.setenv("ROTOR_THREADS", "4")
    parallel = entropy_curve(graph, 15)
    assert [s.entropy for s in serial.solutions] == [s.entropy for s in parallel.solutions]


def test_degenerate_interval_curve():
    g = WeightedGraph.from_weights([[1, 1], [1, 1]])
    curve = entropy_curve(g, 10)
    assert len(curve.solutions) == 1


def test_chebyshev_grid():
    g = chebyshev_grid(0.0, 1.0, 5)
    assert len(g) == 5 and 0 < g[0] < g[-1] < 1


def test_asymptotic_ratio(graph):
    n = 1000
    exact = count_L(graph, n + 1, n // 4)[2, 2]
    ratio = float(exact / asymptotic_count(graph, (2, 2), Fr(1, 4), n))
    assert abs(ratio - 1) < 0.01


def test_asymptotic_needs_interior_direction(graph):
    with pytest.raises(DegenerateEntry):
        log_asymptotic_count(graph, (2, 2), Fr(1, 2), 100)
    with pytest.raises(DegenerateEntry):
        log_asymptotic_count(graph, (2, 2), Fr(3, 4), 100)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_random_primitive_graphs_satisfy_system(seed):
    g = primitive_random_graph(np.random.default_rng(seed), 3)
    ri = rotation_interval(g)
    alpha = float(ri.lo + (ri.hi - ri.lo) * Fr(2, 5))
    sol = solve_direction(g, alpha)
    assert sol.status == "ok"
    assert sol.residual_H < 1e-8 and sol.residual_stationarity < 1e-8
    assert sol.spectral_radius == pytest.approx(1, abs=1e-10)
    assert 0 <= sol.entropy <= math.log(max(abs(np.linalg.eigvals(g.A)))) + 1e-9
