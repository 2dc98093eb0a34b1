from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotor.entropy_solver import solve_direction
from rotor.errors import NonPrimitive, ZeroNotSimple
from rotor.markov_measure import (
    build_measure,
    cylinder_measure,
    det_derivative_check,
    expected_drift,
    measure_entropy,
    null_vectors,
    perron,
)
from rotor.word_counts import enumerate_words


def test_perron_fixture(graph):
    pd = perron(graph.A)
    l, r = pd.raw()
    assert pd.lam == pytest.approx(1.839286755214161, abs=1e-12)
    assert np.allclose(l, [1, 0.5436890126920763, 1.839286755214161], atol=1e-12)
    assert np.allclose(r, [1, 0.647798871261043, 1.191487883953119], atol=1e-12)
    assert l @ graph.A == pytest.approx(pd.lam * l)
    assert float(pd.l @ pd.r) == pytest.approx(1)


def test_perron_rejects_periodic():
    with pytest.raises(NonPrimitive):
        perron(np.array([[0, 1], [1, 0]]))


@pytest.mark.parametrize("alpha", [Fr(1, 10), Fr(1, 4), Fr(2, 5)])
def test_measure_identities(graph, alpha):
    sol = solve_direction(graph, alpha)
    mu = build_measure(graph, sol)
    assert np.allclose(mu.Pi.sum(axis=1), 1, atol=1e-14)
    assert np.allclose(mu.q @ mu.Pi, mu.q, atol=1e-14)
    assert mu.q.sum() == pytest.approx(1)
    assert np.array_equal(mu.support, graph.A)
    assert measure_entropy(mu) == pytest.approx(sol.entropy, abs=1e-12)
    assert expected_drift(mu, graph) == pytest.approx(float(alpha), abs=1e-12)


def test_kolmogorov_consistency(graph):
    mu = build_measure(graph, solve_direction(graph, Fr(1, 4)))
    for n in range(1, 6):
        words = enumerate_words(graph, n)
        assert sum(cylinder_measure(mu, w) for w in words) == pytest.approx(1)
        for w in words[:10]:
            ext = sum(cylinder_measure(mu, w + (j,)) for j in range(graph.p))
            assert ext == pytest.approx(cylinder_measure(mu, w))


def test_null_vectors():
    B = np.diag([0.0, 2.0, 3.0])
    l, r, beta = null_vectors(B)
    assert beta == pytest.approx(6)
    assert float(l @ r) == pytest.approx(1)
    with pytest.raises(ZeroNotSimple):
        null_vectors(np.eye(3))
    with pytest.raises(ZeroNotSimple):
        null_vectors(np.diag([0.0, 0.0, 1.0]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_derivative_of_determinant(seed):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    D = np.diag([0.0, *rng.uniform(0.5, 2.0, 3)])
    B = P @ D @ np.linalg.inv(P)
    X = rng.normal(size=(4, 4))
    fd, exact = det_derivative_check(B, X)
    assert fd == pytest.approx(exact, rel=1e-5, abs=1e-9)
