from fractions import Fraction as Fr

import pytest

from rotor.complexity_lab import (
    HORIZON_CAP,
    WindowSpec,
    bounds_report,
    epsilon_m,
    is_separated,
    orbit_in_window,
    separated_set,
)
from rotor.errors import EpsilonTooLarge, HorizonCapExceeded


def test_epsilon_m(partition, graph):
    assert [epsilon_m(partition, graph, m) for m in (1, 2, 3)] == [Fr(1, 3), Fr(1, 6), Fr(1, 12)]


def test_window():
    w = WindowSpec.symmetric(Fr(1, 4), 2)
    assert w.bounds(4) == (-1, 3)
    with pytest.raises(ValueError):
        WindowSpec(1, 1, 0)


def test_orbit_in_window(three_piece_spec):
    w = WindowSpec.symmetric(0, 1)
    assert orbit_in_window(three_piece_spec, Fr(1, 6), w, 1)
    # x = 1 already starts outside a window of half-width 1/10
    assert not orbit_in_window(three_piece_spec, Fr(1), WindowSpec(Fr(-1, 10), Fr(1, 10), 0), 1)


@pytest.mark.parametrize("T", [2, 4, 6])
def test_separated_set_is_separated(three_piece_spec, partition, graph, T):
    w = WindowSpec.symmetric(Fr(1, 4), 2)
    eps = Fr(1, 6)
    res = separated_set(partition, graph, w, eps, T, m=2)
    assert res.set_size == len(res.points) > 0
    assert is_separated(three_piece_spec, res.points, w, eps, T)
    assert res.lower_bound <= res.set_size <= res.upper_bound


def test_bounds_report_bracket(partition, graph):
    rows = bounds_report(partition, graph, Fr(1, 4), 2, 2, 3)
    assert [r.T for r in rows] == [2, 4, 6]
    assert all(r.lower <= r.observed <= r.upper for r in rows)
    assert rows[-1].observed > rows[0].observed


def test_rate_decreases_along_flat_direction(partition, graph):
    rows = bounds_report(partition, graph, 0, 1, 2, 4)
    rates = [r.rate for r in rows]
    assert all(b < a for a, b in zip(rates, rates[1:]))


def test_window_outside_interval_thins_out(partition, graph):
    w = WindowSpec.symmetric(Fr(3, 4), 2)
    assert separated_set(partition, graph, w, Fr(1, 12), 12).set_size <= 1


def test_guards(partition, graph):
    w = WindowSpec.symmetric(Fr(1, 4), 2)
    with pytest.raises(HorizonCapExceeded):
        separated_set(partition, graph, w, Fr(1, 6), HORIZON_CAP + 1)
    with pytest.raises(EpsilonTooLarge):
        separated_set(partition, graph, w, Fr(1, 2), 4, m=2)
    with pytest.raises(EpsilonTooLarge):
        bounds_report(partition, graph, Fr(1, 4), 2, 2, 2, epsilon=Fr(1, 3))


def test_is_separated_rejects_close_points(three_piece_spec):
    w = WindowSpec.symmetric(Fr(1, 4), 2)
    assert not is_separated(three_piece_spec, [Fr(1, 100), Fr(2, 100)], w, Fr(1, 6), 1)


def test_finer_epsilon_stays_in_bracket(partition, graph):
    rows = bounds_report(partition, graph, Fr(1, 4), 2, 2, 4, epsilon=Fr(1, 12))
    assert rows[-1].upper == 12 * 193
    assert all(r.lower <= r.observed <= r.upper for r in rows)
