from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from sheafbetti.engine.exactalg import I, ONE, HalfLaurent, RatFun, ZERO, delta, monomial, sin_factor
from sheafbetti.engine.localcurve import (
    MarkingList, assemble_disconnected, check_divisibility, connected_laurent, f_connected,
    f_disconnected,
)
from sheafbetti.engine.partitions import content_sum, partitions_of

MARKINGS = [(), (1,), (3,), (1, 2), (3, 3), (1, 1, 2)]


def test_marking_list_is_a_sorted_multiset():
    assert MarkingList((3, 1, 3)) == (1, 3, 3)
    assert MarkingList((3, 1, 3)).aut_order() == 2
    with pytest.raises(ValueError):
        MarkingList((0,))


def test_degree_one_and_two_without_markings():
    assert f_disconnected(1) == -1
    assert f_disconnected(2) == HalfLaurent({18: 1, -18: 1})
    assert f_connected(1) == RatFun(-1)
    assert f_connected(2) == HalfLaurent({18: 1, -18: 1, 0: Fraction(-1, 2)})


def test_single_marking_in_degree_one():
    for m in (1, 2, 5):
        assert f_connected(1, (m,)) == sin_factor(m) * m


def test_degree_zero_cases():
    assert f_connected(0, (4,)) == RatFun(HalfLaurent({0: I * 4}), delta(4))
    assert f_connected(0, (1, 2)) == RatFun(ZERO)
    with pytest.raises(ValueError):
        f_connected(0)
    with pytest.raises(ValueError):
        f_disconnected(0)


@pytest.mark.parametrize('ms', MARKINGS)
def test_connected_blocks_reassemble(ms):
    for d_e in range(1, 5):
        assert assemble_disconnected(d_e, ms) == f_disconnected(d_e, ms)


@pytest.mark.parametrize('ms', MARKINGS)
def test_disconnected_series_divisible_by_sine_factors(ms):
    for d_e in range(1, 5):
        assert check_divisibility(d_e, ms)


def test_twist_parameter_changes_the_series():
    assert f_disconnected(2, (), 1) == HalfLaurent({2: 1, -2: 1})
    assert f_disconnected(2, (), 9) != f_disconnected(2, (), 1)


def test_connected_series_with_markings_is_real_after_removing_sine_factors():
    value = connected_laurent(2, (3, 6))
    for m in (3, 6):
        value = value.exact_div(sin_factor(m))
    assert value.is_real()
    assert value.has_integral_exponents()


def _marking_grid(entries):
    for size in range(4):
        yield from combinations_with_replacement(entries, size)


@pytest.mark.parametrize('d_e', [1, 2, 3, 4])
def test_divisibility_for_plane_markings(d_e):
    for ms in _marking_grid((3, 6, 9, 12)):
        assert check_divisibility(d_e, ms), ms


@pytest.mark.parametrize('d_e', [1, 2, 3, 4])
def test_divisibility_with_the_degree_eight_twist(d_e):
    for ms in _marking_grid(range(1, 7)):
        assert check_divisibility(d_e, ms, 8), ms


def test_marked_examples():
    assert f_disconnected(1, (3,)) * I == delta(3) * 3
    assert check_divisibility(3, (3, 6))
    assert check_divisibility(2, (1, 1, 1))


@pytest.mark.parametrize('k', [8, 9])
def test_unmarked_series_from_contents(k):
    for d_e in range(1, 7):
        sign = -1 if (k * d_e) % 2 else 1
        expected = sum((monomial(2 * k * content_sum(rho), sign) for rho in partitions_of(d_e)), ZERO)
        value = f_disconnected(d_e, (), k)
        assert value == expected
        assert value.invert_variable() == value


def test_unmarked_connected_blocks_satisfy_the_exponential_recursion():
    def disconnected(n):
        return ONE if n == 0 else f_disconnected(n)

    for d_e in range(1, 6):
        total = sum((f_connected(j) * j * disconnected(d_e - j) for j in range(1, d_e + 1)), RatFun(0))
        assert total == disconnected(d_e) * d_e
