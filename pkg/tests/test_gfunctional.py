from fractions import Fraction

import pytest

from sheafbetti.engine.exactalg import ONE, ZERO, delta
from sheafbetti.engine.gfunctional import (
    GKey, FunctionalSolver, g_degree_bound, g_degree_bounds, g_value, rhs_via_g, solve_g,
    treeid_residual,
)
from sheafbetti.engine.treesum import rhs_tree_sum


def test_lowest_values():
    assert g_value(1) == ONE
    assert g_value(1, (1,)) == delta(3) ** 2
    assert g_value(2) == Fraction(-3, 2)


def test_keys_and_degrees():
    key = GKey(2, (1, 1, 3))
    assert key.q_degree == 11
    assert key.aut_order() == 2
    assert set(solve_g(4)) == {GKey(1), GKey(1, (1,))}
    assert g_value(0, (5,)) == ZERO


def test_solver_extends_incrementally():
    solver = FunctionalSolver()
    first = solver.g_values(6)
    assert solver.solved_degree == 6
    assert solver.g_values(9)[GKey(2)] == first[GKey(2)]


def test_product_identity_residual_vanishes():
    assert treeid_residual(9).is_zero()


def test_degree_bounds():
    assert g_degree_bound(2, ()) == 0
    assert g_degree_bound(3, (1,)) == 15
    for key in solve_g(10):
        if key.d_e >= 2:
            assert g_degree_bounds(key.d_e, key.ms)
    with pytest.raises(ValueError):
        g_degree_bounds(1, ())


def test_rhs_is_zero_below_degree_three(gv_table):
    assert rhs_via_g(1, gv_table) == ZERO
    assert rhs_via_g(2, gv_table) == ZERO


@pytest.mark.parametrize('d', [3, 4, 5, 6])
def test_routes_agree(d, gv_table):
    assert rhs_via_g(d, gv_table) == rhs_tree_sum(d, gv_table)


@pytest.mark.slow
@pytest.mark.parametrize('d', [7, 8, 9, 10])
def test_routes_agree_in_higher_degree(d, inverted_gv):
    assert rhs_via_g(d, inverted_gv) == rhs_tree_sum(d, inverted_gv)


@pytest.mark.parametrize('d', [1, 2, 3, 4])
def test_degree_two_with_one_curve(d):
    assert g_value(2, (d,)) == delta(3 * d) ** 2 * -3


def test_values_are_palindromic():
    for key, value in solve_g(10).items():
        assert value.invert_variable() == value, key


def test_residual_follows_the_solver_twist():
    assert treeid_residual(7, FunctionalSolver(k=8)).is_zero()
