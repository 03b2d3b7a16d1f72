import random
from fractions import Fraction

import pytest

from sheafbetti.engine.exactalg import (
    I, ONE, Y, ZERO, DeltaQuotient, GaussRat, HalfLaurent, RatFun, TwoVarSeries, clear_sum, delta,
    format_coefficient, from_y_coefficients, geometric, parse_coefficient, product_expand,
    quantum_integer, sin_factor,
)
from sheafbetti.errors import NotDivisible


def test_gaussian_rationals_collapse_to_rationals():
    assert I * I == -1
    assert GaussRat(Fraction(1, 2), 0) == Fraction(1, 2)
    assert (GaussRat(1, 1) / GaussRat(1, -1)) == I
    assert format_coefficient(GaussRat(Fraction(1, 2), 3)) == '1/2+3i'
    assert format_coefficient(GaussRat(0, -1)) == '-i'
    assert parse_coefficient('-3/2') == Fraction(-3, 2)
    assert parse_coefficient('4') == 4


def test_laurent_ring_operations():
    a = from_y_coefficients([1, 2, 1])
    b = from_y_coefficients([1, 1])
    assert a == b * b
    assert a - b * b == ZERO
    assert (a + 1).coefficient(0) == 2
    assert (Y ** 3).max_exponent == 6
    assert a.shift(-2) == HalfLaurent({-2: 1, 0: 2, 2: 1})
    assert a.substitute_power(2) == from_y_coefficients([1, 0, 2, 0, 1])
    assert a.at_one() == 4


def test_exact_division():
    a = from_y_coefficients([1, 0, 0, -1])
    b = from_y_coefficients([1, -1])
    assert a.exact_div(b) == from_y_coefficients([1, 1, 1])
    assert b.divides(a)
    with pytest.raises(NotDivisible):
        from_y_coefficients([1, 0, 1]).exact_div(b)
    with pytest.raises(ZeroDivisionError):
        a.exact_div(ZERO)


def test_quantum_integers_and_delta():
    assert quantum_integer(1) == ONE
    assert quantum_integer(3) == HalfLaurent({-2: 1, 0: 1, 2: 1})
    assert delta(3).exact_div(delta(1)) == quantum_integer(3)
    assert delta(0) == ZERO
    assert sin_factor(5) * I == delta(5)
    assert quantum_integer(4).is_palindromic()
    assert not delta(2).is_palindromic()
    with pytest.raises(ValueError):
        quantum_integer(0)


def test_degree_bound_is_measured_in_powers_of_y():
    assert quantum_integer(4).y_degree_bound() == Fraction(3, 2)
    assert quantum_integer(5).y_degree_bound() == 2


def test_rational_functions_reduce():
    assert RatFun(delta(2), delta(1)) == HalfLaurent({1: 1, -1: 1})
    half = RatFun(ONE, delta(1))
    assert (half + half) * delta(1) == 2
    assert not RatFun(ONE, delta(1)).is_polynomial()
    with pytest.raises(ZeroDivisionError):
        RatFun(ONE, ZERO)


def test_delta_quotients_clear_over_a_common_denominator():
    parts = [DeltaQuotient(delta(1) ** 2, {1: 2}), DeltaQuotient(delta(2), {1: 1})]
    assert clear_sum(parts) == ONE + HalfLaurent({1: 1, -1: 1})
    with pytest.raises(NotDivisible):
        DeltaQuotient(ONE, {1: 1}).clear()


def test_euler_product_has_pentagonal_coefficients():
    euler = product_expand([(k, 1) for k in range(1, 13)], 12)
    assert euler.coefficient_list() == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]


def test_series_inverse_and_geometric():
    order = 10
    one_minus_y = TwoVarSeries.from_coefficients([1, -1], order)
    assert one_minus_y.inverse() == geometric((1,), order)
    assert one_minus_y * geometric((1,), order) == TwoVarSeries.one(order)
    with pytest.raises(ZeroDivisionError):
        TwoVarSeries.from_coefficients([0, 1], order).inverse()


def test_two_variable_series():
    order = 6
    series = geometric((1, 1), order, ('q', 't'))
    assert series.coefficient(2, 2) == 1
    assert series.coefficient(2, 1) == 0
    assert series.coefficient(4, 4) == 0
    diagonal = series.specialize_diagonal()
    assert diagonal.variables == ('s',)
    assert diagonal.coefficient(2) == 1
    assert series.shift((1, 0)).coefficient(1, 0) == 1
    with pytest.raises(ValueError):
        series.shift((-1, 0))


def test_substitute_power_extends_the_order():
    series = geometric((1,), 5).substitute_power(3)
    assert series.order == 15
    assert series.coefficient(15) == 1
    assert series.coefficient(14) == 0


def test_power_series_reject_complex_or_negative_laurent_input():
    with pytest.raises(ValueError):
        TwoVarSeries.from_laurent(sin_factor(2), 5)
    with pytest.raises(ValueError):
        TwoVarSeries.from_laurent(quantum_integer(3), 5)


def _random_laurent(rng, size=3):
    exponents = rng.sample(range(-6, 7), size)
    return HalfLaurent({n: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))
                        for n in exponents})


@pytest.fixture
def rng():
    return random.Random(20240611)


def test_laurent_ring_axioms(rng):
    for _ in range(25):
        a, b, c = (_random_laurent(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a + (-a) == ZERO
        assert a * ONE == a


def test_rational_function_field_axioms(rng):
    for _ in range(10):
        r, s, t = (RatFun(_random_laurent(rng), _random_laurent(rng, 2)) for _ in range(3))
        assert (r * s) * t == r * (s * t)
        assert r * (s + t) == r * s + r * t
        assert r / r == 1
        assert r - r == 0
        assert (r + s) - s == r


def test_exact_division_round_trips(rng):
    for _ in range(25):
        a = _random_laurent(rng)
        b = _random_laurent(rng, 2)
        assert (a * b).exact_div(b) == a
        with pytest.raises(NotDivisible):
            (a * b + 1).exact_div(b)


def test_substitutions_compose(rng):
    for j, k in [(1, 3), (2, 2), (3, 5)]:
        a = _random_laurent(rng)
        assert a.substitute_power(j).substitute_power(k) == a.substitute_power(j * k)
        r = RatFun(a, _random_laurent(rng, 2))
        assert r.substitute_power(j).substitute_power(k) == r.substitute_power(j * k)


def test_product_expansion_matches_hand_expansion():
    # (1 - y)(1 - y^2) = 1 - y - y^2 + y^3
    assert product_expand([(1, 1), (2, 1)], 5).coefficient_list() == [1, -1, -1, 1, 0, 0]
    # 1/(1 - y)^2
    assert product_expand([(1, -2)], 4).coefficient_list() == [1, 2, 3, 4, 5]
    # (1 - q)(1 - t) / (1 - qt)
    series = product_expand([((1, 0), 1), ((0, 1), 1), ((1, 1), -1)], 4)
    assert series.coefficient(1, 0) == -1
    assert series.coefficient(1, 1) == 2
    assert series.coefficient(2, 1) == -1
    assert series.coefficient(2, 2) == 2


def test_sine_factors():
    for m in range(1, 6):
        assert sin_factor(-m) == -sin_factor(m)
    assert sin_factor(3).exact_div(sin_factor(1)) == quantum_integer(3)
    assert RatFun(sin_factor(3), sin_factor(1)) == quantum_integer(3)
