import os

import pytest

from sheafbetti.commands.datafiles import load_refined
from sheafbetti.engine import refinedhn
from sheafbetti.engine.exactalg import TwoVarSeries, geometric, monomial
from sheafbetti.engine.refinedhn import (
    AdamsExponential, count_descendent_monomials, f_k_extract, f_ref_extract, gmr_degree_series,
    h_desc, h_desc_matches_count, h_ref, h_ref_specializes, hn_sum, hn_types, p_table_from_hats,
    recursion_levels_compatible, refined_divisibility_check, refined_f_specialization_check,
    refined_recursion_check, refined_specialization_check, stack_series, synthesize_refined,
    unrefined_recursion_check,
)
from sheafbetti.errors import InputError, MissingRefinedData, UnsupportedGcd
from sheafbetti.models import HNType, RefinedPolynomial

QT = ('q', 't')
REFINED_DATA = os.path.join(os.path.dirname(__file__), 'data', 'refined_low.json')


def _y(coeffs, order):
    return TwoVarSeries.from_coefficients(coeffs, order)


def _qt(terms, order):
    return TwoVarSeries.from_monomials(terms, order, QT)


@pytest.fixture(scope='module')
def p_table(omega_hats):
    return p_table_from_hats(omega_hats.values())


@pytest.fixture(scope='module')
def pref_table():
    return load_refined(REFINED_DATA)


def test_descendent_monomial_counts():
    assert count_descendent_monomials(3) == [1, 2, 6, 13]
    assert h_desc_matches_count(20)


@pytest.mark.parametrize('d', range(1, 11))
def test_relation_degrees(d):
    assert gmr_degree_series(d, 25)


def test_hn_type_counts():
    assert [len(hn_types(k)) for k in range(3)] == [1, 4, 13]
    assert hn_types(0) == [HNType()]
    with pytest.raises(ValueError):
        hn_types(-1)


def test_hn_slopes_increase_inside_the_window():
    for hn_type in hn_types(4):
        slopes = hn_type.slopes
        assert all(0 <= s < 3 for s in slopes)
        assert all(a < b for a, b in zip(slopes, slopes[1:]))


def test_weights():
    for hn_type in hn_types(4):
        for d in range(hn_type.total_degree + 1, 12):
            assert hn_type.weight(d) == hn_type.weight_incremental(d)
    pair = HNType((1, 1), (0, 1))
    assert pair.weight(7) == 11
    assert pair.weights_refined(7) == (12, 10)
    with pytest.raises(ValueError):
        HNType((1,), ())


def test_coprime_stack_series(p_table):
    order = 15
    stack = stack_series(1, 2, p_table, order)
    assert stack.series == _y([1, 1, 1], order) * geometric((1,), order)


def test_gcd_two_stack_series(p_table):
    order = 30
    numerator = _y([1, 1, 1], order) * _y([1, 0, 1, 1, 1, -1], order)
    expected = numerator * geometric((1,), order) * geometric((2,), order)
    assert stack_series(2, 0, p_table, order).series == expected
    assert stack_series(2, 4, p_table, order).series == expected


def test_gcd_three_needs_a_convention(p_table):
    with pytest.raises(UnsupportedGcd):
        stack_series(3, 3, p_table, 10)
    stack = stack_series(3, 3, p_table, 10, convention=AdamsExponential())
    assert stack.series.constant_term() == 1


def test_missing_polynomial(p_table):
    with pytest.raises(InputError):
        stack_series(1, 0, {}, 10)
    with pytest.raises(MissingRefinedData):
        stack_series(1, 0, {}, 10, refined=True)


@pytest.mark.parametrize('d', range(3, 11))
def test_first_recursion(d, p_table):
    assert unrefined_recursion_check(d, 1, p_table)


@pytest.mark.parametrize('d', [7, 8])
def test_second_recursion(d, p_table):
    report = unrefined_recursion_check(d, 2, p_table)
    assert report
    assert report.order == 3 * (d - 3) - 1


@pytest.mark.slow
@pytest.mark.parametrize('d', [9, 10])
def test_second_recursion_in_higher_degree(d, p_table):
    assert unrefined_recursion_check(d, 2, p_table)


def test_recursion_needs_room(p_table):
    with pytest.raises(ValueError):
        unrefined_recursion_check(3, 2, p_table)
    with pytest.raises(ValueError):
        hn_sum(2, 2, p_table, 5)


def test_recursion_levels(p_table):
    assert recursion_levels_compatible(8, 2, p_table)
    assert recursion_levels_compatible(6, 1, p_table)


def test_recursion_detects_a_bad_polynomial(p_table):
    bad = dict(p_table)
    bad[7] = p_table[7] + monomial(6)
    report = unrefined_recursion_check(7, 1, bad)
    assert not report
    assert report.mismatch_exponent == 3


def test_f_one(p_table):
    order = 20
    expected = -(_y([3, 3, 3], order) * geometric((1,), order))
    assert f_k_extract(1, p_table, order) == expected


def test_f_three(p_table):
    order = 20
    numerator = _y([9, 18, 0, -44, -82, -37, 56, 143, 170, 164, 125, 89, 55, 36, 18, 9], order)
    expected = -(numerator * geometric((1,), order) * geometric((2,), order) * geometric((3,), order))
    assert f_k_extract(3, p_table, order, AdamsExponential()) == expected


def test_refined_product_specializes():
    assert h_ref_specializes(15)
    assert h_ref(6).coefficient(0, 2) == 1
    assert h_ref(6).coefficient(1, 1) == 0


def test_refined_gcd_two_stack_series(pref_table):
    order = 20
    triangle = _qt([((0, 0), 1), ((0, 2), 1), ((0, 4), 1)], order)
    numerator = _qt([((0, 0), 1), ((1, 3), 1), ((0, 6), 1), ((2, 6), 1), ((2, 8), -1)], order)
    expected = triangle * numerator * geometric((1, 1), order, QT) * geometric((2, 2), order, QT)
    assert stack_series(2, 0, pref_table, order, refined=True).series == expected


def test_refined_f_one(pref_table):
    order = 16
    triangle = _qt([((0, 0), 1), ((0, 2), 1), ((0, 4), 1)], order)
    weights = _qt([((2, 0), 1), ((1, 1), 1), ((0, 2), 1)], order)
    expected = -(weights * triangle * geometric((1, 1), order, QT))
    assert f_ref_extract(1, pref_table, order) == expected


def test_refined_f_two(pref_table):
    order = 20
    triangle = _qt([((0, 0), 1), ((0, 2), 1), ((0, 4), 1)], order)
    weights = _qt([((2, 0), 1), ((1, 1), 1), ((0, 2), 1)], order)
    second = _qt([
        ((3, 0), 1), ((0, 3), 1), ((3, 2), -1), ((1, 4), -1), ((5, 2), -1), ((3, 4), -1),
        ((2, 5), -2), ((4, 5), -1), ((2, 7), -1), ((1, 8), -1), ((3, 8), -1), ((5, 8), -1),
        ((0, 9), 1), ((2, 11), -1),
    ], order)
    poles = geometric((1, 1), order, QT) * geometric((2, 2), order, QT)
    assert f_ref_extract(2, pref_table, order) == -(weights * triangle * second * poles)


@pytest.mark.parametrize('k', [1, 2])
def test_refined_f_specializes(k, pref_table, p_table):
    assert refined_f_specialization_check(k, pref_table, p_table, 10)


def test_refined_data_specializes(pref_table, omega_hats):
    for d, pref in pref_table.items():
        assert refined_specialization_check(pref, omega_hats[d])
    with pytest.raises(ValueError):
        refined_specialization_check(pref_table[1], omega_hats[2])


def test_refined_divisibility(pref_table):
    for pref in pref_table.values():
        report = refined_divisibility_check(pref)
        assert report
        assert report.notes['expected']
    lone = RefinedPolynomial.from_terms(3, [(0, 0, 1), (1, 1, 1)])
    report = refined_divisibility_check(lone)
    assert not report
    assert not report.notes['expected']


def test_refined_recursion_lowest_level(pref_table):
    assert refined_recursion_check(2, 0, pref_table)


@pytest.fixture(scope='module')
def synthetic_table(pref_table):
    order = 20
    return {
        1: pref_table[1],
        5: synthesize_refined(5, 1, pref_table, order),
        6: synthesize_refined(6, 1, pref_table, order),
    }


def test_refined_recursion_on_synthetic_data(synthetic_table):
    report = refined_recursion_check(6, 1, synthetic_table)
    assert report
    assert report.notes['t_shift'] == 0


def test_refined_recursion_locates_a_bad_monomial(synthetic_table):
    table = dict(synthetic_table)
    table[6] = table[6] + _qt([((2, 3), 1)], 20)
    report = refined_recursion_check(6, 1, table)
    assert not report
    assert report.mismatch_exponent == 5
    assert report.notes['monomial'] == 'q^2 t^3'


def test_refined_recursion_needs_every_degree(pref_table):
    with pytest.raises(MissingRefinedData):
        refined_recursion_check(4, 1, pref_table)


def test_synthesis_needs_room(pref_table):
    with pytest.raises(ValueError):
        synthesize_refined(2, 1, pref_table, 10)
    assert refinedhn.synthesize_refined(4, 1, pref_table, 6).constant_term() == 1
