"""
Large-degree behaviour of the Gopakumar-Vafa series and of Omega-hat.

Everything here is a truncated power-series comparison in y. The closed-form
series Z_d and Z'_d describe F_d near y = 0; the Betti-number formulas
describe the first coefficients of Omega-hat_d. Each check returns a
TruncatedCheckReport naming the first exponent where the two sides differ.
"""
from __future__ import annotations

import logging
from math import comb

from sheafbetti.errors import DegreeBoundViolated, InvariantViolation
from sheafbetti.engine.exactalg import ZERO, TwoVarSeries, delta, geometric, product_expand, quantum_integer
from sheafbetti.engine.wseries import f_curly
from sheafbetti.models import TruncatedCheckReport, genus

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 40


def _poly(coeffs, order):
    return TwoVarSeries.from_coefficients(coeffs, order)


def _divisor_sum(order):
    """sum_{i >= 1} y^i / (1 - y^i)^2 as the double sum of j y^(ij)."""
    coeffs = [0] * (order + 1)
    for i in range(1, order + 1):
        for j in range(1, order // i + 1):
            coeffs[i * j] += j
    return _poly(coeffs, order)


def _cube_inverse(order):
    return product_expand([(k, -3) for k in range(1, order + 1)], order)


def h_omega_series(order):
    """prod_{k >= 1} 1 / ((1 - y^k) (1 - y^(k+1))^2)."""
    factors = [(k, -1) for k in range(1, order + 1)] + [(k + 1, -2) for k in range(1, order)]
    return product_expand(factors, order)


def h_descendent_series(order):
    """prod_{k >= 1} 1 / ((1 - y^k)^2 (1 - y^(k+1)))."""
    factors = [(k, -2) for k in range(1, order + 1)] + [(k + 1, -1) for k in range(1, order)]
    return product_expand(factors, order)


def z_series(d, order=DEFAULT_ORDER):
    """Z_d = (1 - y)^2 / prod (1 - y^k)^3 * (C(d+2, 2) - 3 sum y^i/(1 - y^i)^2)."""
    if order < 1:
        raise ValueError("truncation order must be at least 1")
    bracket = _poly([comb(d + 2, 2)], order) - _divisor_sum(order) * 3
    return product_expand([(1, 2)], order) * _cube_inverse(order) * bracket


def zprime_series(d, order=DEFAULT_ORDER):
    """Z'_d = (1 - y^3) / prod (1 - y^k)^3 * (C(d+1, 2) - 3 sum y^i/(1 - y^i)^2 - 3 y^3/(1 - y^3))."""
    if order < 1:
        raise ValueError("truncation order must be at least 1")
    bracket = (_poly([comb(d + 1, 2)], order) - _divisor_sum(order) * 3
               - geometric((3,), order).shift(3) * 3)
    return product_expand([(3, 1)], order) * _cube_inverse(order) * bracket


def _series_report(name, d, through, expected, actual, extended=None, notes=None):
    return TruncatedCheckReport.compare(name, d, through, expected.coefficient, actual.coefficient,
                                        extended_order=extended, notes=notes)


def z_difference_check(d, order=DEFAULT_ORDER):
    """(Z_d - Z_(d-3)) / (3d) against the product for Omega-hat."""
    if d < 4:
        raise ValueError("the difference identity is stated for d >= 4")
    left = (z_series(d, order) - z_series(d - 3, order)) / (3 * d)
    return _series_report('z-difference', d, order, h_omega_series(order), left)


def zprime_combination_check(d, order=DEFAULT_ORDER):
    """The combination of Z'_d, Z'_(d-3) and Z_(d-4) against -y^(d-1)(1 + y + y^2) H(y)."""
    if d < 5:
        raise ValueError("the combination identity is stated for d >= 5")
    triangle = _poly([1, 1, 1], order)
    left = (-zprime_series(d, order).shift(d - 1)
            + zprime_series(d - 3, order).shift(d - 4)
            - (triangle * triangle * z_series(d - 4, order)).shift(d - 4)) / (3 * d)
    right = -(triangle * h_descendent_series(order)).shift(d - 1)
    return _series_report('zprime-combination', d, order, right, left)


def _shifted_gv(d, gv, order):
    curly = f_curly(d, gv).shift(2 * genus(d))
    series = TwoVarSeries.from_laurent(curly, order)
    return series if d % 2 else -series


def gv_leading_check(d, gv, order=DEFAULT_ORDER):
    """(-1)^(d-1) y^g F_d against Z_d through y^(d-2), then with 3y^(d-1) Z'_d through y^(2d-5)."""
    order = max(order, 2 * d)
    actual = _shifted_gv(d, gv, order)
    first = _series_report('gv-leading', d, d - 2, z_series(d, order), actual)
    if not first or d < 3:
        return first
    expected = z_series(d, order) - zprime_series(d, order).shift(d - 1) * 3
    return _series_report('gv-leading', d, 2 * d - 5, expected, actual,
                          notes={'first_membership_through': d - 2})


def _q_from_hat(hat):
    return hat.poly.shift(-2 * genus(hat.d))


def _curly_or_zero(d, gv):
    return f_curly(d, gv) if d >= 1 else ZERO


def x_d(d, gv, hats):
    """3d (-1)^(d+1) Q_d - F_d - delta(3(d-3))^2 F_(d-3); bounded by g(d) - d + 4 for d >= 5."""
    sign = 1 if d % 2 else -1
    value = _q_from_hat(hats[d]) * (3 * d * sign) - f_curly(d, gv)
    if d > 3:
        value = value - delta(3 * (d - 3)) ** 2 * _curly_or_zero(d - 3, gv)
    if not value.is_palindromic():
        raise InvariantViolation('X_d is not palindromic', d=d, value=value.to_text())
    if d >= 5 and value.y_degree_bound() > genus(d) - d + 4:
        raise DegreeBoundViolated('X_d exceeds its degree bound', d=d, bound=genus(d) - d + 4,
                                  degree=value.y_degree_bound())
    return value


def y_d(d, gv, hats):
    """X_d + n_(0,1) [3]^2 delta(3(d-4))^2 F_(d-4); bounded by g(d) - 2d + 10 for d >= 6."""
    value = x_d(d, gv, hats)
    if d > 4:
        correction = quantum_integer(3) ** 2 * delta(3 * (d - 4)) ** 2 * f_curly(d - 4, gv)
        value = value + correction * gv.n(0, 1)
    if not value.is_palindromic():
        raise InvariantViolation('Y_d is not palindromic', d=d, value=value.to_text())
    if d >= 6 and value.y_degree_bound() > genus(d) - 2 * d + 10:
        raise DegreeBoundViolated('Y_d exceeds its degree bound', d=d, bound=genus(d) - 2 * d + 10,
                                  degree=value.y_degree_bound())
    return value


def xy_bounds_check(d, gv, hats):
    """Both degree bounds as a report; a violated bound is a failed check here."""
    try:
        x_value = x_d(d, gv, hats)
        y_value = y_d(d, gv, hats)
    except InvariantViolation as exc:
        return TruncatedCheckReport.verdict('xy-bounds', d, False, notes=exc.details)
    return TruncatedCheckReport.verdict('xy-bounds', d, True, notes={
        'x_degree': x_value.y_degree_bound(), 'y_degree': y_value.y_degree_bound()})


def _triangle_tail(d, order):
    """3 y^(d-1) (1 + y + y^2) / (1 - y)."""
    return (_poly([1, 1, 1], order) * geometric((1,), order)).shift(d - 1) * 3


def f_correction(order):
    """(1 + y + y^2)(-2 + 2y + 4y^2 + 2y^3 + y^4 + 2y^5) / ((1 - y)(1 - y^2))."""
    numerator = _poly([1, 1, 1], order) * _poly([-2, 2, 4, 2, 1, 2], order)
    return numerator * geometric((1,), order) * geometric((2,), order)


def leading_series(d, order):
    return h_omega_series(order) * (TwoVarSeries.one(order) - _triangle_tail(d, order))


def second_order_series(d, order):
    inner = TwoVarSeries.one(order) - _triangle_tail(d, order) + f_correction(order).shift(2 * d - 4) * 3
    return h_omega_series(order) * inner


def _hat_series(hat, order):
    return TwoVarSeries.from_laurent(hat.poly, order)


def leading_check(d, hat):
    """Omega-hat_d against the leading formula through y^(2d-11), extended flag through y^(2d-5)."""
    if d < 6:
        raise ValueError("the leading formula is stated for d >= 6")
    order = 2 * d
    return _series_report('leading', d, 2 * d - 11, leading_series(d, order), _hat_series(hat, order),
                          extended=2 * d - 5)


def second_order_check(d, hat):
    """Omega-hat_d against the formula with the f(y) correction through y^(3d-10)."""
    if d < 4:
        raise ValueError("the second-order formula is stated for d >= 4")
    order = 3 * d
    return _series_report('second-order', d, 3 * d - 10, second_order_series(d, order),
                          _hat_series(hat, order))


def low_range_check(d, hat):
    """Omega-hat_d against H_Omega(y) (1 - 3y^(d-1) - 6y^d) through y^d."""
    if d < 5:
        raise ValueError("the low-range formula is stated for d >= 5")
    order = d + 1
    correction = TwoVarSeries.from_monomials([(0, 1), (d - 1, -3), (d, -6)], order)
    return _series_report('low-range', d, d, h_omega_series(order) * correction, _hat_series(hat, order))


def leading_forms_agree(d, order=DEFAULT_ORDER):
    """The leading and second-order right sides share every coefficient below y^(2d-4)."""
    order = max(order, 2 * d)
    return _series_report('leading-forms', d, 2 * d - 5, leading_series(d, order),
                          second_order_series(d, order))
