"""
From Gopakumar-Vafa invariants to shifted Poincare polynomials and back.

For each degree d with x = (y^(1/2) - y^(-1/2))^2 and Q_d = Omega_d / [3d]:

    B_d = RHS(d) - sum_{k | d, k > 1} B_{d/k}(y^k) / k
    3d (-1)^(d+1) Q_d = F_d - x B_d

where RHS(d) is the tree sum (or the functional-equation sum) and
B_j = (F_j - 3j (-1)^(j+1) Q_j) / x is the integral bracket of degree j.
The GV data are treated as untrusted: every expected property of the
output is checked and a violation raises with a structured report.
"""
from __future__ import annotations

import logging
from functools import lru_cache

from sympy import divisors

from sheafbetti.errors import (
    DegreeBoundViolated, InvariantViolation, NegativeCoefficient, NonIntegerGV, NotDivisible,
    RouteMismatch, ImaginaryResidue,
)
from sheafbetti.engine import gfunctional, treesum
from sheafbetti.engine.exactalg import ZERO, HalfLaurent, quantum_integer
from sheafbetti.engine.wseries import X, f_curly, w_series, x_power
from sheafbetti.models import GVTable, OmegaHat, OmegaPoly, TruncatedCheckReport, genus

logger = logging.getLogger(__name__)

RHS_METHODS = ('trees', 'functional', 'both')

# y^2 + y + 1
CYCLOTOMIC_3 = HalfLaurent({0: 1, 2: 1, 4: 1})

__all__ = [
    'f_curly', 'w_series', 'rhs', 'solve_omega', 'solve_all', 'omega_hat', 'omega_from_hat',
    'invert_to_gv', 'integrality_bracket', 'structure_report', 'three_divides_check', 'p_series',
]


def _sign(d):
    # (-1)^(d^2 + 1) == (-1)^(d + 1)
    return 1 if d % 2 else -1


def rhs(d, gv, method='functional'):
    """Right-hand side of the relation at degree d by the chosen route."""
    if method == 'trees':
        return treesum.rhs_tree_sum(d, gv)
    if method == 'functional':
        return gfunctional.rhs_via_g(d, gv)
    if method == 'both':
        by_trees = treesum.rhs_tree_sum(d, gv)
        by_functional = gfunctional.rhs_via_g(d, gv)
        if by_trees != by_functional:
            raise RouteMismatch('Tree and functional routes disagree', d=d,
                                trees=by_trees.to_text(), functional=by_functional.to_text())
        return by_trees
    raise ValueError(f"Unknown RHS method {method!r}; expected one of {RHS_METHODS}")


def _quotient(d, omega):
    """Omega_d / [3d]."""
    return omega.exact_div(quantum_integer(3 * d))


def divisor_bracket(j, gv, omega_j):
    """(F_j - 3j (-1)^(j+1) Omega_j / [3j]) / x for an already validated Omega_j."""
    numerator = f_curly(j, gv) - _quotient(j, omega_j.poly) * (3 * j * _sign(j))
    return numerator.exact_div(X)


def _divisor_terms(d, brackets):
    total = ZERO
    for k in divisors(d)[1:]:
        k = int(k)
        total = total + brackets[d // k].substitute_power(k) / k
    return total


def _check_omega(d, poly):
    if not poly.is_real():
        raise ImaginaryResidue('Omega has an imaginary part', d=d, omega=poly.to_text())
    bad = [(n, c) for n, c in poly.items() if not isinstance(c, int) or c < 0]
    if bad:
        n, c = bad[0]
        raise NegativeCoefficient('Omega has a coefficient that is not a nonnegative integer',
                                  d=d, half_exponent=n, coefficient=str(c))
    if not poly.is_palindromic():
        raise InvariantViolation('Omega is not palindromic', d=d, omega=poly.to_text())
    top = d * d + 1
    if not poly.is_zero() and poly.max_exponent != top:
        raise DegreeBoundViolated('Omega has the wrong top degree', d=d,
                                  expected_half_exponent=top, actual=poly.max_exponent)


def _assemble_omega(d, quotient):
    """Omega_d = [3d] Q_d."""
    return quotient * quantum_integer(3 * d)


def solve_omega(d, gv, known=None, method='functional'):
    """Omega_d from the GV rows through d and the Omega_j of the proper divisors j of d."""
    known = known or {}
    brackets = {}
    for k in divisors(d)[1:]:
        j = d // int(k)
        if j not in known:
            raise ValueError(f"Omega_{j} is needed before Omega_{d}")
        brackets[j] = divisor_bracket(j, gv, known[j])
    bracket = rhs(d, gv, method) - _divisor_terms(d, brackets)
    numerator = f_curly(d, gv) - X * bracket
    quotient = numerator * _sign(d) / (3 * d)
    poly = _assemble_omega(d, quotient)
    if _quotient(d, poly) != quotient:
        raise InvariantViolation('Omega / [3d] does not give back the solved quotient', d=d,
                                 omega=poly.to_text(), quotient=quotient.to_text())
    _check_omega(d, poly)
    logger.info('degree %s solved: Omega(1) = %s', d, poly.at_one())
    return OmegaPoly(d, poly)


@lru_cache(maxsize=None)
def _solve_all(gv, dmax, method):
    omegas = {}
    for d in range(1, dmax + 1):
        omegas[d] = solve_omega(d, gv, omegas, method)
    return tuple(omegas[d] for d in range(1, dmax + 1))


def solve_all(gv, dmax, method='functional'):
    """Omega_1 .. Omega_dmax; a pure function of (gv, dmax)."""
    if dmax < 1:
        raise ValueError("dmax must be at least 1")
    gv.row(dmax)
    return list(_solve_all(gv, dmax, method))


def omega_hat(omega):
    """y^g(d) Omega_d / [3d] as an integer polynomial of degree 2 g(d)."""
    d = omega.d
    hat = _quotient(d, omega.poly).shift(2 * genus(d))
    if not hat.has_integral_exponents() or not hat.has_integer_coefficients():
        raise NotDivisible('Omega-hat is not an integer polynomial', d=d, value=hat.to_text())
    if hat.min_exponent != 0 or hat.coefficient(0) != 1:
        raise InvariantViolation('Omega-hat does not start with 1', d=d, value=hat.to_text())
    return OmegaHat(d, hat)


def omega_from_hat(hat):
    poly = hat.poly.shift(-2 * genus(hat.d)) * quantum_integer(3 * hat.d)
    return OmegaPoly(hat.d, poly)


def p_series(hat):
    """P_d(y) = Omega-hat_d(y) (1 + y + ... + y^(3d-1))."""
    return hat.poly * HalfLaurent({2 * j: 1 for j in range(3 * hat.d)})


def _expand_in_x(d, curly):
    """Coefficients n_g with curly = sum n_g (-1)^g x^g, read from the top y-power down."""
    if not curly.has_integral_exponents() or not curly.is_real():
        raise NonIntegerGV('F_d has half-integral exponents or complex coefficients', d=d,
                           value=curly.to_text())
    top = curly.max_exponent // 2 if not curly.is_zero() else 0
    if top > genus(d):
        raise DegreeBoundViolated('F_d exceeds the genus bound', d=d, top=top, genus=genus(d))
    remainder = curly
    values = [0] * (genus(d) + 1)
    for g in range(top, -1, -1):
        c = remainder.coefficient(2 * g)
        if not isinstance(c, int):
            raise NonIntegerGV(f"n_(g={g}, d={d}) is not an integer", d=d, g=g, value=str(c))
        values[g] = c if g % 2 == 0 else -c
        remainder = remainder - x_power(g) * c
    if not remainder.is_zero():
        raise NonIntegerGV('F_d is not a polynomial in x', d=d, remainder=remainder.to_text())
    return values


def invert_to_gv(hats, method='functional', provenance=''):
    """GV rows through the largest degree from a complete list of Omega-hat rows."""
    hats = {hat.d: hat for hat in hats}
    if not hats:
        raise ValueError("no Omega-hat rows to invert")
    top = max(hats)
    missing = [d for d in range(1, top + 1) if d not in hats]
    if missing:
        raise ValueError(f"Omega-hat rows missing for degrees {missing}")
    gv = GVTable({}, provenance=provenance)
    brackets = {}
    for d in range(1, top + 1):
        quotient = hats[d].poly.shift(-2 * genus(d))
        bracket = rhs(d, gv, method) - _divisor_terms(d, brackets)
        curly = quotient * (3 * d * _sign(d)) + X * bracket
        gv = gv.with_row(d, _expand_in_x(d, curly))
        brackets[d] = bracket
        logger.info('degree %s inverted: n_0 = %s', d, gv.n(0, d))
    return gv


def integrality_bracket(d, gv, omega):
    """True iff (F_d - 3d (-1)^(d+1) Omega_d/[3d]) / x lies in Z[y, 1/y]."""
    try:
        value = divisor_bracket(d, gv, omega)
    except NotDivisible:
        return False
    return value.has_integral_exponents() and value.has_integer_coefficients()


def three_divides_check(hat):
    """y^2 + y + 1 divides Omega-hat_d; only meaningful when 3 | d."""
    divisible = CYCLOTOMIC_3.divides(hat.poly)
    return TruncatedCheckReport.verdict('3d-divisibility', hat.d, divisible,
                                        notes={'applies': hat.d % 3 == 0})


def structure_report(d, gv, omega):
    """Palindromicity, positivity, [3d]-divisibility, the bracket and the Euler characteristic."""
    poly = omega.poly
    notes = {
        'palindromic': poly.is_palindromic(),
        'nonnegative_integer': poly.is_real() and all(
            isinstance(c, int) and c >= 0 for _, c in poly.items()),
        'divisible_by_quantum_3d': quantum_integer(3 * d).divides(poly),
        'bracket_integral': integrality_bracket(d, gv, omega),
    }
    if notes['divisible_by_quantum_3d']:
        hat = omega_hat(omega)
        notes['euler_characteristic'] = poly.at_one() == 3 * d * hat.at_one() == p_series(hat).at_one()
    else:
        notes['euler_characteristic'] = False
    return TruncatedCheckReport.verdict('structure', d, all(notes.values()), notes=notes)

