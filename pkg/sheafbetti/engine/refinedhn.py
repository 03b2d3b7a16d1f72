"""
Harder-Narasimhan recursions for the Poincare polynomials P_d(y).

P_d(y) = Omega-hat_d(y) (1 + y + ... + y^(3d-1)) is the ordinary Poincare
polynomial of the moduli space. Summing y^s(d) P_(d_0) times stack series
over Harder-Narasimhan types should reproduce the descendent series H(y) in
a range growing with the number of degrees allowed in the type. The refined
variant does the same with perverse-refined polynomials in (q, t).
"""
from __future__ import annotations

import logging
from fractions import Fraction
from math import factorial, gcd

from sheafbetti.errors import InputError, MissingRefinedData, UnsupportedGcd
from sheafbetti.engine.asymptotics import h_descendent_series
from sheafbetti.engine.exactalg import HalfLaurent, TwoVarSeries, geometric, product_expand
from sheafbetti.engine.solver import p_series
from sheafbetti.models import HNType, RefinedPolynomial, StackSeries, TruncatedCheckReport

logger = logging.getLogger(__name__)

SLOPE_CEILING = 3
Y = ('y',)
QT = ('q', 't')

# t^4 + t^2 + 1 with t-exponents stored as keys
T_TRIANGLE = HalfLaurent({0: 1, 2: 1, 4: 1})


# Descendent algebra


def h_desc(order):
    """prod_{k >= 1} 1 / ((1 - y^k)^2 (1 - y^(k+1)))."""
    return h_descendent_series(order)


def descendent_generator_degrees(order):
    """Degrees of the free generators: two in degree 1, three in each degree >= 2."""
    return [1, 1] + [degree for degree in range(2, order + 1) for _ in range(3)]


def count_descendent_monomials(order):
    """Number of monomials of each degree in the generators, by direct counting."""
    counts = [1] + [0] * order
    for degree in descendent_generator_degrees(order):
        for total in range(degree, order + 1):
            counts[total] += counts[total - degree]
    return counts


def h_desc_matches_count(order):
    series = h_desc(order)
    counts = count_descendent_monomials(order)
    return TruncatedCheckReport.compare('descendent-count', 0, order, counts.__getitem__,
                                        series.coefficient)


def gmr_degree_series(d, order):
    """Degrees of the relations with d' = 1, summed directly and in closed form."""
    if d < 1:
        raise ValueError("d must be positive")
    direct = {}
    for k in range(d + 1, order + 3):
        for _ in range(3):
            for i in range(3):
                exponent = k - 2 + i
                if exponent <= order:
                    direct[(exponent,)] = direct.get((exponent,), 0) + 1
    direct = TwoVarSeries(direct, order)
    closed = (TwoVarSeries.from_coefficients([1, 1, 1], order) * geometric((1,), order)).shift(d - 1) * 3
    return TruncatedCheckReport.compare('gmr-degrees', d, order, closed.coefficient, direct.coefficient)


# Harder-Narasimhan types


def _extend_types(budget, floor, strict):
    yield (), ()
    for degree in range(1, budget + 1):
        for chi in range(0, SLOPE_CEILING * degree):
            slope = Fraction(chi, degree)
            if slope < floor or (strict and slope == floor):
                continue
            for ds, chis in _extend_types(budget - degree, slope, True):
                yield (degree,) + ds, (chi,) + chis


def hn_types(k):
    """Every type with total degree <= k and slopes strictly increasing in [0, 3)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    types = {HNType(ds, chis) for ds, chis in _extend_types(k, Fraction(0), False)}
    return sorted(types, key=lambda t: (t.total_degree, len(t.ds), t.ds, t.chis))


# Stack series


def _as_series(value, order, variables):
    if isinstance(value, TwoVarSeries):
        return value.truncate(order)
    if isinstance(value, RefinedPolynomial):
        return value.series(order)
    if variables == QT:
        raise TypeError(f"cannot read {value!r} as a refined series")
    return TwoVarSeries.from_laurent(HalfLaurent.coerce(value), order)


def _ray_multisets(g):
    """Multisets {(n, j): m} with sum n j m = g, as tuples of (n, j, m)."""
    pairs = [(n, j) for n in range(1, g + 1) for j in range(1, g // n + 1)]

    def extend(index, remaining):
        if remaining == 0:
            yield ()
            return
        if index == len(pairs):
            return
        n, j = pairs[index]
        for m in range(remaining // (n * j), -1, -1):
            for rest in extend(index + 1, remaining - m * n * j):
                yield ((n, j, m),) + rest if m else rest

    return list(extend(0, g))


class AdamsExponential:
    """Stack series of a ray through the plethystic exponential with signed Adams operations.

    With A_e = P_e / (1 - y) the series of (d, chi), g = gcd(d, chi), e = d/g,
    is the sum over multisets {(n, j)^m} with sum n j m = g of
    prod (sigma psi_n(A_(je)) / n)^m / m! times y^(e^2 (g^2 - sum n j^2 m) / 2),
    sigma = (-1)^((n + 1)(je)^2). Refined series use qt in place of y.
    """

    def __call__(self, d, chi, p_table, order, refined=False):
        variables = QT if refined else Y
        g = gcd(d, chi)
        e = d // g
        pole = geometric((1, 1) if refined else (1,), order, variables)
        total = TwoVarSeries({}, order, variables)
        for multiset in _ray_multisets(g):
            term = TwoVarSeries.one(order, variables)
            weight = g * g
            for n, j, m in multiset:
                base = _lookup(p_table, j * e, refined, order, variables) * pole
                sign = -1 if ((n + 1) * (j * e) ** 2) % 2 else 1
                factor = base.substitute_power(n).truncate(order) * Fraction(sign, n)
                term = term * factor ** m / factorial(m)
                weight -= n * j * j * m
            shift = e * e * weight // 2
            total = total + term.shift((shift, shift) if refined else (shift,))
        return total


BUILTIN_CONVENTION = AdamsExponential()


def _lookup(p_table, d, refined, order, variables):
    if d not in p_table:
        if refined:
            raise MissingRefinedData(d)
        raise InputError(f"No Poincare polynomial for degree {d}", d=d)
    return _as_series(p_table[d], order, variables)


def stack_series(d, chi, p_table, order, convention=None, refined=False):
    """Poincare series of the stack of semistable sheaves of type (d, chi)."""
    g = gcd(d, chi)
    if g > 2 and convention is None:
        raise UnsupportedGcd(d, chi)
    convention = convention or BUILTIN_CONVENTION
    return StackSeries(d, chi, convention(d, chi, p_table, order, refined=refined))


class _StackCache:
    """Stack series keyed by (d, gcd), the only data they depend on."""

    def __init__(self, p_table, order, convention, refined):
        self.p_table, self.order = p_table, order
        self.convention, self.refined = convention, refined
        self._cache = {}

    def __call__(self, d, chi):
        key = (d, gcd(d, chi))
        if key not in self._cache:
            self._cache[key] = stack_series(d, chi, self.p_table, self.order, self.convention,
                                            self.refined).series
        return self._cache[key]


def p_table_from_hats(hats):
    """{d: P_d} from Omega-hat rows."""
    return {hat.d: p_series(hat) for hat in hats}


# Unrefined recursion


def _stack_product(hn_type, stacks, order, variables):
    product = TwoVarSeries.one(order, variables)
    for degree, chi in zip(hn_type.ds, hn_type.chis):
        product = product * stacks(degree, chi)
    return product


def hn_sum(d, k, p_table, order, convention=None):
    """sum over types in HN_k of y^s P_(d_0) prod of stack series."""
    stacks = _StackCache(p_table, order, convention, False)
    total = TwoVarSeries({}, order)
    for hn_type in hn_types(k):
        d0 = d - hn_type.total_degree
        if d0 < 1:
            raise ValueError(f"degree {d} is too small for types of degree {hn_type.total_degree}")
        s = hn_type.weight(d)
        if s > order:
            continue
        term = _lookup(p_table, d0, False, order, Y) * _stack_product(hn_type, stacks, order, Y)
        total = total + term.shift((s,))
    return total


def unrefined_recursion_check(d, k, p_table, convention=None):
    """The HN_k sum against H(y) below y^((k+1)(d-k-1))."""
    if d <= k + 1:
        raise ValueError("the recursion is stated for d > k + 1")
    bound = (k + 1) * (d - k - 1)
    order = bound
    left = hn_sum(d, k, p_table, order, convention)
    logger.debug('HN_%s sum at degree %s computed through y^%s', k, d, bound - 1)
    return TruncatedCheckReport.compare('recursion', d, bound - 1, h_desc(order).coefficient,
                                        left.coefficient, notes={'k': k})


def recursion_levels_compatible(d, k, p_table, convention=None):
    """Types of degree exactly k only contribute from y^(k(d-k)) on."""
    if k < 1 or d <= k:
        raise ValueError("need 1 <= k < d")
    order = k * (d - k)
    upper = hn_sum(d, k, p_table, order, convention)
    lower = hn_sum(d, k - 1, p_table, order, convention)
    return TruncatedCheckReport.compare('recursion-levels', d, order - 1, lower.coefficient,
                                        upper.coefficient, notes={'k': k})


def f_k_extract(k, p_table, order, convention=None):
    """f_k with f_0 = 1 and f_T = -sum y^(D j + s_int) prod stack series f_j, j = T - D."""
    stacks = _StackCache(p_table, order, convention, False)
    fs = [TwoVarSeries.one(order)]
    types = [t for t in hn_types(k) if t.ds]
    for target in range(1, k + 1):
        total = TwoVarSeries({}, order)
        for hn_type in types:
            degree = hn_type.total_degree
            if degree > target:
                continue
            j = target - degree
            shift = degree * j + hn_type.interior_weight()
            if shift > order:
                continue
            term = _stack_product(hn_type, stacks, order, Y) * fs[j]
            total = total + term.shift((shift,))
        fs.append(-total)
    return fs[k]


# Refined


def h_ref(order):
    """prod_{k > 0} 1 / ((1 - q^(k-1) t^(k+1)) (1 - q^(k+1) t^(k-1)) (1 - q^(k+1) t^(k+1)))."""
    factors = []
    for k in range(1, order + 1):
        factors += [((k - 1, k + 1), -1), ((k + 1, k - 1), -1), ((k + 1, k + 1), -1)]
    return product_expand(factors, order, QT)


def h_ref_specializes(order):
    """H^ref(s, s) against H(s^2) in the variable s = y^(1/2)."""
    left = h_ref(2 * order).specialize_diagonal()
    right = h_desc(order).to_half_units()
    return TruncatedCheckReport.compare('href-diagonal', 0, 2 * order, right.coefficient,
                                        left.coefficient)


def f_ref_extract(k, pref_table, order, convention=None):
    """f^ref_k; the j = 0 terms carry t^(3D - 1), the others t^(3D)."""
    stacks = _StackCache(pref_table, order, convention, True)
    fs = [TwoVarSeries.one(order, QT)]
    types = [t for t in hn_types(k) if t.ds]
    for target in range(1, k + 1):
        total = TwoVarSeries({}, order, QT)
        for hn_type in types:
            degree = hn_type.total_degree
            if degree > target:
                continue
            j = target - degree
            base = degree * j + hn_type.interior_weight()
            chi = hn_type.chi_sum
            q_power = base + chi
            t_power = base + 3 * degree - 1 + (1 if j else 0) - chi
            if q_power + t_power > order:
                continue
            term = _stack_product(hn_type, stacks, order, QT) * fs[j]
            total = total + term.shift((q_power, t_power))
        fs.append(-total)
    return fs[k]


def refined_f_specialization_check(k, pref_table, p_table, order, convention=None):
    """f^ref_k(s, s) = s^(3k - 1) f_k(s^2) for k >= 1."""
    if k < 1:
        raise ValueError("k must be positive")
    refined = f_ref_extract(k, pref_table, 2 * order, convention).specialize_diagonal()
    plain = f_k_extract(k, p_table, order, convention).to_half_units().shift((3 * k - 1,))
    through = 2 * order
    return TruncatedCheckReport.compare('refined-f', k, through, plain.coefficient, refined.coefficient)


def _first_monomial_mismatch(expected, actual, through):
    for total in range(through + 1):
        for a in range(total, -1, -1):
            if expected.coefficient(a, total - a) != actual.coefficient(a, total - a):
                return total, (a, total - a)
    return None


def refined_hn_sum(d, k, pref_table, order, shift, convention=None):
    """sum q^(s+) t^(s- + shift) P^ref_(d_0) prod of refined stack series."""
    stacks = _StackCache(pref_table, order, convention, True)
    total = TwoVarSeries({}, order, QT)
    for hn_type in hn_types(k):
        s_plus, s_minus = hn_type.weights_refined(d)
        if s_plus + s_minus + shift > order:
            continue
        d0 = d - hn_type.total_degree
        term = _lookup(pref_table, d0, True, order, QT) * _stack_product(hn_type, stacks, order, QT)
        total = total + term.shift((s_plus, s_minus + shift))
    return total


def refined_recursion_check(d, k, pref_table, convention=None):
    """The refined HN_k sum against H^ref below total degree 2(k+1)(d-k-1).

    A type can carry a negative t-weight, so both sides are multiplied by
    t^shift first and the truncation moves up by the same amount.
    """
    if d <= k + 1:
        raise ValueError("the recursion is stated for d > k + 1")
    bound = 2 * (k + 1) * (d - k - 1)
    shift = max([0] + [-t.weights_refined(d)[1] for t in hn_types(k)])
    order = bound + shift
    left = refined_hn_sum(d, k, pref_table, order, shift, convention)
    right = h_ref(order).shift((0, shift))
    mismatch = _first_monomial_mismatch(right, left, order - 1)
    notes = {'k': k, 't_shift': shift}
    if mismatch is None:
        return TruncatedCheckReport(
            'refined', d, bound - 1, True, notes=notes)
    total, (a, b) = mismatch
    notes['monomial'] = f"q^{a} t^{b - shift}"
    return TruncatedCheckReport('refined', d, bound - 1, False, total - shift,
                                right.coefficient(a, b), left.coefficient(a, b), notes=notes)


def refined_specialization_check(pref, hat):
    """P^ref_d(y^(1/2), y^(1/2)) equals P_d(y) built from Omega-hat_d."""
    if pref.d != hat.d:
        raise ValueError("refined and unrefined data for different degrees")
    specialized = pref.specialize()
    expected = p_series(hat)
    return TruncatedCheckReport.verdict('refined-specialization', pref.d, specialized == expected,
                                        notes={'expected': expected.to_text(),
                                               'actual': specialized.to_text()})


def refined_divisibility_check(pref):
    """t^4 + t^2 + 1 divides P^ref_d; expected when 3 does not divide d."""
    divisible = True
    for a, row in sorted(pref.as_t_polynomial().items()):
        if not T_TRIANGLE.divides(HalfLaurent(row)):
            divisible = False
            break
    return TruncatedCheckReport.verdict('refined-divisibility', pref.d, divisible,
                                        notes={'expected': pref.d % 3 != 0})


def synthesize_refined(d, k, pref_table, order, convention=None):
    """H^ref (sum_{j <= k} q^(j(d-j)) t^(j(d-j-3) + [j > 0]) f^ref_j) as a truncated series."""
    total = TwoVarSeries.one(order, QT)
    for j in range(1, k + 1):
        t_power = j * (d - j - 3) + 1
        if t_power < 0:
            raise ValueError(f"degree {d} too small for the order-{j} refined term")
        total = total + f_ref_extract(j, pref_table, order, convention).shift((j * (d - j), t_power))
    return h_ref(order) * total


__all__ = [
    'AdamsExponential', 'count_descendent_monomials', 'f_k_extract', 'f_ref_extract', 'gmr_degree_series',
    'h_desc', 'h_ref', 'hn_sum', 'hn_types', 'p_table_from_hats', 'recursion_levels_compatible',
    'refined_divisibility_check', 'refined_recursion_check', 'refined_specialization_check',
    'stack_series', 'synthesize_refined', 'unrefined_recursion_check',
]