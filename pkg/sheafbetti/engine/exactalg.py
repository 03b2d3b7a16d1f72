"""
Exact arithmetic used everywhere else in the engine.

Coefficients live in Q(i). Real coefficients are stored as plain ``int`` or
``Fraction`` and only values with a nonzero imaginary part become
``GaussRat``; the canonical form of a coefficient is therefore unique and
dictionary equality is value equality.

Laurent polynomials store exponents in half-units: the key ``n`` stands for
y^(n/2).
"""
from __future__ import annotations

import logging
from collections import Counter
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sheafbetti.errors import NotDivisible

logger = logging.getLogger(__name__)


def _rational(value):
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    raise TypeError(f"Expected an exact rational, got {value!r}")


def _canon(value):
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, GaussRat):
        if value.im == 0:
            return value.re
        return value
    raise TypeError(f"Unsupported coefficient {value!r}")


class GaussRat:
    """Gaussian rational re + im*i with exact rational parts."""

    __slots__ = ('re', 'im')

    def __init__(self, re=0, im=0):
        self.re = _rational(re)
        self.im = _rational(im)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, GaussRat):
            return value
        return cls(value, 0)

    def __add__(self, other):
        if isinstance(other, GaussRat):
            return GaussRat(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, (GaussRat, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussRat):
            return GaussRat(self.re * other.re - self.im * other.im,
                            self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        if isinstance(other, GaussRat):
            norm = other.norm()
            if norm == 0:
                raise ZeroDivisionError("division by zero Gaussian rational")
            product = self * other.conjugate()
            return GaussRat(Fraction(product.re) / norm, Fraction(product.im) / norm)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return GaussRat(Fraction(self.re) / other, Fraction(self.im) / other)
        return NotImplemented

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self):
        return format_coefficient(self)


I = GaussRat(0, 1)


def _cdiv(a, b):
    if isinstance(a, GaussRat) or isinstance(b, GaussRat):
        return _canon(GaussRat.coerce(a) / b)
    return _canon(Fraction(a) / b)


def format_coefficient(value):
    """Decimal-string form used by every serializer: 7, -3/2, 1/2+3i."""
    value = _canon(value)
    if isinstance(value, GaussRat):
        re = format_coefficient(value.re)
        im = value.im
        sign = '-' if im < 0 else '+'
        im_text = format_coefficient(abs(im))
        im_text = '' if im_text == '1' else im_text
        if value.re == 0:
            return f"{'-' if im < 0 else ''}{im_text}i"
        return f"{re}{sign}{im_text}i"
    return str(value)


def parse_coefficient(text):
    """Inverse of ``format_coefficient`` for real values."""
    value = Fraction(str(text).strip())
    return _canon(value)


class HalfLaurent:
    """Laurent polynomial in y^(1/2) with coefficients in Q(i)."""

    __slots__ = ('_terms', '_hash')

    def __init__(self, terms: Mapping[int, object] | None = None):
        cleaned = {}
        if terms:
            for exponent, coefficient in dict(terms).items():
                coefficient = _canon(coefficient)
                if coefficient != 0:
                    cleaned[int(exponent)] = coefficient
        self._terms = cleaned
        self._hash = None

    @classmethod
    def _wrap(cls, terms):
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value):
        if isinstance(value, HalfLaurent):
            return value
        if isinstance(value, (int, Fraction, GaussRat)):
            return cls({0: value})
        raise TypeError(f"Cannot use {value!r} as a Laurent polynomial")

    # Inspection

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, half_exponent):
        return self._terms.get(half_exponent, 0)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or set(self._terms) == {0}

    @property
    def min_exponent(self):
        return min(self._terms) if self._terms else 0

    @property
    def max_exponent(self):
        return max(self._terms) if self._terms else 0

    def span(self):
        return self.max_exponent - self.min_exponent

    def is_real(self):
        return not any(isinstance(c, GaussRat) for c in self._terms.values())

    def is_imaginary(self):
        return all(isinstance(c, GaussRat) and c.re == 0 for c in self._terms.values())

    def has_integral_exponents(self):
        return all(n % 2 == 0 for n in self._terms)

    def has_integer_coefficients(self):
        return all(isinstance(c, int) for c in self._terms.values())

    def is_palindromic(self):
        return self == self.invert_variable()

    def at_one(self):
        """Value at y = 1."""
        total = 0
        for coefficient in self._terms.values():
            total = total + coefficient
        return _canon(total)

    def y_degree_bound(self):
        """max |exponent| measured in powers of y."""
        if not self._terms:
            return Fraction(0)
        return _rational(Fraction(max(abs(n) for n in self._terms), 2))

    def y_coefficients(self):
        """(lowest y-power, ascending coefficient list) for integral exponents."""
        if not self.has_integral_exponents():
            raise ValueError("half-integral exponents present")
        if not self._terms:
            return 0, []
        low, high = self.min_exponent, self.max_exponent
        return low // 2, [self._terms.get(n, 0) for n in range(low, high + 1, 2)]

    # Ring structure

    def __add__(self, other):
        if not isinstance(other, HalfLaurent):
            if isinstance(other, (int, Fraction, GaussRat)):
                other = HalfLaurent.coerce(other)
            else:
                return NotImplemented
        terms = dict(self._terms)
        for n, c in other._terms.items():
            value = _canon(terms.get(n, 0) + c)
            if value == 0:
                terms.pop(n, None)
            else:
                terms[n] = value
        return HalfLaurent._wrap(terms)

    __radd__ = __add__

    def __neg__(self):
        return HalfLaurent._wrap({n: _canon(-c) for n, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (HalfLaurent, int, Fraction, GaussRat)):
            return NotImplemented
        return self + (-HalfLaurent.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            other = _canon(other)
            if other == 0:
                return ZERO
            return HalfLaurent._wrap({n: _canon(c * other) for n, c in self._terms.items()})
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        if len(self._terms) > len(other._terms):
            left, right = self._terms, other._terms
        else:
            left, right = other._terms, self._terms
        out = {}
        for n2, c2 in right.items():
            for n1, c1 in left.items():
                key = n1 + n2
                out[key] = out.get(key, 0) + c1 * c2
        return HalfLaurent._wrap({n: v for n, v in ((n, _canon(c)) for n, c in out.items()) if v != 0})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return HalfLaurent._wrap({n: _cdiv(c, other) for n, c in self._terms.items()})
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, HalfLaurent):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussRat)):
            return self._terms == HalfLaurent.coerce(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # Substitutions

    def shift(self, half_units):
        """Multiply by y^(half_units/2)."""
        return HalfLaurent._wrap({n + half_units: c for n, c in self._terms.items()})

    def substitute_power(self, k):
        if k < 1:
            raise ValueError("substitution power must be positive")
        return HalfLaurent._wrap({n * k: c for n, c in self._terms.items()})

    def invert_variable(self):
        """y -> 1/y."""
        return HalfLaurent._wrap({-n: c for n, c in self._terms.items()})

    def real_part(self):
        return HalfLaurent({n: (c.re if isinstance(c, GaussRat) else c)
                            for n, c in self._terms.items()})

    def exact_div(self, divisor):
        """Quotient q with self == q * divisor, or NotDivisible."""
        divisor = HalfLaurent.coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return ZERO
        if len(divisor._terms) == 1:
            (n, c), = divisor._terms.items()
            return HalfLaurent._wrap({m - n: _cdiv(v, c) for m, v in self._terms.items()})
        top = divisor.max_exponent
        lead = divisor._terms[top]
        width = divisor.span()
        remainder = dict(self._terms)
        quotient = {}
        while remainder:
            high = max(remainder)
            if high - min(remainder) < width:
                raise NotDivisible(
                    'Laurent division leaves a remainder',
                    dividend=self.to_text(), divisor=divisor.to_text(),
                    remainder=HalfLaurent(remainder).to_text())
            offset = high - top
            factor = _cdiv(remainder[high], lead)
            quotient[offset] = factor
            for n, c in divisor._terms.items():
                key = n + offset
                value = _canon(remainder.get(key, 0) - factor * c)
                if value == 0:
                    remainder.pop(key, None)
                else:
                    remainder[key] = value
        return HalfLaurent(quotient)

    def divides(self, other):
        try:
            HalfLaurent.coerce(other).exact_div(self)
        except NotDivisible:
            return False
        return True

    # Presentation

    def to_text(self):
        if not self._terms:
            return '0'
        pieces = []
        for n, c in self.items():
            coefficient = format_coefficient(c)
            if n == 0:
                pieces.append(coefficient)
                continue
            power = str(n // 2) if n % 2 == 0 else f"{n}/2"
            monomial = 'y' if power == '1' else f"y^{power}"
            if coefficient == '1':
                pieces.append(monomial)
            elif coefficient == '-1':
                pieces.append(f"-{monomial}")
            else:
                pieces.append(f"({coefficient})*{monomial}" if '/' in coefficient or 'i' in coefficient
                              else f"{coefficient}*{monomial}")
        return ' + '.join(pieces).replace('+ -', '- ')

    def to_dict(self):
        return {
            'half_exponents': [n for n, _ in self.items()],
            'coeffs': [format_coefficient(c) for _, c in self.items()],
        }

    def __repr__(self):
        return f"HalfLaurent({self.to_text()})"


ZERO = HalfLaurent()
ONE = HalfLaurent({0: 1})
Y = HalfLaurent({2: 1})


def monomial(half_exponent, coefficient=1):
    return HalfLaurent({half_exponent: coefficient})


def from_y_coefficients(coeffs: Sequence, lowest=0):
    """Ascending coefficient list starting at y^lowest."""
    return HalfLaurent({2 * (lowest + i): c for i, c in enumerate(coeffs)})


def substitute_power(a, k):
    return HalfLaurent.coerce(a).substitute_power(k)


def exact_div(a, b):
    return HalfLaurent.coerce(a).exact_div(b)


def is_palindromic(a):
    return HalfLaurent.coerce(a).is_palindromic()


def delta(m):
    """y^(m/2) - y^(-m/2)."""
    if m == 0:
        return ZERO
    return HalfLaurent({m: 1, -m: -1})


def sin_factor(m):
    """The image of 2 sin(m*hbar/2) under y = e^(i*hbar); sin_factor(m) * i == delta(m)."""
    if m == 0:
        raise ValueError("sin_factor is undefined at m = 0")
    return HalfLaurent({m: GaussRat(0, -1), -m: GaussRat(0, 1)})


def quantum_integer(m):
    if m < 1:
        raise ValueError("quantum integers are defined for m >= 1")
    return HalfLaurent({m - 1 - 2 * j: 1 for j in range(m)})


# Rational functions


def _dense(poly):
    low = poly.min_exponent
    return [poly.coefficient(n) for n in range(low, poly.max_exponent + 1)]


def _trim(coeffs):
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _dense_remainder(a, b):
    a = list(a)
    lead = b[-1]
    top = len(b) - 1
    while len(a) > top and a:
        factor = _cdiv(a[-1], lead)
        offset = len(a) - 1 - top
        for i, c in enumerate(b):
            a[offset + i] = _canon(a[offset + i] - factor * c)
        _trim(a)
    return a


def poly_gcd(a: HalfLaurent, b: HalfLaurent) -> HalfLaurent:
    """Monic gcd in Q(i)[y^(1/2)] after removing monomial factors."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if len(a._terms) == 1 or len(b._terms) == 1:
        return ONE
    left, right = _trim(_dense(a)), _trim(_dense(b))
    if len(left) < len(right):
        left, right = right, left
    while right:
        left, right = right, _dense_remainder(left, right)
    lead = left[-1]
    return HalfLaurent({i: _cdiv(c, lead) for i, c in enumerate(left)})


class RatFun:
    """Reduced quotient num/den of Laurent polynomials.

    Canonical form: gcd(num, den) = 1, the denominator's exponents are
    centered around zero and its lowest coefficient is 1.
    """

    __slots__ = ('num', 'den')

    def __init__(self, num, den=None):
        num = HalfLaurent.coerce(num)
        den = ONE if den is None else HalfLaurent.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        common = poly_gcd(num, den)
        if not common.is_constant():
            num = num.exact_div(common)
            den = den.exact_div(common)
        offset = -(den.span() // 2) - den.min_exponent
        num, den = num.shift(offset), den.shift(offset)
        lead = den.coefficient(den.min_exponent)
        if lead != 1:
            num, den = num / lead, den / lead
        self.num, self.den = num, den

    @classmethod
    def coerce(cls, value):
        if isinstance(value, RatFun):
            return value
        return cls(value)

    def is_polynomial(self):
        return self.den == ONE

    def as_laurent(self):
        return self.num if self.is_polynomial() else None

    def is_real(self):
        return self.num.is_real() and self.den.is_real()

    def __add__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(RatFun)
        obj.num, obj.den = -self.num, self.den
        return obj

    def __sub__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            if _canon(other) == 0:
                return RatFun(ZERO)
            obj = object.__new__(RatFun)
            obj.num, obj.den = self.num * other, self.den
            return obj
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self * _cdiv(1, other)
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFun.coerce(other) / self

    def __pow__(self, exponent):
        return RatFun(self.num ** exponent, self.den ** exponent)

    def __eq__(self, other):
        if isinstance(other, (HalfLaurent, int, Fraction, GaussRat)):
            other = RatFun(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def substitute_power(self, k):
        return RatFun(self.num.substitute_power(k), self.den.substitute_power(k))

    def invert_variable(self):
        return RatFun(self.num.invert_variable(), self.den.invert_variable())

    def to_text(self):
        if self.is_polynomial():
            return self.num.to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __repr__(self):
        return f"RatFun({self.to_text()})"


# Truncated power series


class TwoVarSeries:
    """Power series in ('y',) or ('q', 't') truncated at total degree ``order``."""

    __slots__ = ('variables', 'order', '_coeffs')

    def __init__(self, coeffs: Mapping[tuple, object] | None = None, order=0, variables=('y',)):
        self.variables = tuple(variables)
        self.order = order
        width = len(self.variables)
        cleaned = {}
        for key, value in (coeffs or {}).items():
            key = (key,) if isinstance(key, int) else tuple(key)
            if len(key) != width or any(e < 0 for e in key):
                raise ValueError(f"bad exponent vector {key!r} for variables {self.variables}")
            if sum(key) > order:
                continue
            value = _canon(value)
            if isinstance(value, GaussRat):
                raise TypeError("power series coefficients must be rational")
            if value != 0:
                cleaned[key] = value
        self._coeffs = cleaned

    @classmethod
    def _wrap(cls, coeffs, order, variables):
        obj = object.__new__(cls)
        obj.variables, obj.order, obj._coeffs = variables, order, coeffs
        return obj

    @classmethod
    def one(cls, order, variables=('y',)):
        return cls({(0,) * len(variables): 1}, order, variables)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, order, lowest=0):
        """Single-variable series from an ascending list starting at y^lowest."""
        return cls({(lowest + i,): c for i, c in enumerate(coeffs)}, order)

    @classmethod
    def from_monomials(cls, terms: Iterable[tuple[tuple, object]], order, variables=('y',)):
        coeffs = {}
        for key, value in terms:
            key = (key,) if isinstance(key, int) else tuple(key)
            coeffs[key] = coeffs.get(key, 0) + value
        return cls(coeffs, order, variables)

    @classmethod
    def from_laurent(cls, poly: HalfLaurent, order):
        """A real Laurent polynomial with integral nonnegative exponents."""
        if not poly.is_real():
            raise ValueError("complex coefficients cannot enter a power series")
        low, coeffs = poly.y_coefficients()
        if coeffs and low < 0:
            raise ValueError("negative exponents cannot enter a power series")
        return cls.from_coefficients(coeffs, order, lowest=low)

    def _check(self, other):
        if other.variables != self.variables:
            raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")

    def _scalar(self, value):
        return TwoVarSeries({(0,) * len(self.variables): value}, self.order, self.variables)

    def coefficient(self, *exponents):
        return self._coeffs.get(tuple(exponents), 0)

    def items(self):
        return sorted(self._coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def coefficient_list(self, upto=None):
        if len(self.variables) != 1:
            raise ValueError("coefficient lists need a single variable")
        upto = self.order if upto is None else upto
        return [self._coeffs.get((j,), 0) for j in range(upto + 1)]

    def constant_term(self):
        return self._coeffs.get((0,) * len(self.variables), 0)

    def is_zero(self):
        return not self._coeffs

    def truncate(self, order):
        return TwoVarSeries(self._coeffs, min(order, self.order), self.variables)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._scalar(other)
        if not isinstance(other, TwoVarSeries):
            return NotImplemented
        self._check(other)
        order = min(self.order, other.order)
        out = {k: v for k, v in self._coeffs.items() if sum(k) <= order}
        for key, value in other._coeffs.items():
            if sum(key) > order:
                continue
            total = _canon(out.get(key, 0) + value)
            if total == 0:
                out.pop(key, None)
            else:
                out[key] = total
        return TwoVarSeries._wrap(out, order, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return TwoVarSeries._wrap({k: -v for k, v in self._coeffs.items()}, self.order, self.variables)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._scalar(other)
        if not isinstance(other, TwoVarSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return TwoVarSeries({}, self.order, self.variables)
            return TwoVarSeries._wrap({k: _canon(v * other) for k, v in self._coeffs.items()},
                                      self.order, self.variables)
        if not isinstance(other, TwoVarSeries):
            return NotImplemented
        self._check(other)
        order = min(self.order, other.order)
        out = {}
        right = [(k, sum(k), v) for k, v in other._coeffs.items() if sum(k) <= order]
        for k1, v1 in self._coeffs.items():
            d1 = sum(k1)
            if d1 > order:
                continue
            for k2, d2, v2 in right:
                if d1 + d2 > order:
                    continue
                key = tuple(a + b for a, b in zip(k1, k2))
                out[key] = out.get(key, 0) + v1 * v2
        return TwoVarSeries(out, order, self.variables)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * _cdiv(1, other)
        if isinstance(other, TwoVarSeries):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = TwoVarSeries.one(self.order, self.variables)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, TwoVarSeries):
            return NotImplemented
        if other.variables != self.variables:
            return False
        order = min(self.order, other.order)
        left = {k: v for k, v in self._coeffs.items() if sum(k) <= order}
        right = {k: v for k, v in other._coeffs.items() if sum(k) <= order}
        return left == right

    __hash__ = None

    def shift(self, exponents):
        """Multiply by the monomial with the given exponent vector."""
        exponents = (exponents,) if isinstance(exponents, int) else tuple(exponents)
        if any(e < 0 for e in exponents):
            raise ValueError("shift exponents must be nonnegative")
        out = {tuple(a + b for a, b in zip(k, exponents)): v for k, v in self._coeffs.items()}
        return TwoVarSeries(out, self.order, self.variables)

    def substitute_power(self, k):
        """Every variable x -> x^k; known coefficients extend to order k*N."""
        if k < 1:
            raise ValueError("substitution power must be positive")
        out = {tuple(k * e for e in key): v for key, v in self._coeffs.items()}
        return TwoVarSeries._wrap(out, self.order * k, self.variables)

    def specialize_diagonal(self):
        """(q, t) -> (s, s); the result is a series in s = y^(1/2)."""
        if len(self.variables) != 2:
            raise ValueError("diagonal specialization needs two variables")
        out = {}
        for (a, b), value in self._coeffs.items():
            out[(a + b,)] = out.get((a + b,), 0) + value
        return TwoVarSeries(out, self.order, ('s',))

    def to_half_units(self):
        """Rewrite a series in y as a series in s = y^(1/2)."""
        if self.variables != ('y',):
            raise ValueError("only y-series can be rewritten in half units")
        out = {(2 * key[0],): v for key, v in self._coeffs.items()}
        return TwoVarSeries._wrap(out, 2 * self.order + 1, ('s',))

    def inverse(self):
        constant = self.constant_term()
        if constant == 0:
            raise ZeroDivisionError("series without constant term is not invertible")
        zero = (0,) * len(self.variables)
        rest = [(k, sum(k), v) for k, v in self._coeffs.items() if k != zero]
        keys = _monomials_upto(len(self.variables), self.order)
        inverse = {zero: _cdiv(1, constant)}
        for key in keys:
            if key == zero:
                continue
            total = 0
            degree = sum(key)
            for k, d, v in rest:
                if d > degree:
                    continue
                other = tuple(a - b for a, b in zip(key, k))
                if min(other) < 0:
                    continue
                partner = inverse.get(other)
                if partner:
                    total += v * partner
            if total:
                inverse[key] = _cdiv(-total, constant)
        return TwoVarSeries(inverse, self.order, self.variables)

    def to_text(self):
        if not self._coeffs:
            return f"O({self.order + 1})"
        pieces = []
        for key, value in self.items():
            names = '*'.join(f"{name}^{e}" for name, e in zip(self.variables, key) if e)
            pieces.append(f"{format_coefficient(value)}{'*' + names if names else ''}")
        return ' + '.join(pieces) + f" + O({self.order + 1})"

    def __repr__(self):
        return f"TwoVarSeries({self.to_text()})"


def _monomials_upto(width, order):
    if width == 1:
        return [(j,) for j in range(order + 1)]
    keys = []
    for degree in range(order + 1):
        for a in range(degree, -1, -1):
            keys.append((a, degree - a))
    return keys


def geometric(exponents, order, variables=('y',)):
    """1/(1 - monomial)."""
    return product_expand([(exponents, -1)], order, variables)


def product_expand(factors: Iterable[tuple], order, variables=None) -> TwoVarSeries:
    """Expand prod (1 - m)^power to total degree ``order``.

    Each factor is (exponent vector, power); negative powers are expansions
    of 1/(1 - m). Factors whose monomial exceeds the order are skipped.
    """
    factors = [((e,) if isinstance(e, int) else tuple(e), p) for e, p in factors]
    if variables is None:
        width = len(factors[0][0]) if factors else 1
        variables = ('y',) if width == 1 else ('q', 't')
    variables = tuple(variables)
    coeffs = {(0,) * len(variables): 1}
    for exponents, power in factors:
        degree = sum(exponents)
        if len(exponents) != len(variables) or any(e < 0 for e in exponents):
            raise ValueError(f"bad factor monomial {exponents!r}")
        if degree == 0:
            raise ValueError("factor monomial must have positive degree")
        if degree > order or power == 0:
            continue
        for _ in range(abs(power)):
            if power < 0:
                coeffs = _times_geometric(coeffs, exponents, degree, order)
            else:
                coeffs = _times_binomial(coeffs, exponents, order)
    return TwoVarSeries(coeffs, order, variables)


def _times_geometric(coeffs, exponents, degree, order):
    out = dict(coeffs)
    for key in sorted(coeffs, key=sum):
        value = coeffs[key]
        current = key
        while sum(current) + degree <= order:
            current = tuple(a + b for a, b in zip(current, exponents))
            out[current] = out.get(current, 0) + value
    return out


def _times_binomial(coeffs, exponents, order):
    out = dict(coeffs)
    for key, value in coeffs.items():
        shifted = tuple(a + b for a, b in zip(key, exponents))
        if sum(shifted) <= order:
            out[shifted] = out.get(shifted, 0) - value
    return out


# Quotients by products of delta(k)


@lru_cache(maxsize=None)
def delta_power(k, e):
    return delta(k) ** e


class DeltaQuotient:
    """num / prod delta(k)^e, kept unreduced so sums share a denominator without gcds."""

    __slots__ = ('num', 'powers')

    def __init__(self, num, powers=None):
        self.num = HalfLaurent.coerce(num)
        self.powers = Counter({k: e for k, e in dict(powers or {}).items() if e})

    def __mul__(self, other):
        if isinstance(other, DeltaQuotient):
            return DeltaQuotient(self.num * other.num, self.powers + other.powers)
        if isinstance(other, (HalfLaurent, int, Fraction, GaussRat)):
            return DeltaQuotient(self.num * other, self.powers)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return DeltaQuotient(self.num / other, self.powers)
        return NotImplemented

    def denominator(self):
        result = ONE
        for k, e in sorted(self.powers.items()):
            result = result * delta_power(k, e)
        return result

    def to_ratfun(self):
        return RatFun(self.num, self.denominator())

    def clear(self):
        """The quotient as a Laurent polynomial; NotDivisible if poles remain."""
        return self.num.exact_div(self.denominator())

    def __repr__(self):
        return f"DeltaQuotient({self.num.to_text()}, {dict(self.powers)})"


def clear_sum(quotients):
    """Sum of DeltaQuotients over their common denominator, as a Laurent polynomial."""
    quotients = list(quotients)
    common = Counter()
    for quotient in quotients:
        for k, e in quotient.powers.items():
            common[k] = max(common[k], e)
    total = ZERO
    for quotient in quotients:
        term = quotient.num
        for k, e in common.items():
            if e > quotient.powers[k]:
                term = term * delta_power(k, e - quotient.powers[k])
        total = total + term
    return DeltaQuotient(total, common).clear()
