"""
Packaged elliptic-curve series G^E_{d_E, beta} from the functional equation
on the projective plane.

Series are graded by total q-degree D = 3 d_E + sum(beta); the p-monomial
beta is a sorted tuple of positive degrees. The unknown series A carries the
G values divided by |Aut beta|, and B = A + sum_n q^n p_n. At each degree the
new A term enters only through exp(-A), so the solve is a single
rearrangement per degree.
"""
from __future__ import annotations

import logging
import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

from sheafbetti.engine.exactalg import DeltaQuotient, HalfLaurent, ONE, ZERO, clear_sum, monomial
from sheafbetti.engine.localcurve import P2_K
from sheafbetti.engine.partitions import box_sum, content_sum, partitions_of
from sheafbetti.engine.wseries import w_parts
from sheafbetti.errors import NonPolynomialContribution, NotDivisible

logger = logging.getLogger(__name__)

E_DEGREE = 3


@dataclass(frozen=True, order=True)
class GKey:
    d_e: int
    ms: tuple = ()

    @property
    def q_degree(self):
        return E_DEGREE * self.d_e + sum(self.ms)

    def aut_order(self):
        return prod(factorial(c) for c in Counter(self.ms).values())


def _merge(beta, gamma):
    if not gamma:
        return beta
    if not beta:
        return gamma
    return tuple(sorted(beta + gamma))


def _add_into(target, piece, scale=1):
    for beta, value in piece.items():
        total = target.get(beta, ZERO) + (value * scale if scale != 1 else value)
        if total.is_zero():
            target.pop(beta, None)
        else:
            target[beta] = total


def _piece_product(left, right):
    out = {}
    for beta, a in left.items():
        for gamma, b in right.items():
            key = _merge(beta, gamma)
            value = out.get(key, ZERO) + a * b
            if value.is_zero():
                out.pop(key, None)
            else:
                out[key] = value
    return out


class FormalSeries:
    """Truncated series in q with p-monomial and Laurent coefficients."""

    def __init__(self, pieces=None, bound=0):
        self.bound = bound
        pieces = list(pieces or [])
        pieces = pieces[:bound + 1]
        pieces.extend({} for _ in range(bound + 1 - len(pieces)))
        self.pieces = [{beta: v for beta, v in piece.items() if not v.is_zero()} for piece in pieces]

    @classmethod
    def from_coeffs(cls, coeffs, bound):
        pieces = [{} for _ in range(bound + 1)]
        for (degree, beta), value in coeffs.items():
            if degree <= bound:
                _add_into(pieces[degree], {tuple(sorted(beta)): HalfLaurent.coerce(value)})
        return cls(pieces, bound)

    @classmethod
    def one(cls, bound):
        return cls([{(): ONE}], bound)

    def coefficient(self, degree, beta=()):
        if degree > self.bound:
            raise ValueError(f"degree {degree} beyond the truncation bound {self.bound}")
        return self.pieces[degree].get(tuple(sorted(beta)), ZERO)

    def items(self):
        return [((degree, beta), value)
                for degree, piece in enumerate(self.pieces)
                for beta, value in sorted(piece.items())]

    def is_zero(self):
        return not any(self.pieces)

    def __add__(self, other):
        bound = min(self.bound, other.bound)
        pieces = [dict(piece) for piece in self.pieces[:bound + 1]]
        for degree in range(bound + 1):
            _add_into(pieces[degree], other.pieces[degree])
        return FormalSeries(pieces, bound)

    def __neg__(self):
        return FormalSeries([{beta: -v for beta, v in piece.items()} for piece in self.pieces],
                            self.bound)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (HalfLaurent, int, Fraction)):
            return FormalSeries([{beta: v * other for beta, v in piece.items()}
                                 for piece in self.pieces], self.bound)
        bound = min(self.bound, other.bound)
        pieces = [{} for _ in range(bound + 1)]
        for i, left in enumerate(self.pieces[:bound + 1]):
            if not left:
                continue
            for j in range(bound + 1 - i):
                if other.pieces[j]:
                    _add_into(pieces[i + j], _piece_product(left, other.pieces[j]))
        return FormalSeries(pieces, bound)

    __rmul__ = __mul__

    def shift(self, degrees):
        """Multiply by q^degrees; the known range moves up with it."""
        return FormalSeries([{} for _ in range(degrees)] + self.pieces, self.bound + degrees)

    def twist(self, c):
        """q -> q * y^(3c): degree D picks up y^(3cD)."""
        return FormalSeries([{beta: v.shift(2 * E_DEGREE * c * degree) for beta, v in piece.items()}
                             for degree, piece in enumerate(self.pieces)], self.bound)

    def exp(self):
        if self.pieces[0]:
            raise ValueError("exp needs a series without constant term")
        result = [{(): ONE}]
        for n in range(1, self.bound + 1):
            piece = {}
            for j in range(1, n + 1):
                if self.pieces[j] and result[n - j]:
                    _add_into(piece, _piece_product(self.pieces[j], result[n - j]), Fraction(j, n))
            result.append(piece)
        return FormalSeries(result, self.bound)

    def inverse(self):
        if self.pieces[0] != {(): ONE}:
            raise ValueError("inverse is implemented for series with constant term 1")
        result = [{(): ONE}]
        for n in range(1, self.bound + 1):
            piece = {}
            for j in range(1, n + 1):
                if self.pieces[j] and result[n - j]:
                    _add_into(piece, _piece_product(self.pieces[j], result[n - j]), -1)
            result.append(piece)
        return FormalSeries(result, self.bound)

    def __repr__(self):
        return f"FormalSeries(bound={self.bound}, terms={sum(len(p) for p in self.pieces)})"


class FunctionalSolver:
    """Degree-by-degree solution of the functional equation; extends on demand."""

    def __init__(self, k=P2_K):
        self.k = k
        self.a_pieces = [{}]
        self.b_pieces = [{}]
        self.exp_minus_a = [{(): ONE}]
        self._x = {}
        self._e = {}
        self._lock = threading.Lock()

    @property
    def solved_degree(self):
        return len(self.a_pieces) - 1

    def _exp_piece(self, rho, n):
        xs = self._x.setdefault(rho, [{}])
        es = self._e.setdefault(rho, [{(): ONE}])
        while len(es) <= n:
            m = len(es)
            while len(xs) <= m:
                degree = len(xs)
                weight = box_sum(rho, E_DEGREE * degree)
                xs.append({beta: v * weight for beta, v in self.b_pieces[degree].items()})
            piece = {}
            for j in range(1, m + 1):
                if xs[j] and es[m - j]:
                    _add_into(piece, _piece_product(xs[j], es[m - j]), Fraction(j, m))
            es.append(piece)
        return es[n]

    def _lhs(self, degree):
        lhs = {}
        for size in range(1, degree // E_DEGREE + 1):
            rest = degree - E_DEGREE * size
            for rho in partitions_of(size):
                piece = self._exp_piece(rho, rest)
                if not piece:
                    continue
                sign = -1 if (self.k * size) % 2 else 1
                _add_into(lhs, {beta: v.shift(2 * self.k * content_sum(rho)) for beta, v in piece.items()},
                          sign)
        return lhs

    def extend_to(self, dmax):
        with self._lock:
            for degree in range(self.solved_degree + 1, dmax + 1):
                partial = {}
                for j in range(1, degree):
                    if self.a_pieces[j] and self.exp_minus_a[degree - j]:
                        _add_into(partial, _piece_product(self.a_pieces[j], self.exp_minus_a[degree - j]),
                                  Fraction(-j, degree))
                lhs = self._lhs(degree)
                a_piece = dict(partial)
                _add_into(a_piece, lhs, -1)
                self.a_pieces.append(a_piece)
                self.exp_minus_a.append(lhs)
                b_piece = dict(a_piece)
                b_piece[(degree,)] = b_piece.get((degree,), ZERO) + ONE
                self.b_pieces.append(b_piece)
                logger.debug('functional equation solved at q-degree %s: %s keys', degree, len(a_piece))
        return self

    def a_series(self, dmax):
        self.extend_to(dmax)
        return FormalSeries(self.a_pieces[:dmax + 1], dmax)

    def g_values(self, dmax):
        self.extend_to(dmax)
        values = {}
        for degree in range(1, dmax + 1):
            for beta, value in self.a_pieces[degree].items():
                key = GKey((degree - sum(beta)) // E_DEGREE, beta)
                values[key] = value * key.aut_order()
        return values


_solver = FunctionalSolver()


def solve_g(dmax):
    """All G values with 3 d_E + sum(ms) <= dmax."""
    if dmax < 1:
        raise ValueError("dmax must be positive")
    return _solver.g_values(dmax)


def g_value(d_e, ms=()):
    key = GKey(d_e, tuple(sorted(ms)))
    return solve_g(key.q_degree).get(key, ZERO)


def rhs_via_g(d, gv):
    """sum over keys of degree d of G / |Aut beta| * prod W_beta."""
    if d < E_DEGREE:
        return ZERO
    _solver.extend_to(d)
    terms = []
    for beta, value in sorted(_solver.a_pieces[d].items()):
        quotient = DeltaQuotient(value)
        for part in beta:
            quotient = quotient * w_parts(part, gv)
        terms.append(quotient)
    try:
        return clear_sum(terms)
    except NotDivisible as exc:
        raise NonPolynomialContribution('Functional-route sum keeps a pole', d=d, **exc.details) from exc


def g_degree_bound(d_e, ms):
    """(d_E - 1)(d_E - 2) 9/2 + (d_E - 1) sum 3 d_i, in powers of y."""
    return Fraction(9 * (d_e - 1) * (d_e - 2), 2) + (d_e - 1) * E_DEGREE * sum(ms)


def g_degree_bounds(d_e, ms=(), value=None):
    if d_e < 2:
        raise ValueError("the degree bound is stated for d_E >= 2")
    value = g_value(d_e, ms) if value is None else value
    return value.y_degree_bound() <= g_degree_bound(d_e, ms)


def treeid_residual(dmax, solver=None):
    """Product-over-boxes side minus exp(-A); identically zero when the solve is right."""
    solver = _solver if solver is None else solver
    a = solver.a_series(dmax)
    p = FormalSeries([{}] + [{(n,): ONE} for n in range(1, dmax + 1)], dmax)
    exp_minus_a = (-a).exp()
    i_series = exp_minus_a * (-p).exp()
    twisted = {}

    def twist(c):
        if c not in twisted:
            twisted[c] = i_series.twist(c)
        return twisted[c]

    box_factors = {}

    def box_factor(c):
        if c not in box_factors:
            box_factors[c] = twist(c) * twist(c) * twist(c + 1).inverse() * twist(c - 1).inverse()
        return box_factors[c]

    lhs = FormalSeries.one(dmax)
    for size in range(1, dmax // E_DEGREE + 1):
        for rho in partitions_of(size):
            term = FormalSeries.one(dmax - E_DEGREE * size)
            for c in rho.contents():
                term = term * box_factor(c)
            sign = -1 if (solver.k * size) % 2 else 1
            term = term * monomial(2 * solver.k * content_sum(rho), sign)
            lhs = lhs + term.shift(E_DEGREE * size)
    return lhs - exp_minus_a
