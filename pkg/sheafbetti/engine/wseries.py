"""Gopakumar-Vafa packaging: the series F_d and the multiple-cover sums W_d."""
from __future__ import annotations

from functools import lru_cache

from sympy import divisors

from sheafbetti.engine.exactalg import DeltaQuotient, HalfLaurent, RatFun, ZERO, delta_power

# (y^(1/2) - y^(-1/2))^2 = y - 2 + 1/y
X = HalfLaurent({2: 1, 0: -2, -2: 1})


@lru_cache(maxsize=None)
def x_power(g):
    return X ** g


@lru_cache(maxsize=None)
def f_curly(d, gv):
    """sum over g of n_{g,d} (-1)^g (y^(1/2) - y^(-1/2))^(2g)."""
    total = ZERO
    for g, n in enumerate(gv.row(d)):
        if n:
            total = total + x_power(g) * (n if g % 2 == 0 else -n)
    return total


@lru_cache(maxsize=None)
def w_parts(d, gv):
    """W_d as a DeltaQuotient over prod_{k | d} delta(k)^2."""
    ks = [int(k) for k in divisors(d)]
    numerator = ZERO
    for k in ks:
        term = f_curly(d // k, gv).substitute_power(k) / (-k)
        for other in ks:
            if other != k:
                term = term * delta_power(other, 2)
        numerator = numerator + term
    return DeltaQuotient(numerator, {k: 2 for k in ks})


def w_series(d, gv):
    """sum over k | d of -F_{d/k}(y^k) / (k (y^(k/2) - y^(-k/2))^2) in reduced form."""
    return RatFun(w_parts(d, gv).num, w_parts(d, gv).denominator())
