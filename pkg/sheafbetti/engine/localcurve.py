"""
Generating series of the twisted local elliptic curve with stationary
insertions.

``f_disconnected`` is the closed partition sum, ``f_connected`` recovers the
connected series by inclusion-exclusion over the labeled marking slots, and
``assemble_disconnected`` runs the opposite direction so the two can be
checked against each other. ``k`` is the self-intersection of the canonical
class; the projective plane uses k = 9.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from itertools import combinations
from math import factorial, prod
from collections import Counter

from sympy.utilities.iterables import multiset_partitions

from sheafbetti.errors import NotDivisible
from sheafbetti.engine.exactalg import (
    I, ONE, ZERO, RatFun, delta, monomial, sin_factor,
)
from sheafbetti.engine.partitions import content_sum, e_tilde, partitions_of

logger = logging.getLogger(__name__)

P2_K = 9


class MarkingList(tuple):
    """Sorted multiset of intersection numbers with the elliptic curve."""

    def __new__(cls, entries=()):
        entries = tuple(sorted(int(m) for m in entries))
        if any(m < 1 for m in entries):
            raise ValueError(f"Marking entries must be positive, got {entries}")
        return super().__new__(cls, entries)

    def aut_order(self):
        return prod(factorial(count) for count in Counter(self).values())

    def __repr__(self):
        return f"MarkingList({list(self)})"


@lru_cache(maxsize=None)
def _disconnected(d_e, ms, k):
    total = ZERO
    sign = -1 if (k * d_e) % 2 else 1
    # each marking contributes (-m) * e_tilde / i = m * i * e_tilde
    marking_factor = monomial(0, (1, I, -1, -I)[len(ms) % 4] * prod(ms))
    for rho in partitions_of(d_e):
        term = monomial(2 * k * content_sum(rho), sign) * marking_factor
        for m in ms:
            term = term * e_tilde(rho, m)
        total = total + term
    return total


def f_disconnected(d_e, ms=(), k=P2_K):
    if d_e < 1:
        raise ValueError("the disconnected series needs d_E >= 1")
    return _disconnected(d_e, MarkingList(ms), k)


def _disconnected_or_unit(d_e, ms, k):
    if d_e == 0:
        return ZERO if ms else ONE
    return _disconnected(d_e, ms, k)


@lru_cache(maxsize=None)
def connected_laurent(d_e, ms, k=P2_K):
    """Connected series for d_E >= 1; always a Laurent polynomial."""
    ms = MarkingList(ms)
    full = _disconnected(d_e, ms, k)
    if not ms:
        # d F(d) = sum_j j F_c(j) F(d - j)
        rest = ZERO
        for j in range(1, d_e):
            rest = rest + connected_laurent(j, ms, k) * _disconnected(d_e - j, ms, k) * j
        return (full * d_e - rest) / d_e

    first, others = ms[0], ms[1:]
    indices = range(len(others))
    rest = ZERO
    for size in range(len(others) + 1):
        for chosen in combinations(indices, size):
            block = MarkingList((first,) + tuple(others[i] for i in chosen))
            remaining = MarkingList(others[i] for i in indices if i not in chosen)
            for degree in range(1, d_e + 1):
                if degree == d_e and not remaining:
                    continue
                outside = _disconnected_or_unit(d_e - degree, remaining, k)
                if outside.is_zero():
                    continue
                rest = rest + connected_laurent(degree, block, k) * outside
    return full - rest


def f_connected(d_e, ms=(), k=P2_K):
    ms = MarkingList(ms)
    if d_e == 0:
        if not ms:
            raise ValueError("the connected series is undefined for (0, empty)")
        if len(ms) > 1:
            return RatFun(ZERO)
        m = ms[0]
        return RatFun(monomial(0, I * m), delta(m))
    if d_e < 0:
        raise ValueError("d_E must be nonnegative")
    return RatFun(connected_laurent(d_e, ms, k))


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for tail in _compositions(total - first, parts - 1):
            yield (first,) + tail


def _unmarked_blocks(degree, k):
    """sum over multisets of empty-marking blocks of total degree, with 1/prod(mult!)."""
    total = ZERO
    for lam in partitions_of(degree):
        term = ONE
        for part, count in Counter(lam).items():
            term = term * (connected_laurent(part, (), k) ** count) / factorial(count)
        total = total + term
    return total


def assemble_disconnected(d_e, ms=(), k=P2_K):
    """Rebuild the disconnected series from connected blocks of positive degree."""
    ms = MarkingList(ms)
    slots = list(range(len(ms)))
    block_structures = list(multiset_partitions(slots)) if slots else [[]]
    total = ZERO
    for blocks in block_structures:
        for marked_degree in range(len(blocks), d_e + 1):
            if not blocks and marked_degree:
                break
            unmarked = _unmarked_blocks(d_e - marked_degree, k) if d_e > marked_degree else ONE
            if unmarked.is_zero():
                continue
            for degrees in _compositions(marked_degree, len(blocks)):
                term = unmarked
                for block, degree in zip(blocks, degrees):
                    term = term * connected_laurent(degree, MarkingList(ms[i] for i in block), k)
                total = total + term
    return total


def check_divisibility(d_e, ms=(), k=P2_K):
    """True iff the disconnected series is a rational Laurent polynomial times prod sin_factor(m)."""
    quotient = f_disconnected(d_e, ms, k)
    try:
        for m in MarkingList(ms):
            quotient = quotient.exact_div(sin_factor(m))
    except NotDivisible:
        logger.debug('divisibility fails for d_E=%s ms=%s k=%s', d_e, ms, k)
        return False
    return quotient.has_integral_exponents() and quotient.is_real()
