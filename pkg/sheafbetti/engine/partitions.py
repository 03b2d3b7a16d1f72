"""Integer partitions, box contents and the exponential sums attached to them."""
from __future__ import annotations

from functools import lru_cache

from sympy.utilities.iterables import partitions as sympy_partitions

from sheafbetti.engine.exactalg import HalfLaurent, ZERO, delta


class Partition(tuple):
    """Weakly decreasing tuple of positive parts; tuple order makes it a value type."""

    def __new__(cls, parts=()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p <= 0 for p in parts):
            raise ValueError(f"Partition parts must be positive, got {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self):
        return sum(self)

    def boxes(self):
        """(row, column) positions, both starting at 1."""
        return [(i, j) for i, part in enumerate(self, start=1) for j in range(1, part + 1)]

    def contents(self):
        return [j - i for i, j in self.boxes()]

    def conjugate(self):
        if not self:
            return Partition()
        return Partition(sum(1 for part in self if part > j) for j in range(self[0]))

    def __repr__(self):
        return f"Partition({tuple(self)})"


@lru_cache(maxsize=None)
def partitions_of(n):
    """All partitions of n in lexicographically decreasing order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return (Partition(),)
    found = []
    for multiplicities in sympy_partitions(n):
        parts = []
        for part, count in multiplicities.items():
            parts.extend([part] * count)
        found.append(Partition(parts))
    return tuple(sorted(found, reverse=True))


def content_sum(rho):
    # sum over rows of (0 + 1 + ... + (rho_i - 1)) - (i - 1) * rho_i
    return sum(part * (part - 1) // 2 - (i - 1) * part for i, part in enumerate(rho, start=1))


@lru_cache(maxsize=None)
def e_tilde(rho, m):
    """Closed finite form of the row sum with z = m*i*hbar.

    Only rows with a positive part contribute; the tail of the infinite
    sequence telescopes away.
    """
    if m == 0:
        raise ValueError("e_tilde needs a nonzero multiplier")
    terms = {}
    for i, part in enumerate(rho, start=1):
        high = m * (2 * part - 2 * i + 1)
        low = m * (1 - 2 * i)
        terms[high] = terms.get(high, 0) + 1
        terms[low] = terms.get(low, 0) - 1
    return HalfLaurent(terms)


@lru_cache(maxsize=None)
def box_sum(rho, m):
    """sum over boxes of y^(m(c+1)) - 2 y^(m c) + y^(m(c-1)), exponents in y."""
    terms = {}
    for c in rho.contents():
        for shift, coefficient in ((1, 1), (0, -2), (-1, 1)):
            key = 2 * m * (c + shift)
            terms[key] = terms.get(key, 0) + coefficient
    return HalfLaurent(terms) if terms else ZERO


def box_identity_holds(rho, m):
    return e_tilde(rho, m) * delta(m) == box_sum(rho, m)
