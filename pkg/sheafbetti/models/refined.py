from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from sheafbetti.engine.exactalg import HalfLaurent, TwoVarSeries


@dataclass(frozen=True, order=True)
class HNType:
    """A Harder-Narasimhan type: degrees d_i with Euler characteristics chi_i."""

    ds: tuple = ()
    chis: tuple = ()

    def __post_init__(self):
        if len(self.ds) != len(self.chis):
            raise ValueError("ds and chis must have the same length")

    @property
    def total_degree(self):
        return sum(self.ds)

    @property
    def chi_sum(self):
        return sum(self.chis)

    @property
    def slopes(self):
        return [Fraction(chi, d) for d, chi in zip(self.ds, self.chis)]

    def interior_weight(self):
        return sum(a * b for a, b in combinations(self.ds, 2))

    def weight(self, d):
        """s = sum over pairs 0 <= i < j <= m of d_i d_j, with d_0 = d - sum d_i."""
        parts = (d - self.total_degree,) + tuple(self.ds)
        return sum(a * b for a, b in combinations(parts, 2))

    def weight_incremental(self, d):
        """Same weight accumulated one part at a time."""
        running, total = d - self.total_degree, 0
        for part in self.ds:
            total += running * part
            running += part
        return total

    def weights_refined(self, d):
        s = self.weight(d)
        return s + self.chi_sum, s - self.chi_sum

    def __repr__(self):
        return f"HNType(ds={self.ds}, chis={self.chis})"

    def to_dict(self):
        return {'ds': list(self.ds), 'chis': list(self.chis)}


@dataclass(frozen=True)
class StackSeries:
    """Poincare series of the stack of semistable sheaves of type (d, chi)."""

    d: int
    chi: int
    series: TwoVarSeries

    def __repr__(self):
        return f"StackSeries(d={self.d}, chi={self.chi}, order={self.series.order})"


@dataclass(frozen=True)
class RefinedPolynomial:
    """Perverse-refined Poincare polynomial sum c q^a t^b."""

    d: int
    terms: tuple

    @classmethod
    def from_terms(cls, d, terms):
        merged = {}
        for a, b, c in terms:
            if a < 0 or b < 0:
                raise ValueError(f"Refined exponents must be nonnegative, got q^{a} t^{b}")
            merged[(a, b)] = merged.get((a, b), 0) + int(c)
        return cls(d, tuple(sorted((key, c) for key, c in merged.items() if c)))

    def series(self, order):
        return TwoVarSeries(dict(self.terms), order, ('q', 't'))

    def specialize(self):
        """q = t = y^(1/2), as a Laurent polynomial in half units."""
        out = {}
        for (a, b), c in self.terms:
            out[a + b] = out.get(a + b, 0) + c
        return HalfLaurent(out)

    def as_t_polynomial(self):
        """Coefficient lists in t for each q-power: {a: {b: c}}."""
        out = {}
        for (a, b), c in self.terms:
            out.setdefault(a, {})[b] = c
        return out

    def __repr__(self):
        return f"RefinedPolynomial(d={self.d}, terms={len(self.terms)})"

    def to_dict(self):
        return {'d': self.d, 'terms': [{'q': a, 't': b, 'c': str(c)} for (a, b), c in self.terms]}
