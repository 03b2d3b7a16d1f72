from dataclasses import dataclass

from sheafbetti.engine.exactalg import HalfLaurent, format_coefficient, from_y_coefficients
from sheafbetti.models.gv_table import genus


@dataclass(frozen=True)
class OmegaPoly:
    """Shifted Poincare polynomial of the moduli space of degree-d sheaves."""

    d: int
    poly: HalfLaurent

    def betti_numbers(self):
        """Even Betti numbers b_0, b_2, ... read off the centered polynomial."""
        return [self.poly.coefficient(n) for n in range(self.poly.min_exponent,
                                                         self.poly.max_exponent + 1, 2)]

    def __repr__(self):
        return f"OmegaPoly(d={self.d}, top={self.poly.max_exponent}/2)"

    def to_dict(self):
        return {
            'd': self.d,
            'lowest_half_exponent': self.poly.min_exponent,
            'betti': [format_coefficient(c) for c in self.betti_numbers()],
        }


@dataclass(frozen=True)
class OmegaHat:
    """Omega_d divided by the Poincare polynomial of P^(3d-1), re-centered at y^0."""

    d: int
    poly: HalfLaurent

    @classmethod
    def from_coefficients(cls, d, coeffs):
        return cls(d, from_y_coefficients(coeffs))

    @property
    def genus(self):
        return genus(self.d)

    def coefficients(self):
        low, coeffs = self.poly.y_coefficients()
        return [0] * low + coeffs

    def coefficient(self, j):
        return self.poly.coefficient(2 * j)

    def at_one(self):
        return self.poly.at_one()

    def __repr__(self):
        return f"OmegaHat(d={self.d}, degree={2 * self.genus})"

    def to_dict(self):
        return {'d': self.d, 'coeffs': [format_coefficient(c) for c in self.coefficients()]}
