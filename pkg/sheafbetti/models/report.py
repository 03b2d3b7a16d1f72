from dataclasses import dataclass, field

from sheafbetti.engine.exactalg import format_coefficient


def _first_mismatch(expected, actual, upto):
    for j in range(upto + 1):
        if expected(j) != actual(j):
            return j
    return None


@dataclass(frozen=True)
class TruncatedCheckReport:
    """Outcome of comparing two series through a fixed power."""

    name: str
    d: int
    order: int
    passed: bool
    mismatch_exponent: int = None
    expected: object = None
    actual: object = None
    extended_order: int = None
    extended_passed: bool = None
    notes: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, name, d, order, expected, actual, extended_order=None, notes=None):
        """Compare coefficient getters exponent by exponent through ``order``.

        ``expected`` and ``actual`` map an exponent to a coefficient. A negative
        order makes the comparison vacuous.
        """
        mismatch = _first_mismatch(expected, actual, order)
        extended_passed = None
        if extended_order is not None:
            extended_passed = _first_mismatch(expected, actual, extended_order) is None
        if mismatch is None:
            return cls(name, d, order, True, extended_order=extended_order,
                       extended_passed=extended_passed, notes=notes or {})
        return cls(name, d, order, False, mismatch, expected(mismatch), actual(mismatch),
                   extended_order, extended_passed, notes or {})

    @classmethod
    def verdict(cls, name, d, passed, notes=None):
        """A yes/no check that has no series behind it."""
        return cls(name, d, 0, bool(passed), notes=notes or {})

    def __bool__(self):
        return self.passed

    def __repr__(self):
        state = 'pass' if self.passed else f"fail at y^{self.mismatch_exponent}"
        return f"TruncatedCheckReport('{self.name}', d={self.d}, {state})"

    def to_dict(self):
        out = {
            'name': self.name,
            'd': self.d,
            'order': self.order,
            'pass': self.passed,
            'mismatch_exponent': self.mismatch_exponent,
            'expected': None if self.expected is None else format_coefficient(self.expected),
            'actual': None if self.actual is None else format_coefficient(self.actual),
        }
        if self.extended_order is not None:
            out['extended_order'] = self.extended_order
            out['extended_pass'] = self.extended_passed
        if self.notes:
            out['notes'] = {key: str(value) for key, value in sorted(self.notes.items())}
        return out
