from sheafbetti.errors import InputError, MissingGV


def genus(d):
    """Arithmetic genus of a plane curve of degree d."""
    return (d - 1) * (d - 2) // 2


class GVTable:
    """Gopakumar-Vafa invariants n_{g,d}, one row of genera per degree."""

    def __init__(self, rows=None, surface='P2', provenance=''):
        cleaned = {}
        for d, values in (rows or {}).items():
            d = int(d)
            if d < 1:
                raise InputError(f"Degree must be positive, got {d}", d=d)
            values = [int(v) for v in values]
            while len(values) > genus(d) + 1:
                if values[-1] != 0:
                    raise InputError(
                        f"n_(g,{d}) must vanish above genus {genus(d)}", d=d, g=len(values) - 1)
                values.pop()
            values.extend([0] * (genus(d) + 1 - len(values)))
            cleaned[d] = tuple(values)
        self._rows = cleaned
        self.surface = surface
        self.provenance = provenance

    @classmethod
    def from_entries(cls, entries, surface='P2', provenance=''):
        """Build from (g, d, n) triples."""
        rows = {}
        for g, d, n in entries:
            if g < 0:
                raise InputError(f"Genus must be nonnegative, got {g}", g=g, d=d)
            row = rows.setdefault(d, {})
            if g in row:
                raise InputError(f"Duplicate entry for (g, d) = ({g}, {d})", g=g, d=d)
            row[g] = n
        return cls({d: [row.get(g, 0) for g in range(max(row) + 1)] for d, row in rows.items()},
                   surface=surface, provenance=provenance)

    def has(self, d):
        return d in self._rows

    def row(self, d):
        if d not in self._rows:
            raise MissingGV(d)
        return self._rows[d]

    def n(self, g, d):
        row = self.row(d)
        return row[g] if g < len(row) else 0

    @property
    def degrees(self):
        return sorted(self._rows)

    @property
    def max_degree(self):
        """Largest D such that every degree 1..D is present."""
        top = 0
        while top + 1 in self._rows:
            top += 1
        return top

    def with_row(self, d, values):
        rows = dict(self._rows)
        rows[d] = values
        return GVTable(rows, self.surface, self.provenance)

    def restricted(self, dmax):
        return GVTable({d: r for d, r in self._rows.items() if d <= dmax},
                       self.surface, self.provenance)

    def _key(self):
        return tuple(sorted(self._rows.items()))

    def __eq__(self, other):
        if not isinstance(other, GVTable):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GVTable('{self.surface}', degrees {self.degrees})"

    def to_dict(self):
        return {
            'surface': self.surface,
            'provenance': self.provenance,
            'entries': [
                {'d': d, 'g': g, 'n': str(n)}
                for d in self.degrees for g, n in enumerate(self._rows[d])
            ],
        }
