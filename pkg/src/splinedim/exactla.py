"""Exact linear algebra over the rationals.

Matrices are stored as sparse rows (``{column: Fraction}``) because the
boundary maps of spline complexes are block sparse.  Ranks are computed with
fraction-free elimination on integer rows; row spaces used for quotient bases
are kept in reduced row echelon form over :class:`fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Vector = dict  # sparse vector: {index: Fraction}

__all__ = [
    "RationalMatrix",
    "RowSpace",
    "rank",
    "kernel_dim",
    "as_fraction",
]


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a canonical Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class RationalMatrix:
    """Immutable ``rows x cols`` matrix of exact rationals with sparse rows."""

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, sparse_rows: Sequence[Mapping[int, Fraction]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be non-negative")
        self.rows = rows
        self.cols = cols
        data = []
        if sparse_rows is None:
            sparse_rows = [{}] * rows
        if len(sparse_rows) != rows:
            raise ValueError("number of sparse rows does not match shape")
        for row in sparse_rows:
            clean = {}
            for j, v in row.items():
                if not 0 <= j < cols:
                    raise IndexError(f"column {j} out of range for {cols} columns")
                v = as_fraction(v)
                if v:
                    clean[j] = v
            data.append(clean)
        self._rows = tuple(data)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        """Build from dense nested lists; ``cols`` is needed only when ``rows`` is empty."""
        if cols is None:
            cols = len(rows[0]) if rows else 0
        sparse = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            sparse.append({j: v for j, v in enumerate(row) if v})
        return cls(len(rows), cols, sparse)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @property
    def entries(self) -> list[Fraction]:
        """Row-major dense list of entries."""
        return [row.get(j, Fraction(0)) for row in self._rows for j in range(self.cols)]

    def row(self, i: int) -> dict:
        return dict(self._rows[i])

    def sparse_rows(self) -> tuple:
        return self._rows

    def tolist(self) -> list[list[Fraction]]:
        return [[row.get(j, Fraction(0)) for j in range(self.cols)] for row in self._rows]

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self._rows[i].get(j, Fraction(0))

    def transpose(self) -> "RationalMatrix":
        out = [dict() for _ in range(self.cols)]
        for i, row in enumerate(self._rows):
            for j, v in row.items():
                out[j][i] = v
        return RationalMatrix(self.cols, self.rows, out)

    T = property(transpose)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for row in self._rows:
            acc: dict = {}
            for k, a in row.items():
                for j, b in other._rows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append(acc)
        return RationalMatrix(self.rows, other.cols, out)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self._rows)

    def scale_rows(self, factors: Sequence) -> "RationalMatrix":
        return RationalMatrix(
            self.rows, self.cols,
            [{j: v * as_fraction(f) for j, v in row.items()} for row, f in zip(self._rows, factors)],
        )

    def permute_rows(self, order: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, [self._rows[i] for i in order])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={sum(map(len, self._rows))})"


def _primitive(row: dict) -> dict:
    """Scale an integer row so its entries are coprime with a positive leading entry."""
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g == 1:
        return row
    return {j: v // g for j, v in row.items()}


def _integer_row(row: Mapping[int, Fraction]) -> dict:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    return _primitive({j: int(v * den) for j, v in row.items()})


def _eliminate(rows: list[dict], ncols: int) -> int:
    """Fraction-free forward elimination; returns the number of pivots.

    Pivots are taken column by column, using the first remaining row with a
    nonzero entry in that column.  Each updated row is ``p*row - a*pivot``
    divided by its content, so all arithmetic stays in the integers.
    """
    remaining = [r for r in rows if r]
    found = 0
    for c in range(ncols):
        if not remaining:
            break
        k = next((k for k, r in enumerate(remaining) if c in r), None)
        if k is None:
            continue
        piv = remaining.pop(k)
        p = piv[c]
        updated = []
        for r in remaining:
            a = r.get(c)
            if a is None:
                updated.append(r)
                continue
            new = {j: p * v for j, v in r.items()}
            for j, v in piv.items():
                w = new.get(j, 0) - a * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            if new:
                updated.append(_primitive(new))
        remaining = updated
        found += 1
    return found


def rank(M: RationalMatrix) -> int:
    """Exact rank over the rationals.  Empty matrices have rank 0."""
    if M.rows == 0 or M.cols == 0:
        return 0
    return _eliminate([_integer_row(r) for r in M.sparse_rows() if r], M.cols)


def kernel_dim(M: RationalMatrix) -> int:
    """Dimension of the right kernel, ``cols - rank``."""
    return M.cols - rank(M)


class RowSpace:
    """Row space of a set of vectors in ``Q^dim`` kept in reduced echelon form.

    ``reduce`` maps a vector to its normal form modulo the row space (zeros in
    every pivot column); the surviving non-pivot coordinates give coordinates
    in the quotient ``Q^dim / rowspace`` with monomial complement basis.
    """

    def __init__(self, dim: int, vectors: Iterable[Mapping[int, Fraction]] = ()):
        self.dim = dim
        self._rows: list[dict] = []  # each row has a 1 at its pivot
        self._pivot_of: dict[int, int] = {}  # pivot column -> row index
        for v in vectors:
            self.add(v)

    def reduce(self, vec: Mapping[int, Fraction]) -> dict:
        v = {j: as_fraction(x) for j, x in vec.items() if x}
        for c in sorted(set(v) & self._pivot_of.keys()):
            a = v.get(c)
            if not a:
                continue
            for j, w in self._rows[self._pivot_of[c]].items():
                x = v.get(j, 0) - a * w
                if x:
                    v[j] = x
                else:
                    v.pop(j, None)
        return v

    def add(self, vec: Mapping[int, Fraction]) -> bool:
        """Insert ``vec``; returns False if it was already in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        inv = 1 / v[c]
        v = {j: x * inv for j, x in v.items()}
        # keep the echelon form fully reduced in the new pivot column
        for i, row in enumerate(self._rows):
            a = row.get(c)
            if a:
                for j, x in v.items():
                    y = row.get(j, 0) - a * x
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
        self._pivot_of[c] = len(self._rows)
        self._rows.append(v)
        return True

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._pivot_of)

    def complement(self) -> list[int]:
        """Non-pivot coordinates, i.e. a basis of the quotient by monomials."""
        return [j for j in range(self.dim) if j not in self._pivot_of]

    def basis(self) -> list[dict]:
        """Reduced echelon rows ordered by pivot column."""
        return [dict(self._rows[self._pivot_of[c]]) for c in self.pivots]

    def contains(self, vec: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vec)

    def coordinates(self, vec: Mapping[int, Fraction]) -> dict:
        """Coordinates of ``vec`` in :meth:`basis` (``vec`` must lie in the span)."""
        if not self.contains(vec):
            raise ValueError("vector is not in the row space")
        pos = {c: k for k, c in enumerate(self.pivots)}
        return {pos[c]: as_fraction(x) for c, x in vec.items() if c in pos and x}
