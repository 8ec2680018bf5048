"""Polynomial spaces, principal-ideal slices and univariate sum dimensions.

Polynomials are dictionaries ``{(i, j): Fraction}`` keyed by the exponents of
``x**i * y**j``.  A :class:`PolySpaceSpec` fixes an ordered monomial basis so
polynomials can be turned into sparse coordinate vectors; because the key is
the exponent pair, embedding a smaller space into a larger one is a lookup.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

from .exactla import RationalMatrix, RowSpace, as_fraction, rank

TOTAL = "total"
BIDEGREE = "bidegree"

Poly = dict  # {(i, j): Fraction}


@dataclass(frozen=True)
class PolySpaceSpec:
    """Total-degree space ``P_m`` or bidegree space ``P_{m,m}``."""

    kind: str
    m: int

    def __post_init__(self):
        if self.kind not in (TOTAL, BIDEGREE):
            raise ValueError(f"unknown polynomial space kind {self.kind!r}")
        if self.m < 0:
            raise ValueError("degree bound must be non-negative")

    @cached_property
    def monomials(self) -> tuple[tuple[int, int], ...]:
        if self.kind == TOTAL:
            return tuple((i, d - i) for d in range(self.m + 1) for i in range(d, -1, -1))
        return tuple((i, j) for j in range(self.m + 1) for i in range(self.m + 1))

    @cached_property
    def index(self) -> dict:
        return {mono: k for k, mono in enumerate(self.monomials)}

    @property
    def dim(self) -> int:
        return space_dim(self)

    def contains_monomial(self, mono) -> bool:
        i, j = mono
        if i < 0 or j < 0:
            return False
        if self.kind == TOTAL:
            return i + j <= self.m
        return i <= self.m and j <= self.m

    def contains(self, other: "PolySpaceSpec") -> bool:
        """True iff ``other`` is a subspace of this space."""
        if other.kind == BIDEGREE:
            return self.contains_monomial((other.m, other.m))
        return self.contains_monomial((other.m, 0)) and self.contains_monomial((0, other.m))

    def vector(self, poly: Poly) -> dict:
        """Coordinates of ``poly`` in the monomial basis; raises if it does not fit."""
        out = {}
        idx = self.index
        for mono, c in poly.items():
            if not c:
                continue
            try:
                out[idx[mono]] = c
            except KeyError:
                raise ValueError(f"monomial {mono} is not in {self}") from None
        return out

    def __str__(self):
        return f"P_{self.m}" if self.kind == TOTAL else f"P_({self.m},{self.m})"


def space_dim(spec: PolySpaceSpec) -> int:
    if spec.kind == TOTAL:
        return (spec.m + 1) * (spec.m + 2) // 2
    return (spec.m + 1) ** 2


def larger(a: PolySpaceSpec, b: PolySpaceSpec) -> PolySpaceSpec:
    """The sum ``a + b`` under the nesting assumption; raises if neither contains the other."""
    if a.contains(b):
        return a
    if b.contains(a):
        return b
    raise ValueError(f"polynomial spaces {a} and {b} are not nested")


@dataclass(frozen=True)
class LinearForm:
    """``a*x + b*y + c`` normalized so the first nonzero of ``(a, b)`` is 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        a, b, c = (as_fraction(v) for v in (self.a, self.b, self.c))
        if a == 0 and b == 0:
            raise ValueError("linear form must have a nonzero x or y coefficient")
        lead = a if a != 0 else b
        object.__setattr__(self, "a", a / lead)
        object.__setattr__(self, "b", b / lead)
        object.__setattr__(self, "c", c / lead)

    @classmethod
    def through(cls, p, q) -> "LinearForm":
        """Form vanishing on the line through points ``p`` and ``q``."""
        (x0, y0), (x1, y1) = p, q
        dx, dy = as_fraction(x1) - as_fraction(x0), as_fraction(y1) - as_fraction(y0)
        if dx == 0 and dy == 0:
            raise ValueError("degenerate edge: endpoints coincide")
        # normal (dy, -dx)
        return cls(dy, -dx, -(dy * as_fraction(x0) - dx * as_fraction(y0)))

    @property
    def direction(self) -> tuple[Fraction, Fraction]:
        """Normalized normal direction; equal for parallel lines."""
        return (self.a, self.b)

    def __call__(self, x, y) -> Fraction:
        return self.a * as_fraction(x) + self.b * as_fraction(y) + self.c

    def poly(self) -> Poly:
        p = {}
        for mono, v in (((1, 0), self.a), ((0, 1), self.b), ((0, 0), self.c)):
            if v:
                p[mono] = v
        return p

    @property
    def is_axis_parallel(self) -> bool:
        return self.a == 0 or self.b == 0

    def __str__(self):
        parts = []
        for coef, name in ((self.a, "x"), (self.b, "y")):
            if coef:
                parts.append(f"{coef}*{name}" if coef != 1 else name)
        if self.c:
            parts.append(str(self.c))
        return " + ".join(parts)


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: dict = {}
    for (i1, j1), a in p.items():
        for (i2, j2), b in q.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + a * b
    return {k: v for k, v in out.items() if v}


def poly_pow(p: Poly, e: int) -> Poly:
    out: Poly = {(0, 0): Fraction(1)}
    for _ in range(e):
        out = poly_mul(out, p)
    return out


def _shift(p: Poly, mono) -> Poly:
    di, dj = mono
    return {(i + di, j + dj): v for (i, j), v in p.items()}


def _multiplier_monomials(spec: PolySpaceSpec, form: LinearForm, exponent: int) -> list:
    """Monomials ``q`` such that ``form**exponent * q`` spans the ideal slice in ``spec``."""
    m = spec.m
    if exponent > m:
        return []
    if spec.kind == TOTAL:
        return list(PolySpaceSpec(TOTAL, m - exponent).monomials)
    if exponent == 0:
        return list(spec.monomials)
    if form.b == 0:  # x + c: only the x-degree is consumed
        return [(i, j) for j in range(m + 1) for i in range(m - exponent + 1)]
    if form.a == 0:
        return [(i, j) for j in range(m - exponent + 1) for i in range(m + 1)]
    return [(i, j) for j in range(m - exponent + 1) for i in range(m - exponent + 1)]


def ideal_generators(spec: PolySpaceSpec, form: LinearForm, exponent: int) -> list[Poly]:
    """Polynomials spanning ``{form**exponent * f} ∩ spec``."""
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    base = poly_pow(form.poly(), exponent)
    return [_shift(base, mono) for mono in _multiplier_monomials(spec, form, exponent)]


def principal_ideal_dim(spec: PolySpaceSpec, form: LinearForm, exponent: int) -> int:
    """Dimension of the multiples of ``form**exponent`` inside ``spec``."""
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    m = spec.m
    if exponent > m:
        return 0
    if spec.kind == TOTAL:
        return space_dim(PolySpaceSpec(TOTAL, m - exponent))
    if form.is_axis_parallel:
        return (m - exponent + 1) * (m + 1)
    gens = ideal_generators(spec, form, exponent)
    return rank(RationalMatrix(len(gens), spec.dim, [spec.vector(g) for g in gens]))


def ideal_sum_space(spec: PolySpaceSpec, generators: Iterable[tuple[PolySpaceSpec, LinearForm, int]]) -> RowSpace:
    """Row space of ``sum_k <form_k**exp_k> ∩ sub_k`` inside ``spec``.

    Each generator triple carries its own (possibly smaller) ambient space
    ``sub_k``; the ideal slice is built there and embedded into ``spec``.
    """
    space = RowSpace(spec.dim)
    for sub, form, exponent in generators:
        if not spec.contains(sub):
            raise ValueError(f"{sub} is not contained in {spec}")
        for g in ideal_generators(sub, form, exponent):
            space.add(spec.vector(g))
            if space.rank == spec.dim:
                return space
    return space


def ideal_sum_dim(spec: PolySpaceSpec, generators: Iterable[tuple[PolySpaceSpec, LinearForm, int]]) -> int:
    return ideal_sum_space(spec, generators).rank


# ---------------------------------------------------------------------------
# univariate sums  V = sum_i (x - a_i)^{d_i} * Pbar_{m - d_i - e_i}


@dataclass(frozen=True)
class ShiftedPoint:
    """Root ``a``, exponent ``d >= -1`` and degree shift ``e >= 0``."""

    a: Fraction
    d: int
    e: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        if self.d < -1:
            raise ValueError("exponent d must be >= -1")
        if self.e < 0:
            raise ValueError("degree shift e must be >= 0")


def min_index_set(points: Sequence[ShiftedPoint], subset: Iterable[int] | None = None) -> list[int]:
    """Indices with distinct roots, keeping for each root the smallest exponent.

    Among indices sharing root and exponent the smallest index is kept.
    """
    if subset is None:
        subset = range(len(points))
    best: dict = {}
    for i in sorted(subset):
        p = points[i]
        cur = best.get(p.a)
        if cur is None or p.d < points[cur].d:
            best[p.a] = i
    return sorted(best.values())


def _uniform_dim(k: int, points: Sequence[ShiftedPoint], subset: Iterable[int]) -> int:
    # dim sum_{i in subset} l_i^{d_i} Pbar_{k - d_i}
    if k < 0:
        return 0
    total = sum(max(0, k - points[i].d + 1) for i in min_index_set(points, subset))
    return min(k + 1, total)


def univ_sum_dim_closed_form(m: int, points: Sequence[ShiftedPoint]) -> int:
    """Telescoped closed form over the distinct degree shifts.

    The shifts are processed in decreasing order ``e^1 > e^2 > ...`` (with
    ``e^0 = m + 1``); level ``j`` adds the contribution of the points whose
    shift is below ``e^j`` between the degree bounds ``m - e^j`` and
    ``m - e^{j+1}``.  Exact when all points share one shift.  With several
    shifts it can overcount: for ``m = 4`` and points ``(2, 3, 1)``,
    ``(-2, 0, 2)``, ``(-1, 3, 1)`` it returns 5 while the space has
    dimension 4.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if not points:
        return 0
    shifts = sorted({p.e for p in points}, reverse=True)
    thresholds = [m + 1] + shifts
    total = 0
    for j in range(len(shifts)):
        active = [i for i, p in enumerate(points) if p.e < thresholds[j]]
        total += _uniform_dim(m - thresholds[j + 1], points, active)
        total -= _uniform_dim(m - thresholds[j], points, active)
    return total


def power_sets(m: int, points: Sequence[ShiftedPoint]) -> dict:
    """Per root ``a``, the exponents ``j`` with ``(x-a)**j`` among the generators.

    ``(x-a)^d * Pbar_{k-d}`` is spanned by ``(x-a)^j`` for ``d <= j <= k``, so
    each point contributes an integer interval.
    """
    out: dict = {}
    for p in points:
        lo, hi = max(p.d, 0), m - p.e
        out.setdefault(p.a, set()).update(range(lo, hi + 1))
    return {a: js for a, js in out.items() if js}


def univ_sum_dim(m: int, points: Sequence[ShiftedPoint]) -> int:
    """Dimension of ``V = sum_i (x-a_i)^{d_i} Pbar_{m-d_i-e_i}``.

    With a single degree shift ``e`` this is the closed formula
    ``min(m-e+1, sum_{i in M(I)} (m-e-d_i+1)_+)``.  With several shifts the
    dimension depends on the root positions (Birkhoff-type coincidences), so
    the distinct powers ``(x-a)^j`` are reduced exactly instead.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if not points:
        return 0
    shifts = {p.e for p in points}
    if len(shifts) == 1:
        return _uniform_dim(m - shifts.pop(), points, range(len(points)))
    space = RowSpace(m + 1)
    for a, js in sorted(power_sets(m, points).items()):
        root = {(1, 0): Fraction(1), (0, 0): -a}
        for j in sorted(js):
            space.add({i: v for (i, _), v in poly_pow(root, j).items()})
            if space.rank == m + 1:
                return m + 1
    return space.rank


def univ_sum_dim_oracle(m: int, points: Sequence[ShiftedPoint]) -> int:
    """Rank of all generators ``(x-a_i)^{d_i} x^k`` in the monomial basis of ``Pbar_m``."""
    rows = []
    for p in points:
        d = max(p.d, 0)
        top = m - max(p.d, 0) - p.e
        base = poly_pow({(1, 0): Fraction(1), (0, 0): -p.a}, d)
        for k in range(top + 1):
            rows.append({i + k: v for (i, _), v in base.items()})
    return rank(RationalMatrix(len(rows), m + 1, rows))


def is_full(m: int, points: Sequence[ShiftedPoint]) -> bool:
    return univ_sum_dim(m, points) == m + 1


def binomial_dim(n: int) -> int:
    """``binom(n + 2, 2)`` clamped at zero, the dimension of ``P_n``."""
    return comb(n + 2, 2) if n >= 0 else 0
