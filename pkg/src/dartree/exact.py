"""Exact arithmetic: rational linear algebra and square roots of rationals.

Null spaces and ranks are computed by fraction-free Gauss-Jordan elimination
on sparse integer rows. :class:`Surd` represents finite sums
``sum q_m * sqrt(m)`` with rational ``q_m`` and squarefree integers ``m``;
this set is a ring, so products of shift weights stay exact.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import sympy

Number = int | Fraction


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a finite decimal into a Fraction."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    return Fraction(text)


def fmt_rational(q: Number) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------- surds

@lru_cache(maxsize=None)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, m)`` with ``n == s*s*m`` and ``m`` squarefree."""
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    s, m = 1, 1
    for p, e in sympy.factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


class Surd:
    """Exact element of Q(sqrt 2, sqrt 3, ...), stored as {squarefree m: q}."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms = {m: Fraction(q) for m, q in (terms or {}).items() if q != 0}

    @classmethod
    def rational(cls, q: Number) -> "Surd":
        return cls({1: Fraction(q)})

    @classmethod
    def sqrt(cls, q: Number) -> "Surd":
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls()
        s, m = squarefree_split(q.numerator * q.denominator)
        return cls({m: Fraction(s, q.denominator)})

    @staticmethod
    def _coerce(other) -> "Surd":
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Fraction)):
            return Surd.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, q in other.terms.items():
            out[m] = out.get(m, 0) + q
        return Surd(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd({m: -q for m, q in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd({m: q * other for m, q in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for m1, q1 in self.terms.items():
            for m2, q2 in other.terms.items():
                g = math.gcd(m1, m2)
                m = (m1 // g) * (m2 // g)
                out[m] = out.get(m, 0) + q1 * q2 * g
        return Surd(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __float__(self):
        return float(sum(float(q) * math.sqrt(m) for m, q in self.terms.items()))

    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        return self.terms.get(1, Fraction(0))

    def __repr__(self):
        if not self.terms:
            return "Surd(0)"
        parts = [f"{q}*sqrt({m})" if m != 1 else f"{q}" for m, q in sorted(self.terms.items())]
        return "Surd(" + " + ".join(parts) + ")"


def as_exact(x) -> Surd:
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return Surd.rational(Fraction(x))
    raise TypeError(f"not an exact number: {x!r}")


# ------------------------------------------------------- rational elimination

def _integer_row(row: Iterable[tuple[int, Number]]) -> dict[int, int]:
    items = [(c, Fraction(v)) for c, v in row if v != 0]
    if not items:
        return {}
    lcm = 1
    for _, v in items:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    out = {c: int(v * lcm) for c, v in items}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _combine(r: dict[int, int], a: int, p: dict[int, int], b: int) -> dict[int, int]:
    """Return primitive(a*r - b*p) with zero entries dropped."""
    out = {c: a * v for c, v in r.items()} if a != 1 else dict(r)
    for c, v in p.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _primitive(out)


class Echelon:
    """Incremental reduced row echelon form over the integers (fraction-free).

    Each stored pivot row has no entries in any other pivot column.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, int]] = {}

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        for c in [c for c in row if c in self.pivots]:
            if c not in row:
                continue
            p = self.pivots[c]
            a, b = p[c], row[c]
            g = math.gcd(a, b)
            row = _combine(row, a // g, p, b // g)
        return row

    def add(self, row: Iterable[tuple[int, Number]] | dict) -> bool:
        """Insert a row; return True if it increased the rank."""
        if isinstance(row, dict):
            row = row.items()
        r = self.reduce(_integer_row(row))
        if not r:
            return False
        c = min(r)
        if r[c] < 0:
            r = {k: -v for k, v in r.items()}
        for pc, p in list(self.pivots.items()):
            if c in p:
                a, b = r[c], p[c]
                g = math.gcd(a, b)
                q = _combine(p, a // g, r, b // g)
                if q[pc] < 0:
                    q = {k: -v for k, v in q.items()}
                self.pivots[pc] = q
        self.pivots[c] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def nullspace(self) -> list[list[Fraction]]:
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for f in free:
            users = [(pc, p) for pc, p in self.pivots.items() if f in p]
            lcm = 1
            for pc, p in users:
                lcm = lcm * p[pc] // math.gcd(lcm, p[pc])
            vec = [0] * self.ncols
            vec[f] = lcm
            for pc, p in users:
                vec[pc] = -p[f] * (lcm // p[pc])
            g = 0
            for v in vec:
                g = math.gcd(g, v)
            basis.append([Fraction(v // g) for v in vec])
        return basis


def _rows_to_items(rows):
    for row in rows:
        if isinstance(row, dict):
            yield row.items()
        else:
            yield ((c, v) for c, v in enumerate(row))


def nullspace(rows: Sequence, ncols: int) -> list[list[Fraction]]:
    """Exact basis of {x : A x = 0}; rows are dense sequences or sparse dicts."""
    ech = Echelon(ncols)
    for items in _rows_to_items(rows):
        ech.add(items)
    return ech.nullspace()


def rank(rows: Sequence, ncols: int | None = None) -> int:
    rows = list(rows)
    if ncols is None:
        ncols = max((len(r) for r in rows if not isinstance(r, dict)), default=0)
        ncols = max([ncols] + [max(r, default=-1) + 1 for r in rows if isinstance(r, dict)])
    ech = Echelon(ncols)
    for items in _rows_to_items(rows):
        ech.add(items)
    return ech.rank


def span_equal(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> bool:
    """True iff the row spaces of ``a`` and ``b`` coincide (exact)."""
    a, b = list(a), list(b)
    if not a and not b:
        return True
    ncols = len((a or b)[0])
    ra, rb = rank(a, ncols), rank(b, ncols)
    return ra == rb == rank(a + b, ncols)


def in_span(vec: Sequence[Number], basis: Sequence[Sequence[Number]]) -> bool:
    ncols = len(vec)
    return rank(list(basis), ncols) == rank(list(basis) + [vec], ncols)
