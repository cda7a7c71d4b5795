"""Exact rational linear algebra: formal linear combinations and row spaces.

Coefficients are :class:`fractions.Fraction` throughout.  Basis elements can be
any hashable object; when an ordering is needed (echelon forms, printing) the
object's ``canonical_key()`` byte string is used, falling back to ``repr``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

Rational = Fraction


def canonical_key(obj: Any) -> bytes:
    method = getattr(obj, "canonical_key", None)
    if method is not None:
        return method()
    return repr(obj).encode()


class LinComb:
    """Immutable finite linear combination ``sum c_x * x`` with ``c_x != 0``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Hashable, Any] | Iterable[tuple[Hashable, Any]] = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for x, c in items:
            acc[x] = acc.get(x, 0) + c
        self._terms = {x: Fraction(c) for x, c in acc.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LinComb":
        # terms already nonzero Fractions
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def of(cls, x: Hashable, coef: Any = 1) -> "LinComb":
        return cls({x: coef})

    @property
    def terms(self) -> Mapping[Hashable, Fraction]:
        return dict(self._terms)

    def support(self) -> set:
        return set(self._terms)

    def coefficient(self, x: Hashable) -> Fraction:
        return self._terms.get(x, Fraction(0))

    def items(self):
        return self._terms.items()

    def sorted_items(self) -> list[tuple[Any, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: canonical_key(kv[0]))

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        out = dict(self._terms)
        for x, c in other._terms.items():
            s = out.get(x, 0) + c
            if s:
                out[x] = s
            else:
                out.pop(x, None)
        return LinComb._raw(out)

    def __neg__(self) -> "LinComb":
        return LinComb._raw({x: -c for x, c in self._terms.items()})

    def __sub__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, c: Any) -> "LinComb":
        return self.scale(c)

    def __mul__(self, c: Any) -> "LinComb":
        return self.scale(c)

    def scale(self, c: Any) -> "LinComb":
        c = Fraction(c)
        if c == 0:
            return LinComb()
        return LinComb._raw({x: c * v for x, v in self._terms.items()})

    def map_basis(self, f: Callable[[Any], Any]) -> "LinComb":
        """Linear extension of ``f``; ``f`` may return a basis element or a LinComb."""
        acc: dict = {}
        for x, c in self._terms.items():
            y = f(x)
            if isinstance(y, LinComb):
                for z, d in y._terms.items():
                    acc[z] = acc.get(z, 0) + c * d
            elif y is not None:
                acc[y] = acc.get(y, 0) + c
        return LinComb._raw({k: v for k, v in acc.items() if v})

    def __repr__(self) -> str:
        if not self._terms:
            return "LinComb(0)"
        parts = [f"{c}*{x!r}" for x, c in self.sorted_items()]
        return "LinComb(" + " + ".join(parts) + ")"


def lincomb_add(a: LinComb, b: LinComb) -> LinComb:
    return a + b


def lincomb_scale(c: Any, a: LinComb) -> LinComb:
    return a.scale(c)


def lincomb_sum(parts: Iterable[LinComb]) -> LinComb:
    acc: dict = {}
    for p in parts:
        for x, c in p.items():
            acc[x] = acc.get(x, 0) + c
    return LinComb._raw({k: v for k, v in acc.items() if v})


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _to_integer_row(v: LinComb) -> dict:
    den = 1
    for c in v._terms.values():
        d = c.denominator
        den = den * d // gcd(den, d)
    return {x: int(c * den) for x, c in v._terms.items()}


class RowSpace:
    """Incrementally built subspace of the free vector space on hashable keys.

    Rows are kept fully reduced and primitive over the integers (fraction-free
    elimination); :meth:`rows` performs the final normalisation to pivot 1.
    The pivot of each row is its smallest column in ``order``.
    """

    def __init__(self, order: Callable[[Any], Any] = canonical_key):
        self._order = order
        self._okey: dict = {}
        self._rows: dict = {}  # pivot column -> primitive integer row (pivot coef > 0)

    def _key(self, x):
        k = self._okey.get(x)
        if k is None:
            k = self._order(x)
            self._okey[x] = k
        return k

    @property
    def rank(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def pivots(self) -> list:
        return sorted(self._rows, key=self._key)

    def _reduce(self, row: dict) -> dict:
        rows = self._rows
        for p in [k for k in row if k in rows]:
            c = row.get(p)
            if not c:
                continue
            prow = rows[p]
            a = prow[p]
            g = gcd(a, c)
            ma, mc = a // g, c // g
            out = {k: ma * v for k, v in row.items()} if ma != 1 else dict(row)
            for k, v in prow.items():
                s = out.get(k, 0) - mc * v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
            row = out
        return _primitive(row) if row else row

    def reduce(self, v: LinComb) -> LinComb:
        """Return a nonzero multiple of the remainder of ``v`` (zero iff ``v`` in span)."""
        return LinComb(self._reduce(_to_integer_row(v)))

    def contains(self, v: LinComb) -> bool:
        if not v:
            return True
        return not self._reduce(_to_integer_row(v))

    def __contains__(self, v: LinComb) -> bool:
        return self.contains(v)

    def insert(self, v: LinComb) -> bool:
        """Add ``v`` to the span; return True iff the rank grew."""
        if not v:
            return False
        row = self._reduce(_to_integer_row(v))
        if not row:
            return False
        p = min(row, key=self._key)
        if row[p] < 0:
            row = {k: -c for k, c in row.items()}
        a = row[p]
        for q, other in list(self._rows.items()):
            c = other.get(p)
            if not c:
                continue
            g = gcd(a, c)
            ma, mc = a // g, c // g
            out = {k: ma * w for k, w in other.items()}
            for k, w in row.items():
                s = out.get(k, 0) - mc * w
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
            out = _primitive(out)
            if out[q] < 0:
                out = {k: -w for k, w in out.items()}
            self._rows[q] = out
        self._rows[p] = row
        return True

    def rows(self) -> list[LinComb]:
        """Reduced echelon basis, pivot coefficient 1, sorted by pivot."""
        out = []
        for p in self.pivots():
            row = self._rows[p]
            a = row[p]
            out.append(LinComb._raw({k: Fraction(c, a) for k, c in row.items()}))
        return out

    def copy(self) -> "RowSpace":
        other = RowSpace(self._order)
        other._okey = dict(self._okey)
        other._rows = {p: dict(r) for p, r in self._rows.items()}
        return other


def rowspace_insert(rs: RowSpace, v: LinComb) -> tuple[RowSpace, bool]:
    grew = rs.insert(v)
    return rs, grew


def rowspace_contains(rs: RowSpace, v: LinComb) -> bool:
    return rs.contains(v)


def span(vectors: Iterable[LinComb], order: Callable[[Any], Any] = canonical_key) -> RowSpace:
    rs = RowSpace(order)
    for v in vectors:
        rs.insert(v)
    return rs


def nullspace(constraints: Iterable[LinComb], columns: Iterable[Any],
              order: Callable[[Any], Any] = canonical_key) -> list[LinComb]:
    """Basis of ``{x = sum x_c c : <row, x> = 0 for each constraint row}``.

    ``constraints`` are LinCombs over ``columns`` read as coefficient rows.
    """
    rs = span(constraints, order)
    columns = list(columns)
    pivots = set(rs.pivots())
    rows = rs.rows()
    out = []
    for free in sorted((c for c in columns if c not in pivots), key=order):
        vec = {free: Fraction(1)}
        for r in rows:
            c = r.coefficient(free)
            if c:
                p = min(r, key=order)
                vec[p] = -c
        out.append(LinComb(vec))
    return out
