"""Truncated exponential generating functions with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Sequence

DEFAULT_ORDER = 12


class SeriesError(ValueError):
    pass


class TruncEGF:
    """``sum_{n <= N} c_n x^n``; the species dimension at ``n`` is ``n! * c_n``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is not None:
            cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        if not cs:
            cs = [Fraction(0)]
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_dims(cls, dims: Sequence[int], order: int | None = None, constant=0) -> "TruncEGF":
        """Series with ``dims[0]`` at ``n = 1``."""
        cs = [Fraction(constant)] + [Fraction(d, factorial(n)) for n, d in enumerate(dims, start=1)]
        return cls(cs, order)

    @classmethod
    def const(cls, c, order: int = DEFAULT_ORDER) -> "TruncEGF":
        return cls([c], order)

    @classmethod
    def x(cls, order: int = DEFAULT_ORDER) -> "TruncEGF":
        return cls([0, 1], order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n <= self.order else Fraction(0)

    def dim(self, n: int) -> Fraction:
        return factorial(n) * self[n]

    def dims(self, start: int = 1) -> list:
        out = []
        for n in range(start, self.order + 1):
            d = self.dim(n)
            out.append(int(d) if d.denominator == 1 else d)
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _align(self, other) -> tuple["TruncEGF", "TruncEGF"]:
        if not isinstance(other, TruncEGF):
            other = TruncEGF.const(other, self.order)
        n = min(self.order, other.order)
        return TruncEGF(self.coeffs, n), TruncEGF(other.coeffs, n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncEGF):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "TruncEGF":
        a, b = self._align(other)
        return TruncEGF(x + y for x, y in zip(a.coeffs, b.coeffs))

    __radd__ = __add__

    def __neg__(self) -> "TruncEGF":
        return TruncEGF(-c for c in self.coeffs)

    def __sub__(self, other) -> "TruncEGF":
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other) -> "TruncEGF":
        return (-self) + other

    def __mul__(self, other) -> "TruncEGF":
        if not isinstance(other, TruncEGF):
            c = Fraction(other)
            return TruncEGF(c * x for x in self.coeffs)
        a, b = self._align(other)
        n = a.order
        out = [Fraction(0)] * (n + 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j in range(n + 1 - i):
                    out[i + j] += x * b.coeffs[j]
        return TruncEGF(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncEGF":
        if k < 0:
            return self.reciprocal() ** (-k)
        out = TruncEGF.const(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def scale_arg(self, c) -> "TruncEGF":
        """``f(c x)``."""
        c = Fraction(c)
        return TruncEGF(x * c ** n for n, x in enumerate(self.coeffs))

    def derivative(self) -> "TruncEGF":
        return TruncEGF([n * c for n, c in enumerate(self.coeffs)][1:] + [Fraction(0)])

    def integral(self) -> "TruncEGF":
        return TruncEGF([Fraction(0)] + [c / (n + 1) for n, c in enumerate(self.coeffs[:-1])])

    def reciprocal(self) -> "TruncEGF":
        f = self.coeffs
        if f[0] == 0:
            raise SeriesError("reciprocal needs a nonzero constant term")
        g = [Fraction(0)] * (self.order + 1)
        g[0] = 1 / f[0]
        for n in range(1, self.order + 1):
            g[n] = -sum(f[k] * g[n - k] for k in range(1, n + 1)) / f[0]
        return TruncEGF(g)

    def sqrt(self) -> "TruncEGF":
        f = self.coeffs
        if f[0] != 1:
            raise SeriesError("sqrt is implemented for constant term 1")
        g = [Fraction(0)] * (self.order + 1)
        g[0] = Fraction(1)
        for n in range(1, self.order + 1):
            g[n] = (f[n] - sum(g[k] * g[n - k] for k in range(1, n))) / 2
        return TruncEGF(g)

    def exp(self) -> "TruncEGF":
        f = self.coeffs
        if f[0] != 0:
            raise SeriesError("exp needs a zero constant term")
        g = [Fraction(0)] * (self.order + 1)
        g[0] = Fraction(1)
        for n in range(1, self.order + 1):
            g[n] = sum(k * f[k] * g[n - k] for k in range(1, n + 1)) / n
        return TruncEGF(g)

    def log(self) -> "TruncEGF":
        if self.coeffs[0] != 1:
            raise SeriesError("log needs constant term 1")
        return (self.derivative() * self.reciprocal()).integral()

    def compose(self, inner: "TruncEGF") -> "TruncEGF":
        """``self(inner(x))`` by Horner's scheme."""
        if inner[0] != 0:
            raise SeriesError("composition needs an inner series without constant term")
        a, b = self._align(inner)
        out = TruncEGF.const(0, a.order)
        for c in reversed(a.coeffs):
            out = out * b + c
        return out

    def compositional_inverse(self) -> "TruncEGF":
        """``g`` with ``self(g(x)) = x``, by Newton iteration."""
        if self[0] != 0 or self[1] == 0:
            raise SeriesError("inverse needs c0 = 0 and c1 != 0")
        n = self.order
        x = TruncEGF.x(n)
        g = TruncEGF([0, 1 / self[1]], n)
        df = self.derivative()
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            g = g - (self.compose(g) - x) * df.compose(g).reciprocal()
        return g

    def __repr__(self) -> str:
        return f"TruncEGF({[str(c) for c in self.coeffs]})"


def x(order: int = DEFAULT_ORDER) -> TruncEGF:
    return TruncEGF.x(order)


def hilbert_commag(order: int = DEFAULT_ORDER) -> TruncEGF:
    """``1 - sqrt(1 - 2x)``."""
    return 1 - (1 - 2 * x(order)).sqrt()


def hilbert_com(order: int = DEFAULT_ORDER) -> TruncEGF:
    """``e^x - 1``."""
    return x(order).exp() - 1


def hilbert_sp(order: int = DEFAULT_ORDER) -> TruncEGF:
    """``exp(1 - sqrt(1 - 2x)) - 1``: forests of commutative magmatic pieces."""
    return hilbert_commag(order).exp() - 1


def hilbert_sp_dual(order: int = DEFAULT_ORDER) -> TruncEGF:
    """``((1 - log(1 - x))^2 - 1) / 2``."""
    if order < 1:
        raise SeriesError("order must be at least 1")
    u = 1 - (1 - x(order)).log()
    return (u * u - 1) * Fraction(1, 2)


def koszul_residual(h: TruncEGF, h_dual: TruncEGF) -> TruncEGF:
    """``h(-h_dual(-t)) - t``; zero for a Koszul pair."""
    inner = -(h_dual.scale_arg(-1))
    return h.compose(inner) - x(h.order)


# independent oracles ---------------------------------------------------------

def double_factorial_dims(n_max: int) -> list[int]:
    """``(2n - 3)!!``: commutative magmatic dimensions."""
    out = []
    for n in range(1, n_max + 1):
        v = 1
        for k in range(2 * n - 3, 0, -2):
            v *= k
        out.append(v)
    return out


def set_partition_dims(piece_dims: Sequence[int], n_max: int) -> list[int]:
    """Dimensions of sets of pieces, ``a_n = sum_k C(n-1, k-1) m_k a_{n-k}``."""
    from math import comb
    m = [0] + list(piece_dims)
    a = [1]
    for n in range(1, n_max + 1):
        a.append(sum(comb(n - 1, k - 1) * m[k] * a[n - k] for k in range(1, n + 1) if k < len(m)))
    return a[1:]


def cycle_pair_dims(n_max: int) -> list[int]:
    """Oracle for ``L + L^2/2`` with ``L = -log(1-x)``: ``(n-1)! + (1/2) sum C(n,k)(k-1)!(n-k-1)!``."""
    from math import comb
    out = []
    for n in range(1, n_max + 1):
        two = sum(comb(n, k) * factorial(k - 1) * factorial(n - k - 1) for k in range(1, n))
        out.append(factorial(n - 1) + two // 2)
    return out
