"""Exact rationals, rational enclosures and a sign oracle for real algebraic numbers.

Every real number handled here is either rational or one of a handful of
refinable quantities (square roots of square-free integers, roots of the
simplest cubic polynomials, and powers of those).  A refinable quantity can
produce a dyadic enclosure ``lo/2**bits <= x <= hi/2**bits`` at any requested
precision, computed purely with integer arithmetic.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "Enclosure",
    "Sign",
    "ExactReal",
    "SqrtReal",
    "CubicRootReal",
    "PowerReal",
    "is_squarefree",
    "sqrt_enclosure",
    "isolate_cubic_roots",
    "sign_exact",
    "floor_div",
    "ceil_div",
    "common_denominator",
    "dyadic_eval",
    "rational_inverse",
    "rational_det",
]


def floor_div(a: int, b: int) -> int:
    return a // b


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def is_squarefree(n: int) -> bool:
    """Trial division; fine for the desk-scale integers used here."""
    if n == 0:
        return False
    n = abs(n)
    if n % 4 == 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1 if k == 2 else 2
    return True


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


class Enclosure:
    """Closed interval ``[lo, hi]`` with exact rational endpoints.

    Supports the interval operations needed for building search boxes:
    addition, subtraction, multiplication, negation and reciprocal of an
    interval that excludes zero.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_dyadic(cls, lo: int, hi: int, bits: int) -> "Enclosure":
        return cls(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        if not isinstance(other, Enclosure):
            other = Enclosure(other)
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        if not isinstance(other, Enclosure):
            other = Enclosure(other)
        return Enclosure(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return Enclosure(other) - self

    def __mul__(self, other):
        if not isinstance(other, Enclosure):
            other = Fraction(other)
            a, b = self.lo * other, self.hi * other
            return Enclosure(min(a, b), max(a, b))
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Enclosure(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if not self.excludes_zero():
            raise ZeroDivisionError("enclosure contains zero")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if isinstance(other, Enclosure):
            return self * other.reciprocal()
        return self * (1 / Fraction(other))

    def __eq__(self, other):
        return isinstance(other, Enclosure) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Enclosure({self.lo}, {self.hi})"


# --------------------------------------------------------------------------
# refinable reals


class _Refinable:
    """Base for reals that yield dyadic enclosures at any precision."""

    def dyadic(self, bits: int) -> tuple[int, int]:  # pragma: no cover - abstract
        raise NotImplementedError

    def enclosure(self, bits: int = 64) -> Enclosure:
        lo, hi = self.dyadic(bits)
        return Enclosure.from_dyadic(lo, hi, bits)

    def enclosure_within(self, width) -> Enclosure:
        """Refine (doubling the precision) until the width is at most ``width``."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        bits = 8
        while True:
            enc = self.enclosure(bits)
            if enc.width <= width:
                return enc
            bits *= 2


class ExactReal(_Refinable):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)

    def dyadic(self, bits):
        num = self.value.numerator << bits
        den = self.value.denominator
        return floor_div(num, den), ceil_div(num, den)

    def __repr__(self):
        return f"ExactReal({self.value})"


@lru_cache(maxsize=4096)
def _isqrt_scaled(d: int, bits: int) -> int:
    return math.isqrt(d << (2 * bits))


class SqrtReal(_Refinable):
    """The positive square root of a square-free integer ``d >= 2``.

    ``dyadic(bits)`` equals the bracket produced by ``bits`` halvings of the
    integer bracket ``[floor(sqrt d), floor(sqrt d) + 1]``.
    """

    __slots__ = ("d",)

    def __init__(self, d: int):
        if d < 2 or not is_squarefree(d):
            raise ValueError(f"{d} is not a square-free integer >= 2")
        self.d = d

    def dyadic(self, bits):
        s = _isqrt_scaled(self.d, bits)
        return s, s + 1

    def __repr__(self):
        return f"SqrtReal({self.d})"


def sqrt_enclosure(d: int, width) -> Enclosure:
    """Enclosure of ``sqrt(d)`` of width at most ``width`` (dyadic bisection)."""
    if d < 2 or not is_squarefree(d):
        raise ValueError(f"{d} is not a square-free integer >= 2")
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    bits = 0
    while Fraction(1, 1 << bits) > width:
        bits += 1
    return SqrtReal(d).enclosure(bits)


def _cubic_sign_at(a: int, m: int, bits: int) -> int:
    # sign of f(m / 2**bits) for f = x^3 - a x^2 - (a+3) x - 1
    s = 1 << bits
    v = m * m * m - a * m * m * s - (a + 3) * m * s * s - s * s * s
    return (v > 0) - (v < 0)


@lru_cache(maxsize=None)
def _cubic_root_bracket(a: int, index: int) -> tuple[int, int]:
    """Integer bracket (n, n+1) of root ``index`` with a strict sign change."""
    if index == 1:
        return -2, -1
    if index == 2:
        return -1, 0
    n = a + 1
    while not (_cubic_sign_at(a, n, 0) < 0 < _cubic_sign_at(a, n + 1, 0)):
        n += 1
    return n, n + 1


@lru_cache(maxsize=None)
def _cubic_root_dyadic(a: int, index: int, bits: int) -> int:
    """``m`` with the root in the open interval (m/2**bits, (m+1)/2**bits)."""
    if bits == 0:
        return _cubic_root_bracket(a, index)[0]
    m = 2 * _cubic_root_dyadic(a, index, bits - 1)
    lo_sign = _cubic_sign_at(a, m, bits)
    mid_sign = _cubic_sign_at(a, m + 1, bits)
    if mid_sign == 0:  # impossible: the roots are irrational
        raise ArithmeticError("rational root of an irreducible cubic")
    return m if mid_sign != lo_sign else m + 1


class CubicRootReal(_Refinable):
    """Root of ``x^3 - a x^2 - (a+3) x - 1``: index 0 -> rho, 1 -> rho', 2 -> rho''."""

    __slots__ = ("a", "index")

    def __init__(self, a: int, index: int):
        if a < -1:
            raise ValueError("a must be >= -1")
        if index not in (0, 1, 2):
            raise ValueError("index must be 0, 1 or 2")
        self.a = a
        self.index = index

    def dyadic(self, bits):
        # refine in chunks so the cached recursion stays shallow
        for b in range(0, bits, 64):
            _cubic_root_dyadic(self.a, self.index, b)
        m = _cubic_root_dyadic(self.a, self.index, bits)
        return m, m + 1

    def __repr__(self):
        return f"CubicRootReal(a={self.a}, index={self.index})"


class PowerReal(_Refinable):
    __slots__ = ("base", "exponent")

    def __init__(self, base: _Refinable, exponent: int):
        if exponent < 1:
            raise ValueError("exponent must be positive")
        self.base = base
        self.exponent = exponent

    def dyadic(self, bits):
        e = self.exponent
        guard = bits + 4 * e + 8
        lo, hi = self.base.dyadic(guard)
        cands = (lo ** e, hi ** e)
        plo, phi = min(cands), max(cands)
        if e % 2 == 0 and lo < 0 < hi:
            plo = 0
        shift = guard * e - bits
        return plo >> shift, -((-phi) >> shift)

    def __repr__(self):
        return f"PowerReal({self.base!r}, {self.exponent})"


def isolate_cubic_roots(a: int) -> tuple[Enclosure, Enclosure, Enclosure]:
    """Disjoint enclosures of (rho, rho', rho'') for ``x^3 - a x^2 - (a+3) x - 1``.

    Each is an integer bracket refined until the three are pairwise disjoint;
    ``CubicRootReal(a, i).enclosure(bits)`` refines further on demand.
    """
    if a < -1:
        raise ValueError("a must be >= -1")
    roots = [CubicRootReal(a, i) for i in range(3)]
    bits = 0
    while True:
        encs = [r.enclosure(bits) for r in roots]
        if all(not encs[i].intersects(encs[j]) for i in range(3) for j in range(i + 1, 3)):
            return tuple(encs)
        bits += 1


def _interval_dot(nums: Sequence[int], basis: Sequence[_Refinable], bits: int) -> tuple[int, int]:
    lo = hi = 0
    for n, b in zip(nums, basis):
        if n == 0:
            continue
        blo, bhi = b.dyadic(bits)
        if n > 0:
            lo += n * blo
            hi += n * bhi
        else:
            lo += n * bhi
            hi += n * blo
    return lo, hi


def sign_exact(coords: Iterable, basis: Sequence[_Refinable], is_zero_vector: bool) -> Sign:
    """Sign of ``sum(c_i * b_i)``.

    Zero is decided only by ``is_zero_vector`` (the caller's exact coordinate
    test, valid because the bases used are linearly independent over Q).
    Otherwise precision doubles until the interval sum excludes zero, which
    terminates for every nonzero value.
    """
    if is_zero_vector:
        return Sign.ZERO
    nums, _ = common_denominator([Fraction(c) for c in coords])
    bits = 32
    while True:
        lo, hi = _interval_dot(nums, basis, bits)
        if lo > 0:
            return Sign.POSITIVE
        if hi < 0:
            return Sign.NEGATIVE
        bits *= 2
        if bits > 1 << 16:
            raise ArithmeticError("sign refinement did not terminate; value is probably zero")


def common_denominator(coords: Sequence[Fraction]) -> tuple[list[int], int]:
    """Integer numerators over the least common denominator."""
    den = 1
    for c in coords:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coords], den


def dyadic_eval(coords: Sequence[Fraction], basis: Sequence[_Refinable], bits: int) -> tuple[int, int]:
    """``(lo, hi)`` with ``lo <= 2**bits * sum(c_i b_i) <= hi``."""
    nums, den = common_denominator(coords)
    lo, hi = _interval_dot(nums, basis, bits)
    return floor_div(lo, den), ceil_div(hi, den)


def rational_inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def rational_det(matrix: Sequence[Sequence]) -> Fraction:
    n = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det
