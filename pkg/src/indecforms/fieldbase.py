"""Shared machinery for elements of the two field families.

An element is a tuple of rational coordinates over a fixed Q-basis of the
field (``{1, sqrt p, sqrt q, sqrt r}`` or ``{1, rho, rho^2}``).  Concrete
fields supply multiplication, the embeddings (as signed refinable reals per
basis vector), the integral basis and the automorphisms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exactnum import (
    Enclosure,
    Sign,
    _Refinable,
    dyadic_eval,
    rational_inverse,
    sign_exact,
)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class FieldMismatch(ValueError):
    pass


class FieldElement:
    """Immutable field element; concrete subclasses fix the field family."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        coords = tuple(_frac(c) for c in coords)
        if len(coords) != field.degree:
            raise ValueError(f"expected {field.degree} coordinates, got {len(coords)}")
        self.field = field
        self.coords = coords

    # -- coercion --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return type(self)(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return type(self)(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return type(self)(self.field, [a * other for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return type(self)(self.field, self.field._mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        other = self._coerce(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # solve x * y = 1 against the multiplication-by-x matrix
        d = self.field.degree
        cols = [self.field._mul(self.coords, [int(i == j) for i in range(d)]) for j in range(d)]
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        inv = rational_inverse(mat)
        return type(self)(self.field, [inv[i][0] for i in range(d)])

    # -- comparisons -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash((self.field.key, self.coords))

    def __lt__(self, other):
        # canonical total order on coordinates (used for deterministic output)
        return self.coords < other.coords

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    # -- embeddings ------------------------------------------------------
    def dyadic(self, k: int, bits: int) -> tuple[int, int]:
        return self.field.embed_dyadic(self.coords, k, bits)

    def enclosure(self, k: int, bits: int = 64) -> Enclosure:
        lo, hi = self.dyadic(k, bits)
        return Enclosure.from_dyadic(lo, hi, bits)

    def sign(self, k: int) -> Sign:
        signs, reals = self.field.embedding_basis(k)
        return sign_exact([s * c for s, c in zip(signs, self.coords)], reals, self.is_zero())

    def signs(self) -> tuple[Sign, ...]:
        return tuple(self.sign(k) for k in range(self.field.degree))

    def is_totally_positive(self) -> bool:
        return not self.is_zero() and all(self.sign(k) == Sign.POSITIVE for k in range(self.field.degree))

    def is_tp_or_zero(self) -> bool:
        return self.is_zero() or self.is_totally_positive()

    def succ(self, other) -> bool:
        """``self > other`` in the totally positive order."""
        return (self - other).is_totally_positive()

    def succeq(self, other) -> bool:
        return (self - other).is_tp_or_zero()

    # -- arithmetic invariants --------------------------------------------
    def conjugate(self, k: int):
        return self.field.conjugate(self, k)

    def trace(self) -> Fraction:
        return self.field.trace(self)

    def norm(self) -> Fraction:
        return self.field.norm(self)

    def integral_coords(self):
        """Coordinates over the integral basis if all are integers, else None."""
        n = self.field.to_integral_coords(self.coords)
        if all(x.denominator == 1 for x in n):
            return tuple(int(x) for x in n)
        return None

    def is_integral(self) -> bool:
        return self.integral_coords() is not None

    # -- serialization ---------------------------------------------------
    def to_json(self):
        return {"field": self.field.key, "coords": [str(c) for c in self.coords]}

    def __repr__(self):
        return f"{type(self).__name__}({self.field.key}, {self})"

    def __str__(self):
        names = self.field.basis_names
        parts = []
        for c, name in zip(self.coords, names):
            if c == 0:
                continue
            if name == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append("-" + name)
            else:
                parts.append(f"{c}*{name}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


class FieldBase:
    """Common field behaviour; subclasses set ``degree``, ``key``, ``basis_names``."""

    degree: int
    key: str
    basis_names: Sequence[str]
    element_class = FieldElement

    def elem(self, coords) -> FieldElement:
        return self.element_class(self, coords)

    def rational(self, x) -> FieldElement:
        return self.element_class(self, [x] + [0] * (self.degree - 1))

    @property
    def zero(self):
        return self.rational(0)

    @property
    def one(self):
        return self.rational(1)

    def __eq__(self, other):
        return isinstance(other, FieldBase) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    # subclasses provide _mul, embedding_basis, conjugate, trace, norm,
    # integral basis (self.integral_basis as coordinate rows) and automorphisms

    def embed_dyadic(self, coords, k: int, bits: int) -> tuple[int, int]:
        signs, reals = self.embedding_basis(k)
        return dyadic_eval([s * c for s, c in zip(signs, coords)], reals, bits)

    def _integral_inverse(self):
        cache = self.__dict__.get("_int_inv")
        if cache is None:
            cache = rational_inverse(self.integral_basis_rows)
            self.__dict__["_int_inv"] = cache
        return cache

    def to_integral_coords(self, coords) -> list[Fraction]:
        # element = sum_j n_j * row_j, so n = coords * rows^{-1}
        inv = self._integral_inverse()
        d = self.degree
        return [sum(coords[i] * inv[i][j] for i in range(d)) for j in range(d)]

    def from_integral_coords(self, ns) -> FieldElement:
        rows = self.integral_basis_rows
        d = self.degree
        return self.elem([sum(ns[j] * rows[j][i] for j in range(d)) for i in range(d)])

    @property
    def integral_basis(self) -> list:
        return [self.elem(row) for row in self.integral_basis_rows]

    def embedding_enclosures(self, elem, bits: int = 64) -> list[Enclosure]:
        return [elem.enclosure(k, bits) for k in range(self.degree)]

    def inverse_embedding(self, bits: int) -> list[list[Enclosure]]:
        """Enclosures of ``M`` with ``n_j = sum_k M[j][k] sigma_k(x)`` for integral coords ``n``."""
        raise NotImplementedError
