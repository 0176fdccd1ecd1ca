"""Simplest cubic fields Q(rho), rho the largest root of x^3 - a x^2 - (a+3) x - 1.

Elements are stored over ``{1, rho, rho^2}``.  Embedding ``k`` sends rho to
rho (k=0), rho' in (-2,-1) (k=1) or rho'' in (-1,0) (k=2).  The Galois
images of rho are found inside Z[rho] by solving the quotient quadratic of
the minimal polynomial, not by a closed formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .exactnum import (
    CubicRootReal,
    Enclosure,
    ExactReal,
    PowerReal,
    is_squarefree,
    isolate_cubic_roots,
)
from .fieldbase import FieldBase, FieldElement


class MonogenicityError(ValueError):
    pass


class CubicElem(FieldElement):
    __slots__ = ()


@dataclass(frozen=True, order=True)
class TrianglePoint:
    v: int
    w: int
    a: int

    @property
    def W(self) -> int:
        return self.w - self.v * (self.a + 2) - 1

    @classmethod
    def from_vW(cls, a: int, v: int, W: int) -> "TrianglePoint":
        return cls(v, v * (a + 2) + W + 1, a)

    def is_valid(self) -> bool:
        a, v, w = self.a, self.v, self.w
        return 0 <= v <= a and v * (a + 2) + 1 <= w <= (v + 1) * (a + 1)

    def to_json(self):
        return {"v": self.v, "w": self.w}


class CubicField(FieldBase):
    degree = 3
    element_class = CubicElem
    basis_names = ("1", "rho", "rho^2")

    def __init__(self, a: int, monogenic_checked: bool):
        self.a = a
        self.key = str(a)
        self.monogenic_checked = monogenic_checked
        self.root_enclosures = isolate_cubic_roots(a)
        self._roots = tuple(CubicRootReal(a, k) for k in range(3))
        self._basis = tuple((ExactReal(1), r, PowerReal(r, 2)) for r in self._roots)
        self.integral_basis_rows = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        self.integral_basis_rows = [tuple(Fraction(x) for x in row) for row in self.integral_basis_rows]

    def __repr__(self):
        return f"CubicField(a={self.a})"

    @property
    def rho(self) -> CubicElem:
        return self.elem((0, 1, 0))

    @property
    def disc_factor(self) -> int:
        return self.a * self.a + 3 * self.a + 9

    # -- arithmetic ------------------------------------------------------
    def _mul(self, x, y):
        a = self.a
        c = [Fraction(0)] * 5
        for i in range(3):
            if x[i]:
                for j in range(3):
                    c[i + j] += x[i] * y[j]
        # rho^4 = (a^2+a+3) rho^2 + (a^2+3a+1) rho + a
        c0 = c[0] + a * c[4]
        c1 = c[1] + (a * a + 3 * a + 1) * c[4]
        c2 = c[2] + (a * a + a + 3) * c[4]
        # rho^3 = a rho^2 + (a+3) rho + 1
        return (c0 + c[3], c1 + (a + 3) * c[3], c2 + a * c[3])

    def embedding_basis(self, k: int):
        return (1, 1, 1), self._basis[k]

    def trace(self, elem) -> Fraction:
        c0, c1, c2 = elem.coords
        a = self.a
        return 3 * c0 + a * c1 + (a * a + 2 * a + 6) * c2

    def norm(self, elem) -> Fraction:
        prod = elem * self.conjugate(elem, 1) * self.conjugate(elem, 2)
        assert prod.is_rational()
        return prod.coords[0]

    # -- Galois action ---------------------------------------------------
    @cached_property
    def rho_images(self) -> tuple[CubicElem, CubicElem, CubicElem]:
        """Elements of Z[rho] equal to rho, rho', rho'' under the identity embedding."""
        from .lattice import box_search

        a = self.a
        rho = self.rho
        disc = -3 * rho * rho + 2 * a * rho + (a * a + 4 * a + 12)
        # s^2 = disc with |sigma_k(s)| <= sqrt(sigma_k(disc))
        bounds = []
        for k in range(3):
            hi = disc.enclosure(k, 32).hi
            root = Fraction(math.isqrt(math.floor(hi)) + 1)
            bounds.append((-root, root))
        roots = [s for s in box_search(self, bounds) if s * s == disc]
        images = {}
        for s in roots:
            cand = (a - rho + s) * Fraction(1, 2)
            if not cand.is_integral() or self.minpoly_at(cand) != 0:
                continue
            enc = cand.enclosure(0, 64)
            if -2 < enc.lo and enc.hi < -1:
                images[1] = cand
            elif -1 < enc.lo and enc.hi < 0:
                images[2] = cand
        if set(images) != {1, 2}:
            raise AssertionError(f"Galois images of rho not found for a={a}")
        return rho, images[1], images[2]

    def minpoly_at(self, x: CubicElem) -> CubicElem:
        a = self.a
        return x * x * x - a * x * x - (a + 3) * x - 1

    def conjugate(self, elem: CubicElem, k: int) -> CubicElem:
        if k not in (0, 1, 2):
            raise ValueError("conjugate index must be 0, 1 or 2")
        if k == 0:
            return elem
        img = self.rho_images[k]
        c0, c1, c2 = elem.coords
        return c0 + c1 * img + c2 * img * img

    def automorphisms(self):
        return [lambda e, k=k: self.conjugate(e, k) for k in range(3)]

    # -- special elements --------------------------------------------------
    @cached_property
    def rho_sq(self) -> CubicElem:
        return self.elem((0, 0, 1))

    @cached_property
    def inv_rho_prime_sq(self) -> CubicElem:
        a = self.a
        return self.elem((-(a + 1), -(a * a + 3 * a + 3), a + 2))

    @cached_property
    def delta_tilde(self) -> CubicElem:
        a = self.a
        rho = self.rho
        f1 = -a - 4 - (2 * a + 1) * rho + 2 * rho * rho
        f2 = -a - 2 - a * rho + rho * rho
        return f1 * f2 * Fraction(1, self.disc_factor)

    def special_elements(self) -> dict:
        return {
            "rho_sq": self.rho_sq,
            "inv_rho_prime_sq": self.inv_rho_prime_sq,
            "delta_tilde": self.delta_tilde,
        }

    # -- the triangle set ----------------------------------------------------
    def alpha(self, v: int, w: int) -> CubicElem:
        return self.elem((-v, -w, v + 1))

    def alpha_of(self, pt: TrianglePoint) -> CubicElem:
        return self.alpha(pt.v, pt.w)

    def triangle_point_of(self, elem: CubicElem):
        """The point with ``alpha(v, w) == elem`` if it lies in the triangle set."""
        c0, c1, c2 = elem.coords
        if any(c.denominator != 1 for c in elem.coords):
            return None
        v, w = -int(c0), -int(c1)
        pt = TrianglePoint(v, w, self.a)
        if c2 != v + 1 or not pt.is_valid():
            return None
        return pt

    def triangle_points(self) -> list[TrianglePoint]:
        a = self.a
        return [TrianglePoint(v, w, a)
                for v in range(a + 1)
                for w in range(v * (a + 2) + 1, (v + 1) * (a + 1) + 1)]

    # -- geometry for the search box ------------------------------------
    def inverse_embedding(self, bits: int):
        # Lagrange: n_j = sum_k sigma_k(x) * coef_j(L_k), with
        # L_k(t) = (t^2 - (a - rho_k) t + 1/rho_k) / f'(rho_k)
        a = self.a
        cols = []
        for k in range(3):
            r = self._roots[k].enclosure(bits)
            fprime = 3 * r * r - 2 * a * r - (a + 3)
            inv_f = fprime.reciprocal()
            cols.append([r.reciprocal() * inv_f, (r - a) * inv_f, inv_f])
        return [[cols[k][j] for k in range(3)] for j in range(3)]


def make_scubic_field(a: int, require_monogenic: bool = True) -> CubicField:
    """Simplest cubic field for parameter ``a >= -1``.

    With ``require_monogenic`` the field is rejected unless a^2+3a+9 is
    square-free (a sufficient condition for O_K = Z[rho]).
    """
    if not isinstance(a, int) or a < -1:
        raise ValueError("a must be an integer >= -1")
    sf = is_squarefree(a * a + 3 * a + 9)
    if require_monogenic and not sf:
        raise MonogenicityError(
            f"a^2+3a+9 = {a * a + 3 * a + 9} is not square-free; pass require_monogenic=False to proceed"
        )
    return CubicField(a, monogenic_checked=sf)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _root_multiplicities(coeffs: list[int], p: int) -> dict[int, int]:
    """Roots of a monic polynomial mod p (coefficients high to low) with multiplicities."""
    out = {}
    for r in range(p):
        poly, m = [c % p for c in coeffs], 0
        while len(poly) > 1:
            # synthetic division by (x - r)
            q, acc = [], 0
            for c in poly:
                acc = (acc * r + c) % p
                q.append(acc)
            if q[-1] != 0:
                break
            poly, m = q[:-1], m + 1
        if m:
            out[r] = m
    return out


def is_ring_of_integers(a: int) -> bool:
    """Dedekind's criterion: Z[rho] is the full ring of integers.

    Only primes dividing a^2+3a+9 can divide the index.  For a repeated root
    r of f mod p the ring is p-maximal iff (f - prod (x - r_i)^e_i)/p does not
    vanish at r mod p.
    """
    f = [1, -a, -(a + 3), -1]
    for p in _prime_factors(a * a + 3 * a + 9):
        roots = _root_multiplicities(f, p)
        repeated = [r for r, e in roots.items() if e >= 2]
        if not repeated:
            continue
        prod = [1]
        for r, e in roots.items():
            for _ in range(e):
                prod = [x - r * y for x, y in zip(prod + [0], [0] + prod)]
        if len(prod) != 4:  # a leftover irreducible factor cannot coexist with a double root here
            raise AssertionError("unexpected factorisation mod p")
        diff = [(x - y) // p for x, y in zip(f, prod)]
        for r in repeated:
            val = 0
            for c in diff:
                val = val * r + c
            if val % p == 0:
                return False
    return True


def apply_T(k: int, pt: TrianglePoint) -> TrianglePoint:
    """The order-3 action on the triangle set, in (v, W) coordinates."""
    if not pt.is_valid():
        raise ValueError(f"{pt} is not in the triangle set")
    a, v, W = pt.a, pt.v, pt.W
    if k == 1:
        return TrianglePoint.from_vW(a, W, a - v - W)
    if k == 2:
        return TrianglePoint.from_vW(a, a - v - W, v)
    raise ValueError("k must be 1 or 2")


def apply_T_algebraic(field: CubicField, k: int, pt: TrianglePoint) -> CubicElem:
    """The same map computed through conjugation and unit multiplication."""
    alpha = field.alpha_of(pt)
    if k == 1:
        return field.conjugate(alpha, 1) * field.inv_rho_prime_sq
    if k == 2:
        return field.conjugate(alpha, 2) * field.rho_sq
    raise ValueError("k must be 1 or 2")


def cub_ring_ops(x: CubicElem, y: CubicElem | None, op: str) -> CubicElem:
    if op == "neg":
        return -x
    if op == "inv":
        return x.inverse()
    if y is not None and x.field != y.field:
        raise ValueError("field mismatch")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown op {op!r}")


def cub_conjugate(x: CubicElem, k: int) -> CubicElem:
    return x.field.conjugate(x, k)


def cub_trace_norm(x: CubicElem) -> tuple[Fraction, Fraction]:
    return x.trace(), x.norm()


def triangle_set(field: CubicField) -> list[tuple[TrianglePoint, CubicElem]]:
    return [(pt, field.alpha_of(pt)) for pt in field.triangle_points()]


def cone_coordinates(field: CubicField, elem: CubicElem) -> tuple[Fraction, Fraction, Fraction]:
    """Coordinates over {1, rho^2, (rho')^-2}."""
    a = field.a
    c0, c1, c2 = elem.coords
    t2 = -c1 / (a * a + 3 * a + 3)
    t1 = c2 - (a + 2) * t2
    t0 = c0 + (a + 1) * t2
    return t0, t1, t2
