"""Real biquadratic fields Q(sqrt p, sqrt q).

Elements are stored over ``{1, sqrt p, sqrt q, sqrt r}`` with rational
coordinates; integrality is a predicate checked against the integral basis
of the field's congruence case.  The three radicals are reordered once, at
construction, so that exactly one of the integral-basis cases applies.
"""

from __future__ import annotations

import enum
import logging
import math
from fractions import Fraction
from itertools import permutations

from .exactnum import Enclosure, ExactReal, SqrtReal, is_squarefree
from .fieldbase import FieldBase, FieldElement

log = logging.getLogger(__name__)

F = Fraction

# sign patterns of the four embeddings on (1, sqrt p, sqrt q, sqrt r)
EMBEDDING_SIGNS = (
    (1, 1, 1, 1),
    (1, -1, 1, -1),
    (1, 1, -1, -1),
    (1, -1, -1, 1),
)


class BasisCase(str, enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4a = "C4a"
    C4b = "C4b"


_CASE_RANK = {BasisCase.C1: 1, BasisCase.C2: 2, BasisCase.C3: 3, BasisCase.C4a: 4, BasisCase.C4b: 4}


def _case_of(p: int, q: int):
    pm, qm = p % 4, q % 4
    if pm == 2 and qm == 3:
        return BasisCase.C1
    if pm == 2 and qm == 1:
        return BasisCase.C2
    if pm == 3 and qm == 1:
        return BasisCase.C3
    if pm == 1 and qm == 1:
        g = math.gcd(p, q)
        if (p // g) % 4 == 1 and (q // g) % 4 == 1:
            return BasisCase.C4a
        if (p // g) % 4 == 3 and (q // g) % 4 == 3:
            return BasisCase.C4b
    return None


def _basis_rows(case: BasisCase):
    if case == BasisCase.C1:
        return [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, F(1, 2), 0, F(1, 2))]
    if case in (BasisCase.C2, BasisCase.C3):
        return [(1, 0, 0, 0), (0, 1, 0, 0), (F(1, 2), 0, F(1, 2), 0), (0, F(1, 2), 0, F(1, 2))]
    if case == BasisCase.C4a:
        return [(1, 0, 0, 0), (F(1, 2), F(1, 2), 0, 0), (F(1, 2), 0, F(1, 2), 0),
                (F(1, 4), F(1, 4), F(1, 4), F(1, 4))]
    return [(1, 0, 0, 0), (F(1, 2), F(1, 2), 0, 0), (F(1, 2), 0, F(1, 2), 0),
            (F(1, 4), F(-1, 4), F(1, 4), F(1, 4))]


class Subfield(str, enum.Enum):
    """Quadratic (or rational) subfield selector over the same coordinates."""

    SQRT_P = "sqrt_p"
    SQRT_Q = "sqrt_q"
    SQRT_R = "sqrt_r"
    RATIONAL = "rational"

    @property
    def kept(self) -> tuple[int, ...]:
        return {"sqrt_p": (0, 1), "sqrt_q": (0, 2), "sqrt_r": (0, 3), "rational": (0,)}[self.value]

    def contains(self, elem: "BiquadElem") -> bool:
        return all(c == 0 for i, c in enumerate(elem.coords) if i not in self.kept)


SubfieldTag = Subfield


class BiquadElem(FieldElement):
    __slots__ = ()

    def in_subfield(self, tag: Subfield) -> bool:
        return tag.contains(self)


class BiquadField(FieldBase):
    """Q(sqrt p, sqrt q) with canonical roles of the three radicals."""

    degree = 4
    element_class = BiquadElem

    def __init__(self, p: int, q: int, r: int, case: BasisCase, alternatives=()):
        self.p, self.q, self.r = p, q, r
        self.g = math.gcd(p, q)
        self.basis_case = case
        self.integral_basis_rows = [tuple(F(x) for x in row) for row in _basis_rows(case)]
        self.alternatives = tuple(alternatives)
        self.key = f"({p},{q})"
        self.basis_names = ("1", f"sqrt{p}", f"sqrt{q}", f"sqrt{r}")
        self._reals = (ExactReal(1), SqrtReal(p), SqrtReal(q), SqrtReal(r))

    def __repr__(self):
        return f"BiquadField(p={self.p}, q={self.q}, r={self.r}, case={self.basis_case.value})"

    # -- arithmetic ------------------------------------------------------
    def _mul(self, a, b):
        x1, y1, z1, w1 = a
        x2, y2, z2, w2 = b
        p, q, r, g = self.p, self.q, self.r, self.g
        return (
            x1 * x2 + p * y1 * y2 + q * z1 * z2 + r * w1 * w2,
            x1 * y2 + y1 * x2 + (q // g) * (z1 * w2 + w1 * z2),
            x1 * z2 + z1 * x2 + (p // g) * (y1 * w2 + w1 * y2),
            x1 * w2 + w1 * x2 + g * (y1 * z2 + z1 * y2),
        )

    def embedding_basis(self, k: int):
        return EMBEDDING_SIGNS[k], self._reals

    def conjugate(self, elem: BiquadElem, k: int) -> BiquadElem:
        if k not in range(4):
            raise ValueError("embedding index must be 0..3")
        return BiquadElem(self, [s * c for s, c in zip(EMBEDDING_SIGNS[k], elem.coords)])

    def automorphisms(self):
        return [lambda e, k=k: self.conjugate(e, k) for k in range(4)]

    def trace(self, elem) -> Fraction:
        return 4 * elem.coords[0]

    def norm(self, elem) -> Fraction:
        prod = self.one
        for k in range(4):
            prod = prod * self.conjugate(elem, k)
        assert prod.is_rational()
        return prod.coords[0]

    # -- radicals and subfields -----------------------------------------
    def sqrt(self, d: int) -> BiquadElem:
        """The element sqrt(d) for d in {1, p, q, r}."""
        if d == 1:
            return self.one
        for i, rad in enumerate((self.p, self.q, self.r), start=1):
            if rad == d:
                coords = [0, 0, 0, 0]
                coords[i] = 1
                return self.elem(coords)
        raise ValueError(f"sqrt({d}) is not in {self.key}")

    def contains_sqrt(self, d: int) -> bool:
        return d in (1, self.p, self.q, self.r)

    def subfield(self, d: int) -> Subfield:
        if d == 1:
            return Subfield.RATIONAL
        return {self.p: Subfield.SQRT_P, self.q: Subfield.SQRT_Q, self.r: Subfield.SQRT_R}[d]

    def parse(self, text: str) -> BiquadElem:
        """Parse a sum of terms ``c``, ``c*sqrtD``, ``sqrtD`` (D in {p,q,r})."""
        text = text.replace(" ", "").replace("-", "+-")
        total = self.zero
        for term in filter(None, text.split("+")):
            if "sqrt" in term:
                coef, _, rad = term.partition("sqrt")
                coef = coef.rstrip("*")
                c = F(-1) if coef == "-" else F(coef) if coef else F(1)
                total = total + self.sqrt(int(rad)) * c
            else:
                total = total + F(term)
        return total

    # -- geometry for the search box ------------------------------------
    def inverse_embedding(self, bits: int):
        # coordinates over the radical basis: c_i = sum_k s_k(i) sigma_k / (4 sqrt d_i)
        inv_sqrt = [Enclosure(1)]
        for d in (self.p, self.q, self.r):
            e = SqrtReal(d).enclosure(bits)
            inv_sqrt.append(e.reciprocal())
        coord_rows = [[inv_sqrt[i] * F(EMBEDDING_SIGNS[k][i], 4) for k in range(4)] for i in range(4)]
        inv = self._integral_inverse()  # n_j = sum_i c_i inv[i][j]
        out = []
        for j in range(4):
            row = []
            for k in range(4):
                acc = Enclosure(0)
                for i in range(4):
                    if inv[i][j]:
                        acc = acc + coord_rows[i][k] * inv[i][j]
                row.append(acc)
            out.append(row)
        return out


def make_biquad_field(p: int, q: int) -> BiquadField:
    """Build Q(sqrt p, sqrt q), choosing radical roles deterministically.

    Among the ordered pairs of radicals from {p, q, r} that satisfy one of the
    integral-basis congruence cases, the smallest (case rank, P, Q) wins.
    """
    for x in (p, q):
        if not isinstance(x, int) or x <= 1 or not is_squarefree(x):
            raise ValueError(f"{x} is not a square-free integer > 1")
    if p == q:
        raise ValueError("p and q must be distinct")
    g = math.gcd(p, q)
    r = p * q // (g * g)
    matches = []
    for P, Q in permutations((p, q, r), 2):
        case = _case_of(P, Q)
        if case is not None:
            R = P * Q // math.gcd(P, Q) ** 2
            matches.append(((_CASE_RANK[case], P, Q), P, Q, R, case))
    assert matches, f"no integral-basis case applies to ({p},{q})"
    matches.sort(key=lambda m: m[0])
    _, P, Q, R, case = matches[0]
    if len(matches) > 1:
        log.debug("(%d,%d): %d role assignments match; using (%d,%d) %s", p, q, len(matches), P, Q, case.value)
    return BiquadField(P, Q, R, case, alternatives=[(m[1], m[2], m[4].value) for m in matches[1:]])


# spec-facing helpers ------------------------------------------------------

def biq_ring_ops(a: BiquadElem, b: BiquadElem | None, op: str) -> BiquadElem:
    if op == "neg":
        return -a
    if b is not None and a.field != b.field:
        raise ValueError("field mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def biq_conjugate(a: BiquadElem, i: int) -> BiquadElem:
    """Embedding ``i`` in 1..4 applied as a field automorphism."""
    if i not in (1, 2, 3, 4):
        raise ValueError("embedding index must be 1..4")
    return a.field.conjugate(a, i - 1)


def biq_trace_norm(a: BiquadElem) -> tuple[Fraction, Fraction]:
    return a.trace(), a.norm()


def biq_is_integral(a: BiquadElem):
    """``(True, coords)`` over the integral basis, or ``(False, None)``."""
    n = a.integral_coords()
    return n is not None, n


class Order(str, enum.Enum):
    GREATER = "a>b"
    EQUAL = "a=b"
    LESS = "b>a"
    INCOMPARABLE = "incomparable"


def order_cmp(a: FieldElement, b: FieldElement) -> Order:
    if not (a.is_integral() and b.is_integral()):
        raise ValueError("order comparison needs integral elements")
    d = a - b
    if d.is_zero():
        return Order.EQUAL
    if d.is_totally_positive():
        return Order.GREATER
    if (-d).is_totally_positive():
        return Order.LESS
    return Order.INCOMPARABLE


biq_order_cmp = order_cmp
