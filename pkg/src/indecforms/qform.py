"""Quadratic forms over rings of integers: Gram matrix, determinant,
definiteness, a catalog of named forms, and determinant-class certificates.

A form ``sum_{i<=j} a_ij x_i x_j`` is stored by its upper-triangular
coefficients.  The Gram matrix has ``a_ii`` on the diagonal and ``a_ij / 2``
off it.  All signs are decided exactly: a nonzero algebraic number has no
zero conjugate, so a minor is zero at one embedding iff it is zero.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

from .biquad import BasisCase, BiquadField, make_biquad_field
from .exactnum import Sign, is_squarefree
from .fieldbase import FieldElement
from .scubic import CubicField, TrianglePoint, cone_coordinates, make_scubic_field

F = Fraction


class Definiteness(str, enum.Enum):
    TPD = "TPD"
    TPSD_NOT_TPD = "TPSD_not_TPD"
    NEITHER = "neither"


class ParameterError(ValueError):
    """Catalog parameters violate the entry's stated conditions."""


class QuadForm:
    __slots__ = ("field", "n", "coeffs", "classical")

    def __init__(self, field, n: int, coeffs: dict):
        if not 1 <= n <= 3:
            raise ValueError("only 1 to 3 variables are supported")
        self.field = field
        self.n = n
        table = {}
        for i in range(n):
            for j in range(i, n):
                c = coeffs.get((i, j), 0)
                if not isinstance(c, FieldElement):
                    c = field.rational(c)
                table[(i, j)] = c
        self.coeffs = table
        self.classical = all((table[(i, j)] * F(1, 2)).is_integral()
                             for i in range(n) for j in range(i + 1, n))

    def __getitem__(self, ij):
        i, j = ij
        return self.coeffs[(min(i, j), max(i, j))]

    def gram(self) -> list[list[FieldElement]]:
        n = self.n
        return [[self.coeffs[(i, i)] if i == j else self[i, j] * F(1, 2) for j in range(n)] for i in range(n)]

    def det(self) -> FieldElement:
        return matrix_det(self.gram())

    def __add__(self, other: "QuadForm") -> "QuadForm":
        if other.n != self.n or other.field != self.field:
            raise ValueError("forms differ in arity or field")
        return QuadForm(self.field, self.n, {k: self.coeffs[k] + other.coeffs[k] for k in self.coeffs})

    def __sub__(self, other: "QuadForm") -> "QuadForm":
        return QuadForm(self.field, self.n, {k: self.coeffs[k] - other.coeffs[k] for k in self.coeffs})

    def scaled(self, unit: FieldElement) -> "QuadForm":
        return QuadForm(self.field, self.n, {k: v * unit for k, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs.values())

    def __eq__(self, other):
        return isinstance(other, QuadForm) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.key, tuple(sorted(self.coeffs.items()))))

    def sort_key(self):
        return tuple(self.coeffs[k].coords for k in sorted(self.coeffs))

    def to_json(self):
        return {
            "field": self.field.key,
            "n": self.n,
            "coeffs": [[i, j, [str(c) for c in self.coeffs[(i, j)].coords]] for (i, j) in sorted(self.coeffs)],
            "classical": self.classical,
        }

    def __str__(self):
        names = "xyz"
        terms = []
        for (i, j), c in sorted(self.coeffs.items()):
            if c.is_zero():
                continue
            mono = names[i] + "^2" if i == j else names[i] + names[j]
            terms.append(f"({c}){mono}")
        return " + ".join(terms) or "0"

    def __repr__(self):
        return f"QuadForm[{self.field.key}]({self})"


def make_form(field, n: int, coeffs) -> QuadForm:
    """Build a form, rejecting non-integral coefficients.

    ``coeffs`` maps ``(i, j)`` with ``i <= j`` to field elements (or rationals).
    """
    if not isinstance(coeffs, dict):
        raise TypeError("coeffs must map (i, j) to elements")
    Q = QuadForm(field, n, coeffs)
    for (i, j), c in Q.coeffs.items():
        if not c.is_integral():
            raise ValueError(f"coefficient a_{i + 1}{j + 1} = {c} is not integral")
    return Q


def binary(field, a, b, c) -> QuadForm:
    """``a x^2 + b xy + c y^2``."""
    return make_form(field, 2, {(0, 0): a, (0, 1): b, (1, 1): c})


def form_from_json(data, field) -> QuadForm:
    coeffs = {}
    for i, j, coords in data["coeffs"]:
        coeffs[(i, j)] = field.elem([F(c) for c in coords])
    return make_form(field, data["n"], coeffs)


# -- determinants and minors ---------------------------------------------------

def matrix_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    raise ValueError("matrix too large")


def principal_minors(m, leading_only: bool = False):
    n = len(m)
    subsets = ([tuple(range(k)) for k in range(1, n + 1)] if leading_only
               else [s for k in range(1, n + 1) for s in itertools.combinations(range(n), k)])
    return [(s, matrix_det([[m[i][j] for j in s] for i in s])) for s in subsets]


def gram_and_det(Q: QuadForm):
    """Gram matrix, ``4^(n-1) det`` (integral) and the exact determinant."""
    d = Q.det()
    return Q.gram(), d * 4 ** (Q.n - 1), d


def is_tpsd(Q: QuadForm) -> bool:
    """Every principal minor is totally positive or zero."""
    return all(mn.is_tp_or_zero() for _, mn in principal_minors(Q.gram()))


def is_tpd(Q: QuadForm) -> bool:
    return all(mn.is_totally_positive() for _, mn in principal_minors(Q.gram(), leading_only=True))


def definiteness(Q: QuadForm) -> Definiteness:
    if is_tpd(Q):
        return Definiteness.TPD
    if is_tpsd(Q):
        return Definiteness.TPSD_NOT_TPD
    return Definiteness.NEITHER


# -- catalog ------------------------------------------------------------------

@dataclass
class CatalogEntry:
    key: str
    family: str  # "biquad", "cubic" or "any"
    conditions: str
    build: Callable = dc_field(repr=False)
    stated_det: Callable | None = dc_field(default=None, repr=False)


CATALOG: dict[str, CatalogEntry] = {}


def _entry(key, family, conditions, stated_det=None):
    def deco(fn):
        CATALOG[key] = CatalogEntry(key, family, conditions, fn, stated_det)
        return fn
    return deco


def _require(cond: bool, msg: str, force: bool):
    if not cond and not force:
        raise ParameterError(msg)


def _sf(n: int) -> bool:
    return n > 1 and is_squarefree(n)


def _companion(D: int) -> int:
    for c in (2, 3, 5, 7, 11, 13):
        if c != D and D % c != 0:
            return c
    raise ParameterError(f"no small companion radical for {D}")


def _field_with_sqrt(D: int, field):
    if field is None:
        field = make_biquad_field(D, _companion(D))
    if not isinstance(field, BiquadField) or not field.contains_sqrt(D):
        raise ParameterError(f"field must contain sqrt({D})")
    return field


@_entry("P3.2", "any", "any field", lambda **_: F(3, 4))
def _p32(field, force=False, **_):
    return QuadForm(field, 2, {(0, 0): 1, (0, 1): 1, (1, 1): 1})


@_entry("P3.3-chain", "any", "diag: indecomposable elements; offdiag: nonzero integral elements")
def _chain(field, diag, offdiag, force=False, **_):
    n = len(diag)
    diag = [c if isinstance(c, FieldElement) else field.rational(c) for c in diag]
    offdiag = [c if isinstance(c, FieldElement) else field.rational(c) for c in offdiag]
    _require(len(offdiag) == n - 1, "need n-1 off-diagonal coefficients", False)
    _require(all(not b.is_zero() for b in offdiag), "off-diagonal coefficients must be nonzero", force)
    coeffs = {(i, i): diag[i] for i in range(n)}
    coeffs.update({(i, i + 1): offdiag[i] for i in range(n - 1)})
    return make_form(field, n, coeffs)


@_entry("TY-3mod4", "biquad", "D square-free, D = 3 mod 4", lambda **_: F(1))
def _ty3(D, field=None, force=False, **_):
    _require(_sf(D) and D % 4 == 3, "D must be square-free with D = 3 mod 4", force)
    K = _field_with_sqrt(D, field)
    s = K.sqrt(D)
    return binary(K, 2, 2 * s, F(D + 1, 2))


@_entry("TY-2mod4", "biquad", "D square-free, D = 2 mod 4", lambda **_: F(1))
def _ty2(D, field=None, force=False, **_):
    _require(_sf(D) and D % 4 == 2, "D must be square-free with D = 2 mod 4", force)
    K = _field_with_sqrt(D, field)
    s = K.sqrt(D)
    return binary(K, 2, 2 * (1 + s), F(D, 2) + 1 + s)


def _ty1(variant: int, D: int, K, force: bool):
    s = K.sqrt(D)
    if variant == 1:
        _require(D % 12 == 5, "D must be 5 mod 12", force)
        return binary(K, 3, 2 * (3 + s), F(D + 10, 3) + 2 * s)
    if variant == 2:
        _require(D % 12 == 1, "D must be 1 mod 12", force)
        return binary(K, 3, 2 * (3 + s), F(D + 11, 3) + 2 * s)
    _require(D % 12 == 9, "D must be 9 mod 12", force)
    return binary(K, 4, 2 * (2 + s), F(D + 7, 4) + s)


for _v in (1, 2, 3):
    def _make_ty1(variant):
        def build(D, field=None, force=False, **_):
            _require(_sf(D) and D > 17, "D must be square-free and > 17", force)
            return _ty1(variant, D, _field_with_sqrt(D, field), force)
        return build
    _entry(f"TY-1mod4-{_v}", "biquad", "D square-free, D > 17, D = 5/1/9 mod 12 for variant 1/2/3",
           (lambda v: (lambda **_: F(v)))(_v))(_make_ty1(_v))


def _case123_field(p, q, field):
    K = field if field is not None else make_biquad_field(p, q)
    if K.basis_case not in (BasisCase.C1, BasisCase.C2, BasisCase.C3):
        raise ParameterError("field must have integral-basis case C1, C2 or C3")
    return K


@_entry("P4.6-1", "biquad", "case C1-C3 with p = 2 mod 4; use_r selects sqrt r", lambda **_: F(1))
def _p461(p=None, q=None, field=None, use_r=False, force=False, **_):
    K = _case123_field(p, q, field)
    D = K.r if use_r else K.p
    _require(D % 4 == 2, "radical must be 2 mod 4", force)
    s = K.sqrt(D)
    return binary(K, 2, 2 * (1 + s), F(D, 2) + 1 + s)


@_entry("P4.6-2", "biquad", "case C1-C3 with p = 3 mod 4", lambda **_: F(1))
def _p462(p=None, q=None, field=None, use_r=False, force=False, **_):
    K = _case123_field(p, q, field)
    D = K.r if use_r else K.p
    _require(D % 4 == 3, "radical must be 3 mod 4", force)
    s = K.sqrt(D)
    return binary(K, 2, 2 * s, F(D + 1, 2))


@_entry("P4.7", "biquad", "case C1 (p = 2, q = 3 mod 4); form in sqrt q", lambda **_: F(1))
def _p47(p=None, q=None, field=None, force=False, **_):
    K = field if field is not None else make_biquad_field(p, q)
    _require(K.basis_case == BasisCase.C1, "field must have case C1", force)
    s = K.sqrt(K.q)
    return binary(K, 2, 2 * s, F(K.q + 1, 2))


def _p48(variant):
    def build(p=None, q=None, field=None, force=False, **_):
        K = field if field is not None else make_biquad_field(p, q)
        _require(K.basis_case in (BasisCase.C2, BasisCase.C3), "field must have case C2 or C3", force)
        _require(21 < K.q < min(K.p, K.r), "need 21 < q < p, r", force)
        return _ty1(variant, K.q, K, force)
    return build


def _p49(variant):
    def build(p=None, q=None, field=None, force=False, **_):
        K = field if field is not None else make_biquad_field(p, q)
        _require(K.basis_case in (BasisCase.C4a, BasisCase.C4b), "field must have case C4", force)
        _require(21 < K.p < K.q < K.r, "need 21 < p < q < r", force)
        return _ty1(variant, K.p, K, force)
    return build


for _v in (1, 2, 3):
    _entry(f"P4.8-{_v}", "biquad", "case C2/C3, 21 < q < p, r, q = 5/1/9 mod 12",
           (lambda v: (lambda **_: F(v)))(_v))(_p48(_v))
    _entry(f"P4.9-{_v}", "biquad", "case C4, 21 < p < q < r, p = 5/1/9 mod 12",
           (lambda v: (lambda **_: F(v)))(_v))(_p49(_v))


def _special_field(d, q, field, force, lower):
    K = field if field is not None else make_biquad_field(d, q)
    if not K.contains_sqrt(d):
        raise ParameterError(f"field must contain sqrt({d})")
    others = [x for x in (K.p, K.q, K.r) if x != d]
    _require(all(x % 4 == 1 for x in others), "other radicals must be 1 mod 4", force)
    _require(all(x > lower for x in others), f"other radicals must exceed {lower}", force)
    return K


@_entry("P4.10", "biquad", "field (5, q), q = 1 mod 4, q > 5")
def _p410(q=None, field=None, force=False, **_):
    K = _special_field(5, q, field, force, 5)
    return binary(K, 2, 2, 3 + K.sqrt(5))


@_entry("P4.11", "biquad", "field (13, q), q = 1 mod 4, q > 13")
def _p411(q=None, field=None, force=False, **_):
    K = _special_field(13, q, field, force, 13)
    return binary(K, 2, 1 + K.sqrt(13), 3)


@_entry("P4.12", "biquad", "field (17, q), q = 1 mod 4, q > 17", lambda **_: F(1))
def _p412(q=None, field=None, force=False, **_):
    K = _special_field(17, q, field, force, 17)
    s = K.sqrt(17)
    return binary(K, (5 + s) * F(1, 2), 2, (5 - s) * F(1, 2))


@_entry("P4.13", "biquad", "field (21, q), q = 1 mod 4, q > 21, r > 21, field not (21, 33)")
def _p413(q=None, field=None, force=False, **_):
    K = _special_field(21, q, field, force, 21)
    _require(K.key != "(21,33)", "the field (21,33) uses the special form P4.13-s11", force)
    s = K.sqrt(21)
    return binary(K, 2, 3 + s, 5 + s)


@_entry("P4.13-s11", "biquad", "field (21, 33)", lambda **_: F(2))
def _p413s(field=None, force=False, **_):
    K = field if field is not None else make_biquad_field(21, 33)
    _require(K.key == "(21,33)", "field must be (21,33)", force)
    s = K.sqrt(33)
    return binary(K, 6 + s, 2, 6 - s)


def _ex45_field(field):
    K = field if field is not None else make_biquad_field(2, 5)
    if K.key != "(2,5)":
        raise ParameterError("field must be (2,5)")
    return K


@_entry("Ex4.5", "biquad", "field (2, 5)", lambda **_: F(8))
def _ex45(field=None, force=False, **_):
    K = _ex45_field(field)
    s10 = K.sqrt(10)
    return binary(K, 7 + 2 * s10, 2, 7 - 2 * s10)


@_entry("Ex4.5-Q1", "biquad", "field (2, 5)", lambda **_: F(0))
def _ex45q1(field=None, force=False, **_):
    K = _ex45_field(field)
    a = K.parse("7/2 + sqrt2 + 1/2sqrt5 + sqrt10")
    c = K.parse("7/2 - sqrt2 + 1/2sqrt5 - sqrt10")
    b = K.parse("1 - sqrt5")  # twice the Gram entry (1 - sqrt5)/2
    return binary(K, a, b, c)


@_entry("Ex4.5-Q2", "biquad", "field (2, 5)", lambda **_: F(0))
def _ex45q2(field=None, force=False, **_):
    K = _ex45_field(field)
    a = K.parse("7/2 - sqrt2 - 1/2sqrt5 + sqrt10")
    c = K.parse("7/2 + sqrt2 - 1/2sqrt5 - sqrt10")
    b = K.parse("1 + sqrt5")
    return binary(K, a, b, c)


def _cubic_field(a, field):
    if field is not None:
        if not isinstance(field, CubicField):
            raise ParameterError("a simplest cubic field is required")
        return field
    if a is None:
        raise ParameterError("parameter a is required")
    return make_scubic_field(a, require_monogenic=False)


def _alpha_param(K, alpha=None, v=None, w=None):
    if alpha is not None:
        return alpha
    if v is None or w is None:
        raise ParameterError("give alpha or (v, w)")
    return K.alpha(v, w)


@_entry("P5.3-2", "cubic", "alpha indecomposable with 2 alpha > 1")
def _p532(a=None, field=None, alpha=None, v=None, w=None, force=False, **_):
    K = _cubic_field(a, field)
    al = _alpha_param(K, alpha, v, w)
    _require((2 * al).succ(1), "need 2 alpha > 1", force)
    return binary(K, 2, 2, al)


@_entry("P5.3-3", "cubic", "alpha indecomposable with 3 alpha > 1 and not 2 alpha >= 1")
def _p533(a=None, field=None, alpha=None, v=None, w=None, force=False, **_):
    K = _cubic_field(a, field)
    al = _alpha_param(K, alpha, v, w)
    _require((3 * al).succ(1), "need 3 alpha > 1", force)
    _require(not (2 * al).succeq(1), "need 2 alpha not >= 1", force)
    return binary(K, 3, 2, al)


@_entry("P5.4", "cubic", "a >= -1")
def _p54(a=None, field=None, force=False, **_):
    K = _cubic_field(a, field)
    rho = K.rho
    return binary(K, 2, 2, 1 + rho + rho * rho)


@_entry("P5.5-ternary", "cubic", "a >= -1")
def _p55(a=None, field=None, force=False, **_):
    K = _cubic_field(a, field)
    base = 1 + K.rho + K.rho * K.rho
    A, B, C = base, K.conjugate(base, 1), K.conjugate(base, 2)
    return make_form(K, 3, {(0, 0): A, (1, 1): B, (2, 2): C, (0, 1): 2, (1, 2): 2})


def _twist(k):
    def build(a=None, field=None, u=2, alpha=None, v=None, w=None, force=False, **_):
        K = _cubic_field(a, field)
        al = _alpha_param(K, alpha, v, w)
        _require(u in (2, 3), "u must be 2 or 3", force)
        eps = K.inv_rho_prime_sq if k == 1 else K.rho_sq
        conj = K.conjugate(al, k)
        return binary(K, u * eps, 2 * eps, eps * conj)
    return build


_entry("T-twist-1", "cubic", "u in {2,3}; alpha in the triangle set")(_twist(1))
_entry("T-twist-2", "cubic", "u in {2,3}; alpha in the triangle set")(_twist(2))


def catalog_form(key: str, force: bool = False, **params) -> QuadForm:
    """Construct a catalog form; every emitted form is checked to be TPD."""
    if key not in CATALOG:
        raise KeyError(f"unknown catalog id {key!r}")
    Q = CATALOG[key].build(force=force, **params)
    if not key.startswith("Ex4.5-Q") and definiteness(Q) != Definiteness.TPD:
        raise ParameterError(f"{key} with {params} is not totally positive definite")
    return Q


# -- determinant-class certificates ------------------------------------------

@dataclass
class DetClassCertificate:
    det: FieldElement
    normalized_det: FieldElement
    unit_exponents: tuple[int, int]  # normalized = det * rho^(2i) * rho'^(2j)
    domain_coords: tuple[Fraction, Fraction, Fraction]
    interior: bool
    mod3_signature: tuple[int, int, int]
    mod2_signature: tuple[int, int, int]
    indecomposable_det: bool | None = None

    def to_json(self):
        return {
            "det": [str(c) for c in self.det.coords],
            "normalized_det": [str(c) for c in self.normalized_det.coords],
            "unit_exponents": list(self.unit_exponents),
            "domain_coords": [str(c) for c in self.domain_coords],
            "interior": self.interior,
            "mod3_signature": list(self.mod3_signature),
            "mod2_signature": list(self.mod2_signature),
            "indecomposable_det": self.indecomposable_det,
        }


UNIT_SEARCH_RADIUS = 3


def _units(K: CubicField):
    cache = K.__dict__.get("_tp_units")
    if cache is None:
        rho2 = K.rho_sq
        rp2 = K.conjugate(rho2, 1)
        cache = []
        R = UNIT_SEARCH_RADIUS
        for i in range(-R, R + 1):
            for j in range(-R, R + 1):
                cache.append(((i, j), rho2 ** i * rp2 ** j))
        cache.sort(key=lambda t: (abs(t[0][0]) + abs(t[0][1]), t[0]))
        K.__dict__["_tp_units"] = cache
    return cache


def normalize_to_domain(K: CubicField, x: FieldElement):
    """A totally positive unit multiple of ``x`` strictly inside the cone.

    Returns ``(exponents, multiple)`` or None when no unit in the search
    radius moves ``x`` into the open cone.
    """
    for exps, u in _units(K):
        y = x * u
        if all(t > 0 for t in cone_coordinates(K, y)):
            return exps, y
    return None


def det_class_certificate(Q: QuadForm, check_indecomposable: bool = False,
                          unit_exponents: tuple[int, int] | None = None) -> DetClassCertificate:
    """Certificate for the unit class of det(Q).

    ``unit_exponents`` fixes the representative det * rho^(2i) * rho'^(2j);
    otherwise the nearest unit placing it strictly inside the cone is used.
    """
    K = Q.field
    if not isinstance(K, CubicField):
        raise ValueError("determinant-class certificates need a simplest cubic field")
    d = Q.det()
    if unit_exponents is not None:
        i, j = unit_exponents
        exps, nd = (i, j), d * K.rho_sq ** i * K.conjugate(K.rho_sq, 1) ** j
    else:
        found = normalize_to_domain(K, d)
        exps, nd = found if found is not None else ((0, 0), d)
    coords = cone_coordinates(K, nd)
    interior = all(t > 0 for t in coords)
    ints = [c.numerator if c.denominator == 1 else None for c in nd.coords]
    mod3 = tuple(x % 3 if x is not None else -1 for x in ints)
    mod2 = tuple(x % 2 if x is not None else -1 for x in ints)
    indec = None
    if check_indecomposable:
        from .oracle import is_indecomposable
        indec = bool(nd.is_totally_positive() and nd.is_integral() and is_indecomposable(nd))
    return DetClassCertificate(d, nd, exps, coords, interior, mod3, mod2, indec)
