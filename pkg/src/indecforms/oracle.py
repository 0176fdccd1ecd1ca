"""Exhaustive, terminating searches: elements below a bound, element
decompositions, indecomposability, and additive decompositions of forms.

Every search walks a provably complete box (see ``lattice``) and then
filters with exact sign tests, so an empty answer is a proof.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import lattice
from .fieldbase import FieldElement
from .lattice import Budget, BudgetExceeded, SearchBox, SearchStats, box_candidates, search_box
from .qform import QuadForm, definiteness, Definiteness, is_tpsd

__all__ = [
    "Decomposition",
    "SearchBox",
    "BudgetExceeded",
    "SearchStats",
    "search_box",
    "enumerate_tp_below",
    "enumerate_decompositions",
    "is_indecomposable",
    "decompose_form",
    "enumerate_form_decompositions",
    "is_additively_indecomposable",
]


@dataclass
class Decomposition:
    left: Any
    right: Any
    kind: str  # "element" or "form"
    trivial: bool = False

    def total(self):
        return self.left + self.right

    def to_json(self):
        return {
            "kind": self.kind,
            "trivial": self.trivial,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        }


def _key(x):
    return x.sort_key() if isinstance(x, QuadForm) else x.coords


def _ordered_pair(a, b):
    return (a, b) if _key(a) <= _key(b) else (b, a)


def _upper(x: FieldElement, k: int) -> Fraction:
    return x.enclosure(k, 48).hi


def _lower(x: FieldElement, k: int) -> Fraction:
    return x.enclosure(k, 48).lo


def _sqrt_upper(x: Fraction, bits: int = 24) -> Fraction:
    """Rational upper bound of sqrt(max(x, 0))."""
    if x <= 0:
        return Fraction(0)
    scaled = x * (1 << (2 * bits))
    return Fraction(math.isqrt(math.ceil(scaled)) + 1, 1 << bits)


# -- elements -----------------------------------------------------------------

_TP_BELOW_CACHE: dict = {}


def enumerate_tp_below(alpha: FieldElement, subfield=None, budget: Budget | None = None,
                       stats: SearchStats | None = None) -> list[FieldElement]:
    """All integral beta with 0 < beta < alpha in the totally positive order.

    With ``subfield`` (a ``biquad.Subfield``) only elements of that subfield
    are returned.
    """
    if not alpha.is_totally_positive():
        raise ValueError(f"{alpha} is not totally positive")
    key = (alpha.field.key, alpha.coords, subfield)
    if key not in _TP_BELOW_CACHE:
        K = alpha.field
        bounds = [(Fraction(0), _upper(alpha, k)) for k in range(K.degree)]
        own = SearchStats()
        out = []
        for beta in box_candidates(K, bounds, budget, own):
            if subfield is not None and not subfield.contains(beta):
                continue
            if beta.is_totally_positive() and (alpha - beta).is_totally_positive():
                out.append(beta)
        out.sort(key=_key)
        _TP_BELOW_CACHE[key] = (tuple(out), own)
    else:
        # a cached answer must not slip past a budget the original search would have broken
        (budget or lattice.DEFAULT_BUDGET).check(_TP_BELOW_CACHE[key][1])
    out, own = _TP_BELOW_CACHE[key]
    if stats is not None:
        # cached answers still report the size of the search that produced them
        stats.merge(own)
    return list(out)


def _stabilizer(alpha: FieldElement):
    return [g for g in alpha.field.automorphisms() if g(alpha) == alpha]


def enumerate_decompositions(alpha: FieldElement, include_trivial: bool = False,
                             up_to_embeddings: bool = False, subfield=None,
                             budget: Budget | None = None,
                             stats: SearchStats | None = None) -> list[Decomposition]:
    """Unordered splits ``alpha = beta + (alpha - beta)`` into totally positive parts.

    ``up_to_embeddings`` keeps one representative per orbit of the
    automorphisms fixing ``alpha``.
    """
    seen = set()
    out = []
    group = _stabilizer(alpha) if up_to_embeddings else None
    pairs = []
    if include_trivial:
        pairs.append((alpha.field.zero, alpha))
    for beta in enumerate_tp_below(alpha, subfield, budget, stats):
        pairs.append(_ordered_pair(beta, alpha - beta))
    for left, right in pairs:
        if group:
            left, right = min((_ordered_pair(g(left), g(right)) for g in group),
                              key=lambda pr: (_key(pr[0]), _key(pr[1])))
        sig = (left.coords, right.coords)
        if sig in seen:
            continue
        seen.add(sig)
        out.append(Decomposition(left, right, "element", trivial=left.is_zero() or right.is_zero()))
    out.sort(key=lambda d: (_key(d.left), _key(d.right)))
    return out


def is_indecomposable(alpha: FieldElement, subfield=None, budget: Budget | None = None,
                      stats: SearchStats | None = None) -> bool:
    """True iff alpha is not a sum of two totally positive integers (of the subfield)."""
    if not alpha.is_integral() or not alpha.is_totally_positive():
        raise ValueError(f"{alpha} must be a totally positive integer")
    if subfield is not None and not subfield.contains(alpha):
        raise ValueError(f"{alpha} is not in the subfield {subfield.value}")
    return not enumerate_tp_below(alpha, subfield, budget, stats)


# -- forms --------------------------------------------------------------------

def _diagonal_splits(c: FieldElement, budget, stats):
    if c.is_zero():
        return [c]
    return [c.field.zero] + enumerate_tp_below(c, budget=budget, stats=stats) + [c]


def _offdiag_candidates(total: FieldElement, d1i, d1j, d2i, d2j, classical: bool, budget, stats):
    """Coefficients ``c`` of x_i x_j in the first summand.

    Necessary conditions per embedding: (c/2)^2 <= d1i d1j and
    ((total - c)/2)^2 <= d2i d2j.
    """
    K = total.field
    deg = K.degree
    bounds = []
    for k in range(deg):
        r1 = 2 * _sqrt_upper(_upper(d1i, k) * _upper(d1j, k)) if not (d1i.is_zero() or d1j.is_zero()) else Fraction(0)
        r2 = 2 * _sqrt_upper(_upper(d2i, k) * _upper(d2j, k)) if not (d2i.is_zero() or d2j.is_zero()) else Fraction(0)
        L = max(-r1, _lower(total, k) - r2)
        U = min(r1, _upper(total, k) + r2)
        if L > U:
            return []
        bounds.append((L, U))
    m1 = d1i * d1j
    m2 = d2i * d2j
    out = []
    for c in box_candidates(K, bounds, budget, stats):
        if classical and not ((c * Fraction(1, 2)).is_integral() and ((total - c) * Fraction(1, 2)).is_integral()):
            continue
        if not (m1 - c * c * Fraction(1, 4)).is_tp_or_zero():
            continue
        rest = total - c
        if not (m2 - rest * rest * Fraction(1, 4)).is_tp_or_zero():
            continue
        out.append(c)
    out.sort(key=_key)
    return out


def _form_decompositions(Q: QuadForm, classical_only: bool, budget, stats, first_only: bool):
    # semidefinite input is accepted: the per-pair minor bounds stay complete
    if definiteness(Q) == Definiteness.NEITHER or Q.is_zero():
        raise ValueError("decomposition search needs a nonzero totally positive semidefinite form")
    n = Q.n
    K = Q.field
    diag = [Q.coeffs[(i, i)] for i in range(n)]
    splits = [_diagonal_splits(c, budget, stats) for c in diag]
    offdiag = [(i, j) for i in range(n) for j in range(i + 1, n)]
    found = []
    for d1 in itertools.product(*splits):
        d2 = [c - x for c, x in zip(diag, d1)]
        if all(x.is_zero() for x in d1) or all(x.is_zero() for x in d2):
            continue
        # each unordered pair once: the first summand carries the smaller diagonal
        if tuple(x.coords for x in d1) > tuple(x.coords for x in d2):
            continue
        per_pair = []
        for (i, j) in offdiag:
            cands = _offdiag_candidates(Q.coeffs[(i, j)], d1[i], d1[j], d2[i], d2[j],
                                        classical_only, budget, stats)
            if not cands:
                break
            per_pair.append(cands)
        else:
            for choice in itertools.product(*per_pair):
                coeffs1 = {(i, i): d1[i] for i in range(n)}
                coeffs1.update({ij: c for ij, c in zip(offdiag, choice)})
                Q1 = QuadForm(K, n, coeffs1)
                Q2 = Q - Q1
                if n > 2 and not (is_tpsd(Q1) and is_tpsd(Q2)):
                    continue
                if Q1.is_zero() or Q2.is_zero():
                    continue
                left, right = _ordered_pair(Q1, Q2)
                found.append(Decomposition(left, right, "form"))
                if first_only:
                    return found
    return found


def decompose_form(Q: QuadForm, classical_only: bool = True, budget: Budget | None = None,
                   stats: SearchStats | None = None):
    """A nontrivial split into totally positive semidefinite forms, or None.

    ``Q`` must be totally positive semidefinite and nonzero.
    None is a proof of additive indecomposability (within the chosen class).
    Binary searches are complete through the per-pair minor conditions;
    ternary candidates are checked with every principal minor.
    """
    res = _form_decompositions(Q, classical_only, budget, stats, first_only=True)
    return res[0] if res else None


def enumerate_form_decompositions(Q: QuadForm, classical_only: bool = True, budget: Budget | None = None,
                                  stats: SearchStats | None = None) -> list[Decomposition]:
    res = _form_decompositions(Q, classical_only, budget, stats, first_only=False)
    uniq = {}
    for d in res:
        uniq.setdefault((d.left.sort_key(), d.right.sort_key()), d)
    return [uniq[k] for k in sorted(uniq)]


def is_additively_indecomposable(Q: QuadForm, classical_only: bool = True, budget: Budget | None = None,
                                 stats: SearchStats | None = None) -> bool:
    return decompose_form(Q, classical_only, budget, stats) is None
