"""Search boxes: every integral element whose conjugates lie in given intervals.

The box over integral-basis coordinates comes from rational enclosures of
the inverse embedding matrix, so it provably contains every solution.  The
box is then walked by the enumeration kernel, which prunes with the
embedding intervals and returns a superset; callers filter exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .exactnum import Sign, ceil_div, floor_div
from .kernels import CandidateLimitExceeded, enumerate_box

KERNEL_BITS = 40


class BudgetExceeded(RuntimeError):
    """A search would exceed the configured box volume or candidate count."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what} {size} exceeds budget {limit}")
        self.what = what
        self.size = size
        self.limit = limit


@dataclass
class Budget:
    max_box_volume: int = 10**13
    max_candidates: int = 2 * 10**6

    @classmethod
    def from_env(cls) -> "Budget":
        b = cls()
        if os.environ.get("INDECFORMS_MAX_BOX_VOLUME"):
            b.max_box_volume = int(os.environ["INDECFORMS_MAX_BOX_VOLUME"])
        if os.environ.get("INDECFORMS_MAX_CANDIDATES"):
            b.max_candidates = int(os.environ["INDECFORMS_MAX_CANDIDATES"])
        return b

    def check(self, stats: "SearchStats") -> None:
        """Raise if a finished single-box search would have exceeded this budget."""
        if stats.box_volume > self.max_box_volume:
            raise BudgetExceeded("box volume", stats.box_volume, self.max_box_volume)
        if stats.candidates > self.max_candidates:
            raise BudgetExceeded("candidate count", stats.candidates, self.max_candidates)


DEFAULT_BUDGET = Budget.from_env()


@dataclass
class SearchStats:
    boxes: int = 0
    box_volume: int = 0
    candidates: int = 0

    def merge(self, other: "SearchStats"):
        self.boxes += other.boxes
        self.box_volume += other.box_volume
        self.candidates += other.candidates


@dataclass
class SearchBox:
    lo: list[int]
    hi: list[int]
    bounds: list[tuple[Fraction, Fraction]] = dc_field(default_factory=list)

    @property
    def volume(self) -> int:
        v = 1
        for a, b in zip(self.lo, self.hi):
            if b < a:
                return 0
            v *= b - a + 1
        return v

    def contains(self, ns: Sequence[int]) -> bool:
        return all(a <= n <= b for a, n, b in zip(self.lo, ns, self.hi))


def _box_at(field, bounds, bits):
    M = field.inverse_embedding(bits)
    lo, hi = [], []
    for j in range(field.degree):
        l = h = Fraction(0)
        for k in range(field.degree):
            e = M[j][k]
            L, U = bounds[k]
            prods = (e.lo * L, e.lo * U, e.hi * L, e.hi * U)
            l += min(prods)
            h += max(prods)
        lo.append(ceil_div(l.numerator, l.denominator))
        hi.append(floor_div(h.numerator, h.denominator))
    return lo, hi


def search_box(field, bounds: Sequence[tuple[Fraction, Fraction]]) -> SearchBox:
    """Integer ranges for integral coordinates given per-embedding intervals.

    Precision doubles until the box no longer shrinks.
    """
    bounds = [(Fraction(L), Fraction(U)) for L, U in bounds]
    prev = None
    bits = 16
    while True:
        box = _box_at(field, bounds, bits)
        if box == prev or bits >= 256:
            return SearchBox(box[0], box[1], bounds)
        prev = box
        bits *= 2


def _basis_fixed_point(field, bits):
    cache = field.__dict__.setdefault("_fixed_point_basis", {})
    if bits not in cache:
        emb_lo, emb_hi = [], []
        for k in range(field.degree):
            row_lo, row_hi = [], []
            for b in field.integral_basis:
                lo, hi = b.dyadic(k, bits)
                row_lo.append(lo)
                row_hi.append(hi)
            emb_lo.append(row_lo)
            emb_hi.append(row_hi)
        cache[bits] = (emb_lo, emb_hi)
    return cache[bits]


def box_candidates(field, bounds, budget: Budget | None = None, stats: SearchStats | None = None,
                   force_python: bool = False):
    """Integral elements (a superset) whose conjugates lie in ``bounds``."""
    budget = budget or DEFAULT_BUDGET
    box = search_box(field, bounds)
    vol = box.volume
    if stats is not None:
        stats.boxes += 1
        stats.box_volume += vol
    if vol == 0:
        return []
    if vol > budget.max_box_volume:
        raise BudgetExceeded("box volume", vol, budget.max_box_volume)
    bits = KERNEL_BITS
    emb_lo, emb_hi = _basis_fixed_point(field, bits)
    scale = 1 << bits
    t_lo = [floor_div(L.numerator * scale, L.denominator) for L, _ in box.bounds]
    t_hi = [ceil_div(U.numerator * scale, U.denominator) for _, U in box.bounds]
    try:
        vecs = enumerate_box(emb_lo, emb_hi, box.lo, box.hi, t_lo, t_hi, bits,
                             budget.max_candidates, force_python=force_python)
    except CandidateLimitExceeded as exc:
        raise BudgetExceeded("candidate count", int(exc.args[0]), budget.max_candidates) from None
    if stats is not None:
        stats.candidates += len(vecs)
    return [field.from_integral_coords(v) for v in vecs]


def box_search(field, bounds, budget=None, stats=None, closed: bool = True):
    """Exact filter of ``box_candidates``: all integral elements in the intervals.

    ``closed`` selects closed intervals; otherwise both ends are strict.
    """
    out = []
    bounds = [(Fraction(L), Fraction(U)) for L, U in bounds]
    for x in box_candidates(field, bounds, budget, stats):
        if in_bounds(x, bounds, closed):
            out.append(x)
    return out


def in_bounds(x, bounds, closed: bool = True) -> bool:
    for k, (L, U) in enumerate(bounds):
        for bound, want in ((L, 1), (U, -1)):
            s = (x - bound).sign(k)
            if s == Sign.ZERO:
                if not closed:
                    return False
            elif s != want:
                return False
    return True
