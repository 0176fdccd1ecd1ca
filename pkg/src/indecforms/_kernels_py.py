"""Pure-Python lattice box enumeration (reference kernel and import fallback).

Fixed-point convention: every real quantity ``x`` is carried as an integer
interval ``[lo, hi]`` with ``lo <= x * 2**bits <= hi``.

The lattice has basis ``w_0 = 1, w_1, ..., w_{d-1}`` and ``m`` real
embeddings.  ``emb_lo[k][j], emb_hi[k][j]`` enclose ``sigma_k(w_j)``; the
column ``j = 0`` must be exactly ``2**bits``.  The kernel returns every
integer vector ``n`` inside the box whose embedding enclosures meet the
target intervals ``[t_lo[k], t_hi[k]]``: a superset of the exact solutions,
never missing one.
"""

from __future__ import annotations


class CandidateLimitExceeded(RuntimeError):
    pass


def _fdiv(a, b):
    return a // b


def _cdiv(a, b):
    return -((-a) // b)


def _solve_range(a_lo, a_hi, c_lo, c_hi):
    """Integers n with n*c in [a_lo, a_hi] for some c in [c_lo, c_hi] (superset).

    ``c`` must not contain zero.  Returns (lo, hi), possibly empty (lo > hi).
    """
    if c_lo <= 0 <= c_hi:
        raise ValueError("coefficient interval contains zero")
    if c_hi < 0:
        a_lo, a_hi = -a_hi, -a_lo
        c_lo, c_hi = -c_hi, -c_lo
    lo = _cdiv(a_lo, c_hi) if a_lo >= 0 else _cdiv(a_lo, c_lo)
    hi = _fdiv(a_hi, c_lo) if a_hi >= 0 else _fdiv(a_hi, c_hi)
    return lo, hi


def _scaled_range(n_lo, n_hi, c_lo, c_hi):
    ps = (n_lo * c_lo, n_lo * c_hi, n_hi * c_lo, n_hi * c_hi)
    return min(ps), max(ps)


def enumerate_box(emb_lo, emb_hi, box_lo, box_hi, t_lo, t_hi, bits, limit=0):
    m = len(emb_lo)
    d = len(box_lo)
    scale = 1 << bits
    for k in range(m):
        if emb_lo[k][0] != scale or emb_hi[k][0] != scale:
            raise ValueError("basis element 0 must be exactly 1")
    for k in range(m):
        if t_lo[k] > t_hi[k]:
            return []
    pairs = [(k, l) for k in range(m) for l in range(k + 1, m)]
    # difference coefficients per level and pair
    diff = [[(emb_lo[k][j] - emb_hi[l][j], emb_hi[k][j] - emb_lo[l][j]) for (k, l) in pairs]
            for j in range(d)]
    # slack[J][p]: range of sum_{1<=j<J} n_j * diff over the box
    slack = [[(0, 0)] * len(pairs) for _ in range(d)]
    for J in range(2, d):
        row = []
        for p in range(len(pairs)):
            lo, hi = slack[J - 1][p]
            slo, shi = _scaled_range(box_lo[J - 1], box_hi[J - 1], *diff[J - 1][p])
            row.append((lo + slo, hi + shi))
        slack[J] = row
    target_diff = [(t_lo[k] - t_hi[l], t_hi[k] - t_lo[l]) for (k, l) in pairs]

    out = []
    n = [0] * d
    p_lo = [0] * m
    p_hi = [0] * m

    def level(J):
        if J == 0:
            lo, hi = box_lo[0], box_hi[0]
            for k in range(m):
                lo = max(lo, _cdiv(t_lo[k] - p_hi[k], scale))
                hi = min(hi, _fdiv(t_hi[k] - p_lo[k], scale))
                if lo > hi:
                    return
            for v in range(lo, hi + 1):
                n[0] = v
                out.append(tuple(n))
            if limit and len(out) > limit:
                raise CandidateLimitExceeded(len(out))
            return
        lo, hi = box_lo[J], box_hi[J]
        for p, (k, l) in enumerate(pairs):
            c_lo, c_hi = diff[J][p]
            s_lo, s_hi = slack[J][p]
            a_lo = target_diff[p][0] - (p_hi[k] - p_lo[l]) - s_hi
            a_hi = target_diff[p][1] - (p_lo[k] - p_hi[l]) - s_lo
            if c_lo <= 0 <= c_hi:
                # the level cannot be solved from this pair; use it as a prune
                c_abs = max(-c_lo, c_hi)
                reach = max(abs(lo), abs(hi)) * c_abs
                if a_lo > reach or a_hi < -reach:
                    return
                continue
            r_lo, r_hi = _solve_range(a_lo, a_hi, c_lo, c_hi)
            lo = max(lo, r_lo)
            hi = min(hi, r_hi)
            if lo > hi:
                return
        saved_lo = p_lo[:]
        saved_hi = p_hi[:]
        for v in range(lo, hi + 1):
            n[J] = v
            for k in range(m):
                e_lo, e_hi = emb_lo[k][J], emb_hi[k][J]
                if v >= 0:
                    p_lo[k] = saved_lo[k] + v * e_lo
                    p_hi[k] = saved_hi[k] + v * e_hi
                else:
                    p_lo[k] = saved_lo[k] + v * e_hi
                    p_hi[k] = saved_hi[k] + v * e_lo
            level(J - 1)
        p_lo[:] = saved_lo
        p_hi[:] = saved_hi

    level(d - 1)
    return out
