# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice box enumeration; same contract as ``_kernels_py``.

All fixed-point quantities must fit in a signed 64-bit integer together
with their partial sums; ``kernels.enumerate_box`` checks this before
dispatching here.
"""

from libc.stdlib cimport malloc, free

DEF MAXD = 4
DEF MAXP = 6


class CandidateLimitExceeded(RuntimeError):
    pass


cdef inline long long fdiv(long long a, long long b) nogil:
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long cdiv(long long a, long long b) nogil:
    return -fdiv(-a, b)


cdef struct State:
    int d
    int m
    int npairs
    long long scale
    long long emb_lo[MAXD][MAXD]
    long long emb_hi[MAXD][MAXD]
    long long box_lo[MAXD]
    long long box_hi[MAXD]
    long long t_lo[MAXD]
    long long t_hi[MAXD]
    int pk[MAXP]
    int pl[MAXP]
    long long diff_lo[MAXD][MAXP]
    long long diff_hi[MAXD][MAXP]
    long long slack_lo[MAXD][MAXP]
    long long slack_hi[MAXD][MAXP]
    long long td_lo[MAXP]
    long long td_hi[MAXP]
    long long n[MAXD]
    long long p_lo[MAXD]
    long long p_hi[MAXD]
    long long count
    long long limit
    int overflow


cdef inline void scaled_range(long long n_lo, long long n_hi, long long c_lo, long long c_hi,
                              long long *r_lo, long long *r_hi) nogil:
    cdef long long a = n_lo * c_lo, b = n_lo * c_hi, c = n_hi * c_lo, e = n_hi * c_hi
    cdef long long lo = a, hi = a
    if b < lo: lo = b
    if c < lo: lo = c
    if e < lo: lo = e
    if b > hi: hi = b
    if c > hi: hi = c
    if e > hi: hi = e
    r_lo[0] = lo
    r_hi[0] = hi


cdef int level(State *s, int J, list out) except -1:
    cdef long long lo, hi, v, c_lo, c_hi, a_lo, a_hi, r_lo, r_hi, c_abs, reach, t
    cdef int k, l, p
    cdef long long saved_lo[MAXD]
    cdef long long saved_hi[MAXD]
    if J == 0:
        lo = s.box_lo[0]
        hi = s.box_hi[0]
        for k in range(s.m):
            t = cdiv(s.t_lo[k] - s.p_hi[k], s.scale)
            if t > lo: lo = t
            t = fdiv(s.t_hi[k] - s.p_lo[k], s.scale)
            if t < hi: hi = t
            if lo > hi:
                return 0
        v = lo
        while v <= hi:
            s.n[0] = v
            out.append(tuple([s.n[i] for i in range(s.d)]))
            s.count += 1
            v += 1
        if s.limit > 0 and s.count > s.limit:
            raise CandidateLimitExceeded(s.count)
        return 0
    lo = s.box_lo[J]
    hi = s.box_hi[J]
    for p in range(s.npairs):
        k = s.pk[p]
        l = s.pl[p]
        c_lo = s.diff_lo[J][p]
        c_hi = s.diff_hi[J][p]
        a_lo = s.td_lo[p] - (s.p_hi[k] - s.p_lo[l]) - s.slack_hi[J][p]
        a_hi = s.td_hi[p] - (s.p_lo[k] - s.p_hi[l]) - s.slack_lo[J][p]
        if c_lo <= 0 and 0 <= c_hi:
            c_abs = c_hi if c_hi > -c_lo else -c_lo
            reach = (hi if hi > -lo else -lo)
            if lo > reach: reach = lo
            reach = reach * c_abs
            if a_lo > reach or a_hi < -reach:
                return 0
            continue
        if c_hi < 0:
            t = a_lo
            a_lo = -a_hi
            a_hi = -t
            t = c_lo
            c_lo = -c_hi
            c_hi = -t
        if a_lo >= 0:
            r_lo = cdiv(a_lo, c_hi)
        else:
            r_lo = cdiv(a_lo, c_lo)
        if a_hi >= 0:
            r_hi = fdiv(a_hi, c_lo)
        else:
            r_hi = fdiv(a_hi, c_hi)
        if r_lo > lo: lo = r_lo
        if r_hi < hi: hi = r_hi
        if lo > hi:
            return 0
    for k in range(s.m):
        saved_lo[k] = s.p_lo[k]
        saved_hi[k] = s.p_hi[k]
    v = lo
    while v <= hi:
        s.n[J] = v
        for k in range(s.m):
            if v >= 0:
                s.p_lo[k] = saved_lo[k] + v * s.emb_lo[k][J]
                s.p_hi[k] = saved_hi[k] + v * s.emb_hi[k][J]
            else:
                s.p_lo[k] = saved_lo[k] + v * s.emb_hi[k][J]
                s.p_hi[k] = saved_hi[k] + v * s.emb_lo[k][J]
        level(s, J - 1, out)
        v += 1
    for k in range(s.m):
        s.p_lo[k] = saved_lo[k]
        s.p_hi[k] = saved_hi[k]
    return 0


def enumerate_box(emb_lo, emb_hi, box_lo, box_hi, t_lo, t_hi, int bits, long long limit=0):
    cdef State *s = <State *> malloc(sizeof(State))
    cdef int j, k, l, p, J
    cdef long long a, b
    cdef list out = []
    if s == NULL:
        raise MemoryError()
    try:
        s.m = len(emb_lo)
        s.d = len(box_lo)
        if s.d > MAXD or s.m > MAXD or s.d < 1:
            raise ValueError("dimension out of range for the compiled kernel")
        s.scale = (<long long> 1) << bits
        for k in range(s.m):
            if emb_lo[k][0] != s.scale or emb_hi[k][0] != s.scale:
                raise ValueError("basis element 0 must be exactly 1")
            if t_lo[k] > t_hi[k]:
                return []
            s.t_lo[k] = t_lo[k]
            s.t_hi[k] = t_hi[k]
            for j in range(s.d):
                s.emb_lo[k][j] = emb_lo[k][j]
                s.emb_hi[k][j] = emb_hi[k][j]
        for j in range(s.d):
            s.box_lo[j] = box_lo[j]
            s.box_hi[j] = box_hi[j]
        p = 0
        for k in range(s.m):
            for l in range(k + 1, s.m):
                s.pk[p] = k
                s.pl[p] = l
                s.td_lo[p] = s.t_lo[k] - s.t_hi[l]
                s.td_hi[p] = s.t_hi[k] - s.t_lo[l]
                p += 1
        s.npairs = p
        for j in range(s.d):
            for p in range(s.npairs):
                k = s.pk[p]
                l = s.pl[p]
                s.diff_lo[j][p] = s.emb_lo[k][j] - s.emb_hi[l][j]
                s.diff_hi[j][p] = s.emb_hi[k][j] - s.emb_lo[l][j]
                s.slack_lo[j][p] = 0
                s.slack_hi[j][p] = 0
        for J in range(2, s.d):
            for p in range(s.npairs):
                scaled_range(s.box_lo[J - 1], s.box_hi[J - 1], s.diff_lo[J - 1][p], s.diff_hi[J - 1][p], &a, &b)
                s.slack_lo[J][p] = s.slack_lo[J - 1][p] + a
                s.slack_hi[J][p] = s.slack_hi[J - 1][p] + b
        for k in range(s.m):
            s.p_lo[k] = 0
            s.p_hi[k] = 0
        s.count = 0
        s.limit = limit
        level(s, s.d - 1, out)
        return out
    finally:
        free(s)
