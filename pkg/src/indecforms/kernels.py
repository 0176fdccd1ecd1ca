"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``INDECFORMS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    if os.environ.get("INDECFORMS_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

CandidateLimitExceeded = _kernels_py.CandidateLimitExceeded

# fixed-point magnitudes handed to the compiled kernel stay below 2**_C_BOUND_BITS
_C_BOUND_BITS = 60


def backend() -> str:
    return "compiled" if _compiled is not None else "python"


def _fits_int64(emb_lo, emb_hi, box_lo, box_hi, t_lo, t_hi) -> bool:
    bound = 1 << _C_BOUND_BITS
    nmax = max(max(abs(x) for x in box_lo), max(abs(x) for x in box_hi)) + 1
    total = max(max(abs(x) for x in t_lo), max(abs(x) for x in t_hi))
    for k in range(len(emb_lo)):
        row = 0
        for j in range(len(box_lo)):
            row += nmax * max(abs(emb_lo[k][j]), abs(emb_hi[k][j]))
        total = max(total, row)
    # partial sums, pair differences and slack stay within a small multiple
    return 8 * total < bound


def enumerate_box(emb_lo, emb_hi, box_lo, box_hi, t_lo, t_hi, bits, limit=0, force_python=False):
    """Dispatch to the compiled kernel when the inputs fit in 64-bit integers."""
    if (
        not force_python
        and _compiled is not None
        and len(box_lo) <= 4
        and _fits_int64(emb_lo, emb_hi, box_lo, box_hi, t_lo, t_hi)
    ):
        try:
            return _compiled.enumerate_box(emb_lo, emb_hi, box_lo, box_hi, t_lo, t_hi, bits, limit)
        except _compiled.CandidateLimitExceeded as exc:
            raise CandidateLimitExceeded(*exc.args) from None
    return _kernels_py.enumerate_box(emb_lo, emb_hi, box_lo, box_hi, t_lo, t_hi, bits, limit)
