"""Compare the compiled enumeration kernel with the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each case
walks the same search box with both kernels, checks that the candidate
lists agree, and prints the best wall time of each.
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from indecforms.biquad import make_biquad_field
from indecforms.exactnum import ceil_div, floor_div
from indecforms.kernels import backend, enumerate_box
from indecforms.lattice import KERNEL_BITS, Budget, _basis_fixed_point, box_candidates, search_box
from indecforms.scubic import make_scubic_field


def _cases():
    K = make_biquad_field(2, 3)
    yield "biquad (2,3), conjugates in (0, 12)", K, [(Fraction(0), Fraction(12))] * 4
    K = make_biquad_field(5, 13)
    yield "biquad (5,13), conjugates in (0, 20)", K, [(Fraction(0), Fraction(20))] * 4
    K = make_biquad_field(21, 33)
    yield "biquad (21,33), conjugates in (0, 16)", K, [(Fraction(0), Fraction(16))] * 4
    K = make_scubic_field(17, require_monogenic=False)
    al = K.alpha(8, 160)
    yield "cubic a=17, below alpha(8,160)", K, [(Fraction(0), al.enclosure(k, 48).hi) for k in range(3)]
    K = make_scubic_field(4, require_monogenic=False)
    yield "cubic a=4, conjugates in (0, 60)", K, [(Fraction(0), Fraction(60))] * 3


def _best(fn, repeat):
    best, out = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def _kernel_args(K, bounds):
    box = search_box(K, bounds)
    emb_lo, emb_hi = _basis_fixed_point(K, KERNEL_BITS)
    scale = 1 << KERNEL_BITS
    t_lo = [floor_div(L.numerator * scale, L.denominator) for L, _ in box.bounds]
    t_hi = [ceil_div(U.numerator * scale, U.denominator) for _, U in box.bounds]
    return (emb_lo, emb_hi, box.lo, box.hi, t_lo, t_hi, KERNEL_BITS)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    budget = Budget(max_box_volume=10**13, max_candidates=10**7)
    print(f"active kernel: {backend()}")
    print("kernel = raw box walk; search = box walk plus conversion to field elements")
    print(f"{'case':40s} {'volume':>9s} {'cands':>6s} {'kernel py':>10s} {'kernel C':>9s} "
          f"{'speedup':>8s} {'search py':>10s} {'search C':>9s}")
    for name, K, bounds in _cases():
        vol = search_box(K, bounds).volume
        kargs = _kernel_args(K, bounds)
        tk_py, v_py = _best(lambda: enumerate_box(*kargs, force_python=True), args.repeat)
        tk_c, v_c = _best(lambda: enumerate_box(*kargs), args.repeat)
        if sorted(map(tuple, v_py)) != sorted(map(tuple, v_c)):
            raise SystemExit(f"kernel outputs differ on {name}")
        t_py, c_py = _best(lambda: box_candidates(K, bounds, budget, force_python=True), args.repeat)
        t_c, c_c = _best(lambda: box_candidates(K, bounds, budget), args.repeat)
        if [x.coords for x in c_py] != [x.coords for x in c_c]:
            raise SystemExit(f"search outputs differ on {name}")
        speed = tk_py / tk_c if tk_c else float("inf")
        print(f"{name:40s} {vol:9d} {len(c_c):6d} {tk_py:10.4f} {tk_c:9.4f} {speed:7.1f}x {t_py:10.4f} {t_c:9.4f}")


if __name__ == "__main__":
    main()
