"""The compiled enumeration kernel agrees with the pure-Python fallback."""

import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from indecforms import kernels
from indecforms.biquad import make_biquad_field
from indecforms.exactnum import ceil_div, floor_div
from indecforms.lattice import KERNEL_BITS, _basis_fixed_point, box_candidates, search_box
from indecforms.scubic import make_scubic_field

compiled = pytest.mark.skipif(kernels.backend() != "compiled", reason="compiled kernel not built")


def _args(K, bounds):
    box = search_box(K, bounds)
    emb_lo, emb_hi = _basis_fixed_point(K, KERNEL_BITS)
    scale = 1 << KERNEL_BITS
    t_lo = [floor_div(L.numerator * scale, L.denominator) for L, _ in box.bounds]
    t_hi = [ceil_div(U.numerator * scale, U.denominator) for _, U in box.bounds]
    return (emb_lo, emb_hi, box.lo, box.hi, t_lo, t_hi, KERNEL_BITS)


def _random_cases(seed, count):
    rng = random.Random(seed)
    Ks = [make_biquad_field(2, 3), make_biquad_field(5, 13), make_biquad_field(3, 7),
          make_scubic_field(3, require_monogenic=False), make_scubic_field(9, require_monogenic=False)]
    for _ in range(count):
        K = rng.choice(Ks)
        bounds = []
        for _k in range(K.degree):
            lo = Fraction(rng.randint(-20, 10), rng.randint(1, 3))
            bounds.append((lo, lo + Fraction(rng.randint(0, 30), rng.randint(1, 2))))
        yield K, bounds


@compiled
def test_compiled_matches_python_on_random_boxes():
    for K, bounds in _random_cases(21, 60):
        args = _args(K, bounds)
        py = sorted(map(tuple, kernels.enumerate_box(*args, force_python=True)))
        c = sorted(map(tuple, kernels.enumerate_box(*args)))
        assert py == c, (K, bounds)


@compiled
def test_compiled_matches_python_full_search():
    for K, bounds in _random_cases(22, 20):
        a = [x.coords for x in box_candidates(K, bounds, force_python=True)]
        b = [x.coords for x in box_candidates(K, bounds)]
        assert a == b


def test_limit_is_respected():
    K = make_biquad_field(2, 3)
    args = _args(K, [(Fraction(0), Fraction(12))] * 4)
    full = kernels.enumerate_box(*args, force_python=True)
    assert len(full) > 5
    assert len(kernels.enumerate_box(*args, limit=len(full), force_python=True)) == len(full)
    with pytest.raises(kernels.CandidateLimitExceeded):
        kernels.enumerate_box(*args, limit=5, force_python=True)


@compiled
def test_compiled_limit_is_respected():
    K = make_biquad_field(2, 3)
    args = _args(K, [(Fraction(0), Fraction(12))] * 4)
    with pytest.raises(kernels.CandidateLimitExceeded):
        kernels.enumerate_box(*args, limit=5)


def test_env_var_selects_fallback():
    env = dict(os.environ, INDECFORMS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from indecforms import kernels; print(kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
