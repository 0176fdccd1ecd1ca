import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import props
from indecforms.exactnum import (
    CubicRootReal,
    Enclosure,
    ExactReal,
    Sign,
    SqrtReal,
    ceil_div,
    floor_div,
    is_squarefree,
    isolate_cubic_roots,
    rational_det,
    rational_inverse,
    sign_exact,
    sqrt_enclosure,
)


def test_sqrt2_bracket():
    e = sqrt_enclosure(2, Fraction(1, 100))
    assert e.hi - e.lo <= Fraction(1, 100)
    assert e.lo ** 2 < 2 < e.hi ** 2
    # halving from [1, 2] first reaches width <= 1/100 at 1/128
    assert (e.lo, e.hi) == (Fraction(181, 128), Fraction(91, 64))
    assert e.lo >= Fraction(141, 100)
    # one halving later the bracket also fits inside [1.41, 1.42]
    f = sqrt_enclosure(2, Fraction(1, 200))
    assert f.lo >= Fraction(141, 100) and f.hi <= Fraction(142, 100)


@pytest.mark.parametrize("d", [4, 1, 0, -3, 12, 18])
def test_sqrt_enclosure_rejects(d):
    with pytest.raises(ValueError):
        sqrt_enclosure(d, Fraction(1, 10))


def test_sqrt_enclosure_rejects_bad_width():
    with pytest.raises(ValueError):
        sqrt_enclosure(2, 0)


def _bisect_sqrt(d, width):
    """Independent bisection on x^2 - d starting from [0, d]."""
    lo, hi = Fraction(0), Fraction(d)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if mid * mid < d:
            lo = mid
        else:
            hi = mid
    return lo, hi


def test_sqrt10_tight():
    e = sqrt_enclosure(10, Fraction(1, 10 ** 6))
    assert Fraction(316227, 10 ** 5) < e.lo <= e.hi < Fraction(316228, 10 ** 5)
    lo, hi = _bisect_sqrt(10, Fraction(1, 10 ** 6))
    assert e.lo < hi and lo < e.hi


@given(st.integers(2, 5000).filter(is_squarefree), st.integers(1, 60))
@settings(max_examples=200, deadline=None, derandomize=True)
def test_sqrt_enclosure_brackets(d, k):
    e = sqrt_enclosure(d, Fraction(1, 2 ** k))
    assert e.lo ** 2 < d < e.hi ** 2
    assert e.hi - e.lo <= Fraction(1, 2 ** k)


def test_sqrt_enclosure_deterministic_and_nested():
    a = sqrt_enclosure(7, Fraction(1, 1000))
    assert a == sqrt_enclosure(7, Fraction(1, 1000))
    b = sqrt_enclosure(7, Fraction(1, 10 ** 9))
    assert a.lo <= b.lo <= b.hi <= a.hi
    assert b.width < a.width


def test_is_squarefree():
    assert [n for n in range(1, 30) if is_squarefree(n)] == [
        1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29]


def test_floor_ceil_div():
    for a in range(-20, 21):
        for b in (1, 2, 3, 7, -4):
            assert floor_div(a, b) == a // b
            assert ceil_div(a, b) == -((-a) // b)


def test_cubic_roots_a_minus_one():
    r, r1, r2 = isolate_cubic_roots(-1)
    assert r.lo >= 0 and r.hi > 0


def test_cubic_roots_a6():
    r, _, _ = isolate_cubic_roots(6)
    assert 7 <= r.lo and r.hi <= 8
    # sign change of x^3 - 6x^2 - 9x - 1 on (7, 8)
    f = lambda x: x ** 3 - 6 * x ** 2 - 9 * x - 1  # noqa: E731
    assert f(7) < 0 < f(8)


@pytest.mark.parametrize("a", range(-1, 40))
def test_cubic_roots_disjoint_and_located(a):
    r, r1, r2 = isolate_cubic_roots(a)
    encs = (r, r1, r2)
    for i in range(3):
        for j in range(i + 1, 3):
            assert not encs[i].intersects(encs[j])
    # refined enclosures respect the root bounds strictly
    f = lambda x: x ** 3 - a * x ** 2 - (a + 3) * x - 1  # noqa: E731
    R = [CubicRootReal(a, i).enclosure(40) for i in range(3)]
    assert R[0].lo >= a + 1 and f(a + 1) < 0
    assert -2 <= R[1].lo and R[1].hi <= -1
    assert -1 <= R[2].lo and R[2].hi <= 0
    for e in R:
        assert f(e.lo) * f(e.hi) <= 0


def test_cubic_root_refinement_nested():
    root = CubicRootReal(5, 0)
    prev = root.enclosure(4)
    for bits in (8, 16, 32, 64):
        cur = root.enclosure(bits)
        assert prev.lo <= cur.lo <= cur.hi <= prev.hi
        assert cur.width < prev.width
        prev = cur


def test_sign_examples():
    one = ExactReal(1)
    assert sign_exact([0, 0], [one, SqrtReal(2)], True) == Sign.ZERO
    assert sign_exact([1, 0], [one, SqrtReal(2)], False) == Sign.POSITIVE
    assert sign_exact([3, -1], [one, SqrtReal(5)], False) == Sign.POSITIVE
    assert sign_exact([2, -1], [one, SqrtReal(5)], False) == Sign.NEGATIVE


def test_sign_near_zero():
    # 99^2 - 70^2 * 2 = 1: a tiny positive number
    assert sign_exact([99, -70], [ExactReal(1), SqrtReal(2)], False) == Sign.POSITIVE
    assert sign_exact([-99, 70], [ExactReal(1), SqrtReal(2)], False) == Sign.NEGATIVE


def test_sign_against_integer_oracle():
    assert props.sign_matches_integer_oracle() == 1000


def test_sign_stable_under_refinement():
    rng = random.Random(11)
    for _ in range(200):
        d = rng.choice((2, 3, 5, 7))
        c = [Fraction(rng.randint(-30, 30), rng.randint(1, 5)) for _ in range(2)]
        if c == [0, 0]:
            continue
        s = sign_exact(c, [ExactReal(1), SqrtReal(d)], False)
        val = ExactReal(c[0]).enclosure(80) + SqrtReal(d).enclosure(80) * c[1]
        assert val.excludes_zero()
        assert (val.lo > 0) == (s == Sign.POSITIVE)


def test_enclosure_arithmetic():
    a, b = Enclosure(1, 2), Enclosure(-3, 1)
    assert (a + b) == Enclosure(-2, 3)
    assert (a * b) == Enclosure(-6, 2)
    assert (a - b) == Enclosure(0, 5)
    assert a.reciprocal() == Enclosure(Fraction(1, 2), 1)
    with pytest.raises(ValueError):
        Enclosure(2, 1)


def test_rational_inverse_and_det():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    inv = rational_inverse(m)
    for i in range(3):
        for j in range(3):
            assert sum(Fraction(m[i][k]) * inv[k][j] for k in range(3)) == (1 if i == j else 0)
    assert rational_det(m) == 2 * (12 - 1) - 1 * 4
