import random
from fractions import Fraction

import pytest

import props
from indecforms.biquad import make_biquad_field
from indecforms.lattice import Budget, BudgetExceeded, SearchStats
from indecforms.oracle import (
    decompose_form,
    enumerate_decompositions,
    enumerate_form_decompositions,
    enumerate_tp_below,
    is_additively_indecomposable,
    is_indecomposable,
)
from indecforms.qform import QuadForm, binary, catalog_form, is_tpd, is_tpsd, make_form
from indecforms.scubic import make_scubic_field


def cubic(a):
    return make_scubic_field(a, require_monogenic=False)


def pairs(decs):
    return {tuple(sorted((d.left.coords, d.right.coords))) for d in decs}


def test_tp_below_two():
    for p, q in ((2, 3), (5, 13), (21, 33)):
        K = make_biquad_field(p, q)
        assert enumerate_tp_below(2 * K.one) == [K.one]


def test_tp_below_three_with_sqrt5():
    K = make_biquad_field(2, 5)
    s5 = K.sqrt(5)
    want = {K.one.coords, (2 * K.one).coords, ((3 + s5) / 2).coords, ((3 - s5) / 2).coords}
    assert {x.coords for x in enumerate_tp_below(3 * K.one)} == want


def test_tp_below_one_is_empty():
    for K in props.fields():
        assert enumerate_tp_below(K.one) == []


def test_tp_below_rejects_non_positive():
    K = make_biquad_field(2, 3)
    with pytest.raises(ValueError):
        enumerate_tp_below(K.sqrt(2))


def test_four_up_to_embeddings():
    K = make_biquad_field(2, 3)
    got = pairs(enumerate_decompositions(4 * K.one, up_to_embeddings=True))
    t = (K.sqrt(2) + K.sqrt(6)) / 2
    for x in (K.sqrt(2), K.sqrt(3), t, K.zero, K.one):
        left = 2 + x if x != K.one else K.one
        right = 4 - left
        assert tuple(sorted((left.coords, right.coords))) in got
    full = pairs(enumerate_decompositions(4 * K.one))
    assert len(full) > len(got)


def test_two_in_cubic():
    for a in range(-1, 8):
        F = cubic(a)
        decs = enumerate_decompositions(2 * F.one)
        assert pairs(decs) == {(F.one.coords, F.one.coords)}
        with_trivial = enumerate_decompositions(2 * F.one, include_trivial=True)
        assert len(with_trivial) == 2 and any(d.trivial for d in with_trivial)


def test_example_split():
    K = make_biquad_field(2, 5)
    x = 7 + 2 * K.sqrt(10)
    b = K.parse("7/2 + sqrt2 + 1/2sqrt5 + sqrt10")
    c = K.parse("7/2 - sqrt2 - 1/2sqrt5 + sqrt10")
    assert b + c == x
    assert tuple(sorted((b.coords, c.coords))) in pairs(enumerate_decompositions(x))


def test_decompositions_reconstruct():
    rng = random.Random(71)
    for K in props.fields():
        for _ in range(3):
            alpha = props.rand_totally_positive(rng, K, span=1, shift=6)
            for d in enumerate_decompositions(alpha):
                assert d.total() == alpha
                assert d.left.is_totally_positive() and d.right.is_totally_positive()
                assert d.left.is_integral() and d.right.is_integral()


def test_tp_below_complete_against_brute_force():
    """Cross-check against a plain scan of integral coordinates in a generous cube."""
    import itertools
    for K, alpha, R in ((make_biquad_field(2, 3), None, 8), (cubic(2), None, 12)):
        alpha = 5 * K.one
        brute = set()
        for ns in itertools.product(range(-R, R + 1), repeat=K.degree):
            b = K.from_integral_coords(list(ns))
            if b.is_totally_positive() and (alpha - b).is_totally_positive():
                brute.add(b.coords)
        assert {b.coords for b in enumerate_tp_below(alpha)} == brute


def test_indecomposable_examples():
    K = make_biquad_field(2, 5)
    x = 7 + 2 * K.sqrt(10)
    assert is_indecomposable(x, subfield=K.subfield(10))
    assert not is_indecomposable(x)
    L = make_biquad_field(17, 29)
    y = (5 + L.sqrt(17)) / 2
    assert is_indecomposable(y, subfield=L.subfield(17))
    with pytest.raises(ValueError):
        is_indecomposable(x, subfield=K.subfield(2))
    with pytest.raises(ValueError):
        is_indecomposable(K.sqrt(2))


def test_triangle_indecomposable_a4():
    F = cubic(4)
    for pt in F.triangle_points():
        assert is_indecomposable(F.alpha_of(pt))


def test_rank_one_split():
    K = make_biquad_field(2, 3)
    Q = binary(K, 2, 4, 2)
    dec = decompose_form(Q)
    assert dec is not None
    assert dec.left == dec.right == binary(K, 1, 2, 1)


def test_example_form_decomposes():
    Q = catalog_form("Ex4.5")
    dec = decompose_form(Q)
    assert dec is not None and dec.total() == Q
    assert is_tpsd(dec.left) and is_tpsd(dec.right)
    assert dec.left.det().is_zero() and dec.right.det().is_zero()


def test_p410_indecomposable():
    st = SearchStats()
    assert decompose_form(catalog_form("P4.10", q=13), stats=st) is None
    assert st.box_volume > 0


def test_additive_indecomposability_examples():
    K = make_biquad_field(2, 3)
    assert is_additively_indecomposable(catalog_form("P3.2", field=K), classical_only=False)
    assert is_additively_indecomposable(catalog_form("P5.4", a=2))
    assert is_additively_indecomposable(catalog_form("P5.5-ternary", a=0))


def test_non_classical_split_found_only_when_allowed():
    K = make_biquad_field(2, 3)
    # x^2 + xy + y^2 + (x^2 + xy + y^2) splits non-classically only
    Q = binary(K, 2, 2, 2)
    assert decompose_form(Q, classical_only=False) is not None


def test_rejects_indefinite():
    K = make_biquad_field(2, 3)
    with pytest.raises(ValueError):
        decompose_form(binary(K, 1, 0, -1))


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        decompose_form(catalog_form("P4.13", q=29), budget=Budget(max_box_volume=1))


def test_budget_applies_to_cached_searches():
    K = make_biquad_field(2, 3)
    alpha = 9 * K.one
    enumerate_tp_below(alpha)
    with pytest.raises(BudgetExceeded):
        enumerate_tp_below(alpha, budget=Budget(max_box_volume=1))
    with pytest.raises(BudgetExceeded):
        enumerate_tp_below(alpha, budget=Budget(max_candidates=1))


def test_superadditive_determinants():
    assert props.det_superadditive() > 0


def test_enumerate_form_decompositions_unique():
    K = make_biquad_field(2, 5)
    decs = enumerate_form_decompositions(binary(K, 2, 2, 2))
    keys = [(d.left.sort_key(), d.right.sort_key()) for d in decs]
    assert len(keys) == len(set(keys)) and keys == sorted(keys)


def _indecomposables(F):
    """1 and the triangle set, times small totally positive units."""
    r2 = F.rho_sq
    r2p = F.conjugate(r2, 1)
    units = [r2 ** i * r2p ** j for i in range(-1, 2) for j in range(-1, 2)]
    return [u * b for u in units for b in [F.one] + [F.alpha_of(pt) for pt in F.triangle_points()]]


def test_agrees_with_binary_criterion():
    """alpha x^2 + beta xy + gamma y^2 with indecomposable alpha, gamma and beta != 0 is indecomposable."""
    rng = random.Random(72)
    checked = 0
    for a in (1, 2):
        F = cubic(a)
        elems = _indecomposables(F)
        pool = [(x, y, b) for x in elems for y in elems for b in (2, -2, 2 * F.rho)
                if is_tpd(binary(F, x, b, y))]
        for x, y, b in rng.sample(pool, 12):
            assert is_indecomposable(x) and is_indecomposable(y)
            assert decompose_form(binary(F, x, b, y)) is None
            checked += 1
    assert checked == 24


def test_agrees_with_chain_criterion():
    """Ternary chains with indecomposable diagonal and nonzero super-diagonal are indecomposable."""
    rng = random.Random(73)
    checked = 0
    for a in (2, 3):
        F = cubic(a)
        elems = _indecomposables(F)
        pairs_ok = [(x, y) for x in elems for y in elems if is_tpd(binary(F, x, 2, y))]
        follow: dict = {}
        for x, y in pairs_ok:
            follow.setdefault(x, []).append(y)
        found = 0
        for _ in range(1000):
            x, y = rng.choice(pairs_ok)
            if y not in follow:
                continue
            z = rng.choice(follow[y])
            off = [F.one * rng.choice((2, -2)), F.one * rng.choice((2, -2))]
            Q = make_form(F, 3, {(0, 0): x, (1, 1): y, (2, 2): z, (0, 1): off[0], (1, 2): off[1]})
            if not is_tpd(Q):
                continue
            assert all(is_indecomposable(d) for d in (x, y, z))
            assert Q == catalog_form("P3.3-chain", field=F, diag=[x, y, z], offdiag=off)
            assert decompose_form(Q) is None, Q
            found += 1
            if found == 4:
                break
        checked += found
    assert checked == 8


def test_ternary_decomposable_found():
    K = make_biquad_field(2, 3)
    Q = make_form(K, 3, {(0, 0): 2, (1, 1): 2, (2, 2): 2})
    dec = decompose_form(Q)
    assert dec is not None and dec.total() == Q
    assert is_tpsd(dec.left) and is_tpsd(dec.right)


def test_json():
    dec = decompose_form(catalog_form("Ex4.5"))
    data = dec.to_json()
    assert data["kind"] == "form" and set(data) == {"kind", "trivial", "left", "right"}
    assert isinstance(QuadForm, type)
    assert Fraction(data["left"]["coeffs"][0][2][0]) == dec.left.coeffs[(0, 0)].coords[0]
