import random
from fractions import Fraction

import pytest

import props
from indecforms.biquad import make_biquad_field
from indecforms.lattice import Budget, BudgetExceeded, SearchStats, box_candidates, box_search, in_bounds, search_box
from indecforms.scubic import make_scubic_field


def test_search_box_sound():
    assert props.search_box_sound() == 500


def _brute_force(K, bounds, radius):
    """Every element with integral coordinates in [-radius, radius] that meets the bounds."""
    import itertools
    out = []
    for ns in itertools.product(range(-radius, radius + 1), repeat=K.degree):
        x = K.from_integral_coords(list(ns))
        if in_bounds(x, bounds):
            out.append(x.coords)
    return sorted(out)


@pytest.mark.parametrize("field", [make_biquad_field(2, 3), make_scubic_field(1, require_monogenic=False)])
def test_box_search_complete_against_brute_force(field):
    rng = random.Random(51)
    for _ in range(5):
        bounds = []
        for _k in range(field.degree):
            lo = Fraction(rng.randint(-4, 2))
            bounds.append((lo, lo + rng.randint(1, 5)))
        box = search_box(field, bounds)
        radius = max(max(abs(v) for v in box.lo + box.hi), 1)
        got = sorted(x.coords for x in box_search(field, bounds))
        assert got == _brute_force(field, bounds, radius)


def test_open_and_closed_bounds():
    K = make_biquad_field(2, 3)
    bounds = [(Fraction(0), Fraction(2))] * 4
    closed = {x.coords for x in box_search(K, bounds)}
    opened = {x.coords for x in box_search(K, bounds, closed=False)}
    assert (0, 0, 0, 0) in closed and (2, 0, 0, 0) in closed
    assert (1, 0, 0, 0) in opened and (0, 0, 0, 0) not in opened


def test_budget_volume():
    K = make_biquad_field(2, 3)
    with pytest.raises(BudgetExceeded) as exc:
        box_candidates(K, [(Fraction(0), Fraction(100))] * 4, Budget(max_box_volume=10))
    assert exc.value.what == "box volume"


def test_budget_candidates():
    K = make_biquad_field(2, 3)
    with pytest.raises(BudgetExceeded) as exc:
        box_candidates(K, [(Fraction(0), Fraction(30))] * 4, Budget(max_candidates=3))
    assert exc.value.what == "candidate count"


def test_budget_from_env(monkeypatch):
    monkeypatch.setenv("INDECFORMS_MAX_BOX_VOLUME", "77")
    monkeypatch.setenv("INDECFORMS_MAX_CANDIDATES", "5")
    b = Budget.from_env()
    assert (b.max_box_volume, b.max_candidates) == (77, 5)


def test_stats_record_search_size():
    K = make_scubic_field(3, require_monogenic=False)
    st = SearchStats()
    bounds = [(Fraction(0), Fraction(10))] * 3
    out = box_candidates(K, bounds, stats=st)
    assert st.boxes == 1
    assert st.box_volume == search_box(K, bounds).volume
    assert st.candidates == len(out)


def test_empty_box():
    K = make_biquad_field(2, 5)
    assert box_search(K, [(Fraction(1, 3), Fraction(2, 3))] * 4) == []
