import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from majorant.errors import BadParams, CapacityExceeded, CaseCondition, DegenerateBox
from majorant.lattice_slicing import (BoxSpec, brute_force_counts, char_fn_bound_check,
                                      plancherel_check, random_boxes, slice_bound_check,
                                      slice_count, slice_polynomial, tightness_ratio)


def enumerate_counts(lengths, offsets=None):
    """Pure-Python oracle over every lattice point."""
    offsets = offsets or (0,) * len(lengths)
    counts = {}
    for z in product(*(range(k, k + l) for k, l in zip(offsets, lengths))):
        counts[sum(z)] = counts.get(sum(z), 0) + 1
    return counts


def test_small_polynomials():
    assert slice_polynomial((2, 3)).coeffs == (1, 2, 2, 1)
    assert slice_polynomial((1, 1, 1)).coeffs == (1,)
    for m in range(2, 13):
        poly = slice_polynomial((m, m))
        assert poly.max_count == m
        assert poly.max_count == max(enumerate_counts((m, m)).values())


def test_slice_count_lookup():
    box = BoxSpec((2, 2))
    assert slice_count(box, 1) == 2
    assert slice_count(box, -1) == 0 and slice_count(box, 3) == 0
    shifted = BoxSpec((2, 3), (4, -1))
    oracle = enumerate_counts((2, 3), (4, -1))
    for k in range(-3, 10):
        assert slice_count(shifted, k) == oracle.get(k, 0)


@pytest.mark.parametrize("m, ones", [(2, 0), (5, 2), (9, 4)])
def test_tightness_box_max_is_m(m, ones):
    lengths = (m, m) + (1,) * ones
    counts = enumerate_counts(lengths, (1,) * len(lengths))
    top = max(counts.values())
    assert top == m
    # with z_i in [1, l_i] the maximum sits at m + n - 1
    n = len(lengths)
    assert counts[m + n - 1] == m


def test_bound_example():
    r = slice_bound_check(BoxSpec((2, 2)))
    assert r.lhs == 2
    assert r.rhs == pytest.approx(math.sqrt(2) * 4 / math.sqrt(6), abs=1e-15)
    assert round(r.rhs, 4) == 2.3094
    assert r.strict_pass


def test_tightness_sequence():
    ratios = [tightness_ratio(m) for m in (2, 10, 100, 1000)]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert ratios[0] == pytest.approx(2 * math.sqrt(6) / 4, abs=1e-15)
    assert ratios[-1] == pytest.approx(math.sqrt(2), abs=1e-5) and ratios[-1] < math.sqrt(2)
    assert tightness_ratio(10, ones=3) == ratios[1]


def test_errors():
    with pytest.raises(DegenerateBox):
        slice_bound_check(BoxSpec((1, 1)))
    with pytest.raises(CaseCondition):
        char_fn_bound_check(BoxSpec((2, 9)), 5)
    with pytest.raises(CapacityExceeded):
        slice_polynomial((1000, 1000), max_degree=100)
    with pytest.raises(BadParams):
        BoxSpec((0, 3))
    with pytest.raises(BadParams):
        BoxSpec((2, 3), (1,))
    with pytest.raises(BadParams):
        tightness_ratio(1)


def test_char_fn_examples():
    r = char_fn_bound_check(BoxSpec((3, 3)), 2)
    assert r.lhs == pytest.approx(3 / 9, abs=1e-15)
    # equal sides make Hoelder tight at the mode
    assert r.passed
    cube = char_fn_bound_check(BoxSpec((2, 2, 2)), 1)
    assert cube.details["exponents"] == (3.0, 3.0, 3.0)
    assert cube.passed and cube.details["product_below_chain"]
    mixed = char_fn_bound_check(BoxSpec((3, 4, 5, 2)), 5)
    assert mixed.strict_pass and mixed.details["product_below_chain"]


def test_big_counts_are_exact():
    poly = slice_polynomial((10,) * 25)
    assert poly.max_count > 2 ** 64
    assert poly.total == 10 ** 25
    assert poly.is_palindromic()


def test_plancherel():
    for box in [BoxSpec((2, 3)), BoxSpec((4, 4, 7)), BoxSpec((9, 2, 5, 3))]:
        assert plancherel_check(box).lhs < 1e-9
    # one side: sum of squares 1/n equals int kernel^2
    r = plancherel_check(BoxSpec((6,)))
    assert r.details["sum_squares"] == pytest.approx(1 / 6, abs=1e-16)


def test_random_boxes_reproducible():
    a = random_boxes(30, seed=3)
    assert a == random_boxes(30, seed=3)
    assert a != random_boxes(30, seed=4)
    assert all(b.volume <= 1_000_000 and max(b.lengths) >= 2 for b in a)


sides = st.lists(st.integers(1, 7), min_size=1, max_size=5)


@settings(max_examples=120, deadline=None)
@given(sides)
def test_against_enumeration(lengths):
    poly = slice_polynomial(lengths)
    brute = brute_force_counts(lengths)
    assert list(poly.coeffs) == brute.tolist()
    assert poly.total == math.prod(lengths)
    assert poly.is_palindromic()
    assert np.all(np.diff(brute[: len(brute) // 2 + 1]) >= 0)  # unimodal


@settings(max_examples=120, deadline=None)
@given(sides.filter(lambda ls: max(ls) >= 2))
def test_bound_is_strict(lengths):
    r = slice_bound_check(BoxSpec(tuple(lengths)))
    assert r.strict_pass
    top, vol, spread = r.details["max_count"], r.details["volume"], r.details["spread"]
    assert top * top * spread < 2 * vol * vol
