import math

import numpy as np
import pytest

from majorant.convex_order import convex_family_check, default_t_grid, majorization_verdict
from majorant.errors import BadParams, PreconditionMassMismatch
from majorant.measures import WeightedMeasure, measured, named_density
from majorant.numerics import Interval

HALF_LINE = WeightedMeasure("lebesgue", Interval(0.0, math.inf))


def normal(sigma):
    return measured(named_density("normal", 0.0, sigma))


def test_identical_pair_has_zero_margin():
    f = normal(1.0)
    v = majorization_verdict(f, f, "standard", np.linspace(0.02, 0.38, 10))
    assert v.passed and v.characterizations_agree
    assert abs(v.worst_margin) <= v.error_budget + 1e-12


def test_normals_are_ordered_by_scale():
    # the narrower density majorizes the wider one
    grid = np.linspace(0.01, 0.6, 25)
    v = majorization_verdict(normal(0.7), normal(1.3), "standard", grid)
    assert v.passed and v.characterizations_agree
    assert np.all(np.abs(v.gaps - v.tail_gaps) <= v.gap_errors + v.tail_errors + 1e-9)


def test_reversed_pair_fails():
    v = majorization_verdict(normal(1.3), normal(0.7), "standard", np.linspace(0.01, 0.6, 25))
    assert not v.passed
    assert v.worst_margin < -1e-3


def test_flat_against_peaked_rectangle_fails():
    flat = measured(named_density("indicator", 0.0, 1.0, 1.0), HALF_LINE)
    peaked = measured(named_density("indicator", 0.0, 0.5, 2.0), HALF_LINE)
    v = majorization_verdict(flat, peaked, "standard", [0.5, 1.0, 1.5])
    assert not v.passed
    # t = 1: int [1 - 1]^+ = 0 against (2 - 1) * 1/2
    assert v.worst_margin == pytest.approx(-0.5, abs=1e-9)
    assert majorization_verdict(peaked, flat, "standard", [0.5, 1.0, 1.5]).passed


def test_transitivity_spot_check():
    grid = np.linspace(0.01, 0.75, 20)
    f, g, h = normal(0.55), normal(0.9), normal(1.4)
    assert majorization_verdict(f, g, "standard", grid).passed
    assert majorization_verdict(g, h, "standard", grid).passed
    assert majorization_verdict(f, h, "standard", grid).passed


def test_space_measure_mismatch_is_rejected():
    a = measured(named_density("indicator", 0.0, 1.0, 1.0))
    b = measured(named_density("indicator", 0.0, 2.0, 0.5))
    with pytest.raises(PreconditionMassMismatch):
        majorization_verdict(a, b, "standard", [0.5])
    with pytest.raises(BadParams):
        majorization_verdict(a, a, "sideways", [0.5])


def test_default_grid_is_positive_and_below_sup():
    f, g = measured(named_density("gauss_pi")), measured(named_density("sinc2"))
    t = default_t_grid(f, g)
    assert np.all(t > 0) and np.all(np.diff(t) > 0) and t[-1] <= 1.0


def test_linear_family_vanishes():
    rep = convex_family_check(normal(0.7), normal(1.3), "linear")
    assert abs(rep.worst_margin) <= rep.error_budget + 1e-12


def test_ball_pair_power_family():
    f, g = measured(named_density("gauss_pi")), measured(named_density("sinc2"))
    rep = convex_family_check(f, g, "powers", params=(1.5, 2.0, 3.0, 6.0))
    assert rep.passed
    assert rep.worst_margin > rep.error_budget
    # x^2 member against closed forms: 1/sqrt2 vs 2/3
    row = [m for m in rep.members if m[0] == "x^2"][0]
    assert row[1] == pytest.approx(1 / math.sqrt(2) - 2 / 3, abs=1e-9)


def test_other_families_on_ball_pair():
    f, g = measured(named_density("gauss_pi")), measured(named_density("sinc2"))
    assert convex_family_check(f, g, "xlogx").passed
    assert convex_family_check(f, g, "hockey").passed
    with pytest.raises(BadParams):
        convex_family_check(f, g, "powers", params=(0.5,))
    with pytest.raises(BadParams):
        convex_family_check(f, g, "cosine")


def test_vanishing_mode_discrete_ball():
    f = measured(named_density("discrete_ball_f", 3))
    g = measured(named_density("discrete_ball_g", 3))
    rep = convex_family_check(f, g, "powers", "vanishing", params=(2.0, 3.0))
    assert rep.passed
