import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from majorant.errors import BadParams, DerivativeUndefined, MassMismatch
from majorant.measures import named_density
from majorant.transport1d import (build_transport, contraction_report, holder_chain, ma_residual,
                                  pushforward_check, tau_corollary)


@pytest.fixture(scope="module")
def ball():
    return build_transport(named_density("sinc2"), None, named_density("gauss_pi"), None)


@pytest.fixture(scope="module")
def op():
    return build_transport(named_density("bessel_kernel"), None, named_density("exp_quartersq"), None)


@pytest.fixture(scope="module")
def halving():
    # N(0, 1/4) -> N(0, 1): T(x) = 2x
    return build_transport(named_density("normal", 0.0, 0.5), None, named_density("normal"), None)


def test_identity_map():
    t = build_transport(named_density("gauss_pi"), None, named_density("gauss_pi"), None)
    xs = np.linspace(-3, 3, 61)
    assert np.allclose(t.eval(xs), xs, atol=1e-10)
    assert np.allclose(t.deriv(xs), 1.0, atol=1e-12)
    assert abs(ma_residual(t, 0.7)) < 1e-9


def test_gaussian_scaling_map(halving):
    xs = np.linspace(-2.5, 2.5, 51)
    assert np.allclose(halving.eval(xs), 2 * xs, atol=1e-9)
    rep = contraction_report(halving, "Tprime_le_1", (-2.0, 2.0))
    assert not rep.passed
    assert rep.sup_observed == pytest.approx(2.0, abs=1e-9)


def test_ball_map_is_odd_monotone_contraction(ball):
    assert ball.odd
    assert ball.eval(0.0) == 0.0
    xs = np.linspace(-6, 6, 2001)
    ts = ball.eval(xs)
    assert np.all(np.diff(ts) >= 0)
    assert np.allclose(ball.eval(-xs), -ts, atol=0)
    rep = contraction_report(ball, "Tprime_le_1", (0.0, 6.0))
    assert rep.passed and rep.sup_observed <= 1 + 1e-9


def test_ball_map_value_against_quantile_oracle(ball):
    # T(x) solves int_0^T e^{-pi y^2} dy = int_0^x sinc^2
    x = 0.8
    src = special.sici(2 * math.pi * x)[0] / math.pi - np.sinc(x) ** 2 * x
    ref = special.erfinv(2 * src) / math.sqrt(math.pi)
    assert ball.eval(x) == pytest.approx(ref, abs=1e-11)


def test_kernel_zeros_have_zero_slope(ball):
    assert np.all(ball.deriv(np.array([1.0, 2.0, 3.0])) == 0.0)


def test_op_map(op):
    rep = contraction_report(op, "TTprime_le_x", (0.0, 30.0))
    assert rep.passed
    assert abs(ma_residual(op, 1.0)) < 1e-6


def test_factor_bounds(ball, halving):
    rep = contraction_report(ball, "factor_bounds", (0.05, 0.95))
    tp = contraction_report(ball, "Tprime_le_1", (0.05, 0.95))
    assert rep.inf_observed == pytest.approx(1 / tp.sup_observed, rel=1e-9)
    assert rep.passed == tp.passed
    bad = contraction_report(halving, "factor_bounds", (-2.0, 2.0))
    assert not bad.passed and bad.inf_observed == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(BadParams):
        contraction_report(ball, "Tprime_le_2")


@pytest.mark.parametrize("x", [0.3, 0.55, 1.3, 2.7, 4.4])
def test_ma_residual_ball(ball, x):
    assert abs(ma_residual(ball, x)) < 1e-6


def test_ma_residual_needs_target_mass():
    t = build_transport(named_density("gauss_pi"), None, named_density("gauss_pi"), None)
    with pytest.raises(DerivativeUndefined):
        ma_residual(t, 40.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 5.9))
def test_round_trip_away_from_kernel_zeros(x):
    t = build_transport(named_density("sinc2"), None, named_density("gauss_pi"), None)
    if abs(x - round(x)) < 0.05 and round(x) != 0:
        return
    back = t.inverse().eval(t.eval(x))
    assert back == pytest.approx(x, abs=1e-8)


def test_discrete_ball_round_trip():
    n = 5
    t = build_transport(named_density("discrete_ball_g", n), None,
                        named_density("discrete_ball_f", n), None)
    xs = np.array([0.03, 0.11, 0.27, 0.33, 0.46])
    xs = xs[np.min(np.abs(xs[:, None] - np.arange(1, n) / n), axis=1) > 0.05]
    assert np.allclose(t.inverse().eval(t.eval(xs)), xs, atol=1e-8)


def test_pushforward(ball, op):
    rep = pushforward_check(ball)
    rows = {r[0]: r for r in rep.rows}
    assert rows["1"][3] < 1e-9
    assert rows["x^2"][3] < 1e-7
    assert rep.max_discrepancy <= max(rep.error_budget, 1e-7)
    assert pushforward_check(op).max_discrepancy < 1e-7


def test_holder_chain(ball):
    rep = holder_chain(ball, 2.0)
    assert rep.passed and rep.margin > 0
    # both sides of the pushforward identity agree on the window
    assert rep.lhs == pytest.approx(rep.details["pushforward_side"], abs=1e-9)
    # the window covers all but the far tail of int f^2 = 1/sqrt2
    assert 0 < 1 / math.sqrt(2) - rep.lhs < 1e-3


def test_mass_mismatch():
    with pytest.raises(MassMismatch):
        build_transport(named_density("gauss_pi"), None, named_density("discrete_ball_f", 3), None)


@pytest.mark.parametrize("s", [2.0, 3.0])
def test_tau_corollary(s):
    t = build_transport(named_density("discrete_ball_g", 3), None,
                        named_density("discrete_ball_f", 3), None)
    rep = tau_corollary(t, s)
    assert rep.passed
    assert 0 < rep.details["tau"] <= 1 + 1e-9


def test_tau_corollary_rejects_weighted(op):
    with pytest.raises(BadParams):
        tau_corollary(op, 2.0)
