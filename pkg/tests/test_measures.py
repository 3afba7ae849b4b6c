import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate, special

from majorant.errors import BadParams, UnknownDensity
from majorant.measures import (LINEAR, Cumulative, discrete_ball_A, distribution_function,
                               hockey_stick_gap, hockey_stick_integral, level_set, measured,
                               named_density, np_phi, power_integral, registered_densities,
                               single_crossing)


def mass(d):
    return hockey_stick_integral(measured(d), 0.0, 1e-12)


@pytest.mark.parametrize("name, args, expected", [
    ("gauss_pi", (), 1.0),
    ("sinc2", (), 1.0),
    ("bessel_kernel", (), 2.0),
    ("exp_quartersq", (), 2.0),
    ("discrete_ball_g", (2,), 0.25),
    ("discrete_ball_f", (2,), 0.25),
    ("discrete_ball_g", (7,), 1 / 14),
    ("discrete_ball_f", (7,), 1 / 14),
    ("normal", (0.5, 0.8), 1.0),
    ("exponential", (2.5,), 1.0),
    ("indicator", (0.0, 2.0, 0.5), 1.0),
    ("slc", (0.25, 0.0, 0.5), 1.0),
    ("huber", (1.0, 1.0), 1.0),
])
def test_masses(name, args, expected):
    r = mass(named_density(name, *args))
    assert abs(r.value - expected) <= max(1e-9, r.error_bound)


def test_linear_measure_is_default_for_radial_pair():
    assert measured(named_density("bessel_kernel")).measure.weight == LINEAR.weight


def test_registry_and_errors():
    assert "gauss_pi" in registered_densities()
    with pytest.raises(UnknownDensity):
        named_density("cauchy")
    with pytest.raises(BadParams):
        named_density("normal", 0.0, -1.0)
    with pytest.raises(BadParams):
        named_density("indicator", 1.0, 0.0)


def test_discrete_ball_truncation_point():
    A = discrete_ball_A(2)
    assert A == pytest.approx(special.erfinv(math.sqrt(3) / 2) / math.sqrt(3 * math.pi), abs=1e-14)
    # defining property: int_0^A exp(-3 pi x^2) dx = 1/4
    k = math.sqrt(3 * math.pi)
    assert math.erf(k * A) * math.sqrt(math.pi) / (2 * k) == pytest.approx(0.25, abs=1e-15)
    assert abs(A - 0.345174205179586) < 1e-14


def test_indicator_distribution_function():
    G = distribution_function(named_density("indicator", 0.0, 1.0, 1.0))
    assert np.allclose(G(np.array([0.0, 0.3, 0.999])), 1.0)
    assert G(1.0) == 0.0 and G(2.0) == 0.0


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-8, 0.999))
def test_gaussian_level_set_measure(lam):
    G = distribution_function(named_density("gauss_pi"))
    assert G(lam) == pytest.approx(2 * math.sqrt(math.log(1 / lam) / math.pi), rel=1e-10, abs=1e-12)


def test_above_sup_is_empty():
    for name, args in (("gauss_pi", ()), ("sinc2", ()), ("discrete_ball_g", (3,))):
        d = named_density(name, *args)
        assert distribution_function(d)(d.sup) == 0.0
        lo, hi = level_set(measured(d), d.sup)
        assert len(lo) == 0 and len(hi) == 0


def test_sinc2_level_set_against_brute_force():
    md = measured(named_density("sinc2"))
    lam = 0.02
    x = np.linspace(-20, 20, 4_000_001)
    brute = np.count_nonzero(np.sinc(x) ** 2 > lam) * (x[1] - x[0])
    assert distribution_function(md.density)(lam) == pytest.approx(brute, abs=2e-5)


def test_hockey_stick_examples():
    f = measured(named_density("indicator", 0.0, 1.0, 2.0))
    g = measured(named_density("indicator", 0.0, 2.0, 1.0))
    assert hockey_stick_gap(f, g, 1.0).value == pytest.approx(1.0, abs=1e-12)
    gp, s2 = measured(named_density("gauss_pi")), measured(named_density("sinc2"))
    zero = hockey_stick_gap(gp, s2, 0.0, 1e-10)
    assert abs(zero.value) <= zero.error_bound + 1e-10
    half = hockey_stick_gap(gp, s2, 0.5, 1e-10)
    assert half.value >= -half.error_bound


def test_hockey_stick_normal_closed_form():
    # int [phi - t]^+ for N(mu, sigma): level set symmetric about mu
    mu, sigma, t = 0.5, 0.8, 0.2
    md = measured(named_density("normal", mu, sigma))
    peak = 1 / (sigma * math.sqrt(2 * math.pi))
    h = sigma * math.sqrt(2 * math.log(peak / t))
    ref = math.erf(h / (sigma * math.sqrt(2))) - 2 * h * t
    assert hockey_stick_integral(md, t, 1e-12).value == pytest.approx(ref, abs=1e-11)


def test_layer_cake():
    d = named_density("sinc2")
    G = distribution_function(d)
    s = 2.0
    ref, _ = sp_integrate.quad(lambda l: s * l ** (s - 1) * G(l), 0, 1, limit=400, epsabs=1e-12)
    assert power_integral(measured(d), s, 1e-12).value == pytest.approx(2 / 3, abs=1e-11)
    assert ref == pytest.approx(2 / 3, abs=1e-8)


def test_cumulative_quantiles_round_trip():
    c = Cumulative(measured(named_density("huber", 1.0, 1.0)))
    xs = np.array([-6.0, -1.0, 0.0])
    assert np.allclose(c.q_lower(c.lower(xs)), xs, atol=1e-9)
    # right tail through the upper mass; lower(7.5) rounds to 1
    xs = np.array([0.4, 3.0, 7.5])
    assert np.allclose(c.q_upper(c.upper(xs)), xs, atol=1e-9)
    xs = np.array([-6.0, -1.0, 0.0, 0.4, 3.0, 7.5])
    assert np.allclose(c.lower(xs) + c.upper(xs), 1.0, atol=1e-12)


def test_single_crossing_ball_pair():
    F = distribution_function(named_density("gauss_pi"))
    G = distribution_function(named_density("sinc2"))
    grid = np.geomspace(1e-4, 0.999, 300)
    rep = single_crossing(F, G, grid)
    assert rep.single and 0 < rep.crossing < 1
    assert single_crossing(G, F, grid).status == "wrong_direction"
    assert single_crossing(F, F, grid).status == "identical"


def test_single_crossing_synthetic_steps():
    grid = np.linspace(0.05, 1.0, 20)
    G = lambda l: np.zeros_like(np.asarray(l, float))
    two = lambda l: np.where(np.asarray(l) < 0.3, -1.0, np.where(np.asarray(l) < 0.6, 1.0, -1.0))
    assert single_crossing(two, G, grid).status == "multiple"
    pos = lambda l: np.ones_like(np.asarray(l, float))
    assert single_crossing(pos, G, grid).status == "no_crossing"
    with pytest.raises(BadParams):
        single_crossing(pos, G, grid[::-1])


def test_np_phi_closed_form():
    f, g = measured(named_density("gauss_pi")), measured(named_density("sinc2"))
    lam = 0.4
    r = np_phi(f, g, lam, 2.0)
    assert r.value == pytest.approx((1 / math.sqrt(2) - 2 / 3) / (2 * lam ** 2), abs=1e-10)
    assert abs(np_phi(f, g, lam, 1.0).value) <= 1e-9
    with pytest.raises(BadParams):
        np_phi(f, g, 0.0, 2.0)
