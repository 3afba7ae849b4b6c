import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate, stats

from majorant.entropy import (DEFAULT_Q_GRID, EXPANDING_MAPS, entropy, entropy_report,
                              gaussian_dominance_check, inflation_check, midpoint_convexity, psi,
                              slc_registry)
from majorant.errors import (BadParams, FamilyViolation, NonIntegrablePower,
                             NotAProbabilityDensity)
from majorant.measures import named_density

INF = math.inf


def gaussian_renyi(q, sigma=1.0):
    base = 0.5 * math.log(2 * math.pi) + math.log(sigma)
    if q == 1:
        return base + 0.5
    if q == INF:
        return base
    return base + math.log(q) / (2 * (q - 1))


def test_uniform_is_zero():
    u = named_density("indicator", 0.0, 1.0, 1.0)
    for q in (0.0, 0.5, 1.0, 2.0, 5.0, INF):
        assert entropy(u, q) == pytest.approx(0.0, abs=1e-12)


def test_standard_normal_closed_forms():
    g = named_density("normal")
    assert entropy(g, 1.0) == pytest.approx(0.5 * math.log(2 * math.pi * math.e), abs=1e-12)
    assert entropy(g, 1.0) == pytest.approx(stats.norm.entropy(), abs=1e-12)
    assert entropy(g, 2.0) == pytest.approx(math.log(2 * math.sqrt(math.pi)), abs=1e-12)
    assert round(entropy(g, 2.0), 5) == 1.26551


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([0.5, 1.0, 2.0, 3.0, 5.0, INF]), st.floats(0.3, 3.0))
def test_normal_renyi_against_closed_form(q, sigma):
    d = named_density("normal", 0.7, sigma)
    assert entropy(d, q) == pytest.approx(gaussian_renyi(q, sigma), abs=1e-10)


@pytest.mark.parametrize("q", [0.5, 2.0, 4.0])
def test_exponential_renyi(q):
    a = 1.7
    assert entropy(named_density("exponential", a), q) == pytest.approx(
        -math.log(a) + math.log(q) / (q - 1), abs=1e-10)


def test_renyi_against_scipy_quadrature():
    d = named_density("huber", 1.0, 1.0)
    for q in (0.5, 2.0):
        mass_q, _ = sp_integrate.quad(lambda x: float(d.func(np.array([x]))[0]) ** q,
                                      -np.inf, np.inf, epsabs=1e-13)
        assert entropy(d, q) == pytest.approx(math.log(mass_q) / (1 - q), abs=1e-9)


def test_psi_link_and_tsallis():
    d = named_density("slc", 0.0, 0.0, 1.0)
    for q in DEFAULT_Q_GRID:
        rep = entropy_report(d, q)
        assert abs(rep.tsallis - psi(q, rep.renyi)) < 1e-9
        assert rep.psi_consistency < 1e-9
    assert entropy(named_density("normal"), 2.0, kind="tsallis") == pytest.approx(
        1 - 1 / (2 * math.sqrt(math.pi)), abs=1e-12)
    with pytest.raises(BadParams):
        entropy(d, 2.0, kind="shannon")


def test_psi_conventions():
    assert psi(1.0, 0.7) == 0.7
    assert psi(2.0, 0.0) == 0.0
    assert psi(INF, 0.3) == 0.0
    assert psi(0.5, 1.0) == pytest.approx(2 * (math.exp(0.5) - 1), abs=1e-15)


@pytest.mark.parametrize("name, args", [("normal", ()), ("slc", (0.25, 0.0, 0.5)),
                                        ("huber", (1.0, 1.0))])
def test_continuity_at_one(name, args):
    d = named_density(name, *args)
    h1 = entropy(d, 1.0)
    gaps = [abs(entropy(d, 1 + e) - h1) + abs(entropy(d, 1 - e) - h1) for e in (1e-2, 1e-3, 1e-4)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-4


def test_sigma_gap():
    g, f = named_density("normal"), named_density("normal", 0.0, 0.8)
    for q in DEFAULT_Q_GRID:
        assert entropy(f, q) - entropy(g, q) == pytest.approx(math.log(0.8), abs=1e-9)


def test_errors():
    with pytest.raises(NotAProbabilityDensity):
        entropy(named_density("indicator", 0.0, 1.0, 2.0), 2.0)
    # |sinc| is not integrable
    with pytest.raises(NonIntegrablePower):
        entropy(named_density("sinc2"), 0.5)
    with pytest.raises(FamilyViolation):
        gaussian_dominance_check(named_density("normal", 0.0, 1.5), majorize=False)


def test_midpoint_convexity():
    assert midpoint_convexity(lambda x: x * x + np.abs(x)) <= 1e-10
    assert midpoint_convexity(lambda x: -np.abs(x)) > 0.1


def test_dominance_self_is_equality():
    rep = gaussian_dominance_check(named_density("normal"), majorize=False)
    assert rep.entropy_passed
    for e in rep.entries:
        assert abs(e.renyi_margin) <= 1e-10


def test_dominance_with_certificates():
    # f proportional to exp(-x^2/2 - |x|)
    d = named_density("slc", 0.0, 0.0, 1.0)
    rep = gaussian_dominance_check(d, (0.5, 1.0, 2.0, 5.0), transport=True)
    assert rep.passed and rep.entropy_passed
    assert rep.majorization.passed
    assert rep.contraction.passed and rep.transport_agrees
    assert all(e.renyi_margin > 0 for e in rep.entries)


def test_registry_centred_and_uncentred():
    reg = dict(slc_registry())
    means = {name: gaussian_dominance_check(d, (2.0,), majorize=False).mean for name, d in reg.items()}
    assert any(abs(m) < 1e-12 for m in means.values())
    assert any(abs(m) > 0.1 for m in means.values())
    for name in ("shifted_linear", "shifted_kink", "shifted_gaussian"):
        assert gaussian_dominance_check(reg[name], DEFAULT_Q_GRID, majorize=False).entropy_passed


@pytest.mark.parametrize("map_name, param", [("linear", 1.5), ("cubic", 0.3), ("sinh", 0.5)])
@pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
def test_inflation(map_name, param, q):
    assert map_name in EXPANDING_MAPS
    rep = inflation_check(named_density("normal"), map_name, param, q)
    assert rep.passed and rep.margin >= -rep.error_budget
    if map_name == "linear":
        assert rep.h_image - rep.h_source == pytest.approx(math.log(param), abs=1e-10)
