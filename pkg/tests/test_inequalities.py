import math

import mpmath
import numpy as np
import pytest
from scipy import integrate as sp_integrate, special

from majorant.errors import ParamOutOfDomain, UnknownLemma
from majorant.inequalities import (Y_STAR, ball_check, ball_limit_check, discrete_ball_check,
                                   discrete_ball_context, james_constants, lemma_final_aux,
                                   named_lemma_check, op_bessel_check, op_cumulative_check,
                                   registered_lemmas, theta_optimum)


def test_ball_equality_and_s2():
    eq = ball_check(1.0)
    assert abs(eq.margin) <= max(eq.error_budget, 1e-9)
    r = ball_check(2.0)
    assert r.lhs == pytest.approx(2 / 3, abs=1e-10)
    assert r.rhs == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert r.strict_pass


def test_ball_lhs_against_mpmath():
    with mpmath.workdps(30):
        ref = 2 * mpmath.quad(lambda x: (mpmath.sin(mpmath.pi * x) / (mpmath.pi * x)) ** 6,
                              [0] + list(range(1, 60)) + [mpmath.inf])
    r = ball_check(3.0)
    # g = sinc^2, so s = 3 is int sinc^6 = 11/20
    assert r.lhs == pytest.approx(float(ref), abs=1e-10)
    assert r.lhs == pytest.approx(0.55, abs=1e-10)
    assert r.rhs == pytest.approx(1 / math.sqrt(3), abs=1e-15)


def test_op_bessel():
    one = op_bessel_check(1.0)
    assert one.lhs == pytest.approx(2.0, abs=1e-9) and one.rhs == 2.0
    two = op_bessel_check(2.0)
    assert two.rhs == 1.0 and two.strict_pass
    ref, _ = sp_integrate.quad(lambda x: (2 * special.j1(x) / x) ** 4 * x, 0, 200, limit=2000)
    assert two.lhs == pytest.approx(ref, abs=1e-7)


@pytest.mark.parametrize("x", [1.0, 5.0, 10.0, 20.0])
def test_op_cumulative_identity(x):
    r = op_cumulative_check(x)
    assert r.lhs <= 1e-8


def test_discrete_ball_spot_values():
    r = discrete_ball_check(2, 2.0)
    assert r.lhs == pytest.approx(0.5, abs=1e-12)
    assert r.rhs == pytest.approx(0.57735, abs=5e-6) and r.strict_pass
    r3 = discrete_ball_check(3, 2.0)
    assert r3.lhs == pytest.approx(1 / 3, abs=1e-12)
    assert r3.rhs == pytest.approx(math.sqrt(2 / 16), abs=1e-15) and r3.strict_pass
    assert discrete_ball_check(4, 6.0).strict_pass


def test_discrete_ball_against_scipy():
    n, p = 5, 3.5
    f = lambda x: abs(math.sin(n * math.pi * x) / (n * math.sin(math.pi * x))) ** p if x else 1.0
    ref, _ = sp_integrate.quad(f, -0.5, 0.5, points=[k / n for k in range(-2, 3)], epsabs=1e-13)
    assert discrete_ball_check(n, p).lhs == pytest.approx(ref, abs=1e-11)


def test_discrete_ball_monotone_in_p():
    for n in (2, 5, 11):
        lhs = [discrete_ball_check(n, p).lhs for p in np.arange(2.0, 12.0, 0.5)]
        assert all(b <= a + 1e-14 for a, b in zip(lhs, lhs[1:]))


@pytest.mark.parametrize("n", [2, 3, 8, 40])
def test_discrete_ball_context(n):
    ctx = discrete_ball_context(n)
    assert ctx.g_mass == pytest.approx(1 / (2 * n), abs=1e-12)
    assert ctx.f_mass == pytest.approx(1 / (2 * n), abs=1e-12)
    k = math.sqrt(math.pi * (n * n - 1))
    assert math.erf(k * ctx.A) * math.sqrt(math.pi) / (2 * k) == pytest.approx(1 / (2 * n), abs=1e-15)
    # the full Gaussian half-mass exceeds 1/(2n), so A is finite
    assert 1 / (2 * math.sqrt(n * n - 1)) > 1 / (2 * n)


@pytest.mark.parametrize("n", [8, 16, 32])
def test_ball_limit(n):
    assert ball_limit_check(n, 3.0).passed


def test_lemma_final_near_equality():
    aux = lemma_final_aux(Y_STAR)
    assert Y_STAR == 4.6244
    assert float(f"{aux['H_prime']:.2g}") == 0.0014
    assert float(f"{aux['G']:.2g}") == -0.0015
    assert named_lemma_check("lemma_final", Y_STAR).passed


def test_james_constants():
    c4 = james_constants(4)
    assert c4["x0"] == pytest.approx(math.acos(-2 / 3) / (2 * math.pi), abs=1e-15)
    assert c4["g_star"] == pytest.approx(2 / 27, abs=1e-15)
    assert c4["chain"] < 0.028 < c4["bound"] == 1 / 32
    c5 = james_constants(5)
    assert c5["g_star"] == pytest.approx(1 / 16, abs=1e-15)
    assert round(c5["chain"], 3) == 0.019 and c5["bound"] == 0.02
    # n = 3 chain against 1/18, printed as 0.055
    c3 = james_constants(3)
    assert c3["chain"] < 0.046 < 0.055 < 1 / 18


def test_lemma_james_window():
    for n in (4, 5, 9):
        lo = max(0.5 - 1 / n, 1 / n + 1e-9)
        for x in np.linspace(lo, 0.5, 9):
            assert named_lemma_check("lemma_james", n, float(x)).passed
    with pytest.raises(ParamOutOfDomain):
        named_lemma_check("lemma_james", 4, 0.1)


def test_theta_optima():
    t6, v6 = theta_optimum(6)
    t5, v5 = theta_optimum(5)
    assert abs(t6 - 0.295) < 0.003 and abs(t5 - 0.299) < 0.003
    # 9 min(...) at theta = 0.295 is about 9 * 1.56; n = 5 reaches 13.25
    assert named_lemma_check("theta_bound", 6, 0.295).rhs == pytest.approx(9 * 1.56, rel=0.01)
    assert named_lemma_check("theta_bound", 6, 0.295).passed and v6 >= 14
    assert named_lemma_check("theta_bound", 5, 0.299).rhs == pytest.approx(13.25, rel=0.01)
    assert v5 >= 13.25
    assert named_lemma_check("inv_g_lower", 5).passed
    for n in (6, 7, 12, 64):
        assert named_lemma_check("inv_g_lower", n).passed


@pytest.mark.parametrize("name", ["5.67", "27.9", "discriminant", "n6_chain", "n3_chain",
                                  "half_n2_vs_sqrt"])
def test_proof_constants(name):
    assert named_lemma_check("proof_constant", name).passed


def test_misc_lemmas():
    assert abs(named_lemma_check("sinus_monotone", 0.7, 0.7).margin) <= 1e-15
    assert named_lemma_check("sinus_monotone", 0.5, 1.2).passed
    assert named_lemma_check("kernel_gauss_dom", 5, 0.13).passed
    assert named_lemma_check("forJames", 0.6).passed
    assert named_lemma_check("forJames", 2.4).passed
    assert named_lemma_check("forJames_claim", 25.0).passed
    assert named_lemma_check("pain", 7, 0.2).passed
    assert named_lemma_check("g_star", 4, 2 / 27).passed
    assert named_lemma_check("kk_refined", 2.0).passed
    assert named_lemma_check("erfc_engineering", 1.0).strict_pass
    assert named_lemma_check("erfc_series", 3.0).strict_pass


def test_registry_errors():
    assert "lemma_final" in registered_lemmas()
    with pytest.raises(UnknownLemma):
        named_lemma_check("no_such_lemma", 1.0)
    with pytest.raises(ParamOutOfDomain):
        named_lemma_check("lemma_final", 1.0)
    with pytest.raises(ParamOutOfDomain):
        discrete_ball_check(1, 2.0)
    with pytest.raises(ParamOutOfDomain):
        discrete_ball_check(3, 1.5)
