"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test registers a pass/fail line that the terminal summary prints.
Passing means the margins clear their error budgets on fixed grids; it is a
numerical certificate, not a proof.
"""
import math
import time

import numpy as np

from majorant.convex_order import majorization_verdict
from majorant.entropy import DEFAULT_Q_GRID, entropy, gaussian_dominance_check, slc_registry
from majorant.inequalities import (ball_check, discrete_ball_check, james_constants,
                                   lemma_final_aux, named_lemma_check, op_bessel_check,
                                   op_cumulative_check, Y_STAR)
from majorant.lattice_slicing import (brute_force_counts, plancherel_check, random_boxes,
                                      slice_bound_check, slice_polynomial, tightness_ratio)
from majorant.measures import (WeightedMeasure, distribution_function, measured, named_density,
                               np_phi, single_crossing)
from majorant.transport1d import (build_transport, contraction_report, ma_residual,
                                  pushforward_check)
from majorant.numerics import Interval


# ---------------------------------------------------------------- 1

def test_discrete_ball_sweep(criterion):
    t0 = time.perf_counter()
    ps = np.arange(2.0, 64.0 + 0.25, 0.5)
    worst = (math.inf, None)
    failures = []
    for n in range(2, 65):
        for p in ps:
            r = discrete_ball_check(n, float(p))
            if not r.margin > r.error_budget:
                failures.append((n, p))
            slack = r.margin - r.error_budget
            if slack < worst[0]:
                worst = (slack, (n, float(p)))
    elapsed = time.perf_counter() - t0
    spot = discrete_ball_check(2, 2.0)
    spot_ok = abs(spot.lhs - 0.5) <= 1e-9 and abs(spot.rhs - 1 / math.sqrt(3)) <= 1e-9 \
        and abs(spot.rhs - 0.57735) <= 5e-6
    ok = not failures and elapsed < 300 and spot_ok
    criterion("1", "discrete Ball, n in 2..64, p in 2..64 step 1/2, strict; spot n=2 p=2",
              ok, f"{len(ps) * 63} checks in {elapsed:.1f}s, worst slack {worst[0]:.3g} at {worst[1]}")
    assert not failures
    assert elapsed < 300
    assert spot_ok


# ---------------------------------------------------------------- 2

def test_ball_inequality(criterion):
    strict = [ball_check(s) for s in (1.1, 1.5, 2.0, 3.0, 6.0, 10.0)]
    eq = ball_check(1.0)
    two = ball_check(2.0)
    ok = all(r.strict_pass for r in strict) and abs(eq.margin) <= 1e-9 \
        and abs(two.lhs - 2.0 / 3.0) <= 1e-9
    criterion("2", "Ball: strict for s in {1.1,...,10}, equality at s=1, lhs(2)=2/3",
              ok, f"s=1 margin {eq.margin:.2e}, s=2 lhs-2/3 {two.lhs - 2 / 3:.2e}")
    assert ok


# ---------------------------------------------------------------- 3

def test_op_m2(criterion):
    cum = [op_cumulative_check(x) for x in (1.0, 5.0, 10.0, 20.0)]
    cum_ok = all(r.lhs <= 1e-8 for r in cum)
    bes = [op_bessel_check(s) for s in (1.0, 1.5, 2.0, 4.0)]
    bes_ok = all(r.passed for r in bes) and all(r.strict_pass for r in bes[1:])
    t = build_transport(named_density("bessel_kernel"), None, named_density("exp_quartersq"), None)
    grid = np.linspace(30.0 / 4096, 30.0, 4096)
    rep = contraction_report(t, "TTprime_le_x", grid, refine_rounds=0)
    ok = cum_ok and bes_ok and rep.passed and rep.grid_size == 4096
    criterion("3", "OP m=2: cumulative identity to 1e-8, int g^s x dx <= 2/s, T T' <= x on (0,30]",
              ok, f"max cumulative residual {max(r.lhs for r in cum):.2e}, sup T T'/x {rep.sup_observed:.12f}")
    assert ok


# ---------------------------------------------------------------- 4

def _transport_ok(t, grid, xs):
    c = contraction_report(t, "Tprime_le_1", grid)
    res = max(abs(ma_residual(t, x)) for x in xs)
    push = pushforward_check(t)
    disc = max(row[3] for row in push.rows if row[0] in ("1", "x", "x^2"))
    return c.sup_observed <= 1 + 1e-9, res, disc


def test_transport_contraction(criterion):
    ball = build_transport(named_density("sinc2"), None, named_density("gauss_pi"), None)
    # Monge-Ampere residuals are sampled away from the kernel zeros
    rows = [("ball",) + _transport_ok(ball, (0.0, 6.0), (0.3, 1.7, 2.5, 4.2))]
    for n in range(2, 17):
        t = build_transport(named_density("discrete_ball_g", n), None,
                            named_density("discrete_ball_f", n), None)
        rows.append((f"n={n}",) + _transport_ok(t, None, tuple(0.5 * (k + 0.37) / n for k in range(n))))
    ok = all(c and r < 1e-6 and d < 1e-7 for _, c, r, d in rows)
    criterion("4", "transport: T' <= 1 + 1e-9 (Ball, discrete n<=16), MA residual < 1e-6, "
              "pushforward < 1e-7", ok,
              f"max residual {max(r for _, _, r, _ in rows):.2e}, max pushforward {max(d for *_, d in rows):.2e}")
    assert ok


# ---------------------------------------------------------------- 5

def test_auxiliary_lemmas(criterion):
    xs = np.linspace(0.5, 10.0, 2048)
    eng = all(named_lemma_check("erfc_engineering", float(x)).strict_pass for x in xs)
    ser = all(named_lemma_check("erfc_series", float(x)).strict_pass for x in xs)
    ys = np.linspace(math.pi, 100.0, 4096)
    fin = all(named_lemma_check("lemma_final", float(y)).strict_pass for y in ys)
    aux = lemma_final_aux(Y_STAR)
    two_sig = lambda v, ref: float(f"{v:.2g}") == ref
    aux_ok = two_sig(aux["H_prime"], 0.0014) and two_sig(aux["G"], -0.0015)
    c4, c5 = james_constants(4), james_constants(5)
    james_ok = (abs(c4["g_star"] - 2.0 / 27.0) < 1e-14 and c4["chain"] < 0.028
                and c4["bound"] == 1.0 / 32.0 and abs(c5["g_star"] - 1.0 / 16.0) < 1e-14
                and round(c5["chain"], 3) == 0.019 and c5["bound"] == 0.02)
    ok = eng and ser and fin and aux_ok and james_ok
    criterion("5", "erfc bounds on [0.5,10], lemma_final on [pi,100], H'(y*) and G(y*), "
              "per-n constants", ok,
              f"H'={aux['H_prime']:.5f} G={aux['G']:.5f} n4 chain {c4['chain']:.5f} "
              f"n5 chain {c5['chain']:.5f}")
    assert ok


# ---------------------------------------------------------------- 6

def test_lattice_slicing(criterion):
    boxes = random_boxes(500, seed=2024, max_dims=6, max_side=9)
    exact = bound = 0
    for box in boxes:
        poly = slice_polynomial(box)
        brute = brute_force_counts(box)
        exact += list(brute) == list(poly.coeffs)
        bound += slice_bound_check(box).strict_pass
    ms = list(range(2, 2001))
    ratios = [tightness_ratio(m) for m in ms]
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    near = ratios[-1] >= 0.999 * math.sqrt(2.0)
    planch = max(plancherel_check(b).lhs for b in boxes[:25])
    ok = exact == 500 and bound == 500 and increasing and near and planch < 1e-9
    criterion("6", "lattice: exact counts vs enumeration, strict sqrt(2) bound, tightness, "
              "Plancherel", ok,
              f"{exact}/500 exact, {bound}/500 strict, ratio(2000)={ratios[-1]:.8f}, "
              f"Plancherel residual {planch:.1e}")
    assert ok


# ---------------------------------------------------------------- 7

def _random_pairs(seed: int):
    rng = np.random.default_rng(seed)
    s1, s2 = sorted(rng.uniform(0.4, 2.5, 2))
    r1, r2 = sorted(rng.uniform(0.5, 3.0, 2))
    w1, w2 = sorted(rng.uniform(0.3, 3.0, 2))
    return [
        (named_density("normal", 0.0, s1), named_density("normal", 0.0, s2)),
        (named_density("exponential", r2), named_density("exponential", r1)),
        (named_density("indicator", 0.0, w1, 1.0 / w1), named_density("indicator", 0.0, w2, 1.0 / w2)),
    ]


def test_majorization_certificates(criterion):
    pairs = [(named_density("gauss_pi"), named_density("sinc2"), "standard"),
             (named_density("exp_quartersq"), named_density("bessel_kernel"), "standard"),
             (named_density("discrete_ball_f", 3), named_density("discrete_ball_g", 3), "vanishing")]
    agree = True
    for f, g, mode in pairs:
        v = majorization_verdict(measured(f), measured(g), mode)
        agree &= v.characterizations_agree and v.passed
    crossing_ok = True
    for f, g in _random_pairs(11):
        cr = single_crossing(distribution_function(f), distribution_function(g),
                             np.geomspace(1e-4 * f.sup, 0.999 * f.sup, 200))
        space = WeightedMeasure("lebesgue", Interval(min(f.support.lo, g.support.lo), math.inf))
        v = majorization_verdict(measured(f, space), measured(g, space), "standard")
        crossing_ok &= cr.crossing is not None and v.passed and v.characterizations_agree
    fm, gm = measured(named_density("gauss_pi")), measured(named_density("sinc2"))
    cr = single_crossing(distribution_function(fm.density), distribution_function(gm.density),
                         np.geomspace(1e-4, 0.999, 200))
    ss = (1.0, 1.5, 2.0, 3.0, 6.0)
    phis = [np_phi(fm, gm, cr.crossing, s) for s in ss]
    mono = all(b.value - a.value >= -(a.error_bound + b.error_bound) for a, b in zip(phis, phis[1:]))
    ok = agree and crossing_ok and mono
    criterion("7", "majorization: characterizations agree, single-crossing pairs certified, "
              "NP phi nondecreasing", ok, f"phi = {[round(p.value, 6) + 0.0 for p in phis]}")
    assert ok


# ---------------------------------------------------------------- 8

def test_entropy_dominance(criterion):
    bad = []
    worst_psi = 0.0
    for label, d in slc_registry():
        rep = gaussian_dominance_check(d, DEFAULT_Q_GRID, majorize=False)
        worst_psi = max(worst_psi, max(e.psi_residual for e in rep.entries))
        bad += [(label, e.q) for e in rep.entries if not e.passed or e.psi_residual >= 1e-9]
    g, f = named_density("normal"), named_density("normal", 0.0, 0.8)
    gaps = [abs(entropy(f, q) - entropy(g, q) - math.log(0.8)) for q in DEFAULT_Q_GRID]
    ok = not bad and max(gaps) <= 1e-9
    criterion("8", "entropy: h_q(f) <= h_q(gamma), S_q = Psi_q(h_q), sigma=0.8 gap log(sigma)",
              ok, f"max psi residual {worst_psi:.1e}, max gap error {max(gaps):.1e}")
    assert ok
