"""Concrete integral inequalities and the auxiliary lemmas behind them.

Every check returns a :class:`CheckReport` with ``margin = rhs - lhs``. A
check passes when ``margin >= -error_budget`` and passes strictly when
``margin > error_budget``. These are numerical certificates on the sampled
parameters, not proofs.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import specfun
from .errors import BadParams, ParamOutOfDomain, UnknownLemma
from .measures import (LINEAR, Cumulative, discrete_ball_A, integrate_phi, measured,
                       named_density, power_integral)
from .numerics import EPS, Interval, bracketed_roots, integrate

__all__ = [
    "CheckReport",
    "DiscreteBallContext",
    "NEAR_EQUALITY_SLACK",
    "discrete_ball_context",
    "ball_check",
    "op_bessel_check",
    "op_cumulative_check",
    "discrete_ball_check",
    "ball_limit_check",
    "named_lemma_check",
    "registered_lemmas",
    "lemma_final_aux",
    "james_constants",
    "theta_optimum",
    "Y_STAR",
]

# near-equality points are printed to two significant figures
NEAR_EQUALITY_SLACK = 5e-3
Y_STAR = 4.6244
_LEMMA_FINAL_C = 1.68


@dataclass(frozen=True)
class CheckReport:
    """Uniform carrier for every inequality ``lhs <= rhs``."""

    name: str
    params: dict
    lhs: float
    rhs: float
    margin: float
    error_budget: float
    passed: bool
    strict_pass: bool
    details: dict = field(default_factory=dict, repr=False)


def _report(name: str, params: dict, lhs: float, rhs: float, budget: float,
            details: Optional[dict] = None) -> CheckReport:
    lhs, rhs, budget = float(lhs), float(rhs), abs(float(budget))
    margin = rhs - lhs
    return CheckReport(name, dict(params), lhs, rhs, margin, budget,
                       bool(margin >= -budget), bool(margin > budget), dict(details or {}))


def _rounding(*vals: float, ulps: float = 8.0) -> float:
    # pointwise evaluations: a few ulps of the larger side
    return ulps * EPS * max(abs(v) for v in vals)


# ---------------------------------------------------------------- theorem-level checks

def ball_check(s: float, tol: float = 1e-11) -> CheckReport:
    """``int sinc(x)^(2s) dx <= s^(-1/2)``; equality at ``s = 1``."""
    if not s >= 1:
        raise ParamOutOfDomain("ball_check needs s >= 1")
    lhs = power_integral(measured(named_density("sinc2")), float(s), tol)
    return _report("ball", {"s": float(s)}, lhs.value, 1.0 / math.sqrt(s), lhs.error_bound)


def op_bessel_check(s: float, tol: float = 1e-11) -> CheckReport:
    """``int_0^inf (2 J1(x)/x)^(2s) x dx <= int_0^inf e^(-s x^2/4) x dx = 2/s``."""
    if not s >= 1:
        raise ParamOutOfDomain("op_bessel_check needs s >= 1")
    lhs = power_integral(measured(named_density("bessel_kernel"), LINEAR), float(s), tol)
    return _report("op_bessel", {"s": float(s)}, lhs.value, 2.0 / s, lhs.error_bound)


def op_cumulative_check(x: float, tol: float = 1e-12) -> CheckReport:
    """Quadrature of ``int_0^x g t dt`` against ``2 - 2 (J0^2 + J1^2)``.

    An identity: ``lhs`` is the closed form, ``rhs`` the quadrature, and
    the check passes when they agree within ``1e-8``.
    """
    if not x >= 0:
        raise ParamOutOfDomain("x must be non-negative")
    d = named_density("bessel_kernel")
    q = integrate(lambda t: d.func(t) * t, Interval(0.0, float(x)), tol,
                  points=d.breakpoints) if x > 0 else None
    quad = q.value if q is not None else 0.0
    j0, j1 = specfun.bessel_j(0, float(x)), specfun.bessel_j(1, float(x))
    closed = 2.0 - 2.0 * (j0 * j0 + j1 * j1)
    diff = abs(quad - closed)
    return _report("op_cumulative", {"x": float(x)}, diff, 1e-8, 0.0,
                   {"quadrature": quad, "closed_form": closed,
                    "quadrature_error": q.error_bound if q is not None else 0.0})


@dataclass(frozen=True)
class DiscreteBallContext:
    """Truncation point and masses of the discrete-Ball density pair."""

    n: int
    A: float
    g_mass: float
    f_mass: float


def discrete_ball_context(n: int) -> DiscreteBallContext:
    """Build the pair and verify both masses equal ``1/(2n)`` by quadrature."""
    if int(n) != n or n < 2:
        raise ParamOutOfDomain("n must be an integer >= 2")
    n = int(n)
    g = named_density("discrete_ball_g", n)
    f = named_density("discrete_ball_f", n)
    gm = integrate(g.func, Interval(0.0, 0.5), 1e-14, points=g.breakpoints).value
    fm = integrate(f.func, Interval(0.0, f.support.hi), 1e-14).value
    if abs(gm - 0.5 / n) > 1e-10 or abs(fm - 0.5 / n) > 1e-10:
        raise BadParams(f"masses {gm!r}, {fm!r} differ from 1/(2n)")
    return DiscreteBallContext(n, discrete_ball_A(n), gm, fm)


def discrete_ball_check(n: int, p: float, tol: float = 1e-12) -> CheckReport:
    """``int_{-1/2}^{1/2} |sin(n pi x) / (n sin(pi x))|^p dx < sqrt(2 / (p (n^2 - 1)))``."""
    if int(n) != n or n < 2:
        raise ParamOutOfDomain("n must be an integer >= 2")
    if not p >= 2:
        raise ParamOutOfDomain("p must be >= 2")
    n, p = int(n), float(p)
    # the squared kernel is even and 1-periodic: twice the integral over [0, 1/2]
    half = power_integral(measured(named_density("discrete_ball_g", n)), p / 2.0, tol / 2.0)
    rhs = math.sqrt(2.0 / (p * (n * n - 1)))
    return _report("discrete_ball", {"n": n, "p": p}, 2.0 * half.value, rhs,
                   2.0 * half.error_bound + _rounding(rhs))


def ball_limit_check(n: int, p: float, tol: float = 1e-11) -> CheckReport:
    """``sqrt(1 - 1/n^2) int_{-n/2}^{n/2} |sinc|^p <= sqrt(2/p)``."""
    if int(n) != n or n < 2 or not p >= 2:
        raise ParamOutOfDomain("needs an integer n >= 2 and p >= 2")
    n, p = int(n), float(p)
    d = named_density("sinc2")
    half = integrate_phi(measured(d), lambda y: y ** (p / 2.0), tol / 2.0, window=(0.0, n / 2.0))
    scale = math.sqrt(1.0 - 1.0 / (n * n))
    return _report("ball_limit", {"n": n, "p": p}, 2.0 * scale * half.value,
                   math.sqrt(2.0 / p), 2.0 * scale * half.error_bound)


# ---------------------------------------------------------------- auxiliary lemmas

def _kernel_sq(n: int, x):
    return specfun.dirichlet_kernel(n, x) ** 2


def _f_at_A(n: int) -> float:
    # exp(-inv_erf(sqrt(1 - 1/n^2))^2), with the erfc form to avoid cancellation
    q = 1.0 / (n * n)
    return math.exp(-specfun.inv_erfc(q / (1.0 + math.sqrt(1.0 - q))) ** 2)


def _check_n(n, least: int) -> int:
    if int(n) != n or n < least:
        raise ParamOutOfDomain(f"n must be an integer >= {least}")
    return int(n)


def _erfc_engineering(x: float) -> CheckReport:
    if not x >= 0.5:
        raise ParamOutOfDomain("the engineering bound is stated for x >= 1/2")
    lhs = specfun.erfc(x)
    rhs = math.exp(-x * x) / 6.0 + math.exp(-4.0 * x * x / 3.0) / 2.0
    return _report("erfc_engineering", {"x": x}, lhs, rhs, _rounding(lhs, rhs, ulps=32))


def _erfc_series(x: float) -> CheckReport:
    if not x > 0:
        raise ParamOutOfDomain("x must be positive")
    lhs = 0.5 * math.sqrt(math.pi) * specfun.erfc(x)
    e = math.exp(-x * x)
    rhs = e * (1.0 / (2 * x) - 1.0 / (4 * x ** 3) + 3.0 / (8 * x ** 5))
    return _report("erfc_series", {"x": x}, lhs, rhs, _rounding(lhs, rhs, ulps=32))


def lemma_final_aux(y: float) -> dict:
    """``H'(y)`` and ``G(y)`` from the minimum argument on ``(pi, 3 pi / 2)``."""
    c = _LEMMA_FINAL_C
    return {
        "H": c * y + (y + math.pi) * math.sin(y),
        "H_prime": c + math.sin(y) + (y + math.pi) * math.cos(y),
        "G": c * y * math.cos(y) - c * math.sin(y) - math.sin(y) ** 2,
    }


@functools.lru_cache(maxsize=None)
def _lemma_final_empirical_sup(hi: float = 100.0, points: int = 2_000_001) -> float:
    ys = np.linspace(math.pi, hi, points)
    return float(np.max((ys + math.pi) * np.abs(np.sin(ys)) / ys))


def _lemma_final(y: float) -> CheckReport:
    if not y >= math.pi:
        raise ParamOutOfDomain("stated for y >= pi")
    lhs = (y + math.pi) * abs(math.sin(y))
    rhs = _LEMMA_FINAL_C * y
    details = lemma_final_aux(y)
    details["empirical_sup_ratio"] = _lemma_final_empirical_sup()
    if abs(y - Y_STAR) < 1e-12:
        details["near_equality"] = bool(abs(details["H_prime"]) <= NEAR_EQUALITY_SLACK
                                        and abs(details["G"]) <= NEAR_EQUALITY_SLACK)
    return _report("lemma_final", {"y": y}, lhs, rhs, _rounding(lhs, rhs), details)


def _sinus_monotone(a: float, b: float) -> CheckReport:
    if not 0 < a <= b <= math.pi / 2:
        raise ParamOutOfDomain("needs 0 < a <= b <= pi/2")
    lhs = a / b * math.sin(b)
    rhs = math.sin(a)
    return _report("sinus_monotone", {"a": a, "b": b}, lhs, rhs, _rounding(lhs, rhs))


def _kernel_gauss_dom(n: int, x: float) -> CheckReport:
    n = _check_n(n, 2)
    if not 0 < x < 1.0 / n:
        raise ParamOutOfDomain("needs 0 < x < 1/n")
    lhs = specfun.dirichlet_kernel(n, x)
    rhs = math.exp(-(n * n - 1) * math.pi ** 2 * x * x / 6.0)
    return _report("kernel_gauss_dom", {"n": n, "x": x}, lhs, rhs, _rounding(lhs, rhs, ulps=16))


@functools.lru_cache(maxsize=1)
def _sinc_cumulative() -> Cumulative:
    return Cumulative(measured(named_density("sinc2")))


def _sinc_tail(x: float, tol: float = 1e-13):
    """``int_x^inf sinc^2`` with its error bound."""
    d = named_density("sinc2")
    r = integrate(d.func, Interval(x, math.inf), tol, points=d.breakpoints,
                  upper_tail=lambda R: d.power_tail(R, 1.0, +1), cutoff=max(1.0, math.ceil(x)))
    return r.value, r.error_bound


def _for_james(x: float) -> CheckReport:
    """Gaussian-versus-sinc mass comparison used for the Ball map.

    ``x <= 1``: ``int_0^x sinc^2 <= int_0^y e^(-pi u^2)``; ``x > 1``:
    ``int_y^inf e^(-pi u^2) <= int_x^inf sinc^2``, where
    ``y = sqrt((2/pi) log |pi x / sin(pi x)|)``.
    """
    if not x > 0:
        raise ParamOutOfDomain("x must be positive")
    s = math.sin(math.pi * x)
    y = math.inf if s == 0 else math.sqrt(2.0 / math.pi * math.log(abs(math.pi * x / s)))
    k = math.sqrt(math.pi)
    if x <= 1.0:
        # both sides minus the common mass 1/2 below 0
        lhs = float(_sinc_cumulative().lower(x)) - 0.5
        rhs = 0.5 if y == math.inf else 0.5 * specfun.erf(k * y)
        budget = 1e-13 + _rounding(lhs, rhs)
        form = "lower"
    else:
        lhs = 0.0 if y == math.inf else 0.5 * specfun.erfc(k * y)
        rhs, err = _sinc_tail(x)
        budget = err + _rounding(lhs, rhs)
        form = "tail"
    return _report("forJames", {"x": x}, lhs, rhs, budget, {"y": y, "form": form})


def _for_james_claim(y: float) -> CheckReport:
    if not y > 20:
        raise ParamOutOfDomain("stated for y > 20")
    lhs, rhs = 9.0 * math.pi, y * math.log(y)
    return _report("forJames_claim", {"y": y}, lhs, rhs, _rounding(lhs, rhs))


def _in_james_window(n: int, x: float) -> bool:
    return max(0.5 - 1.0 / n, 0.0) <= x <= 0.5 and x > 1.0 / n


def james_constants(n: int) -> dict:
    """Per-``n`` quantities behind the ``f(A) >= g`` lemma.

    For ``n = 3, 4, 5`` the window maximum ``g*`` and the erfc-chain value;
    for ``n >= 6`` the rearranged chain ``1/6 + (n cos(pi/n))^(-2/3)/2`` against
    ``cos^2(pi/n)/2``.
    """
    n = _check_n(n, 3)
    out = {"n": n, "f_A": _f_at_A(n), "bound": 1.0 / (2 * n * n)}
    if n == 3:
        g = 1.0 / 9.0
        out.update(x0=0.5, g_star=g, chain=g / 6.0 + g ** (4.0 / 3.0) / 2.0)
    elif n == 4:
        x0 = math.acos(-2.0 / 3.0) / (2.0 * math.pi)
        g = float(_kernel_sq(4, x0))
        out.update(x0=x0, g_star=g, chain=g / 6.0 + g ** (4.0 / 3.0) / 2.0)
    elif n == 5:
        x0 = 2.0 / math.pi * math.atan(math.sqrt((11.0 - 4.0 * math.sqrt(6.0)) / 5.0))
        g = float(_kernel_sq(5, x0))
        L = math.log(1.0 / g)
        out.update(x0=x0, g_star=g,
                   chain=g / (math.sqrt(math.pi) * math.sqrt(L)) * (1 - 1 / (2 * L) + 3 / (4 * L * L)))
    else:
        c = math.cos(math.pi / n)
        out.update(x0=0.5 - 1.0 / n, g_star=1.0 / (n * c) ** 2,
                   chain=1.0 / 6.0 + 0.5 / (n * c) ** (2.0 / 3.0), bound=0.5 * c * c)
    return out


def _lemma_james(n: int, x: float) -> CheckReport:
    n = _check_n(n, 3)
    if not _in_james_window(n, x):
        raise ParamOutOfDomain("x must lie in [1/2 - 1/n, 1/2] and exceed 1/n")
    lhs = float(_kernel_sq(n, x))
    rhs = _f_at_A(n)
    return _report("lemma_james", {"n": n, "x": x}, lhs, rhs, _rounding(lhs, rhs, ulps=64),
                   james_constants(n))


def _james_chain(n: int) -> CheckReport:
    c = james_constants(n)
    return _report("james_chain", {"n": int(n)}, c["chain"], c["bound"],
                   _rounding(c["chain"], c["bound"], ulps=64), c)


def _pain(n: int, x: float) -> CheckReport:
    n = _check_n(n, 5)
    if not 1.0 / n <= x <= 0.5 - 1.0 / n:
        raise ParamOutOfDomain("x must lie in [1/n, 1/2 - 1/n]")
    g = float(_kernel_sq(n, x))
    lhs = 0.0 if g == 0 else g / (2.0 * math.sqrt(math.pi * (n * n - 1) * math.log(1.0 / g)))
    d = named_density("discrete_ball_g", n)
    rhs = float(d.upper(np.array([x]))[0])
    return _report("pain", {"n": n, "x": x}, lhs, rhs, _rounding(lhs, rhs, ulps=64) + 1e-15)


def _g_star(n: int, g_star: float, form: str = "engineering") -> CheckReport:
    n = _check_n(n, 2)
    if not 0 < g_star < 1:
        raise ParamOutOfDomain("g* must lie in (0, 1)")
    rhs = 1.0 / (2 * n * n)
    if form == "engineering":
        if g_star > math.exp(-0.25):
            raise ParamOutOfDomain("the engineering form needs g* <= e^(-1/4)")
        lhs = g_star / 6.0 + g_star ** (4.0 / 3.0) / 2.0
    elif form == "series":
        L = math.log(1.0 / g_star)
        lhs = g_star / (math.sqrt(math.pi) * math.sqrt(L)) * (1 - 1 / (2 * L) + 3 / (4 * L * L))
    else:
        raise ParamOutOfDomain("form must be 'engineering' or 'series'")
    # what the sufficient condition buys: f(A) >= g*
    direct = specfun.erfc(math.sqrt(math.log(1.0 / g_star)))
    q = 1.0 / (n * n)
    return _report("g_star", {"n": n, "g_star": g_star, "form": form}, lhs, rhs,
                   _rounding(lhs, rhs, ulps=32),
                   {"erfc_direct": direct, "erfc_target": q / (1.0 + math.sqrt(1.0 - q)),
                    "implies_f_A_ge_g": bool(g_star <= _f_at_A(n))})


def _kk_refined(s: float, tol: float = 1e-11) -> CheckReport:
    if not s >= 9.0 / 8.0:
        raise ParamOutOfDomain("stated for s >= 9/8")
    lhs = power_integral(measured(named_density("sinc2")), float(s), tol)
    return _report("kk_refined", {"s": s}, lhs.value, math.sqrt(3.0 / math.pi) / math.sqrt(s),
                   lhs.error_bound)


def _theta_n6(theta: float) -> float:
    return 9.0 * min(1.0 / math.sin(theta * math.pi) ** 2,
                     4.0 * math.sin((1.0 + theta) * math.pi / 6.0) ** 2)


def _theta_n5(theta: float) -> float:
    return 25.0 * min(math.sin(math.pi / 5) ** 2 / math.sin(theta * math.pi) ** 2,
                      math.sin((1.0 + theta) * math.pi / 5.0) ** 2)


def theta_optimum(n_case: int) -> tuple:
    """``(theta*, value)`` maximising the lower bound for ``1/g``.

    ``n_case = 6`` covers every ``n >= 6``; ``n_case = 5`` is the ``n = 5``
    variant. The optimum is where the decreasing and increasing branches meet.
    """
    if n_case == 6:
        h = lambda t: 1.0 / np.sin(t * np.pi) ** 2 - 4.0 * np.sin((1.0 + t) * np.pi / 6.0) ** 2
        fn = _theta_n6
    elif n_case == 5:
        h = lambda t: (np.sin(np.pi / 5) ** 2 / np.sin(t * np.pi) ** 2
                       - np.sin((1.0 + t) * np.pi / 5.0) ** 2)
        fn = _theta_n5
    else:
        raise ParamOutOfDomain("n_case must be 5 or 6")
    t = float(bracketed_roots(h, np.array([0.05]), np.array([0.5]))[0])
    return t, fn(t)


def _theta_bound(n_case: int, theta: float) -> CheckReport:
    if not 0 < theta < 0.5:
        raise ParamOutOfDomain("theta must lie in (0, 1/2)")
    if n_case == 6:
        val, target = _theta_n6(theta), 14.0
    elif n_case == 5:
        val, target = _theta_n5(theta), 13.25
    else:
        raise ParamOutOfDomain("n_case must be 5 or 6")
    opt_t, opt_v = theta_optimum(n_case)
    return _report("theta_bound", {"n_case": n_case, "theta": theta}, target, val,
                   _rounding(val), {"theta_opt": opt_t, "value_opt": opt_v})


def _inv_g_lower(n: int) -> CheckReport:
    """``min 1/g`` over ``[1/n, 1/2]`` (``n >= 6``) or ``[1/5, 3/10]`` (``n = 5``)."""
    n = _check_n(n, 5)
    lo, hi = (0.2, 0.3) if n == 5 else (1.0 / n, 0.5)
    d = named_density("discrete_ball_g", n)
    pts = np.concatenate([[lo, hi], d.breakpoints(lo, hi)])
    gmax = float(np.max(_kernel_sq(n, pts)))
    target = 13.25 if n == 5 else 14.0
    inv = math.inf if gmax == 0 else 1.0 / gmax
    return _report("inv_g_lower", {"n": n}, target, inv, _rounding(inv, ulps=64),
                   {"g_max": gmax})


def _constant(name: str) -> CheckReport:
    """Closed numerical constants used by the lemma chain, as ``lhs <= rhs``."""
    if name == "5.67":
        lhs, rhs = 5.67, 2.0 * math.sqrt(math.pi * math.log(14.0)) * math.sqrt(35.0 / 36.0)
    elif name == "27.9":
        lhs, rhs = 27.9, 2.0 * math.sqrt(24.0 * math.pi * math.log(13.25))
    elif name == "discriminant":
        # 16 X^2 - 20 X + 6.67 > 0: b^2 < 4ac
        lhs, rhs = 20.0 ** 2, 4.0 * 16.0 * 6.67
    elif name == "n6_chain":
        c = math.cos(math.pi / 6)
        lhs, rhs = 1.0 / 6.0 + 0.5 / (6.0 * c) ** (2.0 / 3.0), 0.5 * c * c
    elif name == "n3_chain":
        g = 1.0 / 9.0
        lhs, rhs = g / 6.0 + g ** (4.0 / 3.0) / 2.0, 0.055
    elif name == "half_n2_vs_sqrt":
        # 1/(2n^2) <= 1 - sqrt(1 - 1/n^2) holds for every n; recorded at n = 2
        lhs, rhs = 1.0 / 8.0, 1.0 - math.sqrt(0.75)
    else:
        raise ParamOutOfDomain(f"unknown constant {name!r}")
    return _report("proof_constant", {"constant": name}, lhs, rhs, _rounding(lhs, rhs))


_REGISTRY: dict = {
    "erfc_engineering": _erfc_engineering,
    "erfc_series": _erfc_series,
    "lemma_final": _lemma_final,
    "sinus_monotone": _sinus_monotone,
    "kernel_gauss_dom": _kernel_gauss_dom,
    "forJames": _for_james,
    "forJames_claim": _for_james_claim,
    "lemma_james": _lemma_james,
    "james_chain": _james_chain,
    "pain": _pain,
    "g_star": _g_star,
    "kk_refined": _kk_refined,
    "theta_bound": _theta_bound,
    "inv_g_lower": _inv_g_lower,
    "proof_constant": _constant,
    "op_cumulative": op_cumulative_check,
    "ball": ball_check,
    "op_bessel": op_bessel_check,
    "discrete_ball": discrete_ball_check,
    "ball_limit": ball_limit_check,
}


def registered_lemmas() -> tuple:
    return tuple(sorted(_REGISTRY))


def named_lemma_check(name: str, *params, **kwargs) -> CheckReport:
    """Run the registered inequality ``name`` at the given parameters.

    Raises
    ------
    UnknownLemma
        ``name`` is not registered.
    ParamOutOfDomain
        The parameters fall outside the lemma's stated domain.
    """
    try:
        fn: Callable[..., CheckReport] = _REGISTRY[name]
    except KeyError:
        raise UnknownLemma(name) from None
    try:
        return fn(*params, **kwargs)
    except TypeError as exc:
        raise ParamOutOfDomain(f"{name}: {exc}") from None
