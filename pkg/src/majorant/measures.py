"""Densities on weighted intervals, distribution functions and certificate integrals.

A density is registered together with the structure needed to handle it
exactly: its monotone pieces (critical points and kinks), a window outside
which it stays below a given level, tail models for its powers, and, where
available, closed-form cumulative masses and quantiles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import specfun
from .errors import (BadParams, LevelSetResolutionFailure, NonIntegrable,
                     TargetOutOfRange, UnknownDensity)
from .numerics import (DEFAULT_TOL, EPS, Interval, QuadratureResult, bracketed_roots,
                       _adaptive_panels, gk21, integrate, invert_monotone_array,
                       sign_change_roots)

__all__ = [
    "WeightedMeasure",
    "LEBESGUE",
    "LINEAR",
    "Density1D",
    "MeasuredDensity",
    "Cumulative",
    "DistributionFunction",
    "CrossingReport",
    "named_density",
    "registered_densities",
    "measured",
    "distribution_function",
    "level_set",
    "integrate_phi",
    "power_integral",
    "hockey_stick_integral",
    "hockey_stick_gap",
    "tail_integral_gap",
    "single_crossing",
    "np_phi",
    "discrete_ball_A",
]

_INF = math.inf
_SQRT_PI = math.sqrt(math.pi)


# ---------------------------------------------------------------- measures

@dataclass(frozen=True)
class WeightedMeasure:
    """``u(x) dx`` on an interval, with ``u = 1`` (lebesgue) or ``u = x`` (linear)."""

    weight: str
    support: Interval

    def __post_init__(self):
        if self.weight not in ("lebesgue", "linear"):
            raise BadParams(f"unknown weight {self.weight!r}")
        if self.weight == "linear" and self.support.lo < 0:
            raise BadParams("linear weight needs a support inside [0, inf)")

    def u(self, x):
        x = np.asarray(x, dtype=float)
        return np.ones_like(x) if self.weight == "lebesgue" else x

    def measure(self, a, b):
        """Measure of ``[a, b]`` (vectorized, zero when ``b <= a``)."""
        a = np.asarray(a, dtype=float)
        b = np.maximum(np.asarray(b, dtype=float), a)
        if self.weight == "lebesgue":
            return b - a
        return 0.5 * (b - a) * (b + a)

    @property
    def total(self) -> float:
        return float(self.measure(self.support.lo, self.support.hi))


LEBESGUE = WeightedMeasure("lebesgue", Interval(-_INF, _INF))
LINEAR = WeightedMeasure("linear", Interval(0.0, _INF))


# ---------------------------------------------------------------- densities

TailModel = Callable[[float, float, int], tuple]


@dataclass(frozen=True)
class Density1D:
    """A registered non-negative density with the structure used by the solvers.

    Attributes
    ----------
    func : callable
        Vectorized evaluation; zero outside ``support``.
    critical : callable
        ``(a, b) -> points`` where monotonicity changes, kinks included.
    window : callable
        ``lam -> (a, b)`` such that ``func <= lam`` outside ``[a, b]``.
    power_tail : callable, optional
        ``(R, s, side) -> (estimate, halfwidth)`` for ``int_R^inf f^s u``
        (``side=+1``) or ``int_-inf^-R f^s u`` (``side=-1``).
    lower, upper, q_lower, q_upper : callable, optional
        Closed-form masses below/above ``x`` and their inverses.
    """

    name: str
    params: tuple
    support: Interval
    func: Callable[[np.ndarray], np.ndarray]
    sup: float
    mode: float
    critical: Callable[[float, float], np.ndarray]
    window: Callable[[float], tuple]
    weight: str = "lebesgue"
    even: bool = False
    mass: Optional[float] = None
    scale: float = 1.0
    power_tail: Optional[TailModel] = None
    lower: Optional[Callable] = None
    upper: Optional[Callable] = None
    q_lower: Optional[Callable] = None
    q_upper: Optional[Callable] = None
    logderiv: Optional[Callable] = None
    potential: Optional[Callable] = None
    table_extent: Optional[float] = None

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = np.asarray(self.func(np.atleast_1d(arr)), dtype=float)
        return float(out[0]) if arr.ndim == 0 else out

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        pts = np.asarray(self.critical(a, b), dtype=float)
        return pts[(pts > a) & (pts < b)]

    @property
    def intended_measure(self) -> WeightedMeasure:
        if self.weight == "linear":
            return LINEAR
        return WeightedMeasure("lebesgue", Interval(-_INF, _INF)) if not self.support.finite \
            else WeightedMeasure("lebesgue", self.support)


@dataclass(frozen=True)
class MeasuredDensity:
    """A density together with the measure it is integrated against."""

    density: Density1D
    measure: WeightedMeasure

    def __post_init__(self):
        s, m = self.density.support, self.measure.support
        if s.lo < m.lo or s.hi > m.hi:
            raise BadParams("density support must lie inside the measure support")

    @property
    def symmetric(self) -> bool:
        d = self.density
        return d.even and self.measure.weight == "lebesgue" and d.support.lo == -d.support.hi


def measured(d: Density1D, measure: Optional[WeightedMeasure] = None) -> MeasuredDensity:
    return MeasuredDensity(d, measure if measure is not None else d.intended_measure)


def _log_concave_tail(func, logderiv, weight="lebesgue"):
    """Tail model from ``f(x) <= f(R) exp(-k (x - R))`` with ``k = -(log f)'(R)``."""

    def tail(R, s, side):
        x0 = R if side > 0 else -R
        fr = float(func(np.array([x0]))[0])
        k = -side * float(logderiv(np.array([x0]))[0])
        if fr == 0.0:
            return 0.0, 0.0
        if not k > 0:
            return 0.0, _INF
        if weight == "linear":
            b = fr ** s * (x0 / (s * k) + 1.0 / (s * k) ** 2)
        else:
            b = fr ** s / (s * k)
        return 0.5 * b, 0.5 * b

    return tail


def _empty(a, b):
    return np.empty(0)


def _in(points, a, b):
    pts = np.asarray(points, dtype=float)
    return pts[(pts >= a) & (pts <= b)]


def _gauss_pi() -> Density1D:
    def func(x):
        return np.exp(-math.pi * x * x)

    def window(lam):
        if lam >= 1.0:
            return 0.0, 0.0
        r = math.sqrt(math.log(1.0 / lam) / math.pi) if lam > 0 else _INF
        return -r, r

    def tail(R, s, side):
        est = specfun.erfc(math.sqrt(s * math.pi) * R) / (2.0 * math.sqrt(s))
        return est, 4.0 * EPS * est

    return Density1D(
        "gauss_pi", (), Interval(-_INF, _INF), func, 1.0, 0.0,
        lambda a, b: _in([0.0], a, b), window, even=True, mass=1.0, scale=0.5,
        power_tail=tail,
        lower=lambda x: 0.5 * specfun.erfc(-_SQRT_PI * np.asarray(x, float)),
        upper=lambda x: 0.5 * specfun.erfc(_SQRT_PI * np.asarray(x, float)),
        q_lower=lambda c: -specfun.inv_erfc(2.0 * np.asarray(c, float)) / _SQRT_PI,
        q_upper=lambda u: specfun.inv_erfc(2.0 * np.asarray(u, float)) / _SQRT_PI,
        logderiv=lambda x: -2.0 * math.pi * x,
    )


def _sinc_peaks(a: float, b: float) -> np.ndarray:
    """Nonzero critical points of (sin pi x / pi x)^2 in [a, b], for a >= 0."""
    k = np.arange(max(1, math.floor(a)), math.floor(b) + 1, dtype=float)
    if not len(k):
        return np.empty(0)
    # tan(pi x) = pi x has exactly one root in (k, k + 1/2)
    h = lambda x: math.pi * x * np.cos(math.pi * x) - np.sin(math.pi * x)
    roots = bracketed_roots(h, k, k + 0.5)
    return roots[(roots >= a) & (roots <= b)]


def _sinc2() -> Density1D:
    def func(x):
        x = np.asarray(x, dtype=float)
        # np.sinc leaves ~1e-17 at the integer zeros; the kernel vanishes there exactly
        return np.where((x != 0) & (x == np.round(x)), 0.0, np.sinc(x) ** 2)

    cache = {"top": 0.0, "pts": np.empty(0)}

    def critical(a, b):
        m = max(abs(a), abs(b))
        if m > cache["top"]:
            top = max(16.0, cache["top"])
            while top < m:
                top *= 2.0
            ints = np.arange(0.0, top + 1)
            pos = np.concatenate([ints, _sinc_peaks(0.0, top)])
            cache["pts"] = np.unique(np.concatenate([pos, -pos]))
            cache["top"] = top
        return _in(cache["pts"], a, b)

    def window(lam):
        if lam >= 1.0:
            return 0.0, 0.0
        r = 1.0 / (math.pi * math.sqrt(lam)) if lam > 0 else _INF
        return -r, r

    def tail(R, s, side):
        # |sin|^{2s} averages to c_s over each period; the oscillating remainder,
        # integrated by parts twice from an integer point, is below (s/2) R^{-2s-1}.
        if not 2.0 * s > 1.0:
            raise NonIntegrable(f"sinc^(2s) is not integrable for s={s}")
        r0 = math.ceil(R)
        cs = math.exp(math.lgamma(s + 0.5) - math.lgamma(s + 1.0)) / _SQRT_PI
        scale = math.pi ** (-2.0 * s)
        est = scale * cs * r0 ** (1.0 - 2.0 * s) / (2.0 * s - 1.0)
        half = scale * 0.5 * s * r0 ** (-2.0 * s - 1.0)
        gap = (r0 - R) * (math.pi * R) ** (-2.0 * s)
        return est + 0.5 * gap, half + 0.5 * gap

    return Density1D(
        "sinc2", (), Interval(-_INF, _INF), func, 1.0, 0.0, critical, window,
        even=True, mass=1.0, scale=0.25, power_tail=tail, table_extent=16.0,
    )


def _exp_quartersq() -> Density1D:
    def func(x):
        return np.where(x >= 0, np.exp(-0.25 * x * x), 0.0)

    def window(lam):
        if lam >= 1.0:
            return 0.0, 0.0
        return 0.0, 2.0 * math.sqrt(math.log(1.0 / lam)) if lam > 0 else _INF

    def tail(R, s, side):
        est = 2.0 / s * math.exp(-0.25 * s * R * R)
        return est, 4.0 * EPS * est

    def q_lower(c):
        return 2.0 * np.sqrt(-np.log1p(-0.5 * np.asarray(c, float)))

    def q_upper(u):
        return 2.0 * np.sqrt(np.log(2.0 / np.asarray(u, float)))

    return Density1D(
        "exp_quartersq", (), Interval(0.0, _INF), func, 1.0, 0.0, _empty, window,
        weight="linear", mass=2.0, scale=1.0, power_tail=tail,
        lower=lambda x: -2.0 * np.expm1(-0.25 * np.asarray(x, float) ** 2),
        upper=lambda x: 2.0 * np.exp(-0.25 * np.asarray(x, float) ** 2),
        q_lower=q_lower, q_upper=q_upper, logderiv=lambda x: -0.5 * x,
    )


# x (J1^2 + Y1^2) decreases to 2/pi, and x M1^2 <= (2/pi)(1 + 1/x^2) from x = 10 on
_J1_ENVELOPE_START = 10.0
_J1_MAX_SQ = 0.58187 ** 2 * 1.0001


def _j1_envelope(R: float) -> float:
    return 2.0 / math.pi * (1.0 + 1.0 / (R * R))


_BESSEL_LOWER_SERIES_MAX = 2.0


def _bessel_lower_series(x: np.ndarray) -> np.ndarray:
    """``2 - 2 (J0^2 + J1^2) = int_0^x 4 J1(t)^2 / t dt`` without cancellation.

    Integrates ``J1^2 = sum_k (-1)^k (2k+2)! / (k! (k+2)! ((k+1)!)^2) (t/2)^(2k+2)``
    term by term; alternating with decreasing terms for ``x <= 2``.
    """
    q = (0.5 * x) ** 2
    total = np.zeros_like(x)
    power = q.copy()
    for k in range(30):
        c = math.factorial(2 * k + 2) / (math.factorial(k) * math.factorial(k + 2)
                                         * math.factorial(k + 1) ** 2)
        total += (-1) ** k * c * power / (k + 1)
        power = power * q
    return 2.0 * total


def _bessel_kernel() -> Density1D:
    def func(x):
        x = np.asarray(x, float)
        out = np.zeros_like(x)
        pos = x > 0
        small = pos & (x < 1e-4)
        out[small] = (1.0 - x[small] ** 2 / 8.0) ** 2
        big = pos & ~small
        out[big] = (2.0 * specfun.bessel_j(1, x[big]) / x[big]) ** 2
        out[x == 0] = 1.0
        return out

    def j2(x):
        return 2.0 / x * specfun.bessel_j(1, x) - specfun.bessel_j(0, x)

    cache = {"top": 1.0, "pts": np.empty(0)}

    def critical(a, b):
        # roots of J1 (zeros) and J2 (extrema), found once per doubling of the range
        if b > cache["top"]:
            top = cache["top"]
            while top < b:
                top *= 2.0
            z1 = sign_change_roots(lambda x: specfun.bessel_j(1, x), cache["top"], top, 0.5)
            z2 = sign_change_roots(j2, cache["top"], top, 0.5)
            cache["pts"] = np.unique(np.concatenate([cache["pts"], z1, z2]))
            cache["top"] = top
        return _in(cache["pts"], a, b)

    def window(lam):
        if lam >= 1.0:
            return 0.0, 0.0
        if lam <= 0:
            return 0.0, _INF
        r1 = math.sqrt(4.0 * _J1_MAX_SQ / lam)
        r2 = max(_J1_ENVELOPE_START, (4.0 * _j1_envelope(_J1_ENVELOPE_START) / lam) ** (1.0 / 3.0))
        return 0.0, min(r1, r2)

    def tail(R, s, side):
        if s == 1.0:
            m = 2.0 * (specfun.bessel_j(0, R) ** 2 + specfun.bessel_j(1, R) ** 2)
            return m, 1e-15
        if not 3.0 * s > 2.0:
            raise NonIntegrable(f"power {s} of the Bessel kernel is not integrable against x dx")
        if R < _J1_ENVELOPE_START:
            return 0.0, _INF
        b = (4.0 * _j1_envelope(R)) ** s * R ** (2.0 - 3.0 * s) / (3.0 * s - 2.0)
        return 0.5 * b, 0.5 * b

    def lower(x):
        x = np.asarray(x, float)
        out = 2.0 - 2.0 * (specfun.bessel_j(0, x) ** 2 + specfun.bessel_j(1, x) ** 2)
        small = x <= _BESSEL_LOWER_SERIES_MAX
        if np.any(small):
            out = np.where(small, _bessel_lower_series(np.where(small, x, 0.0)), out)
        return out

    def upper(x):
        x = np.asarray(x, float)
        return 2.0 * (specfun.bessel_j(0, x) ** 2 + specfun.bessel_j(1, x) ** 2)

    return Density1D(
        "bessel_kernel", (), Interval(0.0, _INF), func, 1.0, 0.0, critical, window,
        weight="linear", mass=2.0, scale=1.0, power_tail=tail, lower=lower, upper=upper,
        table_extent=64.0,
    )


def _dirichlet_peaks(n: int, a: float, b: float) -> np.ndarray:
    """Interior critical points of the squared kernel on [0, 1/2]."""
    h = lambda x: n * np.cos(n * math.pi * x) * np.sin(math.pi * x) \
        - np.sin(n * math.pi * x) * np.cos(math.pi * x)
    j = np.arange(1, n, dtype=float)
    lo, hi = j / n, np.minimum((j + 1) / n, 0.5)
    keep = lo < hi
    lo, hi = lo[keep], hi[keep]
    s = np.sign(h(lo)) * np.sign(h(hi))
    lo, hi = lo[s < 0], hi[s < 0]
    roots = bracketed_roots(h, lo, hi) if len(lo) else np.empty(0)
    zeros = np.arange(1, n // 2 + 1) / n
    return _in(np.concatenate([roots, zeros]), a, b)


def discrete_ball_A(n: int) -> float:
    """Truncation point with int_0^A exp(-pi (n^2-1) x^2) dx = 1/(2n)."""
    # erfc(k A) = 1 - sqrt(1 - 1/n^2), written without cancellation
    q = 1.0 / (n * n)
    comp = q / (1.0 + math.sqrt(1.0 - q))
    return specfun.inv_erfc(comp) / math.sqrt(math.pi * (n * n - 1))


def _check_n(n) -> int:
    if int(n) != n or n < 2:
        raise BadParams(f"n must be an integer >= 2, got {n!r}")
    return int(n)


def _discrete_ball_g(n) -> Density1D:
    n = _check_n(n)

    def func(x):
        x = np.asarray(x, float)
        inside = (x >= 0) & (x <= 0.5)
        return np.where(inside, specfun.dirichlet_kernel(n, x) ** 2, 0.0)

    m = np.arange(1, n, dtype=float)
    w = (n - m) / (math.pi * m)

    def lower(x):
        # kernel^2 = (n + 2 sum_m (n - m) cos(2 pi m x)) / n^2
        x = np.clip(np.asarray(x, float), 0.0, 0.5)
        s = np.sin(2.0 * math.pi * np.multiply.outer(x, m)) @ w
        return (n * x + s) / (n * n)

    mass = 0.5 / n
    crit = _dirichlet_peaks(n, 0.0, 0.5)
    return Density1D(
        "discrete_ball_g", (n,), Interval(0.0, 0.5), func, 1.0, 0.0,
        lambda a, b: _in(crit, a, b),
        lambda lam: (0.0, 0.5) if lam < 1.0 else (0.0, 0.0),
        mass=mass, scale=0.25 / n, lower=lower, upper=lambda x: mass - lower(x),
    )


def _discrete_ball_f(n) -> Density1D:
    n = _check_n(n)
    k2 = math.pi * (n * n - 1)
    k = math.sqrt(k2)
    A = discrete_ball_A(n)
    c = 2.0 * math.sqrt(n * n - 1)
    mass = 0.5 / n

    def func(x):
        x = np.asarray(x, float)
        return np.where((x >= 0) & (x <= A), np.exp(-k2 * x * x), 0.0)

    def window(lam):
        if lam >= 1.0:
            return 0.0, 0.0
        return 0.0, min(A, math.sqrt(math.log(1.0 / lam) / k2)) if lam > 0 else A

    def lower(y):
        return specfun.erf(k * np.clip(np.asarray(y, float), 0.0, A)) / c

    def q_lower(cm):
        cm = np.clip(np.asarray(cm, float) * c, 0.0, None)
        return specfun.inv_erf(np.minimum(cm, math.nextafter(1.0, 0.0))) / k

    return Density1D(
        "discrete_ball_f", (n,), Interval(0.0, A), func, 1.0, 0.0, _empty, window,
        mass=mass, scale=0.25 / n, lower=lower, upper=lambda y: mass - lower(y),
        q_lower=q_lower, q_upper=lambda u: q_lower(mass - np.asarray(u, float)),
        logderiv=lambda x: -2.0 * k2 * x,
    )


def _indicator(lo=0.0, hi=1.0, height=1.0) -> Density1D:
    lo, hi, height = float(lo), float(hi), float(height)
    if not (hi > lo and height > 0):
        raise BadParams("indicator needs lo < hi and height > 0")
    w = hi - lo

    def func(x):
        x = np.asarray(x, float)
        return np.where((x >= lo) & (x <= hi), height, 0.0)

    return Density1D(
        "indicator", (lo, hi, height), Interval(lo, hi), func, height, lo, _empty,
        lambda lam: (lo, hi) if lam < height else (lo, lo),
        mass=height * w, scale=0.25 * w,
        lower=lambda x: height * (np.clip(np.asarray(x, float), lo, hi) - lo),
        upper=lambda x: height * (hi - np.clip(np.asarray(x, float), lo, hi)),
        q_lower=lambda c: lo + np.asarray(c, float) / height,
        q_upper=lambda u: hi - np.asarray(u, float) / height,
    )


def _normal(mu=0.0, sigma=1.0) -> Density1D:
    mu, sigma = float(mu), float(sigma)
    if not sigma > 0:
        raise BadParams("sigma must be positive")
    peak = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    r2 = math.sqrt(2.0) * sigma

    def func(x):
        z = (np.asarray(x, float) - mu) / sigma
        return peak * np.exp(-0.5 * z * z)

    def window(lam):
        if lam >= peak:
            return mu, mu
        r = sigma * math.sqrt(2.0 * math.log(peak / lam)) if lam > 0 else _INF
        return mu - r, mu + r

    def tail(R, s, side):
        x0 = R - mu if side > 0 else R + mu
        est = peak ** s * sigma * math.sqrt(math.pi / (2.0 * s)) * specfun.erfc(math.sqrt(s) * x0 / r2)
        return est, 4.0 * EPS * est

    return Density1D(
        "normal", (mu, sigma), Interval(-_INF, _INF), func, peak, mu,
        lambda a, b: _in([mu], a, b), window, even=(mu == 0.0), mass=1.0,
        scale=0.5 * sigma, power_tail=tail,
        lower=lambda x: 0.5 * specfun.erfc(-(np.asarray(x, float) - mu) / r2),
        upper=lambda x: 0.5 * specfun.erfc((np.asarray(x, float) - mu) / r2),
        q_lower=lambda c: mu - r2 * specfun.inv_erfc(2.0 * np.asarray(c, float)),
        q_upper=lambda u: mu + r2 * specfun.inv_erfc(2.0 * np.asarray(u, float)),
        logderiv=lambda x: -(np.asarray(x, float) - mu) / sigma ** 2,
        potential=lambda x: 0.5 * ((np.asarray(x, float) - mu) / sigma) ** 2
        - 0.5 * np.asarray(x, float) ** 2,
    )


def _exponential(rate=1.0) -> Density1D:
    a = float(rate)
    if not a > 0:
        raise BadParams("rate must be positive")

    def func(x):
        x = np.asarray(x, float)
        return np.where(x >= 0, a * np.exp(-a * np.maximum(x, 0.0)), 0.0)

    def window(lam):
        if lam >= a:
            return 0.0, 0.0
        return 0.0, math.log(a / lam) / a if lam > 0 else _INF

    def tail(R, s, side):
        est = a ** s * math.exp(-a * s * R) / (a * s)
        return est, 4.0 * EPS * est

    return Density1D(
        "exponential", (a,), Interval(0.0, _INF), func, a, 0.0, _empty, window,
        mass=1.0, scale=0.5 / a, power_tail=tail,
        lower=lambda x: -np.expm1(-a * np.maximum(np.asarray(x, float), 0.0)),
        upper=lambda x: np.exp(-a * np.maximum(np.asarray(x, float), 0.0)),
        q_lower=lambda c: -np.log1p(-np.asarray(c, float)) / a,
        q_upper=lambda u: -np.log(np.asarray(u, float)) / a,
        logderiv=lambda x: np.full_like(np.asarray(x, float), -a),
    )


def _slc(a=0.0, b=0.0, c=0.0, m=0.0) -> Density1D:
    """exp(-V) times the standard Gaussian, V(x) = a x^2 + b x + c |x - m|, normalised."""
    a, b, c, m = float(a), float(b), float(c), float(m)
    if a < 0 or c < 0:
        raise BadParams("a and c must be non-negative for V to be convex")
    al = 0.5 + a
    ra = math.sqrt(al)
    # exponent on each side: -al x^2 - beta x + gamma
    beta_r, gam_r = b + c, c * m
    beta_l, gam_l = b - c, -c * m

    def logpref(beta, gam):
        return gam + beta * beta / (4.0 * al)

    def piece_mass(beta, gam, lo, hi):
        # int_lo^hi exp(-al t^2 - beta t + gam) dt via erfc of the shifted variable
        sh = beta / (2.0 * al)
        pre = 0.5 * math.sqrt(math.pi / al)
        e = np.exp(logpref(beta, gam) - logz)
        return e * pre * (specfun.erfc(ra * (lo + sh)) - specfun.erfc(ra * (hi + sh)))

    def upper_piece(beta, gam, x):
        sh = beta / (2.0 * al)
        return np.exp(logpref(beta, gam) - logz) * 0.5 * math.sqrt(math.pi / al) \
            * specfun.erfc(ra * (np.asarray(x, float) + sh))

    def lower_piece(beta, gam, x):
        sh = beta / (2.0 * al)
        return np.exp(logpref(beta, gam) - logz) * 0.5 * math.sqrt(math.pi / al) \
            * specfun.erfc(-ra * (np.asarray(x, float) + sh))

    logz = 0.0
    zr = float(upper_piece(beta_r, gam_r, m))
    zl = float(lower_piece(beta_l, gam_l, m))
    logz = math.log(zr + zl)

    def func(x):
        x = np.asarray(x, float)
        right = x >= m
        beta = np.where(right, beta_r, beta_l)
        gam = np.where(right, gam_r, gam_l)
        return np.exp(-al * x * x - beta * x + gam - logz)

    def logderiv(x):
        x = np.asarray(x, float)
        return -2.0 * al * x - b - c * np.sign(x - m)

    # mode: stationary point on either side, else the kink
    xr = -beta_r / (2.0 * al)
    xl = -beta_l / (2.0 * al)
    mode = xr if xr > m else (xl if xl < m else m)
    peak = float(func(np.array([mode]))[0])

    def window(lam):
        if lam >= peak:
            return mode, mode
        r = math.sqrt(2.0 * math.log(peak / lam)) if lam > 0 else _INF
        return mode - r, mode + r

    def lower(x):
        x = np.asarray(x, float)
        left = lower_piece(beta_l, gam_l, np.minimum(x, m))
        right = np.where(x > m, piece_mass(beta_r, gam_r, m, np.maximum(x, m)), 0.0)
        return left + right

    def upper(x):
        x = np.asarray(x, float)
        right = upper_piece(beta_r, gam_r, np.maximum(x, m))
        left = np.where(x < m, piece_mass(beta_l, gam_l, np.minimum(x, m), m), 0.0)
        return left + right

    def quantile(cdf, dens, decreasing):
        def q(c):
            c = np.asarray(c, float)
            lo = np.full_like(c, mode - 40.0)
            hi = np.full_like(c, mode + 40.0)
            if decreasing:
                return invert_monotone_array(lambda x: -cdf(x), lambda x: dens(x), -c, lo, hi)
            return invert_monotone_array(cdf, dens, c, lo, hi)
        return q

    d = Density1D(
        "slc", (a, b, c, m), Interval(-_INF, _INF), func, peak, mode,
        lambda lo, hi: _in([mode, m], lo, hi), window,
        even=(b == 0.0 and (c == 0.0 or m == 0.0)), mass=1.0, scale=0.5,
        power_tail=_log_concave_tail(func, logderiv),
        lower=lower, upper=upper,
        q_lower=quantile(lower, func, False), q_upper=quantile(upper, func, True),
        logderiv=logderiv,
        potential=lambda x: a * np.asarray(x, float) ** 2 + b * np.asarray(x, float)
        + c * np.abs(np.asarray(x, float) - m),
    )
    return d


def _huber(c=1.0, delta=1.0) -> Density1D:
    """exp(-c H_delta(x)) times the standard Gaussian, normalised; H is the Huber loss."""
    c, delta = float(c), float(delta)
    if c < 0 or not delta > 0:
        raise BadParams("huber needs c >= 0 and delta > 0")

    def pot(x):
        ax = np.abs(np.asarray(x, float))
        return c * np.where(ax <= delta, 0.5 * ax * ax, delta * ax - 0.5 * delta * delta)

    def raw(x):
        x = np.asarray(x, float)
        return np.exp(-0.5 * x * x - pot(x))

    def dlog(x):
        x = np.asarray(x, float)
        return -x - c * np.clip(x, -delta, delta)

    crit = lambda a, b: _in([0.0, -delta, delta], a, b)
    half = integrate(raw, Interval(0.0, _INF), 1e-13, points=crit,
                     upper_tail=lambda R: _log_concave_tail(raw, dlog)(R, 1.0, 1))
    z = 2.0 * half.value

    def func(x):
        return raw(x) / z

    peak = 1.0 / z

    def window(lam):
        if lam >= peak:
            return 0.0, 0.0
        r = math.sqrt(2.0 * math.log(peak / lam)) if lam > 0 else _INF
        return -r, r

    return Density1D(
        "huber", (c, delta), Interval(-_INF, _INF), func, peak, 0.0, crit, window,
        even=True, mass=1.0, scale=0.5, power_tail=_log_concave_tail(func, dlog),
        logderiv=dlog, potential=pot, table_extent=40.0,
    )


_REGISTRY: dict[str, Callable[..., Density1D]] = {
    "gauss_pi": _gauss_pi,
    "sinc2": _sinc2,
    "exp_quartersq": _exp_quartersq,
    "bessel_kernel": _bessel_kernel,
    "discrete_ball_g": _discrete_ball_g,
    "discrete_ball_f": _discrete_ball_f,
    "indicator": _indicator,
    "normal": _normal,
    "exponential": _exponential,
    "slc": _slc,
    "huber": _huber,
}


def registered_densities() -> tuple:
    return tuple(_REGISTRY)


def named_density(name: str, *params, **kwargs) -> Density1D:
    """Build a registered density.

    Examples
    --------
    >>> named_density("discrete_ball_g", 3).mass
    0.16666666666666666
    """
    try:
        builder = _REGISTRY[name]
    except KeyError:
        raise UnknownDensity(name) from None
    try:
        return builder(*params, **kwargs)
    except TypeError as exc:
        raise BadParams(f"{name}: {exc}") from None


# ---------------------------------------------------------------- integration

def _pieces(d: Density1D, a: float, b: float) -> tuple:
    edges = np.unique(np.concatenate([[a], d.breakpoints(a, b), [b]]))
    return edges[:-1], edges[1:]


def integrate_phi(md: MeasuredDensity, phi: Callable[[np.ndarray], np.ndarray],
                  tol: float = DEFAULT_TOL, *, tail_power: float = 1.0,
                  tail_scale: float = 1.0, window: Optional[tuple] = None) -> QuadratureResult:
    """``int phi(f(x)) u(x) dx`` over the support (or over ``window``).

    On unbounded supports ``|phi(y)| <= tail_scale * y**tail_power`` must hold
    for the small values taken in the tails; the density's power-tail model
    then bounds the truncated part.
    """
    d, meas = md.density, md.measure

    def integrand(x):
        return phi(d.func(x)) * meas.u(x)

    lo, hi = d.support.lo, d.support.hi
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
        if not lo < hi:
            return QuadratureResult(0.0, 0.0)
    if math.isfinite(lo) and math.isfinite(hi):
        return integrate(integrand, Interval(lo, hi), tol, points=d.breakpoints)
    if d.power_tail is None:
        raise NonIntegrable(f"{d.name} has no tail model")

    def tail(side):
        def model(R):
            est, half = d.power_tail(R, tail_power, side)
            return tail_scale * est, tail_scale * half
        return model

    if md.symmetric and lo == -hi:
        half = integrate(integrand, Interval(0.0, _INF), 0.5 * tol, points=d.breakpoints,
                         upper_tail=tail(+1))
        return half.scaled(2.0)
    if math.isfinite(lo):
        return integrate(integrand, Interval(lo, _INF), tol, points=d.breakpoints,
                         upper_tail=tail(+1))
    split = d.mode
    right = integrate(integrand, Interval(split, _INF), 0.5 * tol, points=d.breakpoints,
                      upper_tail=tail(+1), cutoff=max(1.0, abs(split) + 1.0))
    left = integrate(integrand, Interval(-_INF, split), 0.5 * tol, points=d.breakpoints,
                     lower_tail=tail(-1), cutoff=max(1.0, abs(split) + 1.0))
    return left + right


def power_integral(md: MeasuredDensity, s: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """``int f^s u dx`` with a rigorous-ish error bound."""
    if not s > 0:
        raise BadParams("power must be positive")
    return integrate_phi(md, lambda y: y ** s, tol, tail_power=s)


# ---------------------------------------------------------------- cumulative masses

class Cumulative:
    """Mass of ``f u`` below and above a point, with quantiles.

    Closed forms are used when the density provides them; otherwise a panel
    table is built once on ``[origin, extent]`` and completed per query by a
    single Kronrod panel. Symmetric densities on the line are tabulated on
    the half-line only.
    """

    def __init__(self, md: MeasuredDensity, extent: Optional[float] = None,
                 tol: float = 1e-13):
        self.md = md
        d = md.density
        self.closed = d.lower is not None and md.measure.weight == d.weight
        self.mass = d.mass if d.mass is not None else power_integral(md, 1.0).value
        self._fu = lambda x: d.func(x) * md.measure.u(x)
        if self.closed:
            self.lo_bound, self.hi_bound = self._bounds(extent)
            return
        if md.symmetric:
            self.origin = 0.0
        elif math.isfinite(d.support.lo):
            self.origin = d.support.lo
        else:
            raise LevelSetResolutionFailure(f"no cumulative for {d.name}")
        if math.isfinite(d.support.hi):
            top = d.support.hi
        else:
            top = extent if extent is not None else d.table_extent
            if top is None:
                raise LevelSetResolutionFailure(f"{d.name} needs a table extent")
        step = d.scale
        grid = np.arange(self.origin, top, step)
        edges = np.unique(np.concatenate([grid, d.breakpoints(self.origin, top), [top]]))
        pv, _ = _adaptive_panels(self._fu, edges, tol, 400_000)
        self.edges = edges
        self.table = np.concatenate([[0.0], np.cumsum(pv)])
        beyond = 0.0
        if not math.isfinite(d.support.hi):
            # a negligible modelled tail is used as is; otherwise the known mass fixes it
            model = d.power_tail(top, 1.0, 1)[0] if d.power_tail is not None \
                and md.measure.weight == d.weight else None
            side_mass = 0.5 * self.mass if md.symmetric else self.mass
            if model is not None and model < 1e-14 * self.mass:
                beyond = model
            elif d.mass is not None:
                beyond = max(side_mass - self.table[-1], 0.0)
            elif model is not None:
                beyond = model
        # masses above each edge, summed from the top so far tails keep relative accuracy
        self.rtable = np.concatenate([np.cumsum(pv[::-1])[::-1], [0.0]]) + beyond
        self.lo_bound = -top if md.symmetric else self.origin
        self.hi_bound = top

    def _bounds(self, extent):
        s = self.md.density.support
        lo = s.lo if math.isfinite(s.lo) else -(extent or 60.0)
        hi = s.hi if math.isfinite(s.hi) else (extent or 60.0)
        return lo, hi

    def _partial(self, x):
        # mass of [origin, x] for origin <= x <= top
        x = np.asarray(x, float)
        flat = x.ravel()
        i = np.clip(np.searchsorted(self.edges, flat, side="right") - 1, 0, len(self.edges) - 2)
        add, _ = gk21(self._fu, self.edges[i], flat) if flat.size else (np.empty(0), None)
        return (self.table[i] + add).reshape(x.shape)

    def _tail(self, x):
        # mass of [x, top] plus the modelled mass beyond, for origin <= x <= top
        x = np.asarray(x, float)
        flat = x.ravel()
        i = np.clip(np.searchsorted(self.edges, flat, side="right") - 1, 0, len(self.edges) - 2)
        add, _ = gk21(self._fu, flat, self.edges[i + 1]) if flat.size else (np.empty(0), None)
        return (self.rtable[i + 1] + add).reshape(x.shape)

    def _q_tail(self, u):
        # point x >= origin with tail mass u above it
        u = np.asarray(u, float)
        if np.any(u > self.rtable[0] * (1 + 1e-12)):
            raise TargetOutOfRange("mass beyond the tabulated range")
        r = self.rtable[::-1]
        j = np.searchsorted(r, u, side="left")
        i = np.clip(len(r) - 1 - j, 0, len(self.edges) - 2)
        return invert_monotone_array(lambda x: -self._tail(x), self._fu, -u,
                                     self.edges[i], self.edges[i + 1])

    def _check_range(self, x):
        if np.any(x > self.hi_bound * (1 + 1e-12) + 1e-300) or np.any(x < self.lo_bound - 1e-12 * abs(self.lo_bound)):
            raise TargetOutOfRange("point outside the tabulated range")

    def lower(self, x):
        d = self.md.density
        x = np.asarray(x, float)
        if self.closed:
            return np.asarray(d.lower(x), float)
        x = np.clip(x, d.support.lo, d.support.hi)
        self._check_range(x)
        if self.md.symmetric:
            ax = np.abs(x)
            return np.where(x >= 0, 0.5 * self.mass + self._partial(ax), self._tail(ax))
        return self._partial(np.maximum(x, self.origin))

    def upper(self, x):
        d = self.md.density
        x = np.asarray(x, float)
        if self.closed:
            return np.asarray(d.upper(x), float)
        x = np.clip(x, d.support.lo, d.support.hi)
        self._check_range(x)
        if self.md.symmetric:
            ax = np.abs(x)
            return np.where(x >= 0, self._tail(ax), 0.5 * self.mass + self._partial(ax))
        return self._tail(np.maximum(x, self.origin))

    def _bracket(self, c):
        if self.closed:
            return np.full_like(c, self.lo_bound), np.full_like(c, self.hi_bound)
        # table panel holding the requested mass
        i = np.clip(np.searchsorted(self.table, c, side="right") - 1, 0, len(self.edges) - 2)
        return self.edges[i], self.edges[i + 1]

    def q_lower(self, c):
        """Smallest ``x`` with mass ``c`` below it."""
        d = self.md.density
        c = np.asarray(c, float)
        if self.closed and d.q_lower is not None:
            return np.asarray(d.q_lower(c), float)
        if not self.closed and self.md.symmetric:
            half = 0.5 * self.mass
            below = c < half
            left = -self._q_tail(np.where(below, c, half))
            right = self._q_half(np.where(below, 0.0, c - half))
            return np.where(below, left, right)
        lo, hi = self._bracket(c)
        return invert_monotone_array(self.lower, self._fu, c, lo, hi)

    def q_upper(self, u):
        """Point with mass ``u`` above it."""
        d = self.md.density
        u = np.asarray(u, float)
        if self.closed and d.q_upper is not None:
            return np.asarray(d.q_upper(u), float)
        if not self.closed:
            if not self.md.symmetric:
                return self._q_tail(u)
            half = 0.5 * self.mass
            above = u <= half
            right = self._q_tail(np.where(above, u, half))
            left = -self._q_half(np.where(above, 0.0, u - half))
            return np.where(above, right, left)
        lo, hi = self._bracket(self.mass - u)
        return invert_monotone_array(lambda x: -self.upper(x), self._fu, -u, lo, hi)

    def _q_half(self, h):
        if np.any(h > self.table[-1] * (1 + 1e-12)):
            raise TargetOutOfRange("mass beyond the tabulated range")
        i = np.clip(np.searchsorted(self.table, h, side="right") - 1, 0, len(self.edges) - 2)
        return invert_monotone_array(self._partial, self._fu, h, self.edges[i], self.edges[i + 1])


# ---------------------------------------------------------------- level sets

def _superlevel_pieces(d: Density1D, lam: np.ndarray, a: np.ndarray, b: np.ndarray):
    """For each level (rows) and monotone piece (columns) the sub-interval where f > lam."""
    fa, fb = d.func(a), d.func(b)
    L = lam[:, None]
    inc = fb >= fa
    above_a = fa[None, :] > L
    above_b = fb[None, :] > L
    lo = np.broadcast_to(a, (len(lam), len(a))).copy()
    hi = np.broadcast_to(b, (len(lam), len(a))).copy()
    none = ~above_a & ~above_b
    part = above_a ^ above_b
    if part.any():
        rows, cols = np.nonzero(part)
        lv = lam[rows]
        pa, pb = a[cols], b[cols]
        # crossing of f - lam inside the piece, with f - lam of opposite signs at ends
        h = lambda x, lv=lv: d.func(x) - lv
        ha = h(pa)
        hb = h(pb)
        if np.any(ha * hb > 0):
            raise LevelSetResolutionFailure(f"{d.name}: piece is not monotone")
        # treat f == lam at an endpoint as outside the superlevel set
        x = _bisect_pairs(d.func, lv, pa, pb)
        up = inc[cols]
        lo[rows[up], cols[up]] = x[up]
        hi[rows[~up], cols[~up]] = x[~up]
    lo[none] = 0.0
    hi[none] = 0.0
    return lo, hi


def _bisect_pairs(func, lv, a, b, iters: int = 200):
    """Crossings of ``func = lv`` on bracketing pairs ``(a, b)``.

    Illinois regula falsi with a bisection step every fourth evaluation, so the
    bracket is guaranteed to shrink geometrically.
    """
    a = a.copy()
    b = b.copy()
    fa = func(a) - lv
    fb = func(b) - lv
    side = np.zeros(a.shape, dtype=np.int8)
    # sign on the a side is fixed by the bracket; an exact zero at a takes the opposite of b
    neg_a = np.where(fa != 0, np.signbit(fa), ~np.signbit(fb))
    for it in range(iters):
        live = (b - a) > 2.0 * EPS * np.maximum(np.abs(a), np.abs(b))
        if not live.any():
            break
        mid = 0.5 * (a + b)
        secant = it % 4 != 3
        if secant:
            with np.errstate(divide="ignore", invalid="ignore"):
                m = (a * fb - b * fa) / (fb - fa)
            m = np.where(np.isfinite(m) & (m > a) & (m < b), m, mid)
        else:
            m = mid
        m = np.where(live, m, a)
        fm = func(m) - lv
        hit = live & (fm == 0)
        left = np.signbit(fm) == neg_a
        move_a = live & left & ~hit
        move_b = live & ~left & ~hit
        if secant:
            # Illinois: the endpoint kept twice in a row gets its value halved
            fb = np.where(move_a & (side == 1), 0.5 * fb, fb)
            fa = np.where(move_b & (side == -1), 0.5 * fa, fa)
            side = np.where(move_a, 1, np.where(move_b, -1, side)).astype(np.int8)
        else:
            side[:] = 0
        a = np.where(move_a | hit, m, a)
        fa = np.where(move_a, fm, fa)
        b = np.where(move_b | hit, m, b)
        fb = np.where(move_b, fm, fb)
    return 0.5 * (a + b)


def level_set(md: MeasuredDensity, lam: float) -> tuple:
    """Disjoint intervals ``(a_i, b_i)`` whose union is ``{f > lam}`` up to endpoints."""
    d = md.density
    if lam >= d.sup:
        return np.empty(0), np.empty(0)
    if not lam > 0:
        raise BadParams("level must be positive")
    wa, wb = d.window(lam)
    wa, wb = max(wa, d.support.lo), min(wb, d.support.hi)
    if not wa < wb:
        return np.empty(0), np.empty(0)
    a, b = _pieces(d, wa, wb)
    lo, hi = _superlevel_pieces(d, np.array([float(lam)]), a, b)
    lo, hi = lo[0], hi[0]
    keep = hi > lo
    return lo[keep], hi[keep]


@dataclass(frozen=True)
class DistributionFunction:
    """``lam -> mu{x : f(x) > lam}`` for a measured density."""

    md: MeasuredDensity

    @property
    def density(self) -> Density1D:
        return self.md.density

    @property
    def measure(self) -> WeightedMeasure:
        return self.md.measure

    def __call__(self, lam):
        arr = np.asarray(lam, dtype=float)
        out = self._eval(np.atleast_1d(arr).ravel())
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def _eval(self, lam: np.ndarray, chunk: int = 4096) -> np.ndarray:
        d, meas = self.md.density, self.md.measure
        out = np.zeros_like(lam)
        nonpos = lam <= 0
        if nonpos.any():
            zero_set = meas.measure(d.support.lo, d.support.hi)
            out[nonpos] = zero_set
        work = np.flatnonzero((lam > 0) & (lam < d.sup))
        if not len(work):
            return out
        sym = self.md.symmetric
        for start in range(0, len(work), chunk):
            idx = work[start:start + chunk]
            lv = lam[idx]
            wa, wb = d.window(float(lv.min()))
            wa, wb = max(wa, d.support.lo), min(wb, d.support.hi)
            if sym:
                wa = 0.0
            if not wa < wb:
                continue
            a, b = _pieces(d, wa, wb)
            lo, hi = _superlevel_pieces(d, lv, a, b)
            m = meas.measure(lo, hi).sum(axis=1)
            out[idx] = 2.0 * m if sym else m
        return out

    def critical_values(self, lam_min: float) -> np.ndarray:
        """Values of the density at its critical points above ``lam_min``."""
        d = self.md.density
        wa, wb = d.window(lam_min)
        wa, wb = max(wa, d.support.lo), min(wb, d.support.hi)
        if not wa < wb:
            return np.array([d.sup])
        pts = np.concatenate([[wa, wb], d.breakpoints(wa, wb)])
        v = d.func(pts)
        return np.unique(np.concatenate([v[v > lam_min], [d.sup]]))


def distribution_function(d: Density1D, m: Optional[WeightedMeasure] = None) -> DistributionFunction:
    return DistributionFunction(measured(d, m))


# ---------------------------------------------------------------- certificates

def hockey_stick_integral(md: MeasuredDensity, t: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """``int [f - t]^+ u dx``."""
    d, meas = md.density, md.measure
    if t <= 0:
        base = power_integral(md, 1.0, tol) if d.mass is None or meas.weight != d.weight \
            else QuadratureResult(d.mass, 0.0)
        if t == 0:
            return base
        total = meas.measure(d.support.lo, d.support.hi)
        if not math.isfinite(total):
            raise NonIntegrable("[f - t]^+ with t < 0 on an infinite measure")
        return base + QuadratureResult(-t * float(total), 0.0)
    if t >= d.sup:
        return QuadratureResult(0.0, 0.0)
    lo, hi = level_set(md, t)
    if md.symmetric:
        keep = hi > 0
        lo, hi = np.maximum(lo[keep], 0.0), hi[keep]
    if not len(lo):
        return QuadratureResult(0.0, 0.0)

    def integrand(x):
        return np.maximum(d.func(x) - t, 0.0) * meas.u(x)

    a, b = float(lo.min()), float(hi.max())
    pts = np.concatenate([lo, hi])
    res = integrate(integrand, Interval(a, b), tol / (2.0 if md.symmetric else 1.0),
                    points=lambda p, q: np.concatenate([pts, d.breakpoints(p, q)]))
    return res.scaled(2.0) if md.symmetric else res


def hockey_stick_gap(f: MeasuredDensity, g: MeasuredDensity, t: float,
                     tol: float = DEFAULT_TOL) -> QuadratureResult:
    """``int [f - t]^+ dnu - int [g - t]^+ dmu`` with its error bound."""
    return hockey_stick_integral(f, t, tol / 2) - hockey_stick_integral(g, t, tol / 2)


def tail_integral_gap(f: MeasuredDensity, g: MeasuredDensity, t: float,
                      tol: float = 1e-9) -> QuadratureResult:
    """``int_t^inf (F(lam) - G(lam)) dlam`` from the two distribution functions.

    This is the same quantity as :func:`hockey_stick_gap` for ``t > 0``,
    obtained through level sets instead of the densities themselves.
    """
    if not t > 0:
        raise BadParams("tail integral needs t > 0")
    F, G = DistributionFunction(f), DistributionFunction(g)
    top = max(f.density.sup, g.density.sup)
    if t >= top:
        return QuadratureResult(0.0, 0.0)
    pts = np.concatenate([F.critical_values(t), G.critical_values(t)])

    def integrand(lam):
        return F._eval(lam) - G._eval(lam)

    return integrate(integrand, Interval(t, top), tol, points=pts)


@dataclass(frozen=True)
class CrossingReport:
    """Outcome of a sign-change scan of ``F - G``.

    ``status`` is one of ``single``, ``no_crossing``, ``identical``,
    ``wrong_direction`` or ``multiple``.
    """

    status: str
    crossing: Optional[float]
    sign_pattern: str
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @property
    def single(self) -> bool:
        return self.status == "single"


def single_crossing(F: DistributionFunction, G: DistributionFunction, lam_grid,
                    tol: float = 1e-12) -> CrossingReport:
    """Locate the unique ``-`` to ``+`` sign change of ``F - G`` on a positive grid."""
    lam = np.asarray(lam_grid, dtype=float)
    if lam.ndim != 1 or len(lam) < 2 or np.any(lam <= 0) or np.any(np.diff(lam) <= 0):
        raise BadParams("grid must be strictly increasing and positive")
    vals = F(lam) - G(lam)
    scale = np.maximum(np.abs(F(lam)), np.abs(G(lam)))
    sg = np.where(np.abs(vals) <= tol * np.maximum(scale, 1.0), 0, np.sign(vals)).astype(int)
    nz = sg[sg != 0]
    runs = [int(nz[0])] if len(nz) else []
    for s in nz[1:]:
        if s != runs[-1]:
            runs.append(int(s))
    pattern = "".join("+" if s > 0 else "-" for s in runs) or "0"
    if not runs:
        return CrossingReport("identical", None, pattern, lam, vals)
    if len(runs) == 1:
        return CrossingReport("no_crossing", None, pattern, lam, vals)
    if runs == [-1, 1]:
        i_neg = np.flatnonzero(sg < 0)[-1]
        i_pos = np.flatnonzero(sg > 0)[0]
        a, b = lam[i_neg], lam[i_pos]
        for _ in range(200):
            mid = 0.5 * (a + b)
            if not a < mid < b:
                break
            if F(mid) - G(mid) < 0:
                a = mid
            else:
                b = mid
        return CrossingReport("single", 0.5 * (a + b), pattern, lam, vals)
    status = "wrong_direction" if runs == [1, -1] else "multiple"
    return CrossingReport(status, None, pattern, lam, vals)


def np_phi(f: MeasuredDensity, g: MeasuredDensity, lam_o: float, s: float,
           tol: float = DEFAULT_TOL) -> QuadratureResult:
    """``(1 / (s lam_o^s)) int (f^s - g^s) dmu`` with its error bound."""
    if not (lam_o > 0 and s > 0):
        raise BadParams("need lam_o > 0 and s > 0")
    diff = power_integral(f, s, tol / 2) - power_integral(g, s, tol / 2)
    return diff.scaled(1.0 / (s * lam_o ** s))
