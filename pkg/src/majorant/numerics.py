"""Adaptive quadrature with error bounds and guarded monotone inversion.

Everything above this module reduces to two primitives: integrating a
(vectorized) integrand over an interval of the extended real line, and
inverting a monotone function on a bracket. Both are deterministic.

Integrands are called with 1-D float arrays and must return arrays of the
same shape. Improper endpoints require a *tail model*: a callable ``R ->
bound`` returning either a majorant of the absolute tail integral, or a pair
``(estimate, halfwidth)`` bracketing the tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import InvalidInterval, NonConvergence, NonMonotoneDetected, TargetOutOfRange

DEFAULT_TOL = 1e-10
EPS = np.finfo(float).eps

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077622524459880, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
])
_WGK0 = 0.149445554002916905664936468389821
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK, [0.0], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK, [_WGK0], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]

Integrand = Callable[[np.ndarray], np.ndarray]
TailModel = Callable[[float], Union[float, tuple]]


@dataclass(frozen=True)
class Interval:
    """Interval of the extended real line; ``lo`` and ``hi`` may be infinite."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise InvalidInterval(f"need lo < hi, got [{self.lo}, {self.hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (x >= self.lo) & (x <= self.hi)


@dataclass(frozen=True)
class QuadratureResult:
    """``value`` is the midpoint of ``[value - error_bound, value + error_bound]``."""

    value: float
    error_bound: float
    subdivisions: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "error_bound", float(self.error_bound))
        object.__setattr__(self, "subdivisions", int(self.subdivisions))

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(self.value + other.value,
                                self.error_bound + other.error_bound,
                                self.subdivisions + other.subdivisions)

    def __sub__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(self.value - other.value,
                                self.error_bound + other.error_bound,
                                self.subdivisions + other.subdivisions)

    def scaled(self, c: float) -> "QuadratureResult":
        return QuadratureResult(c * self.value, abs(c) * self.error_bound, self.subdivisions)

    @property
    def bracket(self) -> tuple:
        return (self.value - self.error_bound, self.value + self.error_bound)


def _tail_bracket(model: TailModel, r: float) -> tuple:
    out = model(r)
    if isinstance(out, tuple):
        est, half = out
        return float(est), abs(float(half))
    bound = abs(float(out))
    # a bare majorant brackets the tail in [-bound, bound]
    return 0.0, bound


def _as_vectorized(f: Integrand, vectorized: bool) -> Integrand:
    if vectorized:
        return f
    vf = np.vectorize(f, otypes=[float])
    return lambda x: vf(x)


def gk21(f: Integrand, a: np.ndarray, b: np.ndarray):
    """Apply the 21-point Kronrod rule on every panel ``[a_i, b_i]`` at once.

    Returns ``(values, errors)``. The error is ``|K21 - G10|`` floored by a
    roundoff term, the usual conservative estimate for this pair.
    """
    k, err, _ = _gk21_floor(f, a, b)
    return k, err


def _gk21_floor(f: Integrand, a, b):
    # also reports which panels sit at the roundoff floor (splitting cannot help)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise ValueError(f"integrand is not finite at x={bad!r}")
    k = h * (y @ KRONROD_WEIGHTS)
    g = h * (y @ GAUSS_WEIGHTS)
    resabs = np.abs(h) * (np.abs(y) @ KRONROD_WEIGHTS)
    floor = 50.0 * EPS * resabs
    diff = np.abs(k - g)
    return k, np.maximum(diff, floor), diff <= floor


def _breakpoints(points, a: float, b: float) -> np.ndarray:
    if points is None:
        pts = np.empty(0)
    elif callable(points):
        pts = np.asarray(points(a, b), dtype=float).ravel()
    else:
        pts = np.asarray(list(points), dtype=float)
    pts = pts[(pts > a) & (pts < b)]
    return np.unique(np.concatenate([[a], pts, [b]]))


def _adaptive_finite(f: Integrand, edges: np.ndarray, tol: float,
                     max_subdivisions: int) -> QuadratureResult:
    a, b = edges[:-1], edges[1:]
    vals, errs = gk21(f, a, b)
    nsub = len(a)
    while True:
        total = float(np.sum(errs))
        if total <= tol:
            break
        if len(a) >= max_subdivisions:
            raise NonConvergence(
                f"error {total:.3e} above tol {tol:.3e} after {len(a)} panels")
        width = b - a
        splittable = width > 64.0 * EPS * np.maximum(np.abs(a), np.abs(b))
        split = (errs > tol / len(errs)) & splittable
        if not split.any():
            # only roundoff-limited panels remain
            raise NonConvergence(
                f"error {total:.3e} above tol {tol:.3e}; panels cannot be refined further")
        sa, sb = a[split], b[split]
        mid = 0.5 * (sa + sb)
        na = np.concatenate([sa, mid])
        nb = np.concatenate([mid, sb])
        nv, ne = gk21(f, na, nb)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
        nsub += len(na)
    return QuadratureResult(math.fsum(vals), float(np.sum(errs)), nsub)


def _choose_cutoff(model: TailModel, start: float, budget: float, max_cutoff: float):
    r = max(start, 1.0)
    while True:
        est, half = _tail_bracket(model, r)
        if half <= budget:
            return r, est, half
        if r >= max_cutoff:
            raise NonConvergence(
                f"tail bound {half:.3e} still above {budget:.3e} at cutoff {r:g}")
        r = min(2.0 * r, max_cutoff)


def integrate(f: Integrand, iv: Interval, tol: float = DEFAULT_TOL, *,
              points=None,
              upper_tail: Optional[TailModel] = None,
              lower_tail: Optional[TailModel] = None,
              cutoff: Optional[float] = None,
              max_cutoff: float = 2.0 ** 40,
              max_subdivisions: int = 400_000,
              vectorized: bool = True) -> QuadratureResult:
    """Integrate ``f`` over ``iv`` to absolute accuracy ``tol``.

    Parameters
    ----------
    f : callable
        Integrand, evaluated on 1-D arrays (set ``vectorized=False`` for a
        scalar function).
    iv : Interval
        Domain. An infinite endpoint needs the matching tail model:
        ``upper_tail(R)`` bounds ``int_R^inf f`` and ``lower_tail(R)`` bounds
        ``int_-inf^-R f``. The truncation point is doubled from ``cutoff``
        until the tail halfwidth drops below ``tol / 4``.
    points : iterable or callable, optional
        Breakpoints (kinks, zeros, peaks). A callable receives the finite
        integration window ``(a, b)``.

    Returns
    -------
    QuadratureResult
        ``error_bound`` combines the summed panel estimates and the tail
        halfwidths; it is at most ``tol`` on success.
    """
    if not isinstance(iv, Interval):
        iv = Interval(*iv)
    if not tol > 0:
        raise ValueError("tol must be positive")
    f = _as_vectorized(f, vectorized)
    lo, hi = iv.lo, iv.hi
    tail_est, tail_half = 0.0, 0.0
    if math.isinf(hi):
        if upper_tail is None:
            raise InvalidInterval("infinite upper endpoint needs an upper_tail model")
        start = cutoff if cutoff is not None else (lo + 1.0 if math.isfinite(lo) else 1.0)
        hi, e, hw = _choose_cutoff(upper_tail, start, tol / 4, max_cutoff)
        tail_est += e
        tail_half += hw
    if math.isinf(lo):
        if lower_tail is None:
            raise InvalidInterval("infinite lower endpoint needs a lower_tail model")
        start = cutoff if cutoff is not None else (-hi + 1.0 if math.isfinite(iv.hi) else 1.0)
        r, e, hw = _choose_cutoff(lower_tail, start, tol / 4, max_cutoff)
        lo = -r
        tail_est += e
        tail_half += hw
    if not lo < hi:
        raise InvalidInterval(f"truncated window [{lo}, {hi}] is empty")
    edges = _breakpoints(points, lo, hi)
    core = _adaptive_finite(f, edges, tol - tail_half, max_subdivisions)
    return QuadratureResult(core.value + tail_est, core.error_bound + tail_half,
                            core.subdivisions)


def cumulative_integrals(f: Integrand, xs: Sequence[float], start: float,
                         tol: float = DEFAULT_TOL, *, points=None,
                         max_subdivisions: int = 400_000):
    """Return ``(values, errors)`` of ``int_start^x f`` at each sorted ``x >= start``.

    All points share one panel decomposition of ``[start, max(xs)]`` (split
    at the points and at ``points``), so the cost is a single pass. Each
    panel is integrated to ``tol`` times its share of the window length.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return np.empty(0), np.empty(0)
    if np.any(np.diff(xs) < 0) or xs[0] < start:
        raise InvalidInterval("points must be sorted and not below start")
    if xs[-1] == start:
        return np.zeros(len(xs)), np.zeros(len(xs))
    edges = np.unique(np.concatenate([_breakpoints(points, start, float(xs[-1])), xs]))
    pv, pe = _adaptive_panels(f, edges, tol, max_subdivisions)
    cv = np.concatenate([[0.0], np.cumsum(pv)])
    ce = np.concatenate([[0.0], np.cumsum(pe)])
    idx = np.searchsorted(edges, xs)
    return cv[idx], ce[idx]


def _adaptive_panels(f: Integrand, edges, tol: float, max_subdivisions: int):
    """Integrate every panel of ``edges``; the total error budget is ``tol``,
    shared in proportion to panel length. Returns per-panel values/errors."""
    a0, b0 = edges[:-1], edges[1:]
    span = edges[-1] - edges[0]
    owner = np.arange(len(a0))
    a, b = a0.copy(), b0.copy()
    vals, errs, flat = _gk21_floor(f, a, b)
    done_v = np.zeros(len(a0))
    done_e = np.zeros(len(a0))
    total = len(a)
    while len(a):
        # a sub-panel is accepted once it meets its share of the panel budget
        share = tol * (b - a) / span
        ok = (errs <= share) | flat
        tiny = (b - a) <= 64.0 * EPS * np.maximum(np.abs(a), np.abs(b))
        ok |= tiny
        np.add.at(done_v, owner[ok], vals[ok])
        np.add.at(done_e, owner[ok], errs[ok])
        a, b, owner = a[~ok], b[~ok], owner[~ok]
        if not len(a):
            break
        total += 2 * len(a)
        if total > max_subdivisions:
            raise NonConvergence(f"panel budget {max_subdivisions} exhausted")
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        owner = np.concatenate([owner, owner])
        vals, errs, flat = _gk21_floor(f, a, b)
    return done_v, done_e


def bracketed_roots(h: Integrand, a, b, xtol: float = 0.0, max_iter: int = 200) -> np.ndarray:
    """Vectorized bisection for roots of ``h`` on brackets ``[a_i, b_i]``.

    Each bracket must contain a sign change (zero endpoints allowed). Runs
    until the brackets stop shrinking or reach width ``xtol``.
    """
    a = np.array(a, dtype=float, copy=True)
    b = np.array(b, dtype=float, copy=True)
    ha = np.asarray(h(a), dtype=float)
    hb = np.asarray(h(b), dtype=float)
    if np.any(ha * hb > 0):
        raise ValueError("bracket without sign change")
    sa = np.sign(ha)
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        active = (m > a) & (m < b) & ((b - a) > xtol)
        if not active.any():
            break
        hm = np.asarray(h(m), dtype=float)
        sm = np.sign(hm)
        left = (sm == 0) | (sm != sa)
        b = np.where(active & left, m, b)
        a = np.where(active & ~left, m, a)
        exact = active & (sm == 0)
        a = np.where(exact, m, a)
    return 0.5 * (a + b)


def sign_change_roots(h: Integrand, lo: float, hi: float, step: float) -> np.ndarray:
    """Roots of ``h`` on ``[lo, hi]`` found from sign changes on a grid of spacing ``step``.

    Roots closer together than ``step`` may be missed; callers pick ``step``
    below the known minimal root separation.
    """
    n = max(2, int(math.ceil((hi - lo) / step)) + 1)
    x = np.linspace(lo, hi, n)
    y = np.asarray(h(x), dtype=float)
    s = np.sign(y)
    roots = list(x[1:-1][s[1:-1] == 0])
    # consecutive nonzero samples of opposite sign
    nz = np.nonzero(s)[0]
    flip = nz[:-1][s[nz[:-1]] * s[nz[1:]] < 0]
    nxt = nz[1:][s[nz[:-1]] * s[nz[1:]] < 0]
    if len(flip):
        roots.extend(bracketed_roots(h, x[flip], x[nxt]))
    return np.unique(np.asarray(roots, dtype=float))


def invert_monotone(F: Callable[[float], float], target: float, bracket,
                    tol: float = 1e-12, *, derivative: Optional[Callable[[float], float]] = None,
                    max_iter: int = 400) -> float:
    """Solve ``F(x) = target`` for a strictly increasing, continuous ``F``.

    Newton (when ``derivative`` is given) or regula falsi steps are accepted
    only while they stay inside the current bracket and halve it every two
    iterations; otherwise the step is a bisection, so the bracket always
    shrinks. Returns as soon as ``|F(x) - target| <= tol``. If the bracket
    collapses to adjacent floats first, the endpoint with the smaller
    residual is returned.
    """
    if not isinstance(bracket, Interval):
        bracket = Interval(*bracket)
    a, b = bracket.lo, bracket.hi
    if not bracket.finite:
        raise TargetOutOfRange("bracket must be finite")
    fa, fb = float(F(a)), float(F(b))
    if fa > fb:
        raise NonMonotoneDetected(f"F(lo)={fa} > F(hi)={fb}")
    if target < fa - tol or target > fb + tol:
        raise TargetOutOfRange(f"target {target} outside [{fa}, {fb}]")
    if abs(fa - target) <= tol:
        return a
    if abs(fb - target) <= tol:
        return b
    x, fx = (a, fa) if abs(fa - target) < abs(fb - target) else (b, fb)
    width = b - a
    for it in range(max_iter):
        cand = None
        if derivative is not None:
            d = float(derivative(x))
            if d > 0 and math.isfinite(d):
                cand = x - (fx - target) / d
        elif fb > fa:
            cand = a + (target - fa) * (b - a) / (fb - fa)
        if it % 2 == 1:
            # force a bisection unless the last two steps halved the bracket
            if (b - a) > 0.5 * width:
                cand = None
            width = b - a
        if cand is None or not (a < cand < b):
            cand = 0.5 * (a + b)
            if not (a < cand < b):
                break
        fc = float(F(cand))
        if fc < fa or fc > fb:
            raise NonMonotoneDetected(f"F({cand})={fc} outside [{fa}, {fb}]")
        x, fx = cand, fc
        if abs(fc - target) <= tol:
            return cand
        if fc < target:
            a, fa = cand, fc
        else:
            b, fb = cand, fc
    return a if abs(fa - target) <= abs(fb - target) else b


def invert_monotone_array(F: Integrand, dF: Integrand, targets, lo, hi,
                          max_iter: int = 200) -> np.ndarray:
    """Vectorized ``F(x) = target`` for increasing ``F`` on brackets ``[lo_i, hi_i]``.

    Newton steps from ``dF`` are taken when they stay inside the
    current bracket, otherwise the bracket is bisected. Iteration stops at
    float resolution. Targets outside ``[F(lo), F(hi)]`` converge to the
    nearer endpoint; callers check the range beforehand.
    """
    t = np.asarray(targets, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), t.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), t.shape).copy()
    if np.any(lo > hi):
        raise InvalidInterval("every bracket needs lo <= hi")
    x = 0.5 * (lo + hi)
    active = np.ones(t.shape, dtype=bool)
    for _ in range(max_iter):
        xa = x[active]
        r = np.asarray(F(xa), dtype=float) - t[active]
        la = np.where(r < 0, xa, lo[active])
        ha = np.where(r > 0, xa, hi[active])
        d = np.asarray(dF(xa), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = xa - r / d
        bad = ~np.isfinite(cand) | (cand < la) | (cand > ha)
        cand = np.where(bad, 0.5 * (la + ha), cand)
        cand = np.where(r == 0, xa, cand)
        tiny = 2.0 * EPS * np.maximum(np.abs(cand), 1e-300)
        done = (r == 0) | (np.abs(cand - xa) <= tiny) | ((ha - la) <= tiny)
        lo[active], hi[active], x[active] = la, ha, cand
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
    return x
