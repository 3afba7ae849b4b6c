"""Monotone transport maps between weighted densities on the line.

The map ``T = F^{-1} o G`` pushes ``g mu`` forward to ``f nu``, where ``G`` and
``F`` are the cumulative masses of source and target. Its derivative comes
from the weighted Monge-Ampere identity ``g u = f(T) v(T) T'``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import BadParams, DegenerateCumulative, DerivativeUndefined, MassMismatch
from .measures import (Cumulative, Density1D, MeasuredDensity, WeightedMeasure, measured,
                       power_integral)
from .numerics import Interval, QuadratureResult, integrate

__all__ = [
    "TransportMap1D",
    "ContractionReport",
    "PushforwardReport",
    "ChainReport",
    "CRITERIA",
    "MASS_TOL",
    "build_transport",
    "ma_residual",
    "contraction_report",
    "pushforward_check",
    "holder_chain",
    "tau_corollary",
]

MASS_TOL = 1e-10
CRITERIA = ("Tprime_le_1", "TTprime_le_x", "factor_bounds")
_TINY = 1e-300
_GRID_POINTS = 4096


def _as_measured(d, m) -> MeasuredDensity:
    if isinstance(d, MeasuredDensity):
        if m is not None and m != d.measure:
            raise BadParams("conflicting measures")
        return d
    return measured(d, m)


@dataclass(frozen=True)
class TransportMap1D:
    """Non-decreasing map carrying ``g mu`` onto ``f nu``.

    Even densities on symmetric supports (Lebesgue weight on both sides) are
    transported on ``[0, inf)`` and extended as an odd map.
    """

    source: MeasuredDensity
    target: MeasuredDensity
    cum_source: Cumulative = field(repr=False)
    cum_target: Cumulative = field(repr=False)

    @property
    def odd(self) -> bool:
        return self.source.symmetric and self.target.symmetric

    def __call__(self, x):
        return self.eval(x)

    def _clip(self, x):
        s = self.source.density.support
        return np.clip(x, s.lo, s.hi)

    def eval(self, x):
        """``T(x)``; points outside the source support map to its endpoints."""
        arr = np.asarray(x, dtype=float)
        xs = self._clip(np.atleast_1d(arr).astype(float))
        G, F = self.cum_source, self.cum_target
        if self.odd:
            ax = np.abs(xs)
            u = np.clip(G.upper(ax), 0.0, 0.5 * F.mass)
            out = np.full_like(xs, self.target.density.support.hi)
            # an underflowed tail mass maps to the end of the target support
            pos = u > 0
            out[pos] = np.maximum(F.q_upper(u[pos]), 0.0)
            out = np.sign(xs) * out
        else:
            out = np.empty_like(xs)
            c = np.clip(G.lower(xs), 0.0, F.mass)
            u = np.clip(G.upper(xs), 0.0, F.mass)
            # invert from whichever side carries the smaller mass
            low = c <= u
            t = self.target.density.support
            out[low & (c == 0)] = t.lo
            out[~low & (u == 0)] = t.hi
            low_in, high_in = low & (c > 0), ~low & (u > 0)
            if low_in.any():
                out[low_in] = F.q_lower(c[low_in])
            if high_in.any():
                out[high_in] = F.q_upper(u[high_in])
            out = np.clip(out, t.lo, t.hi)
        return float(out[0]) if arr.ndim == 0 else out

    def deriv(self, x):
        """``T'(x) = g u / (f(T) v(T))``; zero where ``g`` vanishes.

        Returns ``inf`` where ``f(T) v(T)`` underflows while ``g u`` does not.
        """
        arr = np.asarray(x, dtype=float)
        xs = self._clip(np.atleast_1d(arr).astype(float))
        out = self._ratio(xs)
        # u(x) = v(T(x)) = 0 at a weighted origin: take the one-sided limit
        both0 = np.isnan(out)
        if both0.any():
            h = 1e-7 * self.source.density.scale
            out[both0] = self._ratio(xs[both0] + h)
        return float(out[0]) if arr.ndim == 0 else out

    def _ratio(self, xs):
        g, f = self.source, self.target
        num = g.density.func(xs) * g.measure.u(xs)
        t = self.eval(xs)
        den = f.density.func(t) * f.measure.u(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = num / den
        r = np.where(num == 0, np.where(den == 0, np.nan, 0.0), r)
        g0 = g.density.func(xs) == 0
        r = np.where(g0, 0.0, r)
        return np.where((den < _TINY) & (num > 0), np.inf, r)

    def inverse(self) -> "TransportMap1D":
        """The map in the opposite direction, built by swapping roles."""
        return TransportMap1D(self.target, self.source, self.cum_target, self.cum_source)


def _check_not_degenerate(md: MeasuredDensity, cum: Cumulative):
    d = md.density
    if not d.sup > 0:
        raise DegenerateCumulative(f"{d.name} vanishes identically")
    lo = d.support.lo if math.isfinite(d.support.lo) else cum.lo_bound
    hi = d.support.hi if math.isfinite(d.support.hi) else cum.hi_bound
    xs = np.linspace(lo, hi, 2049)[1:-1]
    zero = d.func(xs) * md.measure.u(xs) == 0
    pos = np.flatnonzero(~zero)
    if pos.size == 0:
        raise DegenerateCumulative(f"{d.name} vanishes on the sampled support")
    # underflow in the tails is fine, and so are isolated zeros;
    # a flat stretch of three samples between positive values is not
    zero = zero[pos[0]:pos[-1] + 1]
    xs = xs[pos[0]:pos[-1] + 1]
    run = zero[:-2] & zero[1:-1] & zero[2:]
    if run.any():
        i = int(np.argmax(run))
        raise DegenerateCumulative(f"{d.name} vanishes near x = {xs[i + 1]!r}")


def build_transport(g: Union[Density1D, MeasuredDensity], mu: Optional[WeightedMeasure],
                    f: Union[Density1D, MeasuredDensity], nu: Optional[WeightedMeasure],
                    *, extent: Optional[float] = None) -> TransportMap1D:
    """Monotone map from ``g mu`` to ``f nu``.

    Parameters
    ----------
    g, f : Density1D or MeasuredDensity
        Source and target. A plain density is paired with ``mu``/``nu``, or
        with its intended measure when that is ``None``.
    extent : float, optional
        Range of the cumulative tables for unbounded supports.

    Raises
    ------
    MassMismatch
        Total masses differ by more than ``MASS_TOL``.
    DegenerateCumulative
        A density vanishes on an interval inside its support.
    """
    src, tgt = _as_measured(g, mu), _as_measured(f, nu)
    cs, ct = Cumulative(src, extent), Cumulative(tgt, extent)
    if abs(cs.mass - ct.mass) > MASS_TOL:
        raise MassMismatch(f"source mass {cs.mass!r} != target mass {ct.mass!r}")
    _check_not_degenerate(src, cs)
    _check_not_degenerate(tgt, ct)
    return TransportMap1D(src, tgt, cs, ct)


def ma_residual(tmap: TransportMap1D, x: float, h: Optional[float] = None) -> float:
    """``g u - f(T) v(T) T'`` with ``T'`` from centered differences of ``T``.

    Near a support endpoint the difference becomes one-sided (second order).
    """
    src, tgt = tmap.source, tmap.target
    x = float(x)
    t = tmap.eval(x)
    ft = float(tgt.density(t))
    if ft < _TINY:
        raise DerivativeUndefined(f"f(T(x)) = {ft!r} at x = {x!r}")
    if h is None:
        h = 1e-4 * src.density.scale
    s = src.density.support
    if x - h >= s.lo and x + h <= s.hi:
        dt = (tmap.eval(x + h) - tmap.eval(x - h)) / (2.0 * h)
    elif x + 2 * h <= s.hi:
        dt = (-3.0 * t + 4.0 * tmap.eval(x + h) - tmap.eval(x + 2 * h)) / (2.0 * h)
    else:
        dt = (3.0 * t - 4.0 * tmap.eval(x - h) + tmap.eval(x - 2 * h)) / (2.0 * h)
    lhs = float(src.density(x)) * float(src.measure.u(x))
    return lhs - ft * float(tgt.measure.u(t)) * dt


@dataclass(frozen=True)
class ContractionReport:
    """Grid extrema of a contraction quantity. A grid certificate, not a proof."""

    criterion: str
    sup_observed: float
    inf_observed: float
    worst_x: float
    grid_size: int
    passed: bool


def _default_domain(tmap: TransportMap1D) -> tuple:
    d = tmap.source.density
    lo = 0.0 if (tmap.odd or d.weight == "linear") else d.support.lo
    if not math.isfinite(lo):
        lo = tmap.cum_source.lo_bound
    hi = d.support.hi if math.isfinite(d.support.hi) else tmap.cum_source.hi_bound
    return lo, hi


def _quantity(tmap: TransportMap1D, criterion: str, xs: np.ndarray) -> np.ndarray:
    if criterion == "Tprime_le_1":
        return tmap.deriv(xs)
    if criterion == "TTprime_le_x":
        # T T' / x = g u / (x f(T) v(T)) * T
        return tmap.eval(xs) * tmap.deriv(xs) / xs
    # u / (v(T) |T'|) = f(T) / g
    g = tmap.source.density.func(xs)
    ft = tmap.target.density.func(tmap.eval(xs))
    with np.errstate(divide="ignore"):
        return np.where(g > 0, ft / np.where(g > 0, g, 1.0), np.inf)


def contraction_report(tmap: TransportMap1D, criterion: str,
                       grid: Union[None, tuple, Sequence[float]] = None, *,
                       slack: float = 1e-9, refine_rounds: int = 3) -> ContractionReport:
    """Check a contraction inequality for ``T`` on a grid.

    Criteria
    --------
    ``Tprime_le_1``
        ``T' <= 1``.
    ``TTprime_le_x``
        ``T T' / x <= 1`` on ``x > 0`` (points at 0 are dropped).
    ``factor_bounds``
        ``A' = inf u / (v(T) T')`` and ``A = sup`` of the same ratio; passes
        when ``A' >= 1``, the contraction condition in factor form.

    ``grid`` is an ``(a, b)`` pair (4096 uniform points), an explicit array,
    or ``None`` for the default domain. The extremum is refined four-fold
    ``refine_rounds`` times; grid points between samples are not covered.
    """
    if criterion not in CRITERIA:
        raise BadParams(f"criterion must be one of {CRITERIA}")
    if grid is None:
        grid = _default_domain(tmap)
    if isinstance(grid, tuple) and len(grid) == 2:
        xs = np.linspace(float(grid[0]), float(grid[1]), _GRID_POINTS)
    else:
        xs = np.asarray(grid, dtype=float)
    if criterion == "TTprime_le_x":
        xs = xs[xs > 0]
    xs = np.unique(xs)
    if xs.size == 0:
        raise BadParams("empty grid")
    q = _quantity(tmap, criterion, xs)
    lower_is_worse = criterion == "factor_bounds"
    for _ in range(refine_rounds if xs.size > 2 else 0):
        i = int(np.argmin(q) if lower_is_worse else np.argmax(q))
        a, b = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
        extra = np.setdiff1d(np.linspace(a, b, 9), xs)
        if criterion == "TTprime_le_x":
            extra = extra[extra > 0]
        if extra.size == 0:
            break
        xs = np.concatenate([xs, extra])
        q = np.concatenate([q, _quantity(tmap, criterion, extra)])
        order = np.argsort(xs)
        xs, q = xs[order], q[order]
    hi, lo = float(np.max(q)), float(np.min(q))
    if lower_is_worse:
        i = int(np.argmin(q))
        ok = lo >= 1.0 - slack
    else:
        i = int(np.argmax(q))
        ok = hi <= 1.0 + slack
    return ContractionReport(criterion, hi, lo, float(xs[i]), int(xs.size), bool(ok))


# ---------------------------------------------------------------- pushforward identities

def _source_window(tmap: TransportMap1D, window) -> tuple:
    if window is not None:
        return float(window[0]), float(window[1])
    d = tmap.source.density
    lo, hi = d.support.lo, d.support.hi
    lo = lo if math.isfinite(lo) else tmap.cum_source.lo_bound
    hi = hi if math.isfinite(hi) else tmap.cum_source.hi_bound
    return lo, hi


def _side_integrals(tmap: TransportMap1D, h: Callable, a: float, b: float, tol: float):
    src, tgt = tmap.source, tmap.target
    gd, fd = src.density, tgt.density

    def left(x):
        return h(tmap.eval(x)) * gd.func(x) * src.measure.u(x)

    def right(y):
        return h(y) * fd.func(y) * tgt.measure.u(y)

    ta, tb = tmap.eval(a), tmap.eval(b)
    lhs = integrate(left, Interval(a, b), tol, points=gd.breakpoints)
    rhs = integrate(right, Interval(ta, tb), tol, points=fd.breakpoints) if tb > ta \
        else QuadratureResult(0.0, 0.0)
    return lhs, rhs


@dataclass(frozen=True)
class PushforwardReport:
    """``max_h |int_W h(T) g dmu - int_T(W) h f dnu|`` over a window ``W``."""

    max_discrepancy: float
    worst: str
    window: tuple
    error_budget: float
    rows: tuple = field(repr=False)


def default_test_functions(tmap: TransportMap1D, powers: Sequence[float] = (2.0, 3.0)) -> dict:
    f = tmap.target.density.func
    out = {
        "1": lambda y: np.ones_like(y),
        "x": lambda y: y,
        "x^2": lambda y: y * y,
        "exp(-x)": lambda y: np.exp(-y),
    }
    for s in powers:
        out[f"f^{s - 1:g}"] = (lambda s: lambda y: f(y) ** (s - 1.0))(s)
    return out


def pushforward_check(tmap: TransportMap1D, tests: Optional[Mapping[str, Callable]] = None, *,
                      window: Optional[tuple] = None, tol: float = 1e-11) -> PushforwardReport:
    """Compare both sides of the change of variables for each test function.

    Both integrals run over a finite window ``W`` of the source and its image
    ``T(W)``, where the identity holds exactly; no tail model is involved.
    """
    tests = default_test_functions(tmap) if tests is None else dict(tests)
    a, b = _source_window(tmap, window)
    rows = []
    for label, h in tests.items():
        lhs, rhs = _side_integrals(tmap, h, a, b, tol)
        rows.append((label, lhs.value, rhs.value, abs(lhs.value - rhs.value),
                     lhs.error_bound + rhs.error_bound))
    i = int(np.argmax([r[3] for r in rows]))
    return PushforwardReport(rows[i][3], rows[i][0], (a, b), rows[i][4], tuple(rows))


@dataclass(frozen=True)
class ChainReport:
    """``lhs <= rhs`` with quadrature error budget."""

    name: str
    lhs: float
    rhs: float
    margin: float
    error_budget: float
    passed: bool
    details: dict = field(default_factory=dict, repr=False)


def holder_chain(tmap: TransportMap1D, s: float = 2.0, *, window: Optional[tuple] = None,
                 tol: float = 1e-11) -> ChainReport:
    """``int f^s dnu <= (int f(T)^s dmu)^((s-1)/s) (int g^s dmu)^(1/s)`` on a window.

    The left side equals ``int f^(s-1)(T) g dmu`` by the pushforward identity;
    the bound is then Hoelder's inequality with exponents ``s/(s-1)`` and ``s``.
    """
    if not s > 1:
        raise BadParams("the chain needs s > 1")
    a, b = _source_window(tmap, window)
    src, tgt = tmap.source, tmap.target
    f, g = tgt.density.func, src.density.func
    lhs, mid = _side_integrals(tmap, lambda y: f(y) ** (s - 1.0), a, b, tol)
    lhs, mid = mid, lhs
    fts = integrate(lambda x: f(tmap.eval(x)) ** s * src.measure.u(x), Interval(a, b), tol,
                    points=src.density.breakpoints)
    gs = integrate(lambda x: g(x) ** s * src.measure.u(x), Interval(a, b), tol,
                   points=src.density.breakpoints)
    rhs = fts.value ** ((s - 1.0) / s) * gs.value ** (1.0 / s)
    budget = lhs.error_bound + fts.error_bound + gs.error_bound
    margin = rhs - lhs.value
    return ChainReport("holder_chain", lhs.value, rhs, margin, budget, margin >= -budget,
                       {"s": s, "window": (a, b), "pushforward_side": mid.value,
                        "int_f_T_s": fts.value, "int_g_s": gs.value})


def tau_corollary(tmap: TransportMap1D, s: float, grid=None, *, tol: float = 1e-11) -> ChainReport:
    """``int f^s <= Tau^(1-s) int g^s`` with ``Tau = inf T'`` observed on the grid.

    Lebesgue weights only. ``Tau`` comes from the grid, so the check inherits
    its non-rigorous sampling.
    """
    if tmap.source.measure.weight != "lebesgue" or tmap.target.measure.weight != "lebesgue":
        raise BadParams("the tau bound needs unweighted measures")
    rep = contraction_report(tmap, "Tprime_le_1", grid)
    tau = rep.inf_observed
    if not tau > 0:
        raise BadParams(f"inf T' = {tau!r} is not positive")
    lhs = power_integral(tmap.target, s, tol)
    gs = power_integral(tmap.source, s, tol)
    scale = tau ** (1.0 - s)
    rhs = scale * gs.value
    budget = lhs.error_bound + scale * gs.error_bound
    margin = rhs - lhs.value
    return ChainReport("tau_corollary", lhs.value, rhs, margin, budget, margin >= -budget,
                       {"s": s, "tau": tau, "int_g_s": gs.value})
