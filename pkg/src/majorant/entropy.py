"""Renyi and Tsallis entropies of one-dimensional densities.

``h_q = log(int f^q) / (1 - q)`` and ``S_q = (int f^q - 1) / (1 - q)``, linked by
``S_q = Psi_q(h_q)`` with ``Psi_q(x) = (exp((1 - q) x) - 1) / (1 - q)``.
Orders 0, 1 and infinity use the continuous extensions:
``h_0 = log |{f > 0}|``, ``h_1 = -int f log f``, ``h_inf = -log sup f``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .convex_order import MajorizationVerdict, majorization_verdict
from .errors import (BadParams, FamilyViolation, NonIntegrable, NonIntegrablePower,
                     NotAProbabilityDensity)
from .measures import Density1D, MeasuredDensity, integrate_phi, measured, named_density, power_integral
from .numerics import EPS, Interval, integrate
from .transport1d import ContractionReport, build_transport, contraction_report

__all__ = [
    "EntropyReport",
    "DominanceEntry",
    "DominanceReport",
    "InflationReport",
    "MASS_TOL",
    "PSI_TOL",
    "DEFAULT_Q_GRID",
    "EXPANDING_MAPS",
    "psi",
    "entropy",
    "entropy_report",
    "midpoint_convexity",
    "gaussian_dominance_check",
    "inflation_check",
    "slc_registry",
]

MASS_TOL = 1e-9
PSI_TOL = 1e-9
DEFAULT_Q_GRID = (0.5, 1.0, 2.0, 5.0, math.inf)
_KINDS = ("renyi", "tsallis")


def psi(q: float, x: float) -> float:
    """``Psi_q(x)``, with the limits ``x`` at ``q = 1`` and, at ``q = inf``, 0 for ``x >= 0``."""
    if q == 1:
        return x
    if math.isinf(q):
        return 0.0 if x >= 0 else -math.inf
    if math.isinf(x):
        return x / (1.0 - q) if x > 0 else -1.0 / (1.0 - q)
    return math.expm1((1.0 - q) * x) / (1.0 - q)


def _lebesgue(d: Union[Density1D, MeasuredDensity]) -> MeasuredDensity:
    md = d if isinstance(d, MeasuredDensity) else measured(d)
    if md.measure.weight != "lebesgue":
        raise BadParams("entropies are defined against Lebesgue measure")
    return md


def _check_probability(md: MeasuredDensity) -> None:
    d = md.density
    if d.mass is not None:
        mass, err = d.mass, 0.0
    else:
        res = power_integral(md, 1.0)
        mass, err = res.value, res.error_bound
    if abs(mass - 1.0) > MASS_TOL + err:
        raise NotAProbabilityDensity(f"{d.name}{d.params} has mass {mass!r}")


def _power(md: MeasuredDensity, q: float, tol: float):
    try:
        res = power_integral(md, q, tol)
    except NonIntegrable as exc:
        raise NonIntegrablePower(f"int f^{q} diverges: {exc}") from None
    if not (math.isfinite(res.value) and res.value > 0):
        raise NonIntegrablePower(f"int f^{q} is not a positive finite number")
    return res.value, res.error_bound


def _shannon(md: MeasuredDensity, tol: float):
    """``-int f log f``; unbounded supports need a log-concave density.

    Outside the window where ``f > lam``, a log-concave ``f`` contributes at
    most about ``lam |log lam|`` times its scale, which is charged to the error.
    """
    d = md.density

    def phi(y):
        y = np.asarray(y, float)
        pos = y > 0
        return np.where(pos, -y * np.log(np.where(pos, y, 1.0)), 0.0)

    if d.support.finite:
        res = integrate_phi(md, phi, tol)
        return res.value, res.error_bound
    if d.logderiv is None:
        raise NonIntegrablePower(f"{d.name}: no tail control for -f log f")
    lam = d.sup * 1e-200
    res = integrate_phi(md, phi, tol, window=d.window(lam))
    slack = 4.0 * lam * abs(math.log(lam)) * (1.0 + d.scale)
    return res.value, res.error_bound + slack


@dataclass(frozen=True)
class EntropyReport:
    """Both entropies of one order, and ``|S_q - Psi_q(h_q)|``."""

    q: float
    renyi: float
    tsallis: float
    psi_consistency: float
    error: float = 0.0


def entropy_report(d: Union[Density1D, MeasuredDensity], q: float, tol: float = 1e-12) -> EntropyReport:
    """Renyi and Tsallis entropy of order ``q`` with an error bound on ``h_q``.

    Raises
    ------
    NotAProbabilityDensity
        Mass differs from 1 by more than ``1e-9``.
    NonIntegrablePower
        ``int f^q`` diverges.
    """
    if not q >= 0:
        raise BadParams("order must be >= 0")
    md = _lebesgue(d)
    _check_probability(md)
    dens = md.density
    if q == 0:
        length = dens.support.hi - dens.support.lo
        h = math.log(length)
        s = length - 1.0
        err = 0.0
    elif q == 1:
        h, err = _shannon(md, tol)
        s = h
    elif math.isinf(q):
        top = dens.sup
        h = -math.log(top)
        # (int f^q - 1) / (1 - q) as q -> inf
        s = 0.0 if top < 1 else (-math.inf if top > 1 else 0.0)
        err = 4.0 * EPS
    else:
        val, verr = _power(md, q, tol)
        h = math.log(val) / (1.0 - q)
        s = (val - 1.0) / (1.0 - q)
        err = verr / (abs(1.0 - q) * val)
    if math.isinf(h) and math.isinf(s):
        residual = 0.0
    else:
        expect = psi(q, h)
        residual = 0.0 if expect == s else abs(s - expect)
    return EntropyReport(float(q), float(h), float(s), float(residual), float(err))


def entropy(d: Union[Density1D, MeasuredDensity], q: float, kind: str = "renyi",
            tol: float = 1e-12) -> float:
    """``h_q(f)`` (``kind="renyi"``) or ``S_q(f)`` (``kind="tsallis"``).

    Examples
    --------
    >>> round(entropy(named_density("normal"), 1.0), 5)
    1.41894
    """
    if kind not in _KINDS:
        raise BadParams(f"kind must be one of {_KINDS}")
    rep = entropy_report(d, q, tol)
    return rep.renyi if kind == "renyi" else rep.tsallis


def midpoint_convexity(V: Callable[[np.ndarray], np.ndarray], *, extent: float = 12.0,
                       samples: int = 4096, seed: int = 0, tol: float = 1e-10) -> float:
    """Largest ``V((x + y) / 2) - (V(x) + V(y)) / 2`` over random pairs, relative to scale.

    Sampling only; a positive value above ``tol`` proves non-convexity, a
    non-positive one is evidence, not proof.
    """
    rng = np.random.default_rng(seed)
    x = rng.uniform(-extent, extent, samples)
    y = rng.uniform(-extent, extent, samples)
    vx, vy, vm = V(x), V(y), V(0.5 * (x + y))
    scale = 1.0 + np.maximum(np.abs(vx), np.abs(vy))
    return float(np.max((vm - 0.5 * (vx + vy)) / scale))


@dataclass(frozen=True)
class DominanceEntry:
    """Entropy comparison at one order; margins are ``gaussian - f``."""

    q: float
    renyi_f: float
    renyi_gauss: float
    tsallis_f: float
    tsallis_gauss: float
    renyi_margin: float
    tsallis_margin: float
    error_budget: float
    psi_residual: float
    passed: bool


@dataclass(frozen=True)
class DominanceReport:
    name: str
    params: tuple
    mean: float
    majorization: Optional[MajorizationVerdict]
    entries: tuple
    contraction: Optional[ContractionReport] = None
    details: dict = field(default_factory=dict)

    @property
    def entropy_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def passed(self) -> bool:
        maj = self.majorization is None or self.majorization.passed
        return maj and self.entropy_passed

    @property
    def transport_agrees(self) -> Optional[bool]:
        if self.contraction is None or self.majorization is None:
            return None
        return self.contraction.passed == self.majorization.passed


def _margin(a: float, b: float) -> float:
    """``a - b`` with ``inf - inf = 0``."""
    if math.isinf(a) and math.isinf(b) and (a > 0) == (b > 0):
        return 0.0
    return a - b


def _mean(md: MeasuredDensity) -> float:
    d = md.density
    if d.even:
        return 0.0
    lo, hi = d.window(d.sup * 1e-300)
    res = integrate(lambda x: x * d.func(x), Interval(lo, hi), 1e-12, points=d.breakpoints)
    return res.value


def gaussian_dominance_check(f: Union[Density1D, MeasuredDensity],
                             q_grid: Sequence[float] = DEFAULT_Q_GRID, *,
                             potential: Optional[Callable] = None, majorize: bool = True,
                             transport: bool = False, tol: float = 1e-12,
                             t_grid: Optional[Sequence[float]] = None) -> DominanceReport:
    """Compare a strongly log-concave density with the standard Gaussian.

    Checks that ``(f, dx)`` majorizes ``(gamma, dx)`` and that
    ``h_q(f) <= h_q(gamma)`` and ``S_q(f) <= S_q(gamma)`` for each order.

    Parameters
    ----------
    potential : callable, optional
        The convex ``V`` with ``f = exp(-V) gamma``; defaults to the one the
        density declares. It is spot-checked for midpoint convexity.
    transport : bool
        Also test ``T' <= 1`` for the monotone map from ``gamma`` to ``f``.

    Raises
    ------
    FamilyViolation
        No potential is known, or the sampled potential is not convex.
    """
    md = _lebesgue(f)
    d = md.density
    V = potential if potential is not None else d.potential
    if V is None:
        raise FamilyViolation(f"{d.name} declares no potential V")
    excess = midpoint_convexity(V)
    if excess > 1e-10:
        raise FamilyViolation(f"V fails midpoint convexity by {excess:.3g}")
    gauss = measured(named_density("normal"))
    verdict = majorization_verdict(md, gauss, "standard", t_grid) if majorize else None
    entries = []
    for q in q_grid:
        rf, rg = entropy_report(md, q, tol), entropy_report(gauss, q, tol)
        hm = _margin(rg.renyi, rf.renyi)
        sm = _margin(rg.tsallis, rf.tsallis)
        budget = rf.error + rg.error + 8 * EPS * (1.0 + abs(rf.renyi if math.isfinite(rf.renyi) else 0.0))
        # S_q error follows from h_q error through Psi_q' = exp((1 - q) h)
        sbudget = budget * (math.exp((1.0 - q) * max(rf.renyi, rg.renyi))
                            if math.isfinite(q) and math.isfinite(rf.renyi) else 1.0)
        ok = hm >= -budget and (sm >= -sbudget or (math.isnan(sm) and q == 0))
        entries.append(DominanceEntry(float(q), rf.renyi, rg.renyi, rf.tsallis, rg.tsallis,
                                      hm, sm, budget, max(rf.psi_consistency, rg.psi_consistency),
                                      bool(ok)))
    contraction = None
    if transport:
        tmap = build_transport(gauss, None, md, None)
        contraction = contraction_report(tmap, "Tprime_le_1", (-8.0, 8.0))
    return DominanceReport(d.name, d.params, _mean(md), verdict, tuple(entries), contraction,
                           {"convexity_excess": excess})


def slc_registry() -> tuple:
    """Registered strongly log-concave test members as ``(label, density)`` pairs.

    The ``shifted`` members have nonzero mean.
    """
    members = [
        ("gaussian", named_density("normal")),
        ("gaussian_sigma_0.8", named_density("normal", 0.0, 0.8)),
        ("quadratic_a1", named_density("slc", 1.0)),
        ("abs", named_density("slc", 0.0, 0.0, 1.0)),
        ("quad_abs", named_density("slc", 0.25, 0.0, 0.5)),
        ("huber", named_density("huber", 1.0, 1.0)),
        ("shifted_linear", named_density("slc", 0.0, 1.0)),
        ("shifted_kink", named_density("slc", 0.0, 0.0, 1.0, 0.7)),
        ("shifted_gaussian", named_density("normal", 0.5, 0.8)),
    ]
    return tuple(members)


# ---------------------------------------------------------------- expanding maps

def _linear(lam: float):
    if lam < 1:
        raise BadParams("linear map needs a factor >= 1")
    return lambda x: lam * x, lambda x: np.full_like(np.asarray(x, float), lam)


def _cubic(kappa: float):
    if kappa < 0:
        raise BadParams("cubic map needs kappa >= 0")
    return lambda x: x + kappa * x ** 3, lambda x: 1.0 + 3.0 * kappa * np.asarray(x, float) ** 2


def _sinh(kappa: float):
    if kappa < 0:
        raise BadParams("sinh map needs kappa >= 0")
    return lambda x: x + kappa * np.sinh(x), lambda x: 1.0 + kappa * np.cosh(np.asarray(x, float))


EXPANDING_MAPS = {"linear": _linear, "cubic": _cubic, "sinh": _sinh}


@dataclass(frozen=True)
class InflationReport:
    """``h_q(T(X))`` against ``h_q(X)`` for an expanding map ``T``."""

    map_name: str
    param: float
    q: float
    h_source: float
    h_image: float
    margin: float
    error_budget: float
    passed: bool


def inflation_check(d: Union[Density1D, MeasuredDensity], map_name: str, param: float,
                    q: float, tol: float = 1e-12) -> InflationReport:
    """``h_q(T(X)) >= h_q(X)`` for ``X ~ f`` and ``T' >= 1``.

    The image density is ``f(x) / T'(x)`` at ``y = T(x)``, so
    ``int f_Y^q dy = int f^q T'^(1 - q) dx`` and
    ``h_1(Y) = h_1(X) + int f log T' dx``; no inverse map is needed.
    """
    try:
        build = EXPANDING_MAPS[map_name]
    except KeyError:
        raise BadParams(f"unknown map {map_name!r}") from None
    _, dT = build(float(param))
    md = _lebesgue(d)
    dens = md.density
    src = entropy_report(md, q, tol)
    lo, hi = dens.window(dens.sup * 1e-250)
    lo, hi = max(lo, dens.support.lo), min(hi, dens.support.hi)
    iv = Interval(lo, hi)
    if q == 1:
        res = integrate(lambda x: dens.func(x) * np.log(dT(x)), iv, tol, points=dens.breakpoints)
        h_img, err = src.renyi + res.value, src.error + res.error_bound
    elif math.isinf(q):
        xs = np.union1d(np.linspace(lo, hi, 20001), [dens.mode])
        h_img = -math.log(float(np.max(dens.func(xs) / dT(xs))))
        err = 4.0 * EPS
    elif q == 0:
        h_img, err = math.inf if not math.isfinite(src.renyi) else math.nan, 0.0
        if math.isfinite(src.renyi):
            T, _ = build(float(param))
            h_img = math.log(float(T(np.array(dens.support.hi)) - T(np.array(dens.support.lo))))
    else:
        res = integrate(lambda x: dens.func(x) ** q * dT(x) ** (1.0 - q), iv, tol,
                        points=dens.breakpoints)
        h_img = math.log(res.value) / (1.0 - q)
        err = src.error + res.error_bound / (abs(1.0 - q) * res.value)
    margin = _margin(h_img, src.renyi)
    budget = err + 8 * EPS * (1.0 + abs(src.renyi) if math.isfinite(src.renyi) else 1.0)
    return InflationReport(map_name, float(param), float(q), src.renyi, float(h_img), margin,
                           float(budget), bool(margin >= -budget))
