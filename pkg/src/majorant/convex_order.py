"""Convex-order (majorization) verdicts between pushforwards of weighted densities.

The pair ``(f, nu)`` majorizes ``(g, mu)`` when ``int phi(g) dmu <= int phi(f) dnu``
for every convex ``phi``. Two equivalent certificates are evaluated on a
grid of levels ``t``: hockey-stick integrals of the densities, and tail
integrals of their distribution functions. They must agree with each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import BadParams, NonIntegrable, PreconditionMassMismatch, PreconditionMomentMismatch
from .measures import (MeasuredDensity, hockey_stick_gap, hockey_stick_integral, integrate_phi,
                       tail_integral_gap)

__all__ = [
    "MajorizationVerdict",
    "FamilyReport",
    "MOMENT_TOL",
    "default_t_grid",
    "majorization_verdict",
    "convex_family_check",
]

MOMENT_TOL = 1e-8
_MODES = ("standard", "vanishing")


@dataclass(frozen=True)
class MajorizationVerdict:
    """Sweep result. ``passed`` means every hockey-stick gap is ``>= -error``."""

    mode: str
    passed: bool
    worst_t: float
    worst_margin: float
    error_budget: float
    characterizations_agree: bool
    t_grid: np.ndarray = field(repr=False)
    gaps: np.ndarray = field(repr=False)
    gap_errors: np.ndarray = field(repr=False)
    tail_gaps: Optional[np.ndarray] = field(default=None, repr=False)
    tail_errors: Optional[np.ndarray] = field(default=None, repr=False)


@dataclass(frozen=True)
class FamilyReport:
    """Worst signed margin ``int phi(f) dnu - int phi(g) dmu`` over a test family."""

    family: str
    worst_margin: float
    worst_member: str
    error_budget: float
    members: tuple = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.worst_margin >= -self.error_budget


def default_t_grid(f: MeasuredDensity, g: MeasuredDensity, points: int = 64) -> np.ndarray:
    """``points`` log-spaced levels in ``[sup * 1e-4, sup]``."""
    top = max(f.density.sup, g.density.sup)
    return np.geomspace(top * 1e-4, top, points)


def _refine(grid: np.ndarray, i: int, factor: int = 4) -> np.ndarray:
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    extra = np.geomspace(lo, hi, 2 * factor + 1) if lo > 0 else np.linspace(lo, hi, 2 * factor + 1)
    return np.unique(np.concatenate([grid, extra]))


def _check_preconditions(f: MeasuredDensity, g: MeasuredDensity, mode: str, tol: float):
    if mode not in _MODES:
        raise BadParams(f"mode must be one of {_MODES}")
    mf = hockey_stick_integral(f, 0.0, tol)
    mg = hockey_stick_integral(g, 0.0, tol)
    if abs(mf.value - mg.value) > MOMENT_TOL + mf.error_bound + mg.error_bound:
        raise PreconditionMomentMismatch(
            f"int f dnu = {mf.value!r} but int g dmu = {mg.value!r}")
    if mode == "standard":
        tf = f.measure.measure(f.density.support.lo, f.density.support.hi)
        tg = g.measure.measure(g.density.support.lo, g.density.support.hi)
        tf, tg = float(tf), float(tg)
        same_space = f.measure == g.measure
        if not same_space and (math.isfinite(tf) or math.isfinite(tg)) and abs(tf - tg) > MOMENT_TOL:
            raise PreconditionMassMismatch(f"space measures differ: {tf!r} vs {tg!r}")


def majorization_verdict(f: MeasuredDensity, g: MeasuredDensity, mode: str = "standard",
                         t_grid: Optional[Sequence[float]] = None, *, tol: float = 1e-10,
                         tail_tol: float = 1e-9, cross_check: bool = True,
                         refine: bool = True) -> MajorizationVerdict:
    """Certify that ``(f, nu)`` majorizes ``(g, mu)`` on a grid of levels.

    Parameters
    ----------
    mode : {"standard", "vanishing"}
        ``standard`` tests all convex functions and needs equal space
        measures (when finite) and equal first moments ``int f dnu = int g dmu``.
        ``vanishing`` tests convex functions vanishing at 0 and only needs
        the first moments to match.
    t_grid : sequence of float, optional
        Positive levels. Defaults to :func:`default_t_grid`, refined four-fold
        around the smallest gap.
    cross_check : bool
        Also evaluate the tail-integral characterization at every level.
    """
    _check_preconditions(f, g, mode, tol)
    grid = default_t_grid(f, g) if t_grid is None else np.asarray(t_grid, dtype=float)
    if np.any(grid <= 0):
        raise BadParams("levels must be positive")

    def sweep(ts):
        res = [hockey_stick_gap(f, g, float(t), tol) for t in ts]
        return np.array([r.value for r in res]), np.array([r.error_bound for r in res])

    top = max(f.density.sup, g.density.sup)
    gaps, errs = sweep(grid)
    if refine and t_grid is None:
        # both sides vanish at the top level; refine at the smallest interior gap
        interior = np.where(grid < top, gaps, np.inf)
        new = _refine(grid, int(np.argmin(interior)))
        extra = np.setdiff1d(new, grid)
        if len(extra):
            eg, ee = sweep(extra)
            grid = np.concatenate([grid, extra])
            order = np.argsort(grid)
            grid = grid[order]
            gaps = np.concatenate([gaps, eg])[order]
            errs = np.concatenate([errs, ee])[order]
    tails = terrs = None
    agree = True
    if cross_check:
        res = [tail_integral_gap(f, g, float(t), tail_tol) for t in grid]
        tails = np.array([r.value for r in res])
        terrs = np.array([r.error_bound for r in res])
        agree = bool(np.all(np.abs(tails - gaps) <= errs + terrs))
    score = np.where(grid < top, gaps + errs, np.inf)
    i = int(np.argmin(score)) if np.isfinite(score).any() else int(np.argmin(gaps + errs))
    return MajorizationVerdict(
        mode=mode,
        passed=bool(np.all(gaps >= -errs)),
        worst_t=float(grid[i]),
        worst_margin=float(gaps[i]),
        error_budget=float(errs[i]),
        characterizations_agree=agree,
        t_grid=grid, gaps=gaps, gap_errors=errs, tail_gaps=tails, tail_errors=terrs,
    )


def _xlogy(y):
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(y > 0, y * np.log(np.where(y > 0, y, 1.0)), 0.0)


# |y log y| <= y^(1 - d) / (e d) on [0, 1]
_XLOGX_DELTA = 0.1


def _members(family: str, params):
    if family == "linear":
        return [("x", lambda y: y, 1.0, 1.0)]
    if family == "powers":
        ss = params if params is not None else (1.5, 2.0, 3.0, 6.0)
        if any(s < 1 for s in ss):
            raise BadParams("convex powers need s >= 1")
        return [(f"x^{s:g}", (lambda s: lambda y: y ** s)(s), s, 1.0) for s in ss]
    if family == "xlogx":
        return [("x log x", _xlogy, 1.0 - _XLOGX_DELTA, 1.0 / (math.e * _XLOGX_DELTA))]
    if family == "neg_power":
        qs = params if params is not None else (0.75, 0.9)
        if any(not 0 < q < 1 for q in qs):
            raise BadParams("concave powers need 0 < q < 1")
        return [(f"-x^{q:g}", (lambda q: lambda y: -(y ** q))(q), q, 1.0) for q in qs]
    if family == "hockey":
        return None
    raise BadParams(f"unknown family {family!r}")


def convex_family_check(f: MeasuredDensity, g: MeasuredDensity, family: str,
                        mode: str = "standard", params=None, *,
                        tol: float = 1e-9) -> FamilyReport:
    """Worst margin of ``int phi(f) dnu - int phi(g) dmu`` over a convex family.

    Families: ``linear``, ``powers`` (``x^s``, ``s >= 1``), ``hockey``
    (``[x - t]^+``, ``t > 0``), ``xlogx`` and ``neg_power`` (``-x^q``,
    ``0 < q < 1``). All of them vanish at 0, as the vanishing mode requires.
    """
    if mode not in _MODES:
        raise BadParams(f"mode must be one of {_MODES}")
    rows = []
    members = _members(family, params)
    if members is None:
        ts = params if params is not None else tuple(default_t_grid(f, g, 17)[:-1])
        for t in ts:
            if not t > 0:
                raise BadParams("hockey-stick levels must be positive")
            r = hockey_stick_gap(f, g, float(t), tol)
            rows.append((f"[x-{t:.6g}]+", r.value, r.error_bound))
    else:
        for label, phi, tp, ts in members:
            try:
                a = integrate_phi(f, phi, tol / 2, tail_power=tp, tail_scale=ts)
                b = integrate_phi(g, phi, tol / 2, tail_power=tp, tail_scale=ts)
            except NonIntegrable:
                raise
            except OverflowError as exc:
                raise NonIntegrable(f"{label}: {exc}") from None
            d = a - b
            if not math.isfinite(d.value):
                raise NonIntegrable(f"{label} is not integrable for this pair")
            rows.append((label, d.value, d.error_bound))
    i = int(np.argmin([m + e for _, m, e in rows]))
    return FamilyReport(family, rows[i][1], rows[i][0], rows[i][2], tuple(rows))
