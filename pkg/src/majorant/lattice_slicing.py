"""Lattice points of integer boxes on hyperplanes ``sum z_i = k``.

Counts are exact Python integers: the coefficients of
``prod_i (1 + x + ... + x^(l_i - 1))``. The bound
``max_k count < sqrt(2) prod l_i / sqrt(sum (l_i^2 - 1))`` is compared in
integer arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Optional, Sequence

import numpy as np

from . import specfun
from .errors import BadParams, CapacityExceeded, CaseCondition, DegenerateBox
from .inequalities import CheckReport, discrete_ball_check
from .numerics import Interval, integrate

__all__ = [
    "BoxSpec",
    "SlicePolynomial",
    "MAX_DEGREE",
    "slice_polynomial",
    "slice_count",
    "slice_bound_check",
    "char_fn_bound_check",
    "brute_force_counts",
    "tightness_ratio",
    "plancherel_check",
    "random_boxes",
]

MAX_DEGREE = 10_000_000


@dataclass(frozen=True)
class BoxSpec:
    """``prod_i [k_i, k_i + l_i - 1]`` in ``Z^n``; offsets default to zero."""

    lengths: tuple
    offsets: Optional[tuple] = None

    def __post_init__(self):
        lengths = tuple(int(l) for l in self.lengths)
        if not lengths:
            raise BadParams("a box needs at least one side")
        if any(l != l0 or l < 1 for l, l0 in zip(lengths, self.lengths)):
            raise BadParams("side lengths must be integers >= 1")
        offsets = (0,) * len(lengths) if self.offsets is None else tuple(int(k) for k in self.offsets)
        if len(offsets) != len(lengths):
            raise BadParams("one offset per side")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "offsets", offsets)

    @property
    def volume(self) -> int:
        return math.prod(self.lengths)

    @property
    def spread(self) -> int:
        """``sum (l_i^2 - 1)``, the variance scale of the coordinate sum (times 12)."""
        return sum(l * l - 1 for l in self.lengths)


@dataclass(frozen=True)
class SlicePolynomial:
    """``coeffs[k] = #{z : 0 <= z_i < l_i, sum z_i = k}``."""

    coeffs: tuple = field(repr=False)
    degree: int

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    @property
    def max_count(self) -> int:
        return max(self.coeffs)

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]


def _as_box(box) -> BoxSpec:
    return box if isinstance(box, BoxSpec) else BoxSpec(tuple(box))


def slice_polynomial(lengths, max_degree: int = MAX_DEGREE) -> SlicePolynomial:
    """Multiply out ``prod (1 + x + ... + x^(l-1))`` with exact integers.

    Each factor is a sliding-window sum over prefix sums, so a factor costs
    ``O(degree)`` regardless of its length.

    Raises
    ------
    CapacityExceeded
        The degree ``sum (l_i - 1)`` is above ``max_degree``.
    """
    box = _as_box(lengths)
    degree = sum(l - 1 for l in box.lengths)
    if degree > max_degree:
        raise CapacityExceeded(f"degree {degree} above the cap {max_degree}")
    coeffs = [1]
    for l in sorted(box.lengths):
        if l == 1:
            continue
        prefix = [0, *accumulate(coeffs)]
        top = len(coeffs) - 1
        new = []
        for k in range(top + l):
            hi = min(k, top) + 1
            lo = max(k - l + 1, 0)
            new.append(prefix[hi] - prefix[lo])
        coeffs = new
    return SlicePolynomial(tuple(coeffs), degree)


def slice_count(box, k: int, poly: Optional[SlicePolynomial] = None) -> int:
    """Exact number of box points on ``sum z_i = k``; 0 off the range."""
    box = _as_box(box)
    poly = poly if poly is not None else slice_polynomial(box)
    j = int(k) - sum(box.offsets)
    return poly.coeffs[j] if 0 <= j <= poly.degree else 0


def slice_bound_check(box) -> CheckReport:
    """``max_k count < sqrt(2) * volume / sqrt(spread)``, decided exactly.

    The comparison squares both sides: ``max^2 * spread < 2 * volume^2``.
    """
    box = _as_box(box)
    if box.spread == 0:
        raise DegenerateBox("every side has length 1")
    poly = slice_polynomial(box)
    top = poly.max_count
    vol, spread = box.volume, box.spread
    strict = top * top * spread < 2 * vol * vol
    rhs = math.sqrt(2.0) * vol / math.sqrt(spread)
    ratio = top * math.sqrt(spread) / vol
    argmax = poly.coeffs.index(top) + sum(box.offsets)
    return CheckReport("slice_bound", {"lengths": box.lengths, "offsets": box.offsets},
                       float(top), rhs, rhs - top, 0.0, bool(top * top * spread <= 2 * vol * vol),
                       bool(strict),
                       {"max_count": top, "argmax_k": argmax, "volume": vol, "spread": spread,
                        "ratio": ratio})


def tightness_ratio(m: int, ones: int = 0) -> float:
    """``max count * sqrt(spread) / volume`` for the box ``(m, m, 1, ..., 1)``; tends to sqrt(2)."""
    if m < 2:
        raise BadParams("m must be >= 2")
    box = BoxSpec((m, m) + (1,) * ones)
    top = slice_polynomial(box).max_count
    return top * math.sqrt(box.spread) / box.volume


def _kernel_power_integral(l: int, p: float) -> tuple:
    """``int_{-1/2}^{1/2} |kernel(l, t)|^p dt`` and its error bound."""
    rep = discrete_ball_check(l, p)
    return rep.lhs, rep.details.get("error", rep.error_budget)


def char_fn_bound_check(box, k: int) -> CheckReport:
    """Fourier-Hoelder chain for ``P(sum X_j = k)`` with independent uniforms.

    ``lhs`` is the exact probability, ``rhs`` the product
    ``prod_j (int |kernel(l_j, t)|^p_j dt)^(1/p_j)`` with
    ``p_j = spread / (l_j^2 - 1)``. ``details["chain_bound"]`` holds
    ``sqrt(2 / spread)``, which the product must not exceed.

    Raises
    ------
    CaseCondition
        Some side has ``spread < 2 (l_j^2 - 1)``; that case is settled by
        counting, not by the Fourier chain.
    """
    box = _as_box(box)
    spread = box.spread
    if spread == 0:
        raise DegenerateBox("every side has length 1")
    sides = [l for l in box.lengths if l >= 2]
    worst = max(sides)
    if spread < 2 * (worst * worst - 1):
        raise CaseCondition(f"side {worst} dominates: spread {spread} < 2 ({worst}^2 - 1)")
    prob = slice_count(box, k) / box.volume
    log_prod = 0.0
    budget_rel = 0.0
    exps = []
    for l in sides:
        p = spread / (l * l - 1)
        val, err = _kernel_power_integral(l, p)
        log_prod += math.log(val) / p
        budget_rel += err / (p * val)
        exps.append(p)
    prod = math.exp(log_prod)
    chain = math.sqrt(2.0 / spread)
    budget = float(prod * budget_rel + 8 * np.finfo(float).eps * prod)
    margin = prod - prob
    return CheckReport("char_fn_bound", {"lengths": box.lengths, "k": int(k)}, prob, prod, margin,
                       budget, bool(margin >= -budget), bool(margin > budget),
                       {"exponents": tuple(exps), "chain_bound": chain,
                        "product_below_chain": bool(prod <= chain + budget)})


def brute_force_counts(lengths) -> np.ndarray:
    """Histogram of ``sum z_i`` over every box point, by direct enumeration.

    Independent of the polynomial route: the full grid of coordinate sums is
    materialized and binned. Meant for volumes up to about ``10^6``.
    """
    box = _as_box(lengths)
    if box.volume > 20_000_000:
        raise CapacityExceeded("box too large to enumerate")
    sums = np.zeros((), dtype=np.int64)
    for l in box.lengths:
        sums = np.add.outer(sums, np.arange(l, dtype=np.int64))
    return np.bincount(sums.ravel(), minlength=sum(l - 1 for l in box.lengths) + 1)


def plancherel_check(box, tol: float = 1e-12) -> CheckReport:
    """``sum_k (coeffs[k] / volume)^2 = int_{-1/2}^{1/2} prod_j kernel(l_j, t)^2 dt``.

    ``lhs`` is the absolute residual, ``rhs`` the allowed ``1e-9``.
    """
    box = _as_box(box)
    poly = slice_polynomial(box)
    vol = box.volume
    exact = sum(c * c for c in poly.coeffs) / (vol * vol)
    sides = [l for l in box.lengths if l >= 2]

    def integrand(t):
        out = np.ones_like(t)
        for l in sides:
            out = out * specfun.dirichlet_kernel(l, t) ** 2
        return out

    pts = sorted({j / l for l in sides for j in range(1, l // 2 + 1) if j / l < 0.5})
    half = integrate(integrand, Interval(0.0, 0.5), tol / 2.0, points=pts)
    residual = abs(2.0 * half.value - exact)
    return CheckReport("plancherel", {"lengths": box.lengths}, residual, 1e-9, 1e-9 - residual,
                       half.error_bound, bool(residual <= 1e-9), bool(residual < 1e-9),
                       {"sum_squares": exact, "integral": 2.0 * half.value})


def random_boxes(count: int, seed: int, max_dims: int = 6, max_side: int = 9,
                 max_volume: int = 1_000_000, dims: Optional[Sequence[int]] = None) -> list:
    """Reproducible random boxes with at least one side ``>= 2``."""
    rng = np.random.default_rng(seed)
    choices = list(dims) if dims is not None else list(range(1, max_dims + 1))
    out = []
    while len(out) < count:
        n = int(rng.choice(choices))
        lengths = tuple(int(v) for v in rng.integers(1, max_side + 1, size=n))
        if max(lengths) < 2 or math.prod(lengths) > max_volume:
            continue
        offsets = tuple(int(v) for v in rng.integers(-5, 6, size=n))
        out.append(BoxSpec(lengths, offsets))
    return out
