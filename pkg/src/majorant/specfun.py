"""Special functions: error function family, Bessel J0/J1, Dirichlet kernel.

Everything here is vectorized over numpy arrays and returns a Python float
when called with a scalar.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "SpecFunValue",
    "erf",
    "erfc",
    "inv_erf",
    "inv_erfc",
    "error_function",
    "bessel_j",
    "dirichlet_kernel",
    "evaluate",
]

_SQRT_PI = math.sqrt(math.pi)
_ERF_SERIES_MAX = 3.0
_ERFC_CF_MIN = 1.0
_CF_DEPTH = 250
_BESSEL_SERIES_MAX = 1.0
_BESSEL_MILLER_MAX = 25.0
_HANKEL_TERMS = 10
_RESCALE = 1e250


@dataclass(frozen=True)
class SpecFunValue:
    """Function value with an a priori absolute error estimate."""

    value: float
    est_abs_err: float


def _out(arr: np.ndarray, scalar: bool):
    return float(np.reshape(arr, -1)[0]) if scalar else arr


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr).astype(float, copy=True), arr.ndim == 0


def _erf_series(x: np.ndarray) -> np.ndarray:
    # positive-term series, no cancellation: erf x = 2/sqrt(pi) e^{-x^2} sum 2^n x^{2n+1}/(2n+1)!!
    x2 = x * x
    term = x.copy()
    total = x.copy()
    for n in range(1, 200):
        term = term * 2.0 * x2 / (2 * n + 1)
        total += term
        if np.all(term <= 1e-17 * total):
            break
    return 2.0 / _SQRT_PI * np.exp(-x2) * total


def _erfc_cf(x: np.ndarray) -> np.ndarray:
    # x >= 1: erfc x = e^{-x^2} / (sqrt(pi) (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))))
    t = x.copy()
    for k in range(_CF_DEPTH, 0, -1):
        t = x + (0.5 * k) / t
    return np.exp(-x * x) / (_SQRT_PI * t)


def _erf_pos(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    small = a <= _ERF_SERIES_MAX
    out[small] = _erf_series(a[small])
    big = ~small
    out[big] = 1.0 - _erfc_cf(a[big])
    return out


def erf(x):
    """Error function (2/sqrt(pi)) * int_0^x exp(-t^2) dt."""
    arr, scalar = _as_array(x)
    if np.isnan(arr).any():
        raise DomainError("erf of NaN")
    a = np.abs(arr)
    return _out(np.sign(arr) * _erf_pos(a), scalar)


def erfc(x):
    """Complementary error function, accurate in relative terms for large x."""
    arr, scalar = _as_array(x)
    if np.isnan(arr).any():
        raise DomainError("erfc of NaN")
    out = np.empty_like(arr)
    tail = arr >= _ERFC_CF_MIN
    out[tail] = _erfc_cf(arr[tail])
    neg_tail = arr <= -_ERFC_CF_MIN
    out[neg_tail] = 2.0 - _erfc_cf(-arr[neg_tail])
    mid = ~(tail | neg_tail)
    out[mid] = 1.0 - np.sign(arr[mid]) * _erf_series(np.abs(arr[mid]))
    return _out(out, scalar)


def _inv_erf_pos(y: np.ndarray) -> np.ndarray:
    """Inverse of erf on 0 <= y < 1 by guarded Newton with bisection fallback."""
    z = 1.0 - y
    # Starting guess from the leading asymptotics; polished below.
    with np.errstate(divide="ignore"):
        guess = np.where(
            y < 0.5,
            0.5 * _SQRT_PI * y,
            np.sqrt(np.maximum(-np.log(z * _SQRT_PI * np.sqrt(np.maximum(-np.log(z), 1e-300))), 0.0)),
        )
    lo = np.zeros_like(y)
    hi = np.full_like(y, 27.0)
    x = np.clip(guess, lo, hi)
    use_c = y >= 0.5
    for _ in range(100):
        # residual in the better-conditioned form
        r = np.where(use_c, erfc(x) - z, _erf_pos(x) - y)
        r = np.where(use_c, -r, r)
        lo = np.where(r < 0, x, lo)
        hi = np.where(r > 0, x, hi)
        d = 2.0 / _SQRT_PI * np.exp(-x * x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(d > 0, r / d, np.inf)
        cand = x - step
        bad = ~np.isfinite(cand) | (cand < lo) | (cand > hi)
        cand = np.where(bad, 0.5 * (lo + hi), cand)
        done = np.abs(cand - x) <= 4e-16 * np.maximum(np.abs(x), 1e-300)
        x = cand
        if np.all(done | (r == 0)):
            break
    return x


def inv_erf(y):
    """Inverse error function on (-1, 1)."""
    arr, scalar = _as_array(y)
    if np.isnan(arr).any() or np.any(np.abs(arr) >= 1.0):
        raise DomainError("inv_erf requires |y| < 1")
    out = np.sign(arr) * _inv_erf_pos(np.abs(arr))
    return _out(out, scalar)


def inv_erfc(z):
    """Inverse complementary error function on (0, 2), accurate for tiny z."""
    arr, scalar = _as_array(z)
    if np.isnan(arr).any() or np.any((arr <= 0.0) | (arr >= 2.0)):
        raise DomainError("inv_erfc requires 0 < z < 2")
    out = np.empty_like(arr)
    upper = arr <= 1.0
    out[upper] = _inv_erfc_small(arr[upper])
    out[~upper] = -_inv_erfc_small(2.0 - arr[~upper])
    return _out(out, scalar)


def _inv_erfc_small(z: np.ndarray) -> np.ndarray:
    # 0 < z <= 1; Newton on erfc directly so that z near 0 keeps relative accuracy
    if z.size == 0:
        return z.copy()
    near = z > 0.5
    out = np.empty_like(z)
    out[near] = _inv_erf_pos(1.0 - z[near])
    zz = z[~near]
    if zz.size:
        lo = np.zeros_like(zz)
        hi = np.full_like(zz, 27.0)
        x = np.sqrt(np.maximum(-np.log(zz * _SQRT_PI), 0.25))
        for _ in range(100):
            r = zz - erfc(x)
            lo = np.where(r < 0, x, lo)
            hi = np.where(r > 0, x, hi)
            d = 2.0 / _SQRT_PI * np.exp(-x * x)
            with np.errstate(divide="ignore", invalid="ignore"):
                cand = x - np.where(d > 0, r / d, np.inf)
            bad = ~np.isfinite(cand) | (cand < lo) | (cand > hi)
            cand = np.where(bad, 0.5 * (lo + hi), cand)
            done = np.abs(cand - x) <= 4e-16 * x
            x = cand
            if np.all(done | (r == 0)):
                break
        out[~near] = x
    return out


def error_function(variant: str, x):
    """Dispatch ``erf``, ``erfc``, ``inv_erf`` or ``inv_erfc`` by name."""
    table = {"erf": erf, "erfc": erfc, "inv_erf": inv_erf, "inv_erfc": inv_erfc}
    try:
        fn = table[variant]
    except KeyError:
        raise DomainError(f"unknown error-function variant {variant!r}") from None
    return fn(x)


def _bessel_series(x: np.ndarray, order: int) -> np.ndarray:
    q = -0.25 * x * x
    term = (0.5 * x) ** order / math.factorial(order)
    total = term.copy()
    for m in range(1, 40):
        term = term * q / (m * (m + order))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _bessel_miller(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """J0 and J1 by backward recurrence normalised with 1 = J0 + 2 sum J_{2k}."""
    start = 2 * int((float(x.max()) + 30.0) // 2) + 2
    jp1 = np.zeros_like(x)
    j = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    j1 = np.zeros_like(x)
    for k in range(start, 0, -1):
        jm1 = 2.0 * k / x * j - jp1
        jp1, j = j, jm1
        if k == 2:
            j1 = j.copy()
        if k % 2 == 1 and k > 1:
            norm += 2.0 * j
        # growth per step is below 2k/x, so checking every 8 steps cannot overflow
        if k % 8 == 0 and (big := np.abs(j) > _RESCALE).any():
            s = np.where(big, 1.0 / _RESCALE, 1.0)
            jp1 *= s
            j *= s
            norm *= s
            j1 *= s
    norm += j
    return j / norm, j1 / norm


def _bessel_hankel(x: np.ndarray, order: int) -> np.ndarray:
    mu = 4.0 * order * order
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    coef = 1.0
    xk = np.ones_like(x)
    for k in range(2 * _HANKEL_TERMS):
        if k > 0:
            coef *= (mu - (2 * k - 1) ** 2) / (8.0 * k)
            xk = xk * x
        term = coef / xk
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * term
        else:
            q += sign * term
    chi = x - (0.5 * order + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j(order: int, x):
    """Bessel function of the first kind of order 0 or 1 for x >= 0."""
    if order not in (0, 1):
        raise DomainError("only orders 0 and 1 are supported")
    arr, scalar = _as_array(x)
    if np.isnan(arr).any() or np.any(arr < 0):
        raise DomainError("bessel_j requires x >= 0")
    out = np.empty_like(arr)
    small = arr <= _BESSEL_SERIES_MAX
    mid = (~small) & (arr <= _BESSEL_MILLER_MAX)
    large = arr > _BESSEL_MILLER_MAX
    if small.any():
        out[small] = _bessel_series(arr[small], order)
    if mid.any():
        j0, j1 = _bessel_miller(arr[mid])
        out[mid] = j1 if order else j0
    if large.any():
        out[large] = _bessel_hankel(arr[large], order)
    return _out(out, scalar)


def dirichlet_kernel(n: int, x):
    """Normalised Dirichlet-type kernel sin(n pi x) / (n sin(pi x)).

    At integer x the removable singularity takes the limit (-1)^{m(n-1)}.
    """
    if int(n) != n or n < 2:
        raise DomainError("dirichlet_kernel requires an integer n >= 2")
    n = int(n)
    arr, scalar = _as_array(x)
    m = np.round(arr)
    delta = arr - m
    # kernel(m + delta) = (-1)^{m(n-1)} kernel(delta)
    sign = np.where((m.astype(np.int64) * (n - 1)) % 2 == 0, 1.0, -1.0)
    den = np.sin(math.pi * delta)
    near = np.abs(den) < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sin(n * math.pi * delta) / (n * den)
    taylor = 1.0 - (n * n - 1) * (math.pi * delta) ** 2 / 6.0
    out = sign * np.where(near, taylor, val)
    return _out(out, scalar)


def evaluate(name: str, x, order: int = 0) -> SpecFunValue:
    """Scalar evaluation paired with the a priori absolute error estimate."""
    if name == "bessel_j":
        value = bessel_j(order, x)
        err = 1e-14
    elif name == "dirichlet_kernel":
        value = dirichlet_kernel(order, x)
        err = 1e-15 * order
    else:
        value = error_function(name, x)
        err = 2e-15 * max(1.0, abs(value)) if name.startswith("inv") else 1e-15
    return SpecFunValue(float(value), float(err))
