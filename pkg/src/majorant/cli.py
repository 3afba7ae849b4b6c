"""Batch verification driver: ``verify <suite> [options]``.

Every check becomes one record ``(suite, name, params, lhs, rhs, margin,
error_budget, pass)``. Records come out in the order the suite lists its
checks, whatever the number of workers. Exit status: 0 when every record
passes, 1 when any fails, 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from .errors import CaseCondition, CheckFailure, ConfigError, MajorantError

__all__ = [
    "SCHEMA",
    "SUITES",
    "SuiteConfig",
    "parse_grid",
    "load_config",
    "build_config",
    "suite_tasks",
    "run_suite",
    "render",
    "main",
]

SCHEMA = 1
SUITES = ("ball", "op-bessel", "discrete-ball", "lemmas", "lattice", "entropy", "certificates")
_ALL = "all"
CSV_COLUMNS = ("suite", "name", "params", "lhs", "rhs", "margin", "error_budget", "pass")
# record kinds: strict needs margin > budget, bound needs margin >= -budget,
# equality needs |margin| <= budget
_KINDS = ("strict", "bound", "equality")


# ---------------------------------------------------------------- configuration

def parse_grid(text: str, integer: bool = False) -> tuple:
    """``"2..8"``, ``"2..64:0.5"``, ``"1, 1.5, inf"`` or mixtures of them.

    Raises
    ------
    ConfigError
        Malformed or empty grid.
    """
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                rng, _, step = part.partition(":")
                a, b = (float(v) for v in rng.split(".."))
                st = float(step) if step else 1.0
                if not st > 0 or b < a:
                    raise ValueError
                count = int(math.floor((b - a) / st + 1e-9)) + 1
                out.extend(a + i * st for i in range(count))
            else:
                out.append(float(part))
        except ValueError:
            raise ConfigError(f"cannot parse grid item {part!r}") from None
    if not out:
        raise ConfigError(f"empty grid {text!r}")
    if integer:
        if any(not math.isfinite(v) or v != int(v) for v in out):
            raise ConfigError(f"grid {text!r} must hold integers")
        return tuple(int(v) for v in out)
    return tuple(out)


def _read_kv(text: str, source: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        out[key.strip().replace("-", "_") if "." not in key else key.strip()] = value.strip()
    return out


def _defaults() -> dict:
    text = resources.files("majorant").joinpath("data/grids.cfg").read_text()
    kv = _read_kv(text, "grids.cfg")
    if kv.pop("version", None) != "1":
        raise ConfigError("unsupported grids.cfg version")
    return kv


def load_config(path: str) -> dict:
    """Flat ``key = value`` file; keys match the long flags (``max_side`` or ``max-side``)."""
    try:
        with open(path, encoding="utf-8") as fh:
            return _read_kv(fh.read(), path)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None


@dataclass(frozen=True)
class SuiteConfig:
    """One resolved run: suite name, its grids, and run options."""

    suite: str
    params: dict = field(default_factory=dict)
    tol: Optional[float] = None
    output: str = "json"
    seed: int = 7
    jobs: int = 1

    def __post_init__(self):
        if self.suite not in SUITES + (_ALL,):
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.output not in ("json", "csv"):
            raise ConfigError("output must be json or csv")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        for key, grid in self.params.items():
            if isinstance(grid, tuple) and not grid:
                raise ConfigError(f"empty grid for {key}")


_INT_KEYS = {"n", "dims", "tightness_m"}
_SCALAR_KEYS = {"max_side": int, "boxes": int, "char_boxes": int, "seed": int}
_FLAG_KEYS = ("n", "p", "s", "q", "x", "dims", "max_side", "boxes", "char_boxes", "tightness_m")


def _param(suite: str, key: str, value: str):
    if key in _SCALAR_KEYS:
        try:
            return _SCALAR_KEYS[key](value)
        except ValueError:
            raise ConfigError(f"{suite}.{key} must be an integer") from None
    return parse_grid(value, integer=key in _INT_KEYS)


def build_config(suite: str, overrides: dict) -> SuiteConfig:
    """Merge packaged defaults, then ``overrides`` (config file, then flags)."""
    defaults = _defaults()
    params = {}
    for key, value in defaults.items():
        s, _, k = key.partition(".")
        if s == suite or suite == _ALL:
            params.setdefault(s, {})[k] = value
    run = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if "." in key:
            # suite-qualified key from a config file, e.g. ``discrete-ball.n``
            s, _, k = key.partition(".")
            k = k.replace("-", "_")
            if s not in SUITES or k not in _FLAG_KEYS:
                raise ConfigError(f"unknown key {key!r}")
            if s == suite or suite == _ALL:
                params.setdefault(s, {})[k] = value
            continue
        key = key.replace("-", "_")
        if key in ("suite", "tol", "output", "seed", "jobs"):
            run[key] = value
        elif key in _FLAG_KEYS:
            for s in (SUITES if suite == _ALL else (suite,)):
                params.setdefault(s, {})[key] = value
        else:
            raise ConfigError(f"unknown key {key!r}")
    try:
        tol = float(run["tol"]) if "tol" in run else None
        seed = int(run.get("seed", params.get("lattice", {}).get("seed", 7)))
        jobs = int(run.get("jobs", os.environ.get("MAJORANT_JOBS", 1)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    resolved = {s: {k: (v if not isinstance(v, str) else _param(s, k, v))
                    for k, v in p.items() if k != "seed"} for s, p in params.items()}
    return SuiteConfig(suite, resolved, tol, str(run.get("output", "json")), seed, jobs)


# ---------------------------------------------------------------- records

def _record(suite: str, name: str, params: dict, lhs, rhs, margin, budget, kind: str,
            passed: Optional[bool] = None) -> dict:
    lhs, rhs, margin, budget = float(lhs), float(rhs), float(margin), float(budget)
    if passed is None:
        if kind == "strict":
            passed = margin > budget
        elif kind == "bound":
            passed = margin >= -budget
        else:
            passed = abs(margin) <= budget
    return {"suite": suite, "name": name, "params": params, "lhs": lhs, "rhs": rhs,
            "margin": margin, "error_budget": budget, "kind": kind, "pass": bool(passed)}


def _from_report(suite: str, rep, kind: str = "strict", name: Optional[str] = None) -> dict:
    return _record(suite, name or rep.name, dict(rep.params), rep.lhs, rep.rhs, rep.margin,
                   rep.error_budget, kind)


def _worst(suite: str, name: str, reps: list, grid_label: str, kind: str = "strict") -> dict:
    """Aggregate a grid of reports into its smallest-slack record."""
    i = min(range(len(reps)), key=lambda j: reps[j].margin - reps[j].error_budget)
    r = reps[i]
    rec = _record(suite, name, {"grid": grid_label, "worst": dict(r.params)}, r.lhs, r.rhs,
                  r.margin, r.error_budget, kind)
    ok = all((x.margin > x.error_budget) if kind == "strict" else (x.margin >= -x.error_budget)
             for x in reps)
    rec["pass"] = bool(ok)
    return rec


# ---------------------------------------------------------------- tasks

def _t_ball(s: float, tol: Optional[float]) -> list:
    from .inequalities import ball_check
    rep = ball_check(s) if tol is None else ball_check(s, tol)
    return [_from_report("ball", rep, "equality" if s == 1 else "strict")]


def _t_op_bessel(s: float, tol: Optional[float]) -> list:
    from .inequalities import op_bessel_check
    rep = op_bessel_check(s) if tol is None else op_bessel_check(s, tol)
    return [_from_report("op-bessel", rep, "equality" if s == 1 else "strict")]


def _t_op_cumulative(x: float, tol: Optional[float]) -> list:
    from .inequalities import op_cumulative_check
    return [_from_report("op-bessel", op_cumulative_check(x), "bound")]


def _t_op_transport(tol: Optional[float]) -> list:
    from .measures import named_density
    from .transport1d import build_transport, contraction_report
    t = build_transport(named_density("bessel_kernel"), None, named_density("exp_quartersq"), None)
    grid = np.linspace(30.0 / 4096, 30.0, 4096)
    rep = contraction_report(t, "TTprime_le_x", grid, refine_rounds=0)
    return [_record("op-bessel", "op_TTprime_le_x", {"grid": "(0, 30] x4096"},
                    rep.sup_observed, 1.0, 1.0 - rep.sup_observed, 1e-9, "bound")]


def _t_discrete(n: int, ps: tuple, tol: Optional[float]) -> list:
    from .inequalities import discrete_ball_check
    out = []
    for p in ps:
        rep = discrete_ball_check(n, p) if tol is None else discrete_ball_check(n, p, tol)
        out.append(_from_report("discrete-ball", rep))
    return out


def _lemma_grid(name: str, args_list: list, label: str, kind: str = "strict") -> list:
    from .inequalities import named_lemma_check
    reps = [named_lemma_check(name, *a) for a in args_list]
    return [_worst("lemmas", name, reps, label, kind)]


def _t_lemma(name: str, tol: Optional[float]) -> list:
    from .inequalities import (Y_STAR, _in_james_window, james_constants, lemma_final_aux,
                               named_lemma_check)
    xs = np.linspace(0.5, 10.0, 2048)
    if name in ("erfc_engineering", "erfc_series"):
        return _lemma_grid(name, [(float(x),) for x in xs], "[0.5, 10] x2048")
    if name == "lemma_final":
        ys = np.linspace(math.pi, 100.0, 4096)
        out = _lemma_grid(name, [(float(y),) for y in ys], "[pi, 100] x4096")
        aux = lemma_final_aux(Y_STAR)
        out.append(_record("lemmas", "lemma_final_H_prime", {"y": Y_STAR}, aux["H_prime"],
                           0.0014, 0.0014 - aux["H_prime"], 0.00005, "equality"))
        out.append(_record("lemmas", "lemma_final_G", {"y": Y_STAR}, aux["G"], -0.0015,
                           -0.0015 - aux["G"], 0.00005, "equality"))
        return out
    if name == "sinus_monotone":
        pts = np.linspace(0.01, math.pi / 2, 64)
        args = [(float(a), float(b)) for i, a in enumerate(pts) for b in pts[i + 1:]]
        return _lemma_grid(name, args, "0 < a < b <= pi/2, 64-point lattice")
    if name == "kernel_gauss_dom":
        args = [(n, float(x)) for n in range(2, 17) for x in np.linspace(0, 1.0 / n, 66)[1:-1]]
        return _lemma_grid(name, args, "n in 2..16, x in (0, 1/n) x64")
    if name == "forJames":
        xs = np.concatenate([np.linspace(0.01, 1.0, 100), np.linspace(1.01, 6.0, 100)])
        xs = xs[np.abs(xs - np.round(xs)) > 1e-9]
        return _lemma_grid(name, [(float(x),) for x in xs], "(0, 6] non-integers")
    if name == "forJames_claim":
        return _lemma_grid(name, [(float(y),) for y in np.linspace(20.01, 200, 64)], "(20, 200]")
    if name == "lemma_james":
        args = []
        for n in range(3, 13):
            lo = max(0.5 - 1.0 / n, 1.0 / n)
            args += [(n, float(x)) for x in np.linspace(lo, 0.5, 33)[1:] if _in_james_window(n, x)]
        out = _lemma_grid(name, args, "n in 3..12 on the window")
        for n in range(3, 7):
            out.append(_from_report("lemmas", named_lemma_check("james_chain", n)))
        return out
    if name == "pain":
        args = [(n, float(x)) for n in range(5, 13)
                for x in np.linspace(1.0 / n, 0.5 - 1.0 / n, 34)[1:-1]]
        return _lemma_grid(name, args, "n in 5..12, interior of [1/n, 1/2 - 1/n]")
    if name == "g_star":
        out = []
        for n, form in ((3, "engineering"), (4, "engineering"), (5, "series")):
            g = james_constants(n)["g_star"]
            out.append(_from_report("lemmas", named_lemma_check("g_star", n, g, form)))
        return out
    if name == "kk_refined":
        return [_from_report("lemmas", named_lemma_check(name, s)) for s in (1.125, 1.5, 2.0, 3.0)]
    if name == "theta_bound":
        return [_from_report("lemmas", named_lemma_check(name, 6, 0.295)),
                _from_report("lemmas", named_lemma_check(name, 5, 0.299))]
    if name == "inv_g_lower":
        return _lemma_grid(name, [(n,) for n in range(5, 41)], "n in 5..40")
    if name == "proof_constant":
        return [_from_report("lemmas", named_lemma_check(name, c), name="proof_constant")
                for c in ("5.67", "27.9", "discriminant", "n6_chain", "n3_chain",
                          "half_n2_vs_sqrt")]
    raise ConfigError(f"no lemma grid for {name!r}")


_LEMMA_ORDER = ("erfc_engineering", "erfc_series", "lemma_final", "sinus_monotone",
                "kernel_gauss_dom", "forJames", "forJames_claim", "lemma_james", "pain",
                "g_star", "kk_refined", "theta_bound", "inv_g_lower", "proof_constant")


def _t_lattice_boxes(seed: int, count: int, dims: tuple, max_side: int, start: int,
                     stop: int) -> list:
    from .lattice_slicing import (brute_force_counts, random_boxes, slice_bound_check,
                                  slice_polynomial)
    boxes = random_boxes(count, seed, dims=dims, max_side=max_side)
    out = []
    for i in range(start, min(stop, count)):
        box = boxes[i]
        poly = slice_polynomial(box)
        brute = brute_force_counts(box)
        bad = sum(int(a) != b for a, b in zip(brute.tolist(), poly.coeffs))
        bad += abs(len(brute) - len(poly.coeffs))
        bad += (not poly.is_palindromic()) + (poly.total != box.volume)
        params = {"box": i, "lengths": box.lengths, "offsets": box.offsets}
        out.append(_record("lattice", "slice_exact", params, bad, 0, -bad, 0, "equality"))
        rep = slice_bound_check(box)
        out.append(_record("lattice", "slice_bound", params, rep.lhs, rep.rhs, rep.margin, 0.0,
                           "strict", rep.strict_pass))
    return out


def _t_lattice_char(seed: int, count: int, dims: tuple, max_side: int) -> list:
    from .lattice_slicing import char_fn_bound_check, random_boxes, slice_polynomial
    out = []
    for i, box in enumerate(random_boxes(count, seed, dims=dims, max_side=max_side)):
        poly = slice_polynomial(box)
        k = poly.coeffs.index(poly.max_count) + sum(box.offsets)
        params = {"box": i, "lengths": box.lengths, "k": k}
        try:
            rep = char_fn_bound_check(box, k)
        except CaseCondition:
            continue
        out.append(_record("lattice", "char_fn_holder", params, rep.lhs, rep.rhs, rep.margin,
                           rep.error_budget, "bound"))
        chain = rep.details["chain_bound"]
        out.append(_record("lattice", "char_fn_chain", params, rep.rhs, chain, chain - rep.rhs,
                           rep.error_budget, "strict"))
    return out


def _t_lattice_tightness(ms: tuple) -> list:
    from .lattice_slicing import tightness_ratio
    ratios = [tightness_ratio(m) for m in ms]
    steps = np.diff(ratios) if len(ratios) > 1 else np.array([1.0])
    worst = float(np.min(steps))
    top = ratios[-1]
    limit = math.sqrt(2.0)
    return [
        _record("lattice", "tightness_increasing", {"m": f"{ms[0]}..{ms[-1]}"}, 0.0, worst, worst,
                0.0, "strict"),
        _record("lattice", "tightness_limit", {"m": ms[-1]}, 0.999 * limit, top,
                top - 0.999 * limit, 0.0, "strict"),
        _record("lattice", "tightness_below_limit", {"m": ms[-1]}, top, limit, limit - top, 0.0,
                "strict"),
    ]


def _t_lattice_plancherel(seed: int, count: int, dims: tuple, max_side: int) -> list:
    from .lattice_slicing import plancherel_check, random_boxes
    out = []
    for i, box in enumerate(random_boxes(count, seed, dims=dims, max_side=max_side)):
        rep = plancherel_check(box)
        out.append(_record("lattice", "plancherel", {"box": i, "lengths": box.lengths},
                           rep.lhs, rep.rhs, rep.margin, rep.error_budget, "strict"))
    return out


def _t_entropy_member(label: str, qs: tuple) -> list:
    from .entropy import gaussian_dominance_check, slc_registry
    d = dict(slc_registry())[label]
    rep = gaussian_dominance_check(d, qs, transport=True)
    out = []
    maj = rep.majorization
    out.append(_record("entropy", "gaussian_majorized", {"member": label}, 0.0, maj.worst_margin,
                       maj.worst_margin, maj.error_budget, "bound", maj.passed))
    c = rep.contraction
    out.append(_record("entropy", "caffarelli_Tprime_le_1", {"member": label}, c.sup_observed,
                       1.0, 1.0 - c.sup_observed, 1e-9, "bound", c.passed))
    for e in rep.entries:
        p = {"member": label, "q": e.q}
        out.append(_record("entropy", "renyi_dominance", p, e.renyi_f, e.renyi_gauss,
                           e.renyi_margin, e.error_budget, "bound"))
        out.append(_record("entropy", "psi_link", p, e.psi_residual, 1e-9,
                           1e-9 - e.psi_residual, 0.0, "strict"))
    return out


def _t_entropy_sigma(qs: tuple) -> list:
    from .entropy import entropy
    from .measures import named_density
    g, f = named_density("normal"), named_density("normal", 0.0, 0.8)
    out = []
    for q in qs:
        gap = entropy(f, q) - entropy(g, q)
        out.append(_record("entropy", "gaussian_scaling_gap", {"sigma": 0.8, "q": q}, gap,
                           math.log(0.8), math.log(0.8) - gap, 1e-9, "equality"))
    return out


def _t_entropy_inflation() -> list:
    from .entropy import inflation_check
    from .measures import named_density
    out = []
    d = named_density("normal")
    for name, param in (("linear", 1.5), ("cubic", 0.3), ("sinh", 0.5)):
        for q in (0.5, 1.0, 2.0, math.inf):
            r = inflation_check(d, name, param, q)
            out.append(_record("entropy", "inflation", {"map": name, "param": param, "q": q},
                               r.h_source, r.h_image, r.margin, r.error_budget, "bound"))
    return out


def _t_cert_majorization(pair: str) -> list:
    from .convex_order import majorization_verdict
    from .measures import measured, named_density
    if pair == "ball":
        f, g, mode = named_density("gauss_pi"), named_density("sinc2"), "standard"
    elif pair == "op":
        f, g, mode = named_density("exp_quartersq"), named_density("bessel_kernel"), "standard"
    else:
        n = int(pair.split(":")[1])
        f, g, mode = named_density("discrete_ball_f", n), named_density("discrete_ball_g", n), \
            "vanishing"
    v = majorization_verdict(measured(f), measured(g), mode)
    agree_gap = float(np.max(np.abs(v.tail_gaps - v.gaps) - (v.gap_errors + v.tail_errors)))
    return [
        _record("certificates", "majorization", {"pair": pair, "mode": mode}, 0.0,
                v.worst_margin, v.worst_margin, v.error_budget, "bound", v.passed),
        _record("certificates", "characterizations_agree", {"pair": pair}, agree_gap, 0.0,
                -agree_gap, 0.0, "bound", v.characterizations_agree),
    ]


def _t_cert_np_phi() -> list:
    from .measures import (distribution_function, measured, named_density, np_phi,
                           single_crossing)
    f, g = measured(named_density("gauss_pi")), measured(named_density("sinc2"))
    cr = single_crossing(distribution_function(f.density), distribution_function(g.density),
                         np.geomspace(1e-4, 0.999, 200))
    lam = cr.crossing
    ss = (1.0, 1.5, 2.0, 3.0, 6.0)
    vals = [np_phi(f, g, lam, s) for s in ss]
    out = []
    for (s0, a), (s1, b) in zip(zip(ss, vals), zip(ss[1:], vals[1:])):
        out.append(_record("certificates", "np_phi_nondecreasing", {"s": [s0, s1]}, a.value,
                           b.value, b.value - a.value, a.error_bound + b.error_bound, "bound"))
    return out


def _t_cert_transport(which: str) -> list:
    from .measures import named_density
    from .transport1d import build_transport, contraction_report, ma_residual, pushforward_check
    if which == "ball":
        t = build_transport(named_density("sinc2"), None, named_density("gauss_pi"), None)
        grid, xs = (0.0, 6.0), (0.3, 1.7, 2.5, 4.2)
    else:
        n = int(which.split(":")[1])
        t = build_transport(named_density("discrete_ball_g", n), None,
                            named_density("discrete_ball_f", n), None)
        grid, xs = None, tuple(0.5 * (k + 0.37) / n for k in range(n))
    c = contraction_report(t, "Tprime_le_1", grid)
    res = max(abs(ma_residual(t, x)) for x in xs)
    push = pushforward_check(t)
    rows = {r[0]: r for r in push.rows}
    out = [_record("certificates", "transport_Tprime_le_1", {"map": which}, c.sup_observed, 1.0,
                   1.0 - c.sup_observed, 1e-9, "bound"),
           _record("certificates", "monge_ampere_residual", {"map": which}, res, 1e-6,
                   1e-6 - res, 0.0, "strict")]
    for h in ("1", "x", "x^2"):
        disc = rows[h][3]
        out.append(_record("certificates", "pushforward", {"map": which, "h": h}, disc, 1e-7,
                           1e-7 - disc, 0.0, "strict"))
    return out


_TASKS: dict = {
    "ball": _t_ball, "op_bessel": _t_op_bessel, "op_cumulative": _t_op_cumulative,
    "op_transport": _t_op_transport, "discrete": _t_discrete, "lemma": _t_lemma,
    "lattice_boxes": _t_lattice_boxes, "lattice_char": _t_lattice_char,
    "lattice_tightness": _t_lattice_tightness, "lattice_plancherel": _t_lattice_plancherel,
    "entropy_member": _t_entropy_member, "entropy_sigma": _t_entropy_sigma,
    "entropy_inflation": _t_entropy_inflation, "cert_majorization": _t_cert_majorization,
    "cert_np_phi": _t_cert_np_phi, "cert_transport": _t_cert_transport,
}


def _execute(task: tuple) -> list:
    name, args = task
    try:
        return _TASKS[name](*args)
    except MajorantError as exc:
        # a check that cannot be evaluated is a failed record, not a crash
        return [{"suite": "error", "name": name, "params": {"args": list(args),
                 "error": f"{type(exc).__name__}: {exc}"}, "lhs": math.nan, "rhs": math.nan,
                 "margin": math.nan, "error_budget": math.nan, "kind": "strict", "pass": False}]


def suite_tasks(config: SuiteConfig) -> list:
    """Tasks of the configured suite(s), in canonical order."""
    suites = SUITES if config.suite == _ALL else (config.suite,)
    tol = config.tol
    tasks = []
    for suite in suites:
        p = config.params.get(suite, {})
        if suite == "ball":
            tasks += [("ball", (s, tol)) for s in p["s"]]
        elif suite == "op-bessel":
            tasks += [("op_bessel", (s, tol)) for s in p["s"]]
            tasks += [("op_cumulative", (x, tol)) for x in p["x"]]
            tasks.append(("op_transport", (tol,)))
        elif suite == "discrete-ball":
            tasks += [("discrete", (n, tuple(p["p"]), tol)) for n in p["n"]]
        elif suite == "lemmas":
            tasks += [("lemma", (name, tol)) for name in _LEMMA_ORDER]
        elif suite == "lattice":
            seed, count = config.seed, p["boxes"]
            dims, side = tuple(p["dims"]), p["max_side"]
            chunk = 50
            tasks += [("lattice_boxes", (seed, count, dims, side, i, i + chunk))
                      for i in range(0, count, chunk)]
            tasks.append(("lattice_char", (seed, p["char_boxes"], dims, side)))
            tasks.append(("lattice_tightness", (tuple(p["tightness_m"]),)))
            tasks.append(("lattice_plancherel", (seed, 20, dims, side)))
        elif suite == "entropy":
            from .entropy import slc_registry
            qs = tuple(p["q"])
            tasks += [("entropy_member", (label, qs)) for label, _ in slc_registry()]
            tasks.append(("entropy_sigma", (qs,)))
            tasks.append(("entropy_inflation", ()))
        elif suite == "certificates":
            ns = p.get("n", tuple(range(2, 17)))
            tasks += [("cert_majorization", (pair,)) for pair in ("ball", "op", "discrete:3")]
            tasks.append(("cert_np_phi", ()))
            tasks.append(("cert_transport", ("ball",)))
            tasks += [("cert_transport", (f"discrete:{n}",)) for n in ns]
    return tasks


def run_suite(config: SuiteConfig) -> list:
    """Run every task; records keep task order regardless of ``jobs``."""
    tasks = suite_tasks(config)
    if config.jobs == 1 or len(tasks) == 1:
        chunks = [_execute(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(_execute, tasks))
    return [rec for chunk in chunks for rec in chunk]


# ---------------------------------------------------------------- output

def _num(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x + 0.0, ".17g")


def _json(obj) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, str):
        import json
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{_json(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _params_text(params: dict) -> str:
    return _json(params)


def render(records: Sequence[dict], config: SuiteConfig) -> str:
    if config.output == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([r["suite"], r["name"], _params_text(r["params"]),
                        *(_num(r[k]).strip('"') for k in ("lhs", "rhs", "margin", "error_budget")),
                        "true" if r["pass"] else "false"])
        return buf.getvalue()
    failed = sum(not r["pass"] for r in records)
    doc = {
        "schema": SCHEMA,
        "suite": config.suite,
        "tol": config.tol,
        "seed": config.seed,
        "records": list(records),
        "summary": {"total": len(records), "failed": failed},
    }
    lines = ["{"]
    for i, (k, v) in enumerate(doc.items()):
        end = "," if i < len(doc) - 1 else ""
        if k == "records":
            inner = ",\n".join("    " + _json(r) for r in v)
            lines.append(f'  "records": [\n{inner}\n  ]{end}' if v else f'  "records": []{end}')
        else:
            lines.append(f"  {_json(k)}: {_json(v)}{end}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- entry point

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description=__doc__.splitlines()[0])
    ap.add_argument("suite_pos", nargs="?", metavar="suite",
                    help="one of " + ", ".join(SUITES + (_ALL,)))
    ap.add_argument("--suite")
    ap.add_argument("--n", help="integers, e.g. 2..8 or 2,3,5")
    ap.add_argument("--p", help="exponents, e.g. 2,4,8 or 2..64:0.5")
    ap.add_argument("--s")
    ap.add_argument("--q")
    ap.add_argument("--x")
    ap.add_argument("--dims")
    ap.add_argument("--max-side")
    ap.add_argument("--boxes")
    ap.add_argument("--tol")
    ap.add_argument("--seed")
    ap.add_argument("--jobs")
    ap.add_argument("--output", choices=("json", "csv"))
    ap.add_argument("--config")
    return ap


def _resolve(argv: Optional[Sequence[str]]) -> SuiteConfig:
    args = _parser().parse_args(argv)
    overrides = load_config(args.config) if args.config else {}
    flags = {k: v for k, v in vars(args).items()
             if k not in ("suite_pos", "config", "suite") and v is not None}
    suite = args.suite or args.suite_pos or overrides.pop("suite", None)
    overrides.pop("suite", None)
    if args.suite and args.suite_pos and args.suite != args.suite_pos:
        raise ConfigError("conflicting suite names")
    if suite is None:
        raise ConfigError("no suite given")
    overrides.update(flags)
    return build_config(suite, overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = _resolve(argv)
        records = run_suite(config)
        sys.stdout.write(render(records, config))
        sys.stdout.flush()
        failed = [r for r in records if not r["pass"]]
        if failed:
            raise CheckFailure(f"{len(failed)} of {len(records)} checks failed")
    except ConfigError as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
