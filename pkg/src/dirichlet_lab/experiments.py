"""Scenario files, convergence sweeps and report emission.

A scenario is a JSON object::

    {
      "schema_version": 1,
      "name": "bump-pointwise",
      "function": "piecewise([-1,1]: 1 - t^2; else: 0)",
      "period_hint": null,                  # optional
      "support_hint": [-1, 1],              # optional
      "x_points": [1.0],                    # or {"interval": [a, b], "count": k}
                                            # or {"random": {"interval": [a, b], "count": k}}
      "sweep": {"rule": "power", "l0": 10, "ratio": 2, "steps": 4, "exponent": 2},
                                            # or [{"n": 100, "l": 10}, ...]
      "quadrature": {"nodes_per_panel": 8, ...},
      "checks": ["converge", "bound"],
      "threshold": 0.05,                    # optional, final abs error for converge
      "seed": 0,
      "lebesgue": {"h_min": 1e-4, "h_max": 1e4, "points_per_decade": 8},
      "class_e": {"c_list": [0.5, 1, 6.283185307179586], "T_grid": [10, 100, 1000]},
      "samples": 10000
    }
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import class_e as ce
from . import dirichlet_core as dc
from . import lebesgue_test as lt
from .dsl import DSLError
from .function_model import FunctionSpec
from .kernels import BACKEND
from .quadrature import QuadratureConfig

SCHEMA_VERSION = 1
CHECKS = ("coeffs", "partial-sum", "error-repr", "lebesgue", "bound", "k", "class-e", "converge")
TRACE_HEADER = ("j", "n", "l", "eta", "x", "S", "target", "abs_error", "bound_rhs")

ROUTE_TOL = 1e-7
SPLIT_TOL = 1e-8
K_TOL = 1e-7
COEFF_TOL = 1e-8


class ScenarioError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


# ---------------------------------------------------------------------------
# formatting


def fmt(value) -> str:
    """12 significant digits, stable across runs; '' for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if v == 0.0:
        return "0"
    if not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return format(v, ".12g")


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return float(fmt(v)) if math.isfinite(v) else fmt(v)
    return value


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# scenario model


@dataclass(frozen=True)
class Scenario:
    function: FunctionSpec
    x_points: tuple
    sweep: tuple  # of GridParams
    quadrature: QuadratureConfig
    checks: tuple
    name: str = "scenario"
    threshold: Optional[float] = None
    seed: int = 0
    lebesgue: dict = field(default_factory=lambda: {"h_min": 1e-4, "h_max": 1e4, "points_per_decade": 8})
    class_e: dict = field(
        default_factory=lambda: {"c_list": list(ce.DEFAULT_C_LIST), "T_grid": list(ce.DEFAULT_T_GRID)}
    )
    samples: int = 10_000


def _require(cond, path, message):
    if not cond:
        raise ScenarioError(path, message)


def _number(value, path, positive=False):
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), path, "must be a number")
    _require(math.isfinite(value), path, "must be finite")
    if positive:
        _require(value > 0, path, "must be positive")
    return float(value)


def _integer(value, path, minimum=None):
    _require(isinstance(value, int) and not isinstance(value, bool), path, "must be an integer")
    if minimum is not None:
        _require(value >= minimum, path, f"must be >= {minimum}")
    return value


def _parse_sweep(raw, path="sweep"):
    if isinstance(raw, dict):
        _require(raw.get("rule", "power") == "power", f"{path}.rule", "only the 'power' rule is supported")
        l0 = _number(raw.get("l0"), f"{path}.l0", positive=True)
        ratio = _number(raw.get("ratio", 2), f"{path}.ratio", positive=True)
        _require(ratio > 1, f"{path}.ratio", "must be > 1")
        steps = _integer(raw.get("steps"), f"{path}.steps", minimum=1)
        p = _number(raw.get("exponent", 2), f"{path}.exponent", positive=True)
        _require(p > 1, f"{path}.exponent", "must be > 1 so that eta -> 0")
        grids = []
        for j in range(steps):
            l = l0 * ratio**j
            # round before ceil so 10.0**2 style products do not pick up an extra unit
            grids.append(dc.GridParams(l, max(1, math.ceil(round(l**p, 9)))))
    else:
        _require(isinstance(raw, list) and raw, path, "must be a nonempty list or a rule object")
        grids = []
        for i, step in enumerate(raw):
            _require(isinstance(step, dict), f"{path}[{i}]", "must be an object with n and l")
            n = _integer(step.get("n"), f"{path}[{i}].n", minimum=1)
            l = _number(step.get("l"), f"{path}[{i}].l", positive=True)
            grids.append(dc.GridParams(l, n))
    for i in range(1, len(grids)):
        _require(grids[i].l > grids[i - 1].l, f"{path}[{i}].l", "l must be strictly increasing")
        _require(grids[i].eta < grids[i - 1].eta, f"{path}[{i}]", "eta = l/n must be strictly decreasing")
    return tuple(grids)


def _parse_x_points(raw, seed, path="x_points"):
    if isinstance(raw, list):
        _require(raw, path, "must be nonempty")
        return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(raw))
    _require(isinstance(raw, dict), path, "must be a list or an object")
    if "random" in raw:
        spec = raw["random"]
        _require(isinstance(spec, dict), f"{path}.random", "must be an object")
        lo, hi = _interval(spec.get("interval"), f"{path}.random.interval")
        count = _integer(spec.get("count"), f"{path}.random.count", minimum=1)
        rng = np.random.default_rng(seed)
        return tuple(float(v) for v in np.sort(rng.uniform(lo, hi, count)))
    lo, hi = _interval(raw.get("interval"), f"{path}.interval")
    count = _integer(raw.get("count"), f"{path}.count", minimum=1)
    if count == 1:
        return (lo,)
    return tuple(float(v) for v in np.linspace(lo, hi, count))


def _interval(raw, path):
    _require(isinstance(raw, list) and len(raw) == 2, path, "must be a pair [a, b]")
    a, b = _number(raw[0], f"{path}[0]"), _number(raw[1], f"{path}[1]")
    _require(a <= b, path, "requires a <= b")
    return a, b


_QUAD_FIELDS = {f.name for f in fields(QuadratureConfig)}


def scenario_from_dict(raw: dict, seed: Optional[int] = None, quad_overrides: Optional[dict] = None) -> Scenario:
    _require(isinstance(raw, dict), "", "scenario must be a JSON object")
    _require(raw.get("schema_version") == SCHEMA_VERSION, "schema_version", f"must be {SCHEMA_VERSION}")
    src = raw.get("function")
    _require(isinstance(src, str) and src.strip(), "function", "must be a nonempty DSL string")
    period = raw.get("period_hint")
    if period is not None:
        period = _number(period, "period_hint", positive=True)
    support = raw.get("support_hint")
    if support is not None:
        support = _interval(support, "support_hint")
    try:
        f = FunctionSpec(src, period, support)
    except DSLError as exc:
        raise ScenarioError("function", str(exc)) from exc

    if seed is None:
        seed = _integer(raw.get("seed", 0), "seed", minimum=0)

    checks = raw.get("checks")
    _require(isinstance(checks, list) and checks, "checks", "must be a nonempty list")
    for i, c in enumerate(checks):
        _require(c in CHECKS, f"checks[{i}]", f"unknown check {c!r}; expected one of {', '.join(CHECKS)}")

    quad = raw.get("quadrature", {}) or {}
    _require(isinstance(quad, dict), "quadrature", "must be an object")
    for key in quad:
        _require(key in _QUAD_FIELDS, f"quadrature.{key}", "unknown quadrature setting")
    merged = dict(quad)
    merged.update({k: v for k, v in (quad_overrides or {}).items() if v is not None})
    try:
        cfg = QuadratureConfig(**merged)
    except (TypeError, ValueError) as exc:
        raise ScenarioError("quadrature", str(exc)) from exc

    threshold = raw.get("threshold")
    if threshold is not None:
        threshold = _number(threshold, "threshold", positive=True)

    leb = {"h_min": 1e-4, "h_max": 1e4, "points_per_decade": 8}
    leb_raw = raw.get("lebesgue", {}) or {}
    _require(isinstance(leb_raw, dict), "lebesgue", "must be an object")
    for key in leb_raw:
        _require(key in leb, f"lebesgue.{key}", "unknown setting")
    leb.update(leb_raw)
    _number(leb["h_min"], "lebesgue.h_min", positive=True)
    _number(leb["h_max"], "lebesgue.h_max", positive=True)
    _require(leb["h_max"] >= 1000 * leb["h_min"], "lebesgue", "h_max/h_min must span at least three decades")
    _integer(leb["points_per_decade"], "lebesgue.points_per_decade", minimum=1)

    ce_cfg = {"c_list": list(ce.DEFAULT_C_LIST), "T_grid": list(ce.DEFAULT_T_GRID)}
    ce_raw = raw.get("class_e", {}) or {}
    _require(isinstance(ce_raw, dict), "class_e", "must be an object")
    for key in ce_raw:
        _require(key in ce_cfg, f"class_e.{key}", "unknown setting")
    ce_cfg.update(ce_raw)
    for key in ("c_list", "T_grid"):
        _require(isinstance(ce_cfg[key], list) and ce_cfg[key], f"class_e.{key}", "must be a nonempty list")
        ce_cfg[key] = [_number(v, f"class_e.{key}[{i}]", positive=True) for i, v in enumerate(ce_cfg[key])]
    _require(
        all(b > a for a, b in zip(ce_cfg["T_grid"][:-1], ce_cfg["T_grid"][1:])),
        "class_e.T_grid",
        "must be strictly increasing",
    )

    samples = _integer(raw.get("samples", 10_000), "samples", minimum=1)
    name = raw.get("name", "scenario")
    _require(isinstance(name, str), "name", "must be a string")

    needs_grid = any(c != "class-e" for c in checks)
    sweep = _parse_sweep(raw.get("sweep"), "sweep") if needs_grid or "sweep" in raw else ()
    needs_x = any(c not in ("class-e", "coeffs") for c in checks)
    x_points = _parse_x_points(raw.get("x_points"), seed) if needs_x or "x_points" in raw else ()

    return Scenario(
        function=f,
        x_points=x_points,
        sweep=sweep,
        quadrature=cfg,
        checks=tuple(dict.fromkeys(checks)),
        name=name,
        threshold=threshold,
        seed=seed,
        lebesgue=leb,
        class_e=ce_cfg,
        samples=samples,
    )


def load_scenario(path, seed: Optional[int] = None, quad_overrides: Optional[dict] = None) -> Scenario:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError("", f"{path}: invalid JSON ({exc})") from exc
    return scenario_from_dict(raw, seed, quad_overrides)


# ---------------------------------------------------------------------------
# convergence trace


@dataclass(frozen=True)
class TraceRow:
    j: int
    n: int
    l: float
    eta: float
    x: float
    S: float
    target: float
    abs_error: float
    bound_rhs: Optional[float] = None

    def as_tuple(self):
        return (self.j, self.n, self.l, self.eta, self.x, self.S, self.target, self.abs_error, self.bound_rhs)


def emit_report(trace: Sequence[TraceRow], format: str = "csv", path=None) -> str:
    """Serialise a convergence trace; writes to ``path`` when given."""
    if not trace:
        raise ValueError("trace is empty")
    if format == "csv":
        text = csv_text(TRACE_HEADER, [row.as_tuple() for row in trace])
    elif format == "json":
        text = dumps_json([dict(zip(TRACE_HEADER, row.as_tuple())) for row in trace])
    else:
        raise ValueError(f"unknown report format {format!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def convergence_demonstrated(errors: Sequence[float], threshold: Optional[float], run: int = 3) -> bool:
    """abs errors strictly decreasing over >= ``run`` consecutive steps ending
    at the last one, and the final error under ``threshold`` (when given)."""
    if len(errors) < run:
        return False
    tail = list(errors)[-run:]
    decreasing = all(b < a for a, b in zip(tail[:-1], tail[1:]))
    return decreasing and (threshold is None or tail[-1] <= threshold)


# ---------------------------------------------------------------------------
# running checks


@dataclass
class CheckOutcome:
    files: Dict[str, str] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    flags: Dict[str, object] = field(default_factory=dict)
    info: Dict[str, object] = field(default_factory=dict)


class Runner:
    def __init__(self, scenario: Scenario, jobs: int = 1):
        self.sc = scenario
        self.jobs = max(1, int(jobs))
        self._bounds = {}

    def _map(self, fn, items):
        items = list(items)
        if self.jobs == 1 or len(items) < 2:
            return [fn(i) for i in items]
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            return list(pool.map(fn, items))

    def _pairs(self):
        return [(j, x) for j in range(len(self.sc.sweep)) for x in self.sc.x_points]

    # individual checks ------------------------------------------------------

    def check_coeffs(self) -> CheckOutcome:
        sc, out = self.sc, CheckOutcome()
        f, cfg = sc.function, sc.quadrature

        def task(j):
            g = sc.sweep[j]
            a, b = dc.coefficients(f, g.l, g.n, cfg)
            spot = sorted({0, 1, g.n})
            gaps = []
            for k in spot:
                ref = dc.coeff(f, g.l, k, cfg)
                gaps.append(max(abs(ref.a - a[k]), abs(ref.b - b[k])))
            return a.copy(), b.copy(), max(gaps)

        for j, (a, b, gap) in enumerate(self._map(task, range(len(sc.sweep)))):
            out.files[f"coeffs_j{j}.csv"] = csv_text(("k", "a", "b"), [(k, a[k], b[k]) for k in range(len(a))])
            if gap > COEFF_TOL:
                out.failures.append(f"step {j}: batch vs single coefficient gap {gap:.3e} > {COEFF_TOL}")
            out.info[f"step{j}_spot_gap"] = gap
        return out

    def check_partial_sum(self) -> CheckOutcome:
        sc, out = self.sc, CheckOutcome()
        f, cfg = sc.function, sc.quadrature

        def task(pair):
            j, x = pair
            g = sc.sweep[j]
            return dc.partial_sum(f, x, g, cfg), dc.partial_sum_via_kernel(f, x, g, cfg)

        rows = []
        worst = 0.0
        for (j, x), (s1, s2) in zip(self._pairs(), self._map(task, self._pairs())):
            g = sc.sweep[j]
            rows.append((x, g.n, g.l, s1.value, s1.via))
            rows.append((x, g.n, g.l, s2.value, s2.via))
            gap = abs(s1.value - s2.value)
            worst = max(worst, gap)
            if gap > ROUTE_TOL:
                out.failures.append(f"step {j} x={fmt(x)}: route gap {gap:.3e} > {ROUTE_TOL}")
        out.files["partial_sum.csv"] = _csv_mixed(("x", "n", "l", "value", "via"), rows)
        out.info["max_route_gap"] = worst
        return out

    def check_error_repr(self) -> CheckOutcome:
        sc, out = self.sc, CheckOutcome()
        f, cfg = sc.function, sc.quadrature

        def task(pair):
            j, x = pair
            g = sc.sweep[j]
            return dc.error_representation(f, x, g, cfg), dc.mn_split(f, x, g, cfg)

        rows = []
        for (j, x), (er, mn) in zip(self._pairs(), self._map(task, self._pairs())):
            g = sc.sweep[j]
            rows.append((j, x, g.n, g.l, er.lhs, er.integral_term, er.residual, mn.M, mn.N, mn.total))
            gap = abs(mn.total - er.integral_term)
            if gap > SPLIT_TOL:
                out.failures.append(f"step {j} x={fmt(x)}: M+N differs from kernel integral by {gap:.3e}")
        header = ("j", "x", "n", "l", "lhs", "integral_term", "residual", "M", "N", "total")
        out.files["error_repr.csv"] = csv_text(header, rows)
        return out

    def check_lebesgue(self) -> CheckOutcome:
        sc, out = self.sc, CheckOutcome()
        f, cfg, leb = sc.function, sc.quadrature, sc.lebesgue

        profiles = self._map(
            lambda x: lt.phi_profile(f, x, leb["h_min"], leb["h_max"], leb["points_per_decade"], cfg),
            sc.x_points,
        )
        usable = [p for p in self._pairs() if sc.sweep[p[0]].eta < sc.sweep[p[0]].l]
        moduli = self._map(lambda p: lt.translation_modulus(f, p[1], sc.sweep[p[0]], cfg), usable)

        report = {"profiles": []}
        for x, prof in zip(sc.x_points, profiles):
            report["profiles"].append(
                {
                    "x0": x,
                    "samples": [list(s) for s in prof.samples],
                    "small_slope": prof.small_slope,
                    "large_slope": prof.large_slope,
                    "small_decade_slopes": prof.small_decade_slopes,
                    "large_decade_slopes": prof.large_decade_slopes,
                    "small_h_consistent": prof.small_consistent,
                    "large_h_consistent": prof.large_consistent,
                    "monotone": prof.monotone,
                }
            )
            if not prof.monotone:
                out.failures.append(f"x={fmt(x)}: Phi not monotone")
            out.flags[f"x={fmt(x)}:small_h_consistent"] = prof.small_consistent
            out.flags[f"x={fmt(x)}:large_h_consistent"] = prof.large_consistent
        rows = []
        by_x = {}
        for (j, x), mod in zip(usable, moduli):
            g = sc.sweep[j]
            rows.append((j, x, g.n, g.l, g.eta, mod))
            by_x.setdefault(x, []).append(mod)
        for x, mods in by_x.items():
            out.flags[f"x={fmt(x)}:modulus_decreasing"] = all(b < a for a, b in zip(mods[:-1], mods[1:]))
        report["translation_modulus"] = [dict(zip(("j", "x", "n", "l", "eta", "modulus"), r)) for r in rows]
        out.files["lebesgue.json"] = dumps_json(report)
        out.files["modulus.csv"] = csv_text(("j", "x", "n", "l", "eta", "modulus"), rows)
        return out

    def _bound(self, pair):
        if pair not in self._bounds:
            j, x = pair
            self._bounds[pair] = lt.bound_check(self.sc.function, x, self.sc.sweep[j], self.sc.quadrature)
        return self._bounds[pair]

    def check_bound(self) -> CheckOutcome:
        sc, out = self.sc, CheckOutcome()
        f, cfg = sc.function, sc.quadrature
        pairs = [p for p in self._pairs() if 2 * sc.sweep[p[0]].eta <= sc.sweep[p[0]].l]
        skipped = len(self._pairs()) - len(pairs)

        def task(pair):
            j, x = pair
            g = sc.sweep[j]
            return (
                self._bound(pair),
                lt.inequality_3_sampler(g, sc.samples, cfg),
                lt.inequality_4_sampler(f, x, g, sc.samples, cfg),
            )

        rows = []
        for (j, x), (bb, i3, i4) in zip(pairs, self._map(task, pairs)):
            g = sc.sweep[j]
            rows.append(
                (j, x, g.n, g.l, g.eta, bb.term_modulus, bb.term_tail, bb.term_local, bb.rhs_total, bb.lhs,
                 bb.slack, bb.holds, i3.worst, i3.bound, i4.worst)
            )
            if not bb.holds:
                out.failures.append(f"step {j} x={fmt(x)}: bound violated, lhs {bb.lhs:.6g} > rhs {bb.rhs_total:.6g} + slack")
            if not i3.holds:
                out.failures.append(f"step {j}: cot-sin sampler {i3.worst:.6g} exceeds n*pi")
            if not i4.holds:
                out.failures.append(f"step {j} x={fmt(x)}: chi ratio {i4.worst:.6g} exceeds 1")
        header = ("j", "x", "n", "l", "eta", "term_modulus", "term_tail", "term_local", "rhs_total", "lhs",
                  "slack", "holds", "ineq3_max", "ineq3_bound", "ineq4_max")
        out.files["bound.csv"] = csv_text(header, rows)
        out.info["skipped_rows"] = skipped
        return out

    def check_k(self) -> CheckOutcome:
        sc, out = self.sc, CheckOutcome()
        f, cfg = sc.function, sc.quadrature
        pairs = [p for p in self._pairs() if sc.sweep[p[0]].eta < 1.0 < sc.sweep[p[0]].l]
        results = self._map(lambda p: lt.k_decomposition(f, p[1], sc.sweep[p[0]], cfg), pairs)
        rows = []
        for (j, x), kb in zip(pairs, results):
            g = sc.sweep[j]
            rows.append((j, x, g.n, g.l, g.eta, kb.k1, kb.k2, kb.k3, kb.k4, kb.middle_term, kb.identity_gap))
            if kb.identity_gap > K_TOL:
                out.failures.append(f"step {j} x={fmt(x)}: K identity gap {kb.identity_gap:.3e} > {K_TOL}")
        header = ("j", "x", "n", "l", "eta", "k1", "k2", "k3", "k4", "middle_term", "identity_gap")
        out.files["k.csv"] = csv_text(header, rows)
        out.info["skipped_rows"] = len(self._pairs()) - len(pairs)
        return out

    def check_class_e(self) -> CheckOutcome:
        sc, out = self.sc, CheckOutcome()
        f, cfg = sc.function, sc.quadrature
        rep = ce.class_e_diagnostic(f, sc.class_e["c_list"], sc.class_e["T_grid"], cfg)
        rows = [(s.c, s.T, s.right_value, s.left_value) for c in rep.samples for s in rep.samples[c]]
        out.files["class_e.csv"] = csv_text(("c", "T", "right_value", "left_value"), rows)
        summary = {
            "consistent": {fmt(c): v for c, v in rep.consistent.items()},
            "right_envelope": {fmt(c): v for c, v in rep.right_envelope.items()},
            "left_envelope": {fmt(c): v for c, v in rep.left_envelope.items()},
        }
        for c, v in rep.consistent.items():
            out.flags[f"c={fmt(c)}:class_e_consistent"] = v
        if f.period_hint is not None:
            periodic = []
            for c in sc.class_e["c_list"]:
                for T in sc.class_e["T_grid"]:
                    pb = ce.periodic_bound_check(f, c, T, cfg)
                    periodic.append({"c": c, "T": T, "lhs": pb.lhs, "bound": pb.bound, "k": pb.k, "M": pb.M,
                                     "holds": pb.holds})
                    if not pb.holds:
                        out.failures.append(f"c={fmt(c)} T={fmt(T)}: periodic bound violated")
            summary["periodic_bound"] = periodic
        out.files["class_e.json"] = dumps_json(summary)
        return out

    def check_converge(self) -> CheckOutcome:
        sc, out = self.sc, CheckOutcome()
        f, cfg = sc.function, sc.quadrature
        xs = np.asarray(sc.x_points, dtype=float)
        targets = f(xs)
        with_bound = "bound" in sc.checks

        def task(j):
            return dc.partial_sums(f, xs, sc.sweep[j], cfg)

        values = self._map(task, range(len(sc.sweep)))
        bounds = {}
        if with_bound:
            pairs = [p for p in self._pairs() if 2 * sc.sweep[p[0]].eta <= sc.sweep[p[0]].l]
            for p, bb in zip(pairs, self._map(self._bound, pairs)):
                bounds[p] = bb.rhs_total
        trace = []
        for j, g in enumerate(sc.sweep):
            for i, x in enumerate(sc.x_points):
                s = float(values[j][i])
                trace.append(TraceRow(j, g.n, g.l, g.eta, x, s, float(targets[i]), abs(s - float(targets[i])),
                                      bounds.get((j, x))))
        out.files["converge.csv"] = emit_report(trace, "csv")
        per_step_max = [max(r.abs_error for r in trace if r.j == j) for j in range(len(sc.sweep))]
        out.info["max_abs_error_per_step"] = per_step_max
        out.flags["convergence_demonstrated"] = convergence_demonstrated(per_step_max, sc.threshold)
        return out

    def run(self) -> Dict[str, CheckOutcome]:
        dispatch = {
            "coeffs": self.check_coeffs,
            "partial-sum": self.check_partial_sum,
            "error-repr": self.check_error_repr,
            "lebesgue": self.check_lebesgue,
            "bound": self.check_bound,
            "k": self.check_k,
            "class-e": self.check_class_e,
            "converge": self.check_converge,
        }
        return {name: dispatch[name]() for name in self.sc.checks}


def _csv_mixed(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


@dataclass
class RunResult:
    exit_status: int
    outcomes: Dict[str, CheckOutcome]
    summary: dict


def run_scenario(scenario, out_dir=None, strict: bool = False, jobs: int = 1, seed: Optional[int] = None,
                 quad_overrides: Optional[dict] = None) -> RunResult:
    """Execute every requested check; write one file per output plus summary.json.

    Exit status is 0 iff all hard assertions pass (and, with ``strict``, all
    consistency flags are true).
    """
    if not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario, seed, quad_overrides)
    outcomes = Runner(scenario, jobs).run()
    failed_flags = [f"{name}:{k}" for name, o in outcomes.items() for k, v in o.flags.items() if v is False]
    hard_ok = not any(o.failures for o in outcomes.values())
    status = 0 if hard_ok and (not strict or not failed_flags) else 1
    summary = {
        "schema_version": SCHEMA_VERSION,
        "name": scenario.name,
        "function": scenario.function.expression_source,
        "seed": scenario.seed,
        "backend": BACKEND,
        "strict": strict,
        "exit_status": status,
        "quadrature": {f.name: getattr(scenario.quadrature, f.name) for f in fields(QuadratureConfig)},
        "sweep": [{"n": g.n, "l": g.l, "eta": g.eta} for g in scenario.sweep],
        "x_points": list(scenario.x_points),
        "checks": {
            name: {
                "passed": not o.failures,
                "failures": o.failures,
                "flags": o.flags,
                "info": o.info,
                "files": sorted(o.files),
            }
            for name, o in outcomes.items()
        },
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for o in outcomes.values():
            for fname, text in o.files.items():
                (out / fname).write_text(text)
        (out / "summary.json").write_text(dumps_json(summary))
    return RunResult(status, outcomes, summary)
