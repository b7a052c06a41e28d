"""Composite Gauss-Legendre quadrature with frequency-aware panels.

Every segment between declared breakpoints starts with enough panels to put
``min_panels_per_oscillation`` panels on each half-period of the fastest
oscillation (``freq_hint``).  Each panel is then compared against its two
(slightly unequal) halves; panels whose halves disagree by more than their
share of the tolerance are split, so kinks the caller could not declare (for
example the zeros of ``|phi|``) are resolved locally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np


class QuadratureError(RuntimeError):
    """Refinement budget exhausted before two levels agreed."""

    def __init__(self, message, value, error_estimate, panels_used):
        super().__init__(f"{message}; last value {value!r} +/- {error_estimate:.3e} on {panels_used} panels")
        self.value = value
        self.error_estimate = error_estimate
        self.panels_used = panels_used


@dataclass(frozen=True)
class QuadratureConfig:
    """Quadrature settings.

    ``singularity_switch_radius`` is relative: callers scale it by the
    interval half-length l (the removable singularity of the kernel sits at
    multiples of 2l).
    """

    nodes_per_panel: int = 8
    min_panels_per_oscillation: int = 4
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    singularity_switch_radius: float = 1e-6
    max_depth: int = 100
    max_panels: int = 4_000_000

    def __post_init__(self):
        if int(self.nodes_per_panel) != self.nodes_per_panel or self.nodes_per_panel < 2:
            raise ValueError("nodes_per_panel must be an integer >= 2")
        if int(self.min_panels_per_oscillation) != self.min_panels_per_oscillation or self.min_panels_per_oscillation < 1:
            raise ValueError("min_panels_per_oscillation must be an integer >= 1")
        for name in ("abs_tol", "rel_tol", "singularity_switch_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_depth < 1 or self.max_panels < 1:
            raise ValueError("refinement budget must be positive")

    def with_overrides(self, **kw) -> "QuadratureConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


DEFAULT_CONFIG = QuadratureConfig()

# panels are split slightly off-centre: a jump sitting exactly on a midpoint
# makes a panel and its symmetric halves agree by accident
SPLIT = 0.5 - 0.04 * math.sqrt(2.0)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    panels_used: int


@dataclass(frozen=True)
class Partition:
    """Accepted panels of an adaptive run, sorted by position."""

    lo: np.ndarray
    hi: np.ndarray
    values: np.ndarray  # (panels,) or (components, panels)
    errors: np.ndarray  # (panels,)

    @property
    def value(self):
        return self.values.sum(axis=-1)

    @property
    def error_estimate(self) -> float:
        return float(self.errors.sum())

    def fine_nodes(self, nodes_per_panel):
        """Nodes and weights of the two-half rule on every accepted panel."""
        mid = self.lo + SPLIT * (self.hi - self.lo)
        lo = np.concatenate([self.lo, mid])
        hi = np.concatenate([mid, self.hi])
        order = np.argsort(lo, kind="stable")
        return panel_nodes(lo[order], hi[order], nodes_per_panel)


@lru_cache(maxsize=None)
def gauss_legendre(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(lo, hi, m):
    x, w = gauss_legendre(m)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * x[None, :]
    wts = half[:, None] * w[None, :]
    return pts.ravel(), wts.ravel()


def _panel_sums(func, lo, hi, m):
    x, w = gauss_legendre(m)
    half = 0.5 * (hi - lo)
    pts = (0.5 * (hi + lo))[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(func(pts.ravel()), dtype=float)
    vals = vals.reshape(vals.shape[:-1] + pts.shape)
    return (vals @ w) * half


def initial_edges(a, b, breakpoints, freq_hint, cfg) -> np.ndarray:
    """Panel edges over [a, b]: breakpoints kept, each segment frequency-resolved."""
    cuts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    edges = [np.array([a])]
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        count = max(1, math.ceil(cfg.min_panels_per_oscillation * freq_hint * (hi - lo) / math.pi))
        seg = np.linspace(lo, hi, count + 1)
        seg[-1] = hi
        edges.append(seg[1:])
    return np.concatenate(edges)


def adaptive_partition(func, edges: np.ndarray, cfg: QuadratureConfig = DEFAULT_CONFIG) -> Partition:
    """Refine ``edges`` until each panel agrees with its bisection.

    ``func`` maps a 1-D array of points to values of shape ``(N,)`` or
    ``(q, N)``; for vector integrands a panel's error is the largest
    component difference.
    """
    m = cfg.nodes_per_panel
    lo = np.asarray(edges[:-1], dtype=float)
    hi = np.asarray(edges[1:], dtype=float)
    total_length = float(edges[-1] - edges[0])
    coarse = _panel_sums(func, lo, hi, m)
    acc = []
    acc_total = 0.0
    evaluated = len(lo)
    for _ in range(cfg.max_depth):
        mid = lo + SPLIT * (hi - lo)
        left = _panel_sums(func, lo, mid, m)
        right = _panel_sums(func, mid, hi, m)
        fine = left + right
        evaluated += 2 * len(lo)
        diff = np.abs(fine - coarse)
        err = diff if diff.ndim == 1 else diff.max(axis=0)
        estimate = acc_total + fine.sum(axis=-1)
        tol = max(cfg.abs_tol, cfg.rel_tol * float(np.max(np.abs(estimate))))
        width = hi - lo
        scale = np.maximum(np.maximum(np.abs(lo), np.abs(hi)), 1.0)
        tiny = width <= 64.0 * np.finfo(float).eps * scale
        ok = (err <= tol * width / total_length) | tiny
        if ok.any():
            acc.append((lo[ok], hi[ok], fine[..., ok], err[ok]))
            acc_total = acc_total + fine[..., ok].sum(axis=-1)
        bad = ~ok
        if not bad.any():
            break
        pending = (lo[bad], hi[bad], fine[..., bad], err[bad])
        if evaluated > cfg.max_panels:
            _raise_budget("panel budget exhausted", acc, *pending)
        lo, hi = np.concatenate([lo[bad], mid[bad]]), np.concatenate([mid[bad], hi[bad]])
        coarse = np.concatenate([left[..., bad], right[..., bad]], axis=-1)
    else:
        _raise_budget("maximum refinement depth reached", acc, *pending)
    return _assemble(acc)


def _assemble(acc) -> Partition:
    lo = np.concatenate([a[0] for a in acc])
    hi = np.concatenate([a[1] for a in acc])
    vals = np.concatenate([a[2] for a in acc], axis=-1)
    errs = np.concatenate([a[3] for a in acc])
    order = np.argsort(lo, kind="stable")
    return Partition(lo[order], hi[order], vals[..., order], errs[order])


def _raise_budget(message, acc, lo, hi, fine, err):
    part = _assemble(acc + [(lo, hi, fine, err)])
    value = part.value
    value = float(value) if np.ndim(value) == 0 else value
    raise QuadratureError(message, value, part.error_estimate, len(part.lo))


def _check_interval(a, b):
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integration limits must be finite")
    if a > b:
        raise ValueError(f"integration requires a <= b, got [{a}, {b}]")


def integrate_with_breakpoints(
    integrand: Callable,
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    freq_hint: float = 0.0,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> IntegralResult:
    """Integrate over [a, b] without letting panels straddle the breakpoints."""
    a, b = float(a), float(b)
    _check_interval(a, b)
    if freq_hint < 0:
        raise ValueError("freq_hint must be nonnegative")
    if a == b:
        return IntegralResult(0.0, 0.0, 1)
    part = adaptive_partition(integrand, initial_edges(a, b, breakpoints, freq_hint, cfg), cfg)
    return IntegralResult(float(part.value), part.error_estimate, len(part.lo))


def sign_changes(func, a, b, breakpoints=(), freq_hint=0.0, cfg=DEFAULT_CONFIG, min_samples=64) -> tuple:
    """Zeros of ``func`` in (a, b) located by dense sampling and bisection.

    These are the kink locations of ``|func|``.  A kink lying in the last
    sliver of a panel, past every Gauss node, makes a panel and its halves
    agree on the wrong value, so such points must be declared up front.
    Pairs of zeros closer than the sampling step can be missed.
    """
    edges = initial_edges(a, b, breakpoints, freq_hint, cfg)
    per_panel = max(cfg.nodes_per_panel * 2, math.ceil(min_samples / (len(edges) - 1)))
    frac = np.arange(per_panel) / per_panel
    ts = np.concatenate([(edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * frac).ravel(), [b]])
    vals = np.asarray(func(ts), dtype=float)
    zeros = set(ts[1:-1][vals[1:-1] == 0.0].tolist())
    flip = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
    lo, hi = ts[flip], ts[flip + 1]
    flo = vals[flip]
    for _ in range(64):
        if lo.size == 0:
            break
        mid = 0.5 * (lo + hi)
        fm = np.asarray(func(mid), dtype=float)
        left = fm * flo < 0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        flo = np.where(left, flo, fm)
    zeros.update((0.5 * (lo + hi)).tolist())
    return tuple(sorted(z for z in zeros if a < z < b))


def integrate_abs(
    func: Callable,
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    freq_hint: float = 0.0,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    weight: Callable = None,
) -> IntegralResult:
    """Integral of ``|func| * weight`` with the zeros of ``func`` declared as breakpoints."""
    breakpoints = tuple(breakpoints)
    a, b = float(a), float(b)
    _check_interval(a, b)
    if a == b:
        return IntegralResult(0.0, 0.0, 1)
    breaks = sorted(set(breakpoints) | set(sign_changes(func, a, b, breakpoints, freq_hint, cfg)))
    if weight is None:
        integrand = lambda t: np.abs(func(t))  # noqa: E731
    else:
        integrand = lambda t: np.abs(func(t)) * weight(t)  # noqa: E731
    return integrate_with_breakpoints(integrand, a, b, breaks, freq_hint, cfg)


def integrate(
    integrand: Callable,
    a: float,
    b: float,
    freq_hint: float = 0.0,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> IntegralResult:
    return integrate_with_breakpoints(integrand, a, b, (), freq_hint, cfg)


class CumulativeIntegral:
    """F(x) = integral of ``integrand`` from ``a`` to x, for any x in [a, b].

    Built from one adaptive partition; evaluation adds whole panels and a
    Gauss rule on the final partial panel.
    """

    def __init__(self, integrand, a, b, breakpoints: Sequence[float] = (), freq_hint=0.0, cfg=DEFAULT_CONFIG):
        a, b = float(a), float(b)
        _check_interval(a, b)
        self.integrand = integrand
        self.a, self.b = a, b
        self.cfg = cfg
        if a == b:
            self._edges = np.array([a, b])
            self._cum = np.zeros(2)
            self.error_estimate = 0.0
            return
        part = adaptive_partition(integrand, initial_edges(a, b, breakpoints, freq_hint, cfg), cfg)
        self._edges = np.append(part.lo, part.hi[-1])
        self._cum = np.concatenate([[0.0], np.cumsum(part.values)])
        self.error_estimate = part.error_estimate

    @property
    def total(self) -> float:
        return float(self._cum[-1])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1)
        if flat.size and (flat.min() < self.a or flat.max() > self.b):
            raise ValueError("CumulativeIntegral evaluated outside its interval")
        idx = np.clip(np.searchsorted(self._edges, flat, side="right") - 1, 0, len(self._edges) - 2)
        left = self._edges[idx]
        out = self._cum[idx].copy()
        partial = flat > left
        if partial.any():
            out[partial] += _panel_sums(self.integrand, left[partial], flat[partial], self.cfg.nodes_per_panel * 2)
        return out.reshape(x.shape)
