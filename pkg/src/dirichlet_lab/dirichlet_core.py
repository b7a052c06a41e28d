"""Fourier coefficients over [-l, l], partial sums S_n^l and the kernel D_n^l."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import kernels
from .function_model import FunctionSpec, SymmetricDifference
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    adaptive_partition,
    initial_edges,
    integrate_with_breakpoints,
)


@dataclass(frozen=True)
class GridParams:
    """Half-length ``l`` of the expanding interval and partial-sum order ``n``."""

    l: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.l) and self.l > 0):
            raise ValueError(f"l must be a positive finite real, got {self.l!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        object.__setattr__(self, "l", float(self.l))
        object.__setattr__(self, "n", int(self.n))

    @property
    def eta(self) -> float:
        return self.l / self.n

    @property
    def kernel_frequency(self) -> float:
        """Fastest angular frequency of D_n^l, (2n+1) pi / (2l)."""
        return (2 * self.n + 1) * math.pi / (2.0 * self.l)


@dataclass(frozen=True)
class CoefficientPair:
    k: int
    a: float
    b: float


@dataclass(frozen=True)
class PartialSumResult:
    x: float
    grid: GridParams
    value: float
    via: str  # "coefficient_sum" or "kernel_convolution"


@dataclass(frozen=True)
class ErrorRepresentation:
    lhs: float
    integral_term: float
    residual: float


@dataclass(frozen=True)
class DecompositionResult:
    M: float
    N: float
    total: float


def _window(f: FunctionSpec, lo: float, hi: float) -> Optional[Tuple[float, float]]:
    """[lo, hi] clipped to the support of f; None when f vanishes there."""
    sup = f.support
    if sup is not None:
        lo, hi = max(lo, sup[0]), min(hi, sup[1])
    return (lo, hi) if lo < hi else None


def coeff(f: FunctionSpec, l: float, k: int, cfg: QuadratureConfig = DEFAULT_CONFIG) -> CoefficientPair:
    """a_k and b_k over [-l, l], each from its own adaptive integral."""
    if not l > 0:
        raise ValueError("l must be positive")
    if k < 0:
        raise ValueError("k must be nonnegative")
    win = _window(f, -l, l)
    if win is None:
        return CoefficientPair(k, 0.0, 0.0)
    w = k * math.pi / l
    freq = w + f.frequency
    a = integrate_with_breakpoints(lambda t: f(t) * np.cos(w * t), *win, f.breakpoints, freq, cfg).value
    b = 0.0
    if k > 0:
        b = integrate_with_breakpoints(lambda t: f(t) * np.sin(w * t), *win, f.breakpoints, freq, cfg).value
    return CoefficientPair(k, a / l, b / l)


class _CoefficientCache:
    # populate-once; two threads may compute the same entry, the later write
    # wins and both values are equally valid
    def __init__(self):
        self._lock = threading.Lock()
        self._store = {}

    def get(self, key, n):
        with self._lock:
            hit = self._store.get(key)
        if hit is not None and len(hit[0]) > n:
            return hit[0][: n + 1], hit[1][: n + 1]
        return None

    def put(self, key, a, b):
        with self._lock:
            old = self._store.get(key)
            if old is None or len(old[0]) < len(a):
                self._store[key] = (a, b)

    def clear(self):
        with self._lock:
            self._store.clear()


_cache = _CoefficientCache()


def clear_cache():
    _cache.clear()


def coefficients(f: FunctionSpec, l: float, n: int, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Arrays ``(a, b)`` of a_k^l, b_k^l for k = 0..n.

    One adaptive mesh resolves f and the fastest harmonic; all moments are
    then accumulated on that mesh by the compiled kernel.
    """
    key = (f, float(l), cfg)
    hit = _cache.get(key, n)
    if hit is not None:
        return hit
    win = _window(f, -l, l)
    if win is None:
        a = np.zeros(n + 1)
        b = np.zeros(n + 1)
    else:
        w = math.pi / l

        def probes(t):
            ft = f(t)
            return np.stack([ft, ft * np.cos(n * w * t), ft * np.sin(n * w * t)])

        edges = initial_edges(*win, f.breakpoints, n * w + f.frequency, cfg)
        part = adaptive_partition(probes, edges, cfg)
        nodes, weights = part.fine_nodes(cfg.nodes_per_panel)
        a, b = kernels.trig_moments(nodes, weights * f(nodes), w, n)
        a /= l
        b /= l
        b[0] = 0.0
    _cache.put(key, a, b)
    return a, b


def partial_sums(f: FunctionSpec, x, grid: GridParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """S_n^l(x; f) at every x, from the coefficient sum."""
    a, b = coefficients(f, grid.l, grid.n, cfg)
    a = a.copy()
    a[0] *= 0.5
    return kernels.trig_series(np.asarray(x, dtype=float), a, b, math.pi / grid.l)


def partial_sum(f: FunctionSpec, x: float, grid: GridParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> PartialSumResult:
    value = float(partial_sums(f, np.array([x]), grid, cfg)[0])
    return PartialSumResult(float(x), grid, value, "coefficient_sum")


def kernel(grid: GridParams, t, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """D_n^l(t); the finite cosine sum replaces the ratio near multiples of 2l."""
    arr = np.asarray(t, dtype=float)
    out = kernels.dirichlet_kernel(arr.reshape(-1), grid.n, grid.l, cfg.singularity_switch_radius * grid.l)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def cot_sin_weight(grid: GridParams, t, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """(1/2) cot(pi t / 2l) sin(n pi t / l), extended continuously by n at t = 0."""
    arr = np.asarray(t, dtype=float)
    out = kernels.cot_sin_weight(arr.reshape(-1), grid.n, grid.l, cfg.singularity_switch_radius * grid.l)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def partial_sum_via_kernel(f: FunctionSpec, x: float, grid: GridParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> PartialSumResult:
    """S_n^l(x; f) = (1/l) * integral over [-l, l] of f(t) D_n^l(t - x)."""
    x = float(x)
    win = _window(f, -grid.l, grid.l)
    value = 0.0
    if win is not None:
        res = integrate_with_breakpoints(
            lambda t: f(t) * kernel(grid, t - x, cfg),
            *win,
            f.breakpoints,
            grid.kernel_frequency + f.frequency,
            cfg,
        )
        value = res.value / grid.l
    return PartialSumResult(x, grid, value, "kernel_convolution")


def _phi_integral(phi: SymmetricDifference, weight, grid: GridParams, freq: float, cfg) -> float:
    res = integrate_with_breakpoints(
        lambda t: phi(t) * weight(t), 0.0, grid.l, phi.breakpoints, freq + phi.base.frequency, cfg
    )
    return res.value


def kernel_integral(f: FunctionSpec, x: float, grid: GridParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """(1/l) * integral over [0, l] of phi_x(t) D_n^l(t)."""
    phi = SymmetricDifference(f, float(x))
    return _phi_integral(phi, lambda t: kernel(grid, t, cfg), grid, grid.kernel_frequency, cfg) / grid.l


def error_representation(f: FunctionSpec, x: float, grid: GridParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ErrorRepresentation:
    lhs = partial_sum(f, x, grid, cfg).value - f(float(x))
    integral_term = kernel_integral(f, x, grid, cfg)
    return ErrorRepresentation(lhs, integral_term, lhs - integral_term)


def mn_split(f: FunctionSpec, x: float, grid: GridParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> DecompositionResult:
    """M from the cot-weighted sine part, N from the cosine part."""
    phi = SymmetricDifference(f, float(x))
    w = grid.n * math.pi / grid.l
    m = _phi_integral(phi, lambda t: cot_sin_weight(grid, t, cfg), grid, w, cfg) / grid.l
    nn = _phi_integral(phi, lambda t: np.cos(w * t), grid, w, cfg) / (2.0 * grid.l)
    return DecompositionResult(m, nn, m + nn)
