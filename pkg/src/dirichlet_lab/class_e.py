"""Tail-average diagnostics for membership in class E and the periodic bound."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from .function_model import FunctionSpec
from .lebesgue_test import DECADE_FACTOR, slope_sequence_consistent
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_abs

DEFAULT_T_GRID = (10.0, 10**1.5, 100.0, 10**2.5, 1000.0)
DEFAULT_C_LIST = (0.5, 1.0, 2 * math.pi)
# extra T values per grid interval used for the windowed sup behind the flag
WINDOW_SAMPLES = 8
PERIODIC_TOL = 1e-8


class MissingPeriodError(ValueError):
    pass


@dataclass(frozen=True)
class TailAverageSample:
    T: float
    c: float
    right_value: float
    left_value: float


@dataclass
class ClassEReport:
    samples: Dict[float, List[TailAverageSample]]
    right_envelope: Dict[float, List[float]] = field(default_factory=dict)
    left_envelope: Dict[float, List[float]] = field(default_factory=dict)
    consistent: Dict[float, bool] = field(default_factory=dict)

    @property
    def all_consistent(self) -> bool:
        return all(self.consistent.values())


@dataclass(frozen=True)
class PeriodicBound:
    lhs: float
    bound: float
    k: int
    M: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.bound + PERIODIC_TOL


def _window_integral(f: FunctionSpec, lo: float, hi: float, cfg) -> float:
    sup = f.support
    if sup is not None:
        lo, hi = max(lo, sup[0]), min(hi, sup[1])
        if not lo < hi:
            return 0.0
    return integrate_abs(f, lo, hi, f.breakpoints, f.frequency, cfg).value


def tail_average(f: FunctionSpec, T: float, c: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> TailAverageSample:
    if not (T > 0 and c > 0):
        raise ValueError("T and c must be positive")
    right = _window_integral(f, T, T + c, cfg) / T
    left = _window_integral(f, -T - c, -T, cfg) / T
    return TailAverageSample(float(T), float(c), right, left)


def _windowed_sup(f, c, T_grid, side, cfg):
    """sup of the one-sided average over [T_i, T_{i+1}) for each grid point."""
    ratios = [b / a for a, b in zip(T_grid[:-1], T_grid[1:])]
    ratios.append(ratios[-1] if ratios else 10.0)
    out = []
    for T, r in zip(T_grid, ratios):
        Ts = np.geomspace(T, T * r, WINDOW_SAMPLES, endpoint=False)
        vals = [getattr(tail_average(f, t, c, cfg), side) for t in Ts]
        out.append(float(max(vals)))
    return out


def class_e_diagnostic(
    f: FunctionSpec,
    c_list: Sequence[float] = DEFAULT_C_LIST,
    T_grid: Sequence[float] = DEFAULT_T_GRID,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    factor: float = DECADE_FACTOR,
) -> ClassEReport:
    """Tail averages on ``T_grid`` for every window length in ``c_list``.

    The flag per c uses the sup of each average over the interval up to the
    next grid point (phase effects of periodic f would otherwise make single
    samples non-monotone) and asks the last three to shrink by ``factor``.
    """
    c_list = [float(c) for c in c_list]
    T_grid = [float(T) for T in T_grid]
    if not c_list:
        raise ValueError("c_list must be nonempty")
    if any(b <= a for a, b in zip(T_grid[:-1], T_grid[1:])) or not T_grid:
        raise ValueError("T_grid must be nonempty and strictly increasing")
    report = ClassEReport(samples={})
    for c in c_list:
        report.samples[c] = [tail_average(f, T, c, cfg) for T in T_grid]
        right = _windowed_sup(f, c, T_grid, "right_value", cfg)
        left = _windowed_sup(f, c, T_grid, "left_value", cfg)
        report.right_envelope[c] = right
        report.left_envelope[c] = left
        report.consistent[c] = slope_sequence_consistent(right[-3:], factor) and slope_sequence_consistent(
            left[-3:], factor
        )
    return report


def periodic_bound_check(f: FunctionSpec, c: float, T: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> PeriodicBound:
    """(1/T) int_T^{T+c} |f| against k M / T with M the one-period integral."""
    m = f.period_hint
    if m is None:
        raise MissingPeriodError("periodic bound needs period_hint")
    if not (T > 0 and c > 0):
        raise ValueError("T and c must be positive")
    k = math.floor(c / m) + 1  # smallest integer with c < k m
    M = _window_integral(f, 0.0, m, cfg)
    lhs = _window_integral(f, T, T + c, cfg) / T
    return PeriodicBound(lhs, k * M / T, k, M)
