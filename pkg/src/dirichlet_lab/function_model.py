"""Evaluable test functions and the second symmetric difference."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from . import dsl


class DomainError(ValueError):
    """Raised when an expression evaluates to a non-finite value."""


@dataclass(frozen=True)
class FunctionSpec:
    """A real function of t described by DSL source.

    ``support_hint`` forces the value to exactly 0 outside the closed interval;
    ``period_hint`` declares the least positive period (only used by the
    periodic class-E bound).
    """

    expression_source: str
    period_hint: Optional[float] = None
    support_hint: Optional[Tuple[float, float]] = None
    ast: dsl.Node = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ast", dsl.parse(self.expression_source))
        if self.period_hint is not None and not self.period_hint > 0:
            raise ValueError("period_hint must be positive")
        if self.support_hint is not None:
            lo, hi = map(float, self.support_hint)
            if not lo <= hi:
                raise ValueError("support_hint must be an interval lo <= hi")
            object.__setattr__(self, "support_hint", (lo, hi))

    def __call__(self, t):
        """Evaluate at a scalar or array of points."""
        arr = np.asarray(t, dtype=float)
        out = dsl.evaluate(self.ast, arr.reshape(-1) if arr.ndim == 0 else arr)
        if self.support_hint is not None:
            lo, hi = self.support_hint
            out = np.where((arr >= lo) & (arr <= hi), out, 0.0)
        if not np.all(np.isfinite(out)):
            raise DomainError(f"{self.expression_source!r} is not finite on the requested points")
        if arr.ndim == 0:
            return float(out.reshape(-1)[0])
        return out

    @cached_property
    def support(self) -> Optional[Tuple[float, float]]:
        """Interval outside which f vanishes (declared or derived), else None."""
        derived = dsl.support(self.ast)
        sup = self.support_hint
        if derived is not None:
            sup = derived if sup is None else (max(sup[0], derived[0]), min(sup[1], derived[1]))
        return sup

    @cached_property
    def breakpoints(self) -> tuple:
        pts = set(dsl.breakpoints(self.ast))
        if self.support_hint is not None:
            pts.update(self.support_hint)
        return tuple(sorted(p for p in pts if math.isfinite(p)))

    @cached_property
    def frequency(self) -> float:
        return dsl.frequency_bound(self.ast)

    def source(self) -> str:
        return dsl.to_source(self.ast)


def make_function(source, period_hint=None, support_hint=None) -> FunctionSpec:
    if isinstance(source, FunctionSpec):
        return source
    return FunctionSpec(source, period_hint, tuple(support_hint) if support_hint is not None else None)


def parse_function(source: str) -> dsl.Node:
    return dsl.parse(source)


def eval_function(f: FunctionSpec, t):
    return f(t)


@dataclass(frozen=True)
class SymmetricDifference:
    """phi_x(t) = f(x + t) + f(x - t) - 2 f(x)."""

    base: FunctionSpec
    center: float

    @cached_property
    def f_center(self) -> float:
        return self.base(self.center)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        x = self.center
        return self.base(x + t) + self.base(x - t) - 2.0 * self.f_center

    @cached_property
    def breakpoints(self) -> tuple:
        """Points t >= 0 where phi may be non-smooth."""
        return tuple(sorted({abs(p - self.center) for p in self.base.breakpoints}))

    @cached_property
    def support_radius(self) -> Optional[float]:
        """phi is constant (= -2 f(x)) for t beyond this radius, when f has compact support."""
        sup = self.base.support
        if sup is None:
            return None
        if sup[0] > sup[1]:
            return 0.0
        return max(abs(sup[0] - self.center), abs(sup[1] - self.center))


def phi(f: FunctionSpec, x: float, t):
    return SymmetricDifference(f, float(x))(t)
