"""Fixed function corpus and seeded random draws used by property checks."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dirichlet_core import GridParams
from .function_model import FunctionSpec

CORPUS = (
    FunctionSpec("cos(pi*t/5)", period_hint=10.0),
    FunctionSpec("sin(t)", period_hint=2 * math.pi),
    FunctionSpec("exp(-t^2/50)*sin(3*t)"),
    FunctionSpec("piecewise([-1,1]: 1 - t^2; else: 0)"),
    FunctionSpec("bump(2, 5) + bump(-5, -2)"),
    FunctionSpec("piecewise([-10,10]: abs(t); else: 0)"),
    FunctionSpec("exp(-abs(t))*cos(2*t)"),
    FunctionSpec("piecewise([0,1]: 1; else: 0)"),
)


@dataclass(frozen=True)
class Draw:
    f: FunctionSpec
    x: float
    grid: GridParams


def draws(seed: int, count: int, n_range=(1, 100), l_range=(1.0, 40.0), x_range=(-3.0, 3.0)):
    """``count`` reproducible (f, x, grid) triples; n and l uniform in their ranges."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        f = CORPUS[int(rng.integers(len(CORPUS)))]
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        l = float(rng.uniform(*l_range))
        x = float(rng.uniform(*x_range))
        out.append(Draw(f, x, GridParams(l, n)))
    return out
