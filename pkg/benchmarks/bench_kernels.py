"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--n 1600] [--l 40]

Times each inner-loop kernel on both backends, then one end-to-end
coefficient batch plus partial-sum evaluation with each backend swapped in.
"""
import argparse
import math
import time
from contextlib import contextmanager

import numpy as np

from dirichlet_lab import dirichlet_core as dc
from dirichlet_lab import kernels
from dirichlet_lab.function_model import FunctionSpec


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


@contextmanager
def use_backend(module):
    saved = {name: getattr(kernels, name) for name in ("dirichlet_kernel", "cot_sin_weight", "trig_moments", "trig_series")}
    for name in saved:
        setattr(kernels, name, getattr(module, name))
    try:
        yield
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--n", type=int, default=1600)
    parser.add_argument("--l", type=float, default=40.0)
    parser.add_argument("--points", type=int, default=200_000)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the numpy fallback is available")
    rng = np.random.default_rng(0)
    t = rng.uniform(-args.l, args.l, args.points)
    wv = rng.normal(size=args.points)
    coef = rng.normal(size=(2, args.n + 1))
    xs = np.linspace(-1, 1, 21)
    omega = math.pi / args.l
    r = 1e-6 * args.l

    cases = {
        "dirichlet_kernel": lambda m: m.dirichlet_kernel(t, args.n, args.l, r),
        "cot_sin_weight": lambda m: m.cot_sin_weight(t, args.n, args.l, r),
        "trig_moments": lambda m: m.trig_moments(t[:20_000], wv[:20_000], omega, args.n),
        "trig_series": lambda m: m.trig_series(xs, coef[0], coef[1], omega),
    }
    names = sorted(backends)
    print(f"{'kernel':<18}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, case in cases.items():
        times = [best_of(lambda m=backends[n]: case(m), args.repeat) for n in names]
        line = f"{label:<18}" + "".join(f"{s * 1e3:>10.2f}ms" for s in times)
        if len(times) == 2:  # names are sorted: cython, python
            line += f"{times[1] / times[0]:>11.1f}x"
        print(line)

    f = FunctionSpec("bump(2, 5) + bump(-5, -2)")
    grid = dc.GridParams(args.l, args.n)
    print(f"\nend to end: coefficients + partial sums, f = {f.expression_source}, l = {args.l:g}, n = {args.n}")
    results = {}
    for name in names:
        with use_backend(backends[name]):

            def run():
                dc.clear_cache()
                return dc.partial_sums(f, xs, grid)

            results[name] = run()
            print(f"  {name:<8} {best_of(run, max(1, args.repeat // 2)):8.3f}s")
    if len(results) == 2:
        gap = float(np.max(np.abs(results["cython"] - results["python"])))
        print(f"  max difference between backends: {gap:.2e}")


if __name__ == "__main__":
    main()
