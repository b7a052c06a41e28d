"""Pure numpy implementations of the inner-loop kernels.

Same signatures and semantics as the compiled ``_ckernels`` module.
"""
import numpy as np

_BLOCK = 256


def _reduce(t, l):
    # D is 2l-periodic and even; fold onto [0, l] so the singular switch sees
    # the distance to the nearest multiple of 2l
    s = np.abs(t)
    period = 2.0 * l
    s = np.where(s > l, np.fmod(s, period), s)
    return np.where(s > l, period - s, s)


def _cos_sum(theta, n):
    # 1/2 + sum_{k=1..n} cos(k theta), evaluated directly
    k = np.arange(1, n + 1)
    return 0.5 + np.cos(np.multiply.outer(theta, k)).sum(axis=-1)


def dirichlet_kernel(t, n, l, radius):
    t = np.ascontiguousarray(t, dtype=float)
    s = _reduce(t, l)
    half = np.pi * s / (2.0 * l)
    near = s < radius
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sin((2 * n + 1) * half) / (2.0 * np.sin(half))
    if near.any():
        out[near] = _cos_sum(2.0 * half[near], n)
    return out


def cot_sin_weight(t, n, l, radius):
    """(1/2) cot(pi t / 2l) sin(n pi t / l), continuous at t = 0 (value n).

    Even and 2l-periodic, so the same folding as the kernel applies.
    """
    t = np.ascontiguousarray(t, dtype=float)
    s = _reduce(t, l)
    half = np.pi * s / (2.0 * l)
    near = s < radius
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 0.5 * np.cos(half) / np.sin(half) * np.sin(2 * n * half)
    if near.any():
        theta = 2.0 * half[near]
        out[near] = _cos_sum(theta, n) - 0.5 * np.cos(n * theta)
    return out


def trig_moments(nodes, weighted_values, omega, kmax):
    """Return (A, B) with A[k] = sum w_i cos(k omega t_i), B[k] = sum w_i sin(k omega t_i)."""
    nodes = np.ascontiguousarray(nodes, dtype=float)
    wv = np.ascontiguousarray(weighted_values, dtype=float)
    a = np.empty(kmax + 1)
    b = np.empty(kmax + 1)
    for start in range(0, kmax + 1, _BLOCK):
        k = np.arange(start, min(start + _BLOCK, kmax + 1), dtype=float)
        arg = np.multiply.outer(k * omega, nodes)
        a[start:start + len(k)] = np.cos(arg) @ wv
        b[start:start + len(k)] = np.sin(arg) @ wv
    return a, b


def trig_series(x, a, b, omega):
    """Evaluate sum_k a[k] cos(k omega x) + b[k] sin(k omega x) at every x."""
    x = np.ascontiguousarray(x, dtype=float)
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    out = np.zeros(x.shape)
    for start in range(0, len(a), _BLOCK):
        k = np.arange(start, min(start + _BLOCK, len(a)), dtype=float)
        arg = np.multiply.outer(x, k * omega)
        out += np.cos(arg) @ a[start:start + len(k)] + np.sin(arg) @ b[start:start + len(k)]
    return out
