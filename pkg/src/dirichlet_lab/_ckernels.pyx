# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; mirrors ``_pykernels`` exactly in semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, fabs, fmod, M_PI

cnp.import_array()

# recompute cos/sin directly every _RESEED steps of the angle-addition
# recurrence to stop round-off drift for large k
cdef enum:
    _RESEED = 64


cdef inline double _fold(double t, double l) noexcept nogil:
    cdef double s = fabs(t)
    if s > l:
        s = fmod(s, 2.0 * l)
        if s > l:
            s = 2.0 * l - s
    return s


cdef inline double _cos_sum(double theta, long n) noexcept nogil:
    cdef double acc = 0.5
    cdef long k
    for k in range(1, n + 1):
        acc += cos(k * theta)
    return acc


def dirichlet_kernel(t, long n, double l, double radius):
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t m = tv.shape[0], i
    out = np.empty(m)
    cdef double[::1] ov = out
    cdef double s, half
    with nogil:
        for i in range(m):
            s = _fold(tv[i], l)
            half = M_PI * s / (2.0 * l)
            if s < radius:
                ov[i] = _cos_sum(2.0 * half, n)
            else:
                ov[i] = sin((2 * n + 1) * half) / (2.0 * sin(half))
    return out.reshape(np.shape(t))


def cot_sin_weight(t, long n, double l, double radius):
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t m = tv.shape[0], i
    out = np.empty(m)
    cdef double[::1] ov = out
    cdef double s, half, theta
    with nogil:
        for i in range(m):
            s = _fold(tv[i], l)
            half = M_PI * s / (2.0 * l)
            if s < radius:
                theta = 2.0 * half
                ov[i] = _cos_sum(theta, n) - 0.5 * cos(n * theta)
            else:
                ov[i] = 0.5 * cos(half) / sin(half) * sin(2 * n * half)
    return out.reshape(np.shape(t))


def trig_moments(nodes, weighted_values, double omega, long kmax):
    cdef double[::1] tv = np.ascontiguousarray(nodes, dtype=np.float64).reshape(-1)
    cdef double[::1] wv = np.ascontiguousarray(weighted_values, dtype=np.float64).reshape(-1)
    a = np.zeros(kmax + 1)
    b = np.zeros(kmax + 1)
    cdef double[::1] av = a
    cdef double[::1] bv = b
    cdef Py_ssize_t m = tv.shape[0], i
    cdef long k
    cdef double c1, s1, ck, sk, tmp, w, th
    with nogil:
        for i in range(m):
            w = wv[i]
            th = omega * tv[i]
            c1 = cos(th)
            s1 = sin(th)
            ck = 1.0
            sk = 0.0
            for k in range(kmax + 1):
                if k % _RESEED == 0 and k > 0:
                    ck = cos(k * th)
                    sk = sin(k * th)
                av[k] += w * ck
                bv[k] += w * sk
                tmp = ck * c1 - sk * s1
                sk = sk * c1 + ck * s1
                ck = tmp
    return a, b


def trig_series(x, a, b, double omega):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0], i
    cdef long k, kn = av.shape[0]
    out = np.empty(m)
    cdef double[::1] ov = out
    cdef double c1, s1, ck, sk, tmp, acc, th
    with nogil:
        for i in range(m):
            th = omega * xv[i]
            c1 = cos(th)
            s1 = sin(th)
            ck = 1.0
            sk = 0.0
            acc = 0.0
            for k in range(kn):
                if k % _RESEED == 0 and k > 0:
                    ck = cos(k * th)
                    sk = sin(k * th)
                acc += av[k] * ck + bv[k] * sk
                tmp = ck * c1 - sk * s1
                sk = sk * c1 + ck * s1
                ck = tmp
            ov[i] = acc
    return out.reshape(np.shape(x))
