# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: compensated streaming sums and iterated running means.

Same interface as the numpy fallback module. Every accumulator here is
Neumaier-compensated element by element.
"""

from libc.math cimport fabs, pow, INFINITY

import numpy as np

BACKEND = "cython"
STATE_LEN = 12

cdef enum:
    S = 0
    SC = 1
    T1 = 2
    T1C = 3
    T2 = 4
    T2C = 5
    EMIN = 6
    EMAX = 7


def new_state():
    st = np.zeros(STATE_LEN, dtype=np.float64)
    st[EMIN] = INFINITY
    st[EMAX] = -INFINITY
    return st


cdef inline void _acc(double* total, double* comp, double x) nogil:
    cdef double t = total[0] + x
    if fabs(total[0]) >= fabs(x):
        comp[0] += (total[0] - t) + x
    else:
        comp[0] += (x - t) + total[0]
    total[0] = t


def kahan_sum(double[::1] x):
    cdef double s = 0.0, c = 0.0
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        _acc(&s, &c, x[i])
    return s + c


def kahan_cumsum(double[::1] chunk, double[::1] state):
    cdef Py_ssize_t m = chunk.shape[0]
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double s = state[S], c = state[SC]
    cdef Py_ssize_t i
    for i in range(m):
        _acc(&s, &c, chunk[i])
        out[i] = s + c
    state[S] = s
    state[SC] = c
    return out_arr


def pow_sum(double[::1] x, double s):
    cdef double acc = 0.0, comp = 0.0
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        _acc(&acc, &comp, pow(x[i], s))
    return acc + comp


def weighted_pow_sum(double[::1] lam, double s, double[::1] w):
    cdef double acc = 0.0, comp = 0.0
    cdef Py_ssize_t i
    for i in range(lam.shape[0]):
        _acc(&acc, &comp, pow(lam[i], s) * w[i])
    return acc + comp


def cesaro_update(
    double[::1] chunk,
    long long k0,
    int order,
    long long tail_start,
    double[::1] state,
    long long[::1] cps,
    long long cp_i,
    double[::1] cp_mean,
    double[::1] cp_raw,
):
    cdef Py_ssize_t m = chunk.shape[0]
    if m == 0:
        return k0, cp_i
    cdef double s = state[S], sc = state[SC]
    cdef double t1 = state[T1], t1c = state[T1C]
    cdef double t2 = state[T2], t2c = state[T2C]
    cdef double emin = state[EMIN], emax = state[EMAX]
    cdef long long n_cp = cps.shape[0]
    cdef long long ci = cp_i
    cdef long long k
    cdef Py_ssize_t i
    cdef double a, level, kd

    for i in range(m):
        k = k0 + 1 + i
        kd = <double> k
        a = chunk[i]
        _acc(&s, &sc, a)
        level = (s + sc) / kd
        if order >= 2:
            _acc(&t1, &t1c, level)
            level = (t1 + t1c) / kd
        if order >= 3:
            _acc(&t2, &t2c, level)
            level = (t2 + t2c) / kd
        if k > tail_start:
            if a < emin:
                emin = a
            if a > emax:
                emax = a
        while ci < n_cp and cps[ci] == k:
            cp_mean[ci] = level
            cp_raw[ci] = a
            ci += 1

    state[S] = s
    state[SC] = sc
    state[T1] = t1
    state[T1C] = t1c
    state[T2] = t2
    state[T2C] = t2c
    state[EMIN] = emin
    state[EMAX] = emax
    return k0 + m, ci


def envelope(state):
    return float(state[EMIN]), float(state[EMAX])
