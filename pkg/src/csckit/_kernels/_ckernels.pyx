# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``. Same signatures, same results."""

from itertools import product

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, round as cround

cnp.import_array()

cdef double _SCALE = 1e6
cdef double _EDGE = 0.49


cdef void _den(long long a, long long b, long long max_den, dict counts):
    cdef long long e = 2
    key = (a, b)
    counts[key] = counts.get(key, 0) + 1
    while e * b - a <= max_den:
        _den(b, e * b - a, max_den, counts)
        e += 1


def hj_chain_counts(long long max_den):
    cdef dict counts = {}
    cdef long long e
    for e in range(2, max_den + 1):
        _den(1, e, max_den, counts)
    return counts


cdef void _box(long long a, long long b, int depth, int max_len, int max_coeff, dict counts):
    cdef long long e
    key = (a, b)
    counts[key] = counts.get(key, 0) + 1
    if depth == max_len:
        return
    for e in range(2, max_coeff + 1):
        _box(b, e * b - a, depth + 1, max_len, max_coeff, counts)


def hj_chain_counts_box(int max_len, int max_coeff):
    cdef dict counts = {}
    cdef long long e
    for e in range(2, max_coeff + 1):
        _box(1, e, 1, max_len, max_coeff, counts)
    return counts


cdef inline void _qmul(double* a, double* b, double* out) noexcept nogil:
    out[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    out[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    out[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1]
    out[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]


cdef inline void _canonical(double* q) noexcept nogil:
    cdef double n = sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3])
    cdef int i
    for i in range(4):
        q[i] /= n
    for i in range(4):
        if fabs(q[i]) > 1e-6:
            if q[i] < 0:
                q[0] = -q[0]; q[1] = -q[1]; q[2] = -q[2]; q[3] = -q[3]
            return


cdef bint _find(dict table, double[:, ::1] store, double* q, double tol):
    cdef double sq[4]
    cdef double x, d, s, m
    cdef long long r
    cdef int i, j
    cdef Py_ssize_t idx
    for s in (1.0, -1.0):
        axes = []
        for i in range(4):
            sq[i] = s * q[i]
            x = sq[i] * _SCALE
            r = <long long>cround(x)
            d = x - r
            if d > _EDGE:
                axes.append((r, r + 1))
            elif d < -_EDGE:
                axes.append((r, r - 1))
            else:
                axes.append((r,))
        for key in product(*axes):
            bucket = table.get(key)
            if bucket is None:
                continue
            for idx in bucket:
                m = 0.0
                for j in range(4):
                    d = fabs(sq[j] - store[idx, j])
                    if d > m:
                        m = d
                if m <= tol:
                    return True
    return False


def quat_closure(gens, Py_ssize_t cap, double tol=1e-9):
    cdef Py_ssize_t ngen = len(gens)
    cdef double[:, ::1] g = np.ascontiguousarray(np.asarray(gens, dtype=float).reshape(ngen, 4))
    cdef double[:, ::1] store = np.zeros((cap + 1, 4))
    cdef dict table = {}
    cdef Py_ssize_t n = 1, head = 0, gi
    cdef double y[4]
    cdef int j
    store[0, 0] = 1.0
    table[(1000000, 0, 0, 0)] = [0]
    while head < n:
        for gi in range(ngen):
            _qmul(&store[head, 0], &g[gi, 0], y)
            _canonical(y)
            if _find(table, store, y, tol):
                continue
            if n >= cap:
                return None
            for j in range(4):
                store[n, j] = y[j]
            key = (<long long>cround(y[0] * _SCALE), <long long>cround(y[1] * _SCALE),
                   <long long>cround(y[2] * _SCALE), <long long>cround(y[3] * _SCALE))
            table.setdefault(key, []).append(n)
            n += 1
        head += 1
    return [tuple(store[i, j] for j in range(4)) for i in range(n)]


cdef inline double _ipow(double u, long long e) noexcept nogil:
    # integer power by squaring; negative exponents invert at the end
    cdef bint neg = e < 0
    cdef double r = 1.0
    if neg:
        e = -e
    while e:
        if e & 1:
            r *= u
        u *= u
        e >>= 1
    return 1.0 / r if neg else r


def laurent_eval(coefs, exps, double k, taus):
    cdef double[::1] t = np.ascontiguousarray(np.asarray(taus, dtype=float).ravel())
    cdef Py_ssize_t n = t.shape[0], nt = len(coefs), i, j
    cdef double[::1] c = np.asarray([float(x) for x in coefs], dtype=float)
    cdef long long[::1] e = np.asarray([int(x) for x in exps], dtype=np.int64)
    out = np.zeros(n)
    cdef double[::1] o = out
    cdef double u, acc
    with nogil:
        for i in range(n):
            u = 1.0 + k * t[i]
            acc = 0.0
            for j in range(nt):
                acc = acc + c[j] * _ipow(u, e[j])
            o[i] = acc
    return out.reshape(np.shape(taus))
