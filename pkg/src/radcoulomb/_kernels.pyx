# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Signatures mirror ``_kernels_py``."""
import numpy as np
cimport cython
from libc.math cimport sin, exp, log


def sine_sum(const double[::1] rhos, const double[::1] r, const double[::1] wg):
    cdef Py_ssize_t nj = rhos.shape[0]
    cdef Py_ssize_t ni = r.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc, rho
    out = np.empty(nj)
    cdef double[::1] o = out
    with nogil:
        for j in range(nj):
            rho = rhos[j]
            acc = 0.0
            for i in range(ni):
                acc += wg[i] * sin(rho * r[i])
            o[j] = acc
    return out


def gagliardo_sum(const double[::1] r, const double[::1] h, const double[::1] w,
                  const double[::1] ur, const double[::1] uh, double s):
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t i
    cdef double e = -1.0 - 2.0 * s
    cdef double acc = 0.0, du, ri, hi
    with nogil:
        for i in range(n):
            ri = r[i]
            hi = h[i]
            du = ur[i] - uh[i]
            acc += w[i] * ri * (ri - hi) * du * du * (exp(e * log(hi)) - exp(e * log(2.0 * ri - hi)))
    return acc


def coulomb_prefix(const double[:, ::1] x, const double[:, ::1] w, const double[:, ::1] f,
                   const double[:, ::1] M, const double[::1] half):
    cdef Py_ssize_t P = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t p, i, k
    cdef double start = 0.0, acc = 0.0, inner, total
    q_arr = np.empty(n)
    cdef double[::1] q = q_arr
    with nogil:
        for p in range(P):
            total = 0.0
            for k in range(n):
                q[k] = x[p, k] * x[p, k] * f[p, k]
                total += w[p, k] * q[k]
            for i in range(n):
                inner = 0.0
                for k in range(n):
                    inner += M[i, k] * q[k]
                acc += w[p, i] * x[p, i] * f[p, i] * (start + half[p] * inner)
            start += total
    return acc
