# cython: language_level=3
"""Compiled hot kernels: K0/K1 on arrays and the Symanzik Monte Carlo integrands.

Mirrors ``_fallback``; results agree to rounding.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, exp, sqrt, fabs, pow, M_PI

cnp.import_array()

cdef double EULER_GAMMA = 0.57721566490153286061
cdef double SERIES_SWITCH = 2.0


cdef inline void _series(double x, double* k0, double* k1) noexcept nogil:
    cdef double y = 0.25 * x * x
    cdef double lg = log(0.5 * x) + EULER_GAMMA
    cdef double term0 = 1.0, term1 = 1.0, h_k = 0.0, h_k1
    cdef double s0 = 0.0, s1 = 0.0
    cdef int k
    for k in range(16):
        h_k1 = h_k + 1.0 / (k + 1)
        s0 += term0 * (h_k - lg)
        s1 += term1 * (lg - 0.5 * (h_k + h_k1))
        term0 *= y / ((k + 1.0) * (k + 1.0))
        term1 *= y / ((k + 1.0) * (k + 2.0))
        h_k = h_k1
    k0[0] = s0
    k1[0] = 1.0 / x + 0.5 * x * s1


cdef inline void _scaled_cf(double x, double* k0e, double* k1e) noexcept nogil:
    cdef double b = 2.0 * (1.0 + x)
    cdef double d = 1.0 / b
    cdef double h = d, delh = d
    cdef double q1 = 0.0, q2 = 1.0, qnew
    cdef double a1 = 0.25
    cdef double q = a1, c = a1, a = -a1
    cdef double s = 1.0 + q * delh, dels
    cdef int i
    for i in range(2, 2000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if fabs(dels / s) < 1e-17:
            break
    h *= a1
    k0e[0] = sqrt(M_PI / (2.0 * x)) / s
    k1e[0] = k0e[0] * (x + 0.5 - h) / x


cdef inline void _k01(double x, double* k0, double* k1) noexcept nogil:
    cdef double e
    if x <= SERIES_SWITCH:
        _series(x, k0, k1)
    else:
        _scaled_cf(x, k0, k1)
        e = exp(-x)
        k0[0] *= e
        k1[0] *= e


def k0k1(x):
    cdef cnp.ndarray[double, ndim=1] xf = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xf.shape[0], i
    out0 = np.empty(n)
    out1 = np.empty(n)
    cdef double[::1] xv = xf
    cdef double[::1] o0 = out0
    cdef double[::1] o1 = out1
    with nogil:
        for i in range(n):
            _k01(xv[i], &o0[i], &o1[i])
    shape = np.shape(x)
    return out0.reshape(shape), out1.reshape(shape)


def xk1(x):
    cdef cnp.ndarray[double, ndim=1] xf = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xf.shape[0], i
    out = np.empty(n)
    cdef double[::1] xv = xf
    cdef double[::1] o = out
    cdef double k0, k1, xi
    with nogil:
        for i in range(n):
            xi = xv[i]
            if xi < 1e-4:
                if xi == 0.0:
                    o[i] = 1.0
                else:
                    o[i] = 1.0 + 0.5 * xi * xi * (log(0.5 * xi) + EULER_GAMMA - 0.5)
            else:
                _k01(xi, &k0, &k1)
                o[i] = xi * k1
    return out.reshape(np.shape(x))


cdef inline double _poly(const double* alpha, const long* mono, Py_ssize_t n_mono,
                         Py_ssize_t loops) noexcept nogil:
    cdef double total = 0.0, prod
    cdef Py_ssize_t k, j
    for k in range(n_mono):
        prod = 1.0
        for j in range(loops):
            prod *= alpha[mono[k * loops + j]]
        total += prod
    return total


def symanzik_eval(alpha, monomials):
    cdef double[:, ::1] a = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef long[:, ::1] mono = np.ascontiguousarray(monomials, dtype=np.int64)
    cdef Py_ssize_t m = a.shape[0], i
    cdef Py_ssize_t n_mono = mono.shape[0], loops = mono.shape[1]
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            o[i] = _poly(&a[i, 0], &mono[0, 0], n_mono, loops)
    return out


def simplex_integrand(u, monomials, double power):
    cdef double[:, ::1] a = np.ascontiguousarray(u, dtype=np.float64)
    cdef long[:, ::1] mono = np.ascontiguousarray(monomials, dtype=np.int64)
    cdef Py_ssize_t m = a.shape[0], i
    cdef Py_ssize_t n_mono = mono.shape[0], loops = mono.shape[1]
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            o[i] = pow(_poly(&a[i, 0], &mono[0, 0], n_mono, loops), power)
    return out


def sector_integrand(u, monomials, double power, long loops_total):
    cdef double[:, ::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef long[:, ::1] mono = np.ascontiguousarray(monomials, dtype=np.int64)
    cdef Py_ssize_t m = uv.shape[0], width = uv.shape[1]
    cdef Py_ssize_t n_edges = (width + 1) // 2
    cdef Py_ssize_t n_mono = mono.shape[0], loops = mono.shape[1]
    cdef double degree = n_edges + power * loops_total
    out = np.empty(m)
    cdef double[::1] o = out
    alpha_buf = np.empty(n_edges)
    perm_buf = np.empty(n_edges, dtype=np.intp)
    cdef double[::1] alpha = alpha_buf
    cdef Py_ssize_t[::1] perm = perm_buf
    cdef Py_ssize_t i, k, j, p
    cdef double key, value, jac, total, t
    with nogil:
        for i in range(m):
            # stable insertion sort of the keys -> sector ordering
            for k in range(n_edges):
                p = k
                key = uv[i, n_edges - 1 + k]
                j = k - 1
                while j >= 0 and uv[i, n_edges - 1 + perm[j]] > key:
                    perm[j + 1] = perm[j]
                    j -= 1
                perm[j + 1] = p
            value = 1.0
            jac = 1.0
            total = 1.0
            alpha[perm[0]] = 1.0
            for k in range(1, n_edges):
                t = uv[i, k - 1]
                value *= t
                alpha[perm[k]] = value
                total += value
                jac *= pow(t, <double>(n_edges - 1 - k))
            o[i] = jac * pow(_poly(&alpha[0], &mono[0, 0], n_mono, loops), power) / pow(total, degree)
    return out
