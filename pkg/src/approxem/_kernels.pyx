# cython: language_level=3
"""Compiled step-posterior and quadrature kernels.

Same signatures and return layouts as ``approxem._fallback``; these loop
over the grid without materialising N x n weight matrices.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log, pow, INFINITY

cnp.import_array()

cdef double LOG_2PI = 1.8378770664093453


cdef void _cells(Py_ssize_t n, double zeta, double alpha,
                 double[::1] z, double[::1] prior,
                 double[::1] Aln, double[::1] Az, double[::1] Az2):
    cdef Py_ssize_t k
    cdef double a, b, Fa, Fb
    for k in range(n):
        z[k] = <double>k / n
    z[0] = zeta / n
    for k in range(n):
        if alpha == 1.0:
            prior[k] = 0.0
        else:
            prior[k] = (alpha - 1.0) * log(z[k])
        a = <double>k / n
        b = <double>(k + 1) / n
        Fa = a * log(a) - a if a > 0 else 0.0
        Fb = b * log(b) - b
        Aln[k] = Fb - Fa
        Az[k] = 0.5 * (b * b - a * a)
        Az2[k] = (b * b * b - a * a * a) / 3.0


def riemann_moments_1d(x, double alpha, double lam, double sigma2,
                       Py_ssize_t n, double inv_temp, double zeta):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t N = xv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out_arr = np.empty((N, 3))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] z = np.empty(n), prior = np.empty(n)
    cdef double[::1] Aln = np.empty(n), Az = np.empty(n), Az2 = np.empty(n)
    cdef double[::1] lw = np.empty(n)
    cdef Py_ssize_t i, k
    cdef double c = 1.0 / (2.0 * sigma2)
    cdef double r, m, e, S, s0, s1, s2
    _cells(n, zeta, alpha, z, prior, Aln, Az, Az2)
    for i in range(N):
        m = -INFINITY
        for k in range(n):
            r = xv[i] - lam * z[k]
            lw[k] = inv_temp * (prior[k] - c * r * r)
            if lw[k] > m:
                m = lw[k]
        S = 0.0
        s0 = 0.0
        s1 = 0.0
        s2 = 0.0
        for k in range(n):
            e = exp(lw[k] - m)
            S += e
            s0 += e * Aln[k]
            s1 += e * Az[k]
            s2 += e * Az2[k]
        out[i, 0] = n * s0 / S
        out[i, 1] = n * s1 / S
        out[i, 2] = n * s2 / S
    return out_arr


def riemann_moments_2d(x1, x2, double alpha1, double alpha2, double lam1, double lam2,
                       double sigma2_1, double sigma2_2, Py_ssize_t n,
                       double inv_temp, double zeta):
    cdef const double[::1] x1v = np.ascontiguousarray(x1, dtype=np.float64)
    cdef const double[::1] x2v = np.ascontiguousarray(x2, dtype=np.float64)
    cdef Py_ssize_t N = x1v.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out_arr = np.empty((N, 7))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] z = np.empty(n), p1 = np.empty(n), p2 = np.empty(n)
    cdef double[::1] Aln = np.empty(n), Az = np.empty(n), Az2 = np.empty(n)
    cdef double[::1] m1 = np.empty(n), m2 = np.empty(n)
    cdef double[:, ::1] lw = np.empty((n, n))
    cdef Py_ssize_t i, k1, k2
    cdef double c1 = 1.0 / (2.0 * sigma2_1)
    cdef double c2 = 1.0 / (2.0 * sigma2_2)
    cdef double r1, r2, m, e, S, row, cross, scale
    _cells(n, zeta, alpha1, z, p1, Aln, Az, Az2)
    _cells(n, zeta, alpha2, z, p2, Aln, Az, Az2)
    for i in range(N):
        m = -INFINITY
        for k1 in range(n):
            for k2 in range(n):
                r1 = x1v[i] - lam1 * z[k1] - z[k2]
                r2 = x2v[i] - z[k1] - lam2 * z[k2]
                lw[k1, k2] = inv_temp * (p1[k1] + p2[k2] - c1 * r1 * r1 - c2 * r2 * r2)
                if lw[k1, k2] > m:
                    m = lw[k1, k2]
        S = 0.0
        cross = 0.0
        for k2 in range(n):
            m2[k2] = 0.0
        for k1 in range(n):
            m1[k1] = 0.0
            row = 0.0
            for k2 in range(n):
                e = exp(lw[k1, k2] - m)
                m1[k1] += e
                m2[k2] += e
                row += e * Az[k2]
            S += m1[k1]
            cross += Az[k1] * row
        scale = n / S
        out[i, 0] = 0.0
        out[i, 1] = 0.0
        out[i, 2] = 0.0
        out[i, 3] = 0.0
        out[i, 4] = 0.0
        out[i, 5] = 0.0
        for k1 in range(n):
            out[i, 0] += m1[k1] * Aln[k1]
            out[i, 1] += m2[k1] * Aln[k1]
            out[i, 2] += m1[k1] * Az[k1]
            out[i, 3] += m2[k1] * Az[k1]
            out[i, 4] += m1[k1] * Az2[k1]
            out[i, 5] += m2[k1] * Az2[k1]
        for k1 in range(6):
            out[i, k1] *= scale
        out[i, 6] = n * cross * scale
    return out_arr


cdef void _axis_rule(double alpha, const double[::1] nodes, const double[::1] weights,
                     double[::1] z, double[::1] lw):
    cdef Py_ssize_t k
    cdef Py_ssize_t M = nodes.shape[0]
    for k in range(M):
        if alpha < 1.0:
            z[k] = pow(nodes[k], 1.0 / alpha)
            lw[k] = log(weights[k])
        else:
            z[k] = nodes[k]
            lw[k] = log(weights[k]) + log(alpha)
            if alpha != 1.0:
                lw[k] += (alpha - 1.0) * log(nodes[k])


def bg1d_log_marginal(x, double alpha, double lam, double sigma2, nodes, weights):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] nv = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t N = xv.shape[0]
    cdef Py_ssize_t M = nv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.empty(N)
    cdef double[::1] out = out_arr
    cdef double[::1] z = np.empty(M), lwq = np.empty(M), t = np.empty(M)
    cdef Py_ssize_t i, k
    cdef double c = 1.0 / (2.0 * sigma2)
    cdef double c0 = -0.5 * (LOG_2PI + log(sigma2))
    cdef double r, m, S
    _axis_rule(alpha, nv, wv, z, lwq)
    for i in range(N):
        m = -INFINITY
        for k in range(M):
            r = xv[i] - lam * z[k]
            t[k] = lwq[k] - c * r * r
            if t[k] > m:
                m = t[k]
        S = 0.0
        for k in range(M):
            S += exp(t[k] - m)
        out[i] = c0 + m + log(S)
    return out_arr


def bg2d_log_marginal(x1, x2, double alpha1, double alpha2, double lam1, double lam2,
                      double sigma2_1, double sigma2_2, nodes, weights):
    cdef const double[::1] x1v = np.ascontiguousarray(x1, dtype=np.float64)
    cdef const double[::1] x2v = np.ascontiguousarray(x2, dtype=np.float64)
    cdef const double[::1] nv = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t N = x1v.shape[0]
    cdef Py_ssize_t M = nv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.empty(N)
    cdef double[::1] out = out_arr
    cdef double[::1] z1 = np.empty(M), w1 = np.empty(M), z2 = np.empty(M), w2 = np.empty(M)
    cdef double[:, ::1] t = np.empty((M, M))
    cdef Py_ssize_t i, k1, k2
    cdef double c1 = 1.0 / (2.0 * sigma2_1)
    cdef double c2 = 1.0 / (2.0 * sigma2_2)
    cdef double c0 = -0.5 * (2.0 * LOG_2PI + log(sigma2_1) + log(sigma2_2))
    cdef double r1, r2, m, S
    _axis_rule(alpha1, nv, wv, z1, w1)
    _axis_rule(alpha2, nv, wv, z2, w2)
    for i in range(N):
        m = -INFINITY
        for k1 in range(M):
            for k2 in range(M):
                r1 = x1v[i] - lam1 * z1[k1] - z2[k2]
                r2 = x2v[i] - z1[k1] - lam2 * z2[k2]
                t[k1, k2] = w1[k1] + w2[k2] - c1 * r1 * r1 - c2 * r2 * r2
                if t[k1, k2] > m:
                    m = t[k1, k2]
        S = 0.0
        for k1 in range(M):
            for k2 in range(M):
                S += exp(t[k1, k2] - m)
        out[i] = c0 + m + log(S)
    return out_arr
