# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; see _pykernels.py for the reference versions."""
from libc.math cimport exp, fabs, sqrt, tanh, isfinite


def hyp2f1_series(double a, double b, double c, double x, double tol, long max_terms):
    cdef double term = 1.0, s = 1.0, ratio, r
    cdef long k
    for k in range(max_terms):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        term *= ratio
        s += term
        if term == 0.0:
            return s, k + 1
        r = fabs(ratio)
        if r < 1.0 and fabs(term) <= tol * fabs(s) * (1.0 - r):
            return s, k + 1
    return s, -1


def euler_block(double[::1] x, const double[:, ::1] z1, const double[:, ::1] z2,
                double mu1, double mu2, double s1, double s2, double rho,
                double dt, double threshold, long long[::1] exploded, long step0):
    cdef Py_ssize_t r, i, n = x.shape[0], m = z1.shape[0]
    cdef double sdt = sqrt(dt), rc = sqrt(1.0 - rho * rho)
    cdef double xo, xn, dw1, dw2
    for r in range(m):
        for i in range(n):
            if exploded[i] < 0:
                xo = x[i]
                dw1 = sdt * z1[r, i]
                dw2 = sdt * (rho * z1[r, i] + rc * z2[r, i])
                xn = xo + (mu1 - mu2 * xo) * dt + s1 * dw1 + s2 * xo * dw2
                if not (fabs(xn) <= threshold):
                    exploded[i] = step0 + r + 1
                    if isfinite(xn):
                        x[i] = xn
                else:
                    x[i] = xn


def hyperbolic_block(double[::1] u, const double[:, ::1] z, double half_nu, double dtau):
    cdef Py_ssize_t r, i, n = u.shape[0], m = z.shape[0]
    cdef double sd = sqrt(dtau)
    for r in range(m):
        for i in range(n):
            u[i] += -half_nu * tanh(u[i]) * dtau + sd * z[r, i]


def integrating_factor_block(double[::1] y, const double[:, ::1] z1,
                             const double[:, ::1] z2, double drift, double s1,
                             double s2, double rho, double k, double ds):
    cdef Py_ssize_t r, i, n = y.shape[0], m = z1.shape[0]
    cdef double sds = sqrt(ds), rc = sqrt(1.0 - rho * rho), dw1, dw2
    for r in range(m):
        for i in range(n):
            dw1 = sds * z1[r, i]
            dw2 = sds * (rho * z1[r, i] + rc * z2[r, i])
            y[i] = exp(s2 * dw2 - k * ds) * (y[i] + drift * ds + s1 * dw1)


def asian_block(double[::1] w, double[::1] e_prev, double[::1] a_sum,
                double[::1] b_sum, const double[:, ::1] z, double s2, double c,
                double du, long step0):
    cdef Py_ssize_t r, i, n = w.shape[0], m = z.shape[0]
    cdef double sd = sqrt(du), e, u
    for r in range(m):
        u = (step0 + r + 1) * du
        for i in range(n):
            w[i] += sd * z[r, i]
            e = exp(s2 * w[i] - c * u)
            a_sum[i] += 0.5 * (e_prev[i] + e) * du
            b_sum[i] += 0.5 * (e_prev[i] * e_prev[i] + e * e) * du
            e_prev[i] = e
