# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integration kernel; same algorithm and signature as ``_pykernels``."""

from libc.math cimport exp, fabs, isfinite, pow, NAN

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0
cdef double C2 = 0.2, C3 = 0.3, C4 = 0.8, C5 = 8.0 / 9.0

cdef long MAX_STEPS = 2000000


cdef struct Coef:
    double c
    double kappa
    double lam
    double k
    bint quad
    double g


cdef inline void rhs(const Coef* p, double t, double y, double z, double* out) noexcept nogil:
    out[0] = z
    out[1] = -p.c * z - (p.kappa + p.lam * exp(p.k * t)) * y
    if p.quad:
        out[2] = exp(-p.g * t) * (1.0 / (y * y) - 1.0)
    else:
        out[2] = 0.0


cdef void step(const Coef* p, double t, double* s, double* f1, double h,
               double* sn, double* f7, double* e) noexcept nogil:
    cdef double f2[3]
    cdef double f3[3]
    cdef double f4[3]
    cdef double f5[3]
    cdef double f6[3]
    rhs(p, t + C2 * h, s[0] + h * A21 * f1[0], s[1] + h * A21 * f1[1], f2)
    rhs(p, t + C3 * h,
        s[0] + h * (A31 * f1[0] + A32 * f2[0]),
        s[1] + h * (A31 * f1[1] + A32 * f2[1]), f3)
    rhs(p, t + C4 * h,
        s[0] + h * (A41 * f1[0] + A42 * f2[0] + A43 * f3[0]),
        s[1] + h * (A41 * f1[1] + A42 * f2[1] + A43 * f3[1]), f4)
    rhs(p, t + C5 * h,
        s[0] + h * (A51 * f1[0] + A52 * f2[0] + A53 * f3[0] + A54 * f4[0]),
        s[1] + h * (A51 * f1[1] + A52 * f2[1] + A53 * f3[1] + A54 * f4[1]), f5)
    rhs(p, t + h,
        s[0] + h * (A61 * f1[0] + A62 * f2[0] + A63 * f3[0] + A64 * f4[0] + A65 * f5[0]),
        s[1] + h * (A61 * f1[1] + A62 * f2[1] + A63 * f3[1] + A64 * f4[1] + A65 * f5[1]), f6)
    cdef int i
    for i in range(3):
        sn[i] = s[i] + h * (B1 * f1[i] + B3 * f3[i] + B4 * f4[i] + B5 * f5[i] + B6 * f6[i])
    rhs(p, t + h, sn[0], sn[1], f7)
    for i in range(3):
        e[i] = h * (E1 * f1[i] + E3 * f3[i] + E4 * f4[i] + E5 * f5[i] + E6 * f6[i] + E7 * f7[i])


cdef inline double scaled(double err, double a, double b, double atol, double rtol) noexcept nogil:
    cdef double m = fabs(a)
    if fabs(b) > m:
        m = fabs(b)
    return fabs(err) / (atol + rtol * m)


def integrate_linear(double c, double kappa, double lam, double k, double t0,
                     double y0, double dy0, t_out, double rtol, double atol,
                     double max_step, bint quad=False, double g=0.0, double q0=0.0,
                     bint stop_at_zero=False):
    """See ``_pykernels.integrate_linear``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] to = np.ascontiguousarray(t_out, dtype=np.float64)
    cdef Py_ssize_t m = to.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ys = np.full(m, np.nan)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zs = np.full(m, np.nan)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] qs = np.full(m, np.nan)
    cdef Coef p
    p.c = c
    p.kappa = kappa
    p.lam = lam
    p.k = k
    p.quad = quad
    p.g = g
    cdef double s[3]
    cdef double sn[3]
    cdef double f1[3]
    cdef double f7[3]
    cdef double e[3]
    cdef double tmp[3]
    cdef double t = t0, h, hu, hn, target, tn, err, fac, lo, hi, mid
    cdef double t_zero = NAN
    cdef bint land
    cdef long nsteps = 0, zero_count = 0
    cdef Py_ssize_t idx = 0
    cdef int it, i
    s[0] = y0
    s[1] = dy0
    s[2] = q0
    while idx < m and to[idx] <= t:
        ys[idx] = s[0]
        zs[idx] = s[1]
        qs[idx] = s[2]
        idx += 1
    if idx == m:
        return ys, zs, qs, zero_count, t_zero, nsteps, 0
    rhs(&p, t, s[0], s[1], f1)
    h = min(max_step, 1e-2, to[m - 1] - t)
    while idx < m:
        target = to[idx]
        hu = h
        land = False
        if t + hu >= target:
            hu = target - t
            land = True
        step(&p, t, s, f1, hu, sn, f7, e)
        err = scaled(e[0], s[0], sn[0], atol, rtol)
        err = max(err, scaled(e[1], s[1], sn[1], atol, rtol))
        if quad:
            err = max(err, scaled(e[2], s[2], sn[2], atol, rtol))
        if not isfinite(err):
            return ys, zs, qs, zero_count, t_zero, nsteps, 3
        nsteps += 1
        if nsteps > MAX_STEPS:
            return ys, zs, qs, zero_count, t_zero, nsteps, 2
        if err <= 1.0:
            tn = target if land else t + hu
            if (s[0] > 0.0 and sn[0] <= 0.0) or (s[0] < 0.0 and sn[0] >= 0.0):
                zero_count += 1
                if stop_at_zero:
                    lo = 0.0
                    hi = hu
                    for it in range(200):
                        if hi - lo <= 4e-16 * (fabs(t) + 1.0):
                            break
                        mid = 0.5 * (lo + hi)
                        step(&p, t, s, f1, mid, tmp, f7, e)
                        if (tmp[0] > 0.0) == (s[0] > 0.0):
                            lo = mid
                        else:
                            hi = mid
                    t_zero = t + 0.5 * (lo + hi)
                    return ys, zs, qs, zero_count, t_zero, nsteps, 0
            t = tn
            for i in range(3):
                s[i] = sn[i]
                f1[i] = f7[i]
            while idx < m and to[idx] <= t:
                ys[idx] = s[0]
                zs[idx] = s[1]
                qs[idx] = s[2]
                idx += 1
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
            hn = hu * fac
            if land:
                hn = max(hn, h)
            h = min(hn, max_step)
        else:
            h = hu * max(0.2, 0.9 * pow(err, -0.2))
            if h <= 1e-14 * (fabs(t) + 1.0):
                return ys, zs, qs, zero_count, t_zero, nsteps, 1
    return ys, zs, qs, zero_count, t_zero, nsteps, 0
