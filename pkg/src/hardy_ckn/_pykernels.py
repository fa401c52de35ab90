"""Pure-Python integration kernel (fallback for the compiled extension).

Integrates the linear second-order equation in ``t = log r``::

    y'' + c y' + (kappa + lam * exp(k t)) y = 0

with an adaptive Dormand-Prince 5(4) scheme.  Optionally carries the
quadrature ``q' = exp(-g t) (y^-2 - 1)`` used by the interior mass formula,
counts sign changes of ``y`` and can stop at (and refine) the first zero.
The compiled module ``_ckernels`` implements the identical algorithm.
"""

import math

import numpy as np

# Dormand-Prince coefficients
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4, E5, E6, E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)
C2, C3, C4, C5 = 0.2, 0.3, 0.8, 8.0 / 9.0

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_TOO_MANY_STEPS = 2
STATUS_NONFINITE = 3

MAX_STEPS = 2_000_000


def _rhs(t, y, z, c, kappa, lam, k, quad, g):
    dz = -c * z - (kappa + lam * math.exp(k * t)) * y
    if quad:
        dq = math.exp(-g * t) * (1.0 / (y * y) - 1.0)
    else:
        dq = 0.0
    return z, dz, dq


def _step(t, y, z, q, f1, h, c, kappa, lam, k, quad, g):
    """One Dormand-Prince step; returns the 5th-order state, FSAL slope and error vector."""
    f1y, f1z, f1q = f1
    f2 = _rhs(t + C2 * h, y + h * A21 * f1y, z + h * A21 * f1z, c, kappa, lam, k, quad, g)
    f3 = _rhs(
        t + C3 * h,
        y + h * (A31 * f1y + A32 * f2[0]),
        z + h * (A31 * f1z + A32 * f2[1]),
        c, kappa, lam, k, quad, g,
    )
    f4 = _rhs(
        t + C4 * h,
        y + h * (A41 * f1y + A42 * f2[0] + A43 * f3[0]),
        z + h * (A41 * f1z + A42 * f2[1] + A43 * f3[1]),
        c, kappa, lam, k, quad, g,
    )
    f5 = _rhs(
        t + C5 * h,
        y + h * (A51 * f1y + A52 * f2[0] + A53 * f3[0] + A54 * f4[0]),
        z + h * (A51 * f1z + A52 * f2[1] + A53 * f3[1] + A54 * f4[1]),
        c, kappa, lam, k, quad, g,
    )
    f6 = _rhs(
        t + h,
        y + h * (A61 * f1y + A62 * f2[0] + A63 * f3[0] + A64 * f4[0] + A65 * f5[0]),
        z + h * (A61 * f1z + A62 * f2[1] + A63 * f3[1] + A64 * f4[1] + A65 * f5[1]),
        c, kappa, lam, k, quad, g,
    )
    yn = y + h * (B1 * f1y + B3 * f3[0] + B4 * f4[0] + B5 * f5[0] + B6 * f6[0])
    zn = z + h * (B1 * f1z + B3 * f3[1] + B4 * f4[1] + B5 * f5[1] + B6 * f6[1])
    qn = q + h * (B1 * f1q + B3 * f3[2] + B4 * f4[2] + B5 * f5[2] + B6 * f6[2])
    f7 = _rhs(t + h, yn, zn, c, kappa, lam, k, quad, g)
    ey = h * (E1 * f1y + E3 * f3[0] + E4 * f4[0] + E5 * f5[0] + E6 * f6[0] + E7 * f7[0])
    ez = h * (E1 * f1z + E3 * f3[1] + E4 * f4[1] + E5 * f5[1] + E6 * f6[1] + E7 * f7[1])
    eq = h * (E1 * f1q + E3 * f3[2] + E4 * f4[2] + E5 * f5[2] + E6 * f6[2] + E7 * f7[2])
    return yn, zn, qn, f7, ey, ez, eq


def integrate_linear(
    c, kappa, lam, k, t0, y0, dy0, t_out, rtol, atol, max_step,
    quad=False, g=0.0, q0=0.0, stop_at_zero=False,
):
    """Integrate from ``t0`` through the increasing output times ``t_out``.

    Returns
    -------
    tuple
        ``(y, dy, q, zero_count, t_zero, nsteps, status)`` where the first three
        are arrays aligned with ``t_out`` (NaN past a requested stop) and
        ``t_zero`` is NaN when no zero was located.
    """
    t_out = np.ascontiguousarray(t_out, dtype=float)
    m = t_out.shape[0]
    ys = np.full(m, np.nan)
    zs = np.full(m, np.nan)
    qs = np.full(m, np.nan)
    t, y, z, q = float(t0), float(y0), float(dy0), float(q0)
    idx = 0
    while idx < m and t_out[idx] <= t:
        ys[idx], zs[idx], qs[idx] = y, z, q
        idx += 1
    zero_count = 0
    t_zero = math.nan
    nsteps = 0
    if idx == m:
        return ys, zs, qs, zero_count, t_zero, nsteps, STATUS_OK
    f1 = _rhs(t, y, z, c, kappa, lam, k, quad, g)
    h = min(max_step, 1e-2, t_out[m - 1] - t)
    while idx < m:
        target = t_out[idx]
        hu = h
        land = False
        if t + hu >= target:
            hu = target - t
            land = True
        yn, zn, qn, f7, ey, ez, eq = _step(t, y, z, q, f1, hu, c, kappa, lam, k, quad, g)
        err = abs(ey) / (atol + rtol * max(abs(y), abs(yn)))
        err = max(err, abs(ez) / (atol + rtol * max(abs(z), abs(zn))))
        if quad:
            err = max(err, abs(eq) / (atol + rtol * max(abs(q), abs(qn))))
        if not math.isfinite(err):
            return ys, zs, qs, zero_count, t_zero, nsteps, STATUS_NONFINITE
        nsteps += 1
        if nsteps > MAX_STEPS:
            return ys, zs, qs, zero_count, t_zero, nsteps, STATUS_TOO_MANY_STEPS
        if err <= 1.0:
            tn = target if land else t + hu
            if (y > 0.0 and yn <= 0.0) or (y < 0.0 and yn >= 0.0):
                zero_count += 1
                if stop_at_zero:
                    lo, hi = 0.0, hu
                    for _ in range(200):
                        if hi - lo <= 4e-16 * (abs(t) + 1.0):
                            break
                        mid = 0.5 * (lo + hi)
                        ym = _step(t, y, z, q, f1, mid, c, kappa, lam, k, quad, g)[0]
                        if (ym > 0.0) == (y > 0.0):
                            lo = mid
                        else:
                            hi = mid
                    t_zero = t + 0.5 * (lo + hi)
                    return ys, zs, qs, zero_count, t_zero, nsteps, STATUS_OK
            t, y, z, q, f1 = tn, yn, zn, qn, f7
            while idx < m and t_out[idx] <= t:
                ys[idx], zs[idx], qs[idx] = y, z, q
                idx += 1
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            hn = hu * fac
            if land:
                # a step truncated to hit an output time must not shrink the next one
                hn = max(hn, h)
            h = min(hn, max_step)
        else:
            h = hu * max(0.2, 0.9 * err ** -0.2)
            if h <= 1e-14 * (abs(t) + 1.0):
                return ys, zs, qs, zero_count, t_zero, nsteps, STATUS_STEP_UNDERFLOW
    return ys, zs, qs, zero_count, t_zero, nsteps, STATUS_OK
