"""Compiled numerical kernels: canonical RHS variants and the DOP853 driver.

Everything here is numba-compiled and operates on raw arrays; the public
modules wrap these in typed interfaces.  State order follows the CSV contract
(r1, w1, R1, G1, r2, w2, R2, G2).  Three RHS modes share one driver:

    mode 0 -- 8 equations, state only
    mode 1 -- 9 equations, state plus node-longitude quadrature dOmega/dt
    mode 2 -- 80 equations, state, 8x8 transition matrix, dPhi/dC column
"""

import numpy as np
from numba import njit

from . import _dop853_coefficients as dc
from . import _generated_hill as _gen

ham = njit(cache=True)(_gen.ham)
grad = njit(cache=True)(_gen.grad)
dham_dc = njit(cache=True)(_gen.dham_dc)
hess_and_dgrad_dc = njit(cache=True)(_gen.hess_and_dgrad_dc)

_A = dc.A
_B = dc.B
_C = dc.C
_E3 = dc.E3
_E5 = dc.E5
N_STAGES = dc.N_STAGES

# driver status codes
OK = 0
COLLISION = 1
STEP_UNDERFLOW = 2
MAX_STEPS_EXCEEDED = 3

# map-cell outcome codes
BOUNDED = 0
ESCAPED = 1
COLLIDED = 2

# canonical pairing (r_j, R_j), (w_j, G_j): xdot = Jcan * dH/dx
_PERM = np.array([2, 3, 0, 1, 6, 7, 4, 5], dtype=np.int64)
_SIGN = np.array([1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0])


@njit(cache=True)
def state_rhs(y, out, C, m0, m1, m2, g8):
    grad(g8, y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], C, m0, m1, m2)
    out[0] = g8[2]
    out[1] = g8[3]
    out[2] = -g8[0]
    out[3] = -g8[1]
    out[4] = g8[6]
    out[5] = g8[7]
    out[6] = -g8[4]
    out[7] = -g8[5]


@njit(cache=True)
def full_rhs(mode, y, out, C, m0, m1, m2, g8, h64, c8):
    state_rhs(y, out, C, m0, m1, m2, g8)
    if mode == 1:
        out[8] = dham_dc(y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], C, m0, m1, m2)
    elif mode == 2:
        hess_and_dgrad_dc(
            h64, c8, y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], C, m0, m1, m2
        )
        # A = Jcan * Hess, A[i, k] = sign_i * Hess[perm_i, k]
        for i in range(8):
            pi = _PERM[i]
            si = _SIGN[i]
            # transition-matrix block: Mdot = A M, M stored row-major in y[8:72]
            for j in range(8):
                acc = 0.0
                for k in range(8):
                    acc += h64[8 * pi + k] * y[8 + 8 * k + j]
                out[8 + 8 * i + j] = si * acc
            # dPhi/dC column: vdot = A v + Jcan * dgrad/dC
            acc = 0.0
            for k in range(8):
                acc += h64[8 * pi + k] * y[72 + k]
            out[72 + i] = si * acc + si * c8[pi]


@njit(cache=True)
def mutual_distance(y, C):
    G1 = y[3]
    G2 = y[7]
    cj = (C * C - G1 * G1 - G2 * G2) / (2.0 * G1 * G2)
    d2 = (
        y[0] * y[0]
        + y[4] * y[4]
        - 2.0
        * y[0]
        * y[4]
        * (np.cos(y[1]) * np.cos(y[5]) + cj * np.sin(y[1]) * np.sin(y[5]))
    )
    if d2 <= 0.0:
        return 0.0
    return np.sqrt(d2)


@njit(cache=True)
def _rms_scaled(v, scale):
    acc = 0.0
    for i in range(v.size):
        q = v[i] / scale[i]
        acc += q * q
    return np.sqrt(acc / v.size)


@njit(cache=True)
def _initial_step(mode, t0, y0, f0, direction, rtol, atol, C, m0, m1, m2, g8, h64, c8):
    n = y0.size
    scale = np.empty(n)
    for i in range(n):
        scale[i] = atol + rtol * abs(y0[i])
    d0 = _rms_scaled(y0, scale)
    d1 = _rms_scaled(f0, scale)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = np.empty(n)
    full_rhs(mode, y1, f1, C, m0, m1, m2, g8, h64, c8)
    d2 = _rms_scaled(f1 - f0, scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / 9.0)
    return min(100.0 * h0, h1)


@njit(cache=True)
def drive(mode, y0, C, m0, m1, m2, t0, t1, rtol, atol, max_step, guard, h_start, max_steps):
    """Adaptive DOP853 propagation of the selected RHS mode.

    Returns (status, y, t_reached, n_accepted, max_energy_drift, h_last).
    The energy drift is tracked on the 8 state components relative to the
    initial Hamiltonian value; guard > 0 enables the collision stop.
    """
    n = y0.size
    y = y0.copy()
    g8 = np.empty(8)
    h64 = np.empty(64)
    c8 = np.empty(8)
    K = np.empty((N_STAGES + 1, n))
    f = np.empty(n)
    y_new = np.empty(n)
    err5 = np.empty(n)
    err3 = np.empty(n)

    if t1 == t0:
        return OK, y, t0, 0, 0.0, h_start
    direction = 1.0 if t1 > t0 else -1.0
    full_rhs(mode, y, f, C, m0, m1, m2, g8, h64, c8)

    H0 = ham(y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], C, m0, m1, m2)
    Hscale = max(abs(H0), 1e-300)
    max_drift = 0.0

    if h_start > 0.0:
        h_abs = h_start
    else:
        h_abs = _initial_step(mode, t0, y, f, direction, rtol, atol, C, m0, m1, m2, g8, h64, c8)
    if not np.isfinite(h_abs):
        return STEP_UNDERFLOW, y, t0, 0, 0.0, 0.0
    if h_abs > max_step:
        h_abs = max_step

    t = t0
    n_accepted = 0
    n_total = 0
    eps_floor = 8.0 * 2.220446049250313e-16
    while direction * (t1 - t) > 0.0:
        n_total += 1
        if n_total > max_steps:
            return MAX_STEPS_EXCEEDED, y, t, n_accepted, max_drift, h_abs
        min_step = 10.0 * abs(t) * 2.220446049250313e-16 + 1e-250
        if h_abs < min_step:
            # a rejection cascade against a singular configuration stalls
            # before the guard radius is reached (deep encounters drive a
            # body's angular momentum through zero, where the chart ends);
            # classify a stall at close quarters as a collision
            if guard > 0.0:
                near = 1e4 * guard
                close = max(near, 0.01 * min(y[0], y[4]))
                if mutual_distance(y, C) < close or y[0] < near or y[4] < near:
                    return COLLISION, y, t, n_accepted, max_drift, h_abs
            return STEP_UNDERFLOW, y, t, n_accepted, max_drift, h_abs
        h = h_abs * direction
        t_new = t + h
        if direction * (t_new - t1) > 0.0:
            t_new = t1
        h = t_new - t
        h_abs = abs(h)

        # twelve-stage core
        for i in range(n):
            K[0, i] = f[i]
        for s in range(1, N_STAGES):
            for i in range(n):
                acc = 0.0
                for j in range(s):
                    acc += _A[s, j] * K[j, i]
                y_new[i] = y[i] + h * acc
            full_rhs(mode, y_new, K[s], C, m0, m1, m2, g8, h64, c8)
        for i in range(n):
            acc = 0.0
            for j in range(N_STAGES):
                acc += _B[j] * K[j, i]
            y_new[i] = y[i] + h * acc
        full_rhs(mode, y_new, K[N_STAGES], C, m0, m1, m2, g8, h64, c8)

        # 5th/3rd-order error estimate, Hairer's combination
        e5n = 0.0
        e3n = 0.0
        for i in range(n):
            a5 = 0.0
            a3 = 0.0
            for j in range(N_STAGES + 1):
                a5 += _E5[j] * K[j, i]
                a3 += _E3[j] * K[j, i]
            ay = max(abs(y[i]), abs(y_new[i]))
            sc = atol + rtol * ay + eps_floor * ay
            a5 /= sc
            a3 /= sc
            e5n += a5 * a5
            e3n += a3 * a3
        if e5n == 0.0 and e3n == 0.0:
            err_norm = 0.0
        elif np.isfinite(e5n) and np.isfinite(e3n):
            err_norm = h_abs * e5n / np.sqrt((e5n + 0.01 * e3n) * n)
        else:
            err_norm = np.inf

        if err_norm < 1.0:
            if err_norm == 0.0:
                factor = 10.0
            else:
                factor = min(10.0, 0.9 * err_norm ** (-0.125))
            t = t_new
            for i in range(n):
                y[i] = y_new[i]
                f[i] = K[N_STAGES, i]
            h_abs = min(h_abs * factor, max_step)
            n_accepted += 1
            H = ham(y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], C, m0, m1, m2)
            drift = abs(H - H0) / Hscale
            if drift > max_drift:
                max_drift = drift
            if guard > 0.0:
                if mutual_distance(y, C) < guard or y[0] < guard or y[4] < guard:
                    return COLLISION, y, t, n_accepted, max_drift, h_abs
        else:
            h_abs *= max(0.2, 0.9 * err_norm ** (-0.125))
    return OK, y, t, n_accepted, max_drift, h_abs


@njit(cache=True)
def osculating_elements(y, m0, m1, m2):
    """Canonical two-body elements about the primary: (a1, e1, a2, e2).

    Negative a_j flags a hyperbolic osculating orbit.
    """
    out = np.empty(4)
    for k in range(2):
        r = y[4 * k]
        R = y[4 * k + 2]
        G = y[4 * k + 3]
        mj = m1 if k == 0 else m2
        beta = m0 * mj / (m0 + mj)
        mu = m0 + mj
        E = (R * R + G * G / (r * r)) / (2.0 * beta) - mu * beta / r
        if E >= 0.0:
            out[2 * k] = -1.0
            out[2 * k + 1] = 2.0
            continue
        a = -mu * beta / (2.0 * E)
        lam = beta * np.sqrt(mu * a)
        q = 1.0 - (G / lam) ** 2
        out[2 * k] = a
        out[2 * k + 1] = np.sqrt(q) if q > 0.0 else 0.0
    return out


@njit(cache=True)
def scan_cell(y0, C, m0, m1, m2, t_end, rtol, atol, sep_frac, ratio_lo, ratio_hi, coll_dist, max_steps):
    """Integrate one stability-map cell, tracking max eccentricity.

    Returns (outcome, max_ecc, t_loss); t_loss < 0 means no loss event.
    Escape: osculating semi-major axes separating beyond sep_frac of their
    mean, heliocentric distance ratio leaving [ratio_lo, ratio_hi], or a
    hyperbolic osculating orbit.  Collision: mutual distance below coll_dist.
    """
    n = 8
    y = y0.copy()
    # initial-state screening: a cell born inside the collision radius or
    # outside the escape window is classified without integrating
    if mutual_distance(y, C) < coll_dist:
        return COLLIDED, 0.0, 0.0
    el0 = osculating_elements(y, m0, m1, m2)
    if el0[0] < 0.0 or el0[2] < 0.0:
        return ESCAPED, 0.0, 0.0
    ratio0 = y[0] / y[4]
    if ratio0 < ratio_lo or ratio0 > ratio_hi:
        return ESCAPED, max(el0[1], el0[3]), 0.0
    g8 = np.empty(8)
    h64 = np.empty(64)
    c8 = np.empty(8)
    K = np.empty((N_STAGES + 1, n))
    f = np.empty(n)
    y_new = np.empty(n)
    full_rhs(0, y, f, C, m0, m1, m2, g8, h64, c8)
    h_abs = _initial_step(0, 0.0, y, f, 1.0, rtol, atol, C, m0, m1, m2, g8, h64, c8)
    if not np.isfinite(h_abs):
        return COLLIDED, max(el0[1], el0[3]), 0.0
    max_step = t_end
    t = 0.0
    max_ecc = 0.0
    n_total = 0
    eps_floor = 8.0 * 2.220446049250313e-16
    while t < t_end:
        n_total += 1
        if n_total > max_steps:
            # step budget exhausted in a near-singular regime: the cell is
            # certainly not regular; report it with the loss time
            return COLLIDED, max_ecc, t
        min_step = 10.0 * abs(t) * 2.220446049250313e-16 + 1e-250
        if h_abs < min_step:
            return COLLIDED, max_ecc, t
        h = h_abs
        t_new = t + h
        if t_new > t_end:
            t_new = t_end
        h = t_new - t
        h_abs = abs(h)
        for i in range(n):
            K[0, i] = f[i]
        for s in range(1, N_STAGES):
            for i in range(n):
                acc = 0.0
                for j in range(s):
                    acc += _A[s, j] * K[j, i]
                y_new[i] = y[i] + h * acc
            full_rhs(0, y_new, K[s], C, m0, m1, m2, g8, h64, c8)
        for i in range(n):
            acc = 0.0
            for j in range(N_STAGES):
                acc += _B[j] * K[j, i]
            y_new[i] = y[i] + h * acc
        full_rhs(0, y_new, K[N_STAGES], C, m0, m1, m2, g8, h64, c8)
        e5n = 0.0
        e3n = 0.0
        for i in range(n):
            a5 = 0.0
            a3 = 0.0
            for j in range(N_STAGES + 1):
                a5 += _E5[j] * K[j, i]
                a3 += _E3[j] * K[j, i]
            ay = max(abs(y[i]), abs(y_new[i]))
            sc = atol + rtol * ay + eps_floor * ay
            a5 /= sc
            a3 /= sc
            e5n += a5 * a5
            e3n += a3 * a3
        if e5n == 0.0 and e3n == 0.0:
            err_norm = 0.0
        elif np.isfinite(e5n) and np.isfinite(e3n):
            err_norm = h_abs * e5n / np.sqrt((e5n + 0.01 * e3n) * n)
        else:
            err_norm = np.inf
        if err_norm < 1.0:
            factor = 10.0 if err_norm == 0.0 else min(10.0, 0.9 * err_norm ** (-0.125))
            t = t_new
            for i in range(n):
                y[i] = y_new[i]
                f[i] = K[N_STAGES, i]
            h_abs = min(h_abs * factor, max_step)
            if mutual_distance(y, C) < coll_dist:
                return COLLIDED, max_ecc, t
            el = osculating_elements(y, m0, m1, m2)
            a1 = el[0]
            a2 = el[2]
            if a1 < 0.0 or a2 < 0.0:
                return ESCAPED, max_ecc, t
            if el[1] > max_ecc:
                max_ecc = el[1]
            if el[3] > max_ecc:
                max_ecc = el[3]
            if abs(a1 - a2) > sep_frac * 0.5 * (a1 + a2):
                return ESCAPED, max_ecc, t
            ratio = y[0] / y[4]
            if ratio < ratio_lo or ratio > ratio_hi:
                return ESCAPED, max_ecc, t
        else:
            h_abs *= max(0.2, 0.9 * err_norm ** (-0.125))
    return BOUNDED, max_ecc, -1.0
