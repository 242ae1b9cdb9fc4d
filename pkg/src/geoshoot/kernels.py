"""Compiled inner loops: tape interpreters, the series recurrence and RK4.

Series values here are "plane stacks": arrays of shape (K, N+1) where plane 0
is the jet itself and planes 1..K-1 are its derivatives with respect to K-1
seed directions. K = 1 gives plain jets; K = 3 gives jets whose coefficients
are duals in (a1, a2). Every nonlinear op propagates the planes by the chain
rule at jet level, e.g. d sqrt(u) = du / (2 sqrt(u)).

All kernels report failures through an integer status (see ``jet``) and the
index of the failing tape register (-1 when not tied to a register).
"""

import math

import numpy as np

from ._accel import njit
from .expression import (
    OP_ADD,
    OP_CONST,
    OP_COS,
    OP_DIV,
    OP_EXP,
    OP_LOG,
    OP_MUL,
    OP_NEG,
    OP_SIN,
    OP_SQRT,
    OP_SUB,
    OP_X,
    OP_Y,
)
from .jet import (
    E_DIV_ZERO,
    E_EXP_OVERFLOW,
    E_LOG_NONPOS,
    E_NOT_DEFINITE,
    E_SQRT_NEG,
    OK,
    series_div,
    series_exp,
    series_log,
    series_mul,
    series_sincos,
    series_sqrt,
)

# Output order of a metric tape: E, F, G, Ex, Ey, Fx, Fy, Gx, Gy.
N_METRIC_OUTPUTS = 9


# --- float tape ------------------------------------------------------------------

@njit
def eval_tape_float(ops, consts, x, y, regs):
    """Run the tape on plain floats. Returns (status, failing register)."""
    for i in range(ops.shape[0]):
        code = ops[i, 0]
        a = ops[i, 1]
        b = ops[i, 2]
        if code == OP_CONST:
            regs[i] = consts[a]
        elif code == OP_X:
            regs[i] = x
        elif code == OP_Y:
            regs[i] = y
        elif code == OP_NEG:
            regs[i] = -regs[a]
        elif code == OP_ADD:
            regs[i] = regs[a] + regs[b]
        elif code == OP_SUB:
            regs[i] = regs[a] - regs[b]
        elif code == OP_MUL:
            regs[i] = regs[a] * regs[b]
        elif code == OP_DIV:
            if regs[b] == 0.0:
                return E_DIV_ZERO, i
            regs[i] = regs[a] / regs[b]
        elif code == OP_SQRT:
            if regs[a] < 0.0:
                return E_SQRT_NEG, i
            regs[i] = math.sqrt(regs[a])
        elif code == OP_SIN:
            regs[i] = math.sin(regs[a])
        elif code == OP_COS:
            regs[i] = math.cos(regs[a])
        elif code == OP_EXP:
            if regs[a] > 709.0:
                return E_EXP_OVERFLOW, i
            regs[i] = math.exp(regs[a])
        else:
            if regs[a] <= 0.0:
                return E_LOG_NONPOS, i
            regs[i] = math.log(regs[a])
    return OK, -1


@njit
def christoffel_float(ops, consts, outputs, x, y, regs, gam):
    """Six Christoffel symbols at a point into ``gam``.

    Order: G1_11, G1_12, G1_22, G2_11, G2_12, G2_22.
    """
    status, reg = eval_tape_float(ops, consts, x, y, regs)
    if status != OK:
        return status, reg
    E = regs[outputs[0]]
    F = regs[outputs[1]]
    G = regs[outputs[2]]
    Ex = regs[outputs[3]]
    Ey = regs[outputs[4]]
    Fx = regs[outputs[5]]
    Fy = regs[outputs[6]]
    Gx = regs[outputs[7]]
    Gy = regs[outputs[8]]
    W = E * G - F * F
    if not (E > 0.0 and W > 0.0):
        return E_NOT_DEFINITE, -1
    W2 = 2.0 * W
    gam[0] = (G * Ex - 2.0 * F * Fx + F * Ey) / W2
    gam[1] = (G * Ey - F * Gx) / W2
    gam[2] = (2.0 * G * Fy - G * Gx - F * Gy) / W2
    gam[3] = (2.0 * E * Fx - E * Ey - F * Ex) / W2
    gam[4] = (E * Gx - F * Ey) / W2
    gam[5] = (E * Gy - 2.0 * F * Fy + F * Gx) / W2
    return OK, -1


# --- plane-stack primitives --------------------------------------------------------

@njit
def ps_mul(a, b, out, n, tmp):
    K = a.shape[0]
    series_mul(a[0], b[0], out[0], n)
    for d in range(1, K):
        series_mul(a[0], b[d], out[d], n)
        series_mul(a[d], b[0], tmp, n)
        for k in range(n):
            out[d, k] += tmp[k]


@njit
def ps_div(a, b, out, n, tmp, tmp2):
    K = a.shape[0]
    st = series_div(a[0], b[0], out[0], n)
    if st != OK:
        return st
    for d in range(1, K):
        series_mul(out[0], b[d], tmp, n)
        for k in range(n):
            tmp2[k] = a[d, k] - tmp[k]
        series_div(tmp2, b[0], out[d], n)
    return OK


@njit
def ps_scale_add(alpha, a, beta, b, out, n):
    """out = alpha*a + beta*b (out may alias a or b)."""
    for d in range(a.shape[0]):
        for k in range(n):
            out[d, k] = alpha * a[d, k] + beta * b[d, k]


@njit
def eval_tape_series(ops, consts, xs, ys, regs, n, tmp, tmp2, tmp3):
    """Run the tape on plane stacks truncated to n coefficients."""
    K = xs.shape[0]
    for i in range(ops.shape[0]):
        code = ops[i, 0]
        a = ops[i, 1]
        b = ops[i, 2]
        out = regs[i]
        if code == OP_CONST:
            for d in range(K):
                for k in range(n):
                    out[d, k] = 0.0
            out[0, 0] = consts[a]
        elif code == OP_X or code == OP_Y:
            src = xs if code == OP_X else ys
            for d in range(K):
                for k in range(n):
                    out[d, k] = src[d, k]
        elif code == OP_NEG:
            for d in range(K):
                for k in range(n):
                    out[d, k] = -regs[a, d, k]
        elif code == OP_ADD:
            for d in range(K):
                for k in range(n):
                    out[d, k] = regs[a, d, k] + regs[b, d, k]
        elif code == OP_SUB:
            for d in range(K):
                for k in range(n):
                    out[d, k] = regs[a, d, k] - regs[b, d, k]
        elif code == OP_MUL:
            ps_mul(regs[a], regs[b], out, n, tmp)
        elif code == OP_DIV:
            st = ps_div(regs[a], regs[b], out, n, tmp, tmp2)
            if st != OK:
                return st, i
        elif code == OP_SQRT:
            st = series_sqrt(regs[a, 0], out[0], n)
            if st != OK:
                return st, i
            for k in range(n):
                tmp3[k] = 2.0 * out[0, k]
            for d in range(1, K):
                st = series_div(regs[a, d], tmp3, out[d], n)
                if st != OK:
                    return E_SQRT_NEG, i
        elif code == OP_EXP:
            st = series_exp(regs[a, 0], out[0], n)
            if st != OK:
                return st, i
            for d in range(1, K):
                series_mul(out[0], regs[a, d], out[d], n)
        elif code == OP_LOG:
            st = series_log(regs[a, 0], out[0], n)
            if st != OK:
                return st, i
            for d in range(1, K):
                series_div(regs[a, d], regs[a, 0], out[d], n)
        else:
            # sin and cos share one recurrence; tmp3 holds the companion series
            if code == OP_SIN:
                series_sincos(regs[a, 0], out[0], tmp3, n)
                for d in range(1, K):
                    series_mul(tmp3, regs[a, d], out[d], n)
            else:
                series_sincos(regs[a, 0], tmp3, out[0], n)
                for d in range(1, K):
                    series_mul(tmp3, regs[a, d], out[d], n)
                    for k in range(n):
                        out[d, k] = -out[d, k]
    return OK, -1


@njit
def christoffel_series(ops, consts, outputs, xs, ys, regs, n, gam, work):
    """Christoffel symbols as plane stacks: gam has shape (6, K, N+1).

    ``work`` is scratch of shape (8, K, N+1) plus three 1-D temporaries taken
    from its tail rows.
    """
    tmp = work[5, 0]
    tmp2 = work[6, 0]
    tmp3 = work[7, 0]
    status, reg = eval_tape_series(ops, consts, xs, ys, regs, n, tmp, tmp2, tmp3)
    if status != OK:
        return status, reg
    E = regs[outputs[0]]
    F = regs[outputs[1]]
    G = regs[outputs[2]]
    Ex = regs[outputs[3]]
    Ey = regs[outputs[4]]
    Fx = regs[outputs[5]]
    Fy = regs[outputs[6]]
    Gx = regs[outputs[7]]
    Gy = regs[outputs[8]]
    P = work[0]
    Q = work[1]
    R = work[2]
    W2 = work[3]
    S = work[4]
    # W2 = 2 (E G - F F)
    ps_mul(E, G, P, n, tmp)
    ps_mul(F, F, Q, n, tmp)
    ps_scale_add(2.0, P, -2.0, Q, W2, n)
    if not (E[0, 0] > 0.0 and W2[0, 0] > 0.0):
        return E_NOT_DEFINITE, -1

    # G1_11 = (G Ex - 2 F Fx + F Ey) / 2W
    ps_mul(G, Ex, P, n, tmp)
    ps_mul(F, Fx, Q, n, tmp)
    ps_mul(F, Ey, R, n, tmp)
    ps_scale_add(1.0, P, -2.0, Q, S, n)
    ps_scale_add(1.0, S, 1.0, R, S, n)
    ps_div(S, W2, gam[0], n, tmp, tmp2)
    # G1_12 = (G Ey - F Gx) / 2W
    ps_mul(G, Ey, P, n, tmp)
    ps_mul(F, Gx, Q, n, tmp)
    ps_scale_add(1.0, P, -1.0, Q, S, n)
    ps_div(S, W2, gam[1], n, tmp, tmp2)
    # G1_22 = (2 G Fy - G Gx - F Gy) / 2W
    ps_mul(G, Fy, P, n, tmp)
    ps_mul(G, Gx, Q, n, tmp)
    ps_mul(F, Gy, R, n, tmp)
    ps_scale_add(2.0, P, -1.0, Q, S, n)
    ps_scale_add(1.0, S, -1.0, R, S, n)
    ps_div(S, W2, gam[2], n, tmp, tmp2)
    # G2_11 = (2 E Fx - E Ey - F Ex) / 2W
    ps_mul(E, Fx, P, n, tmp)
    ps_mul(E, Ey, Q, n, tmp)
    ps_mul(F, Ex, R, n, tmp)
    ps_scale_add(2.0, P, -1.0, Q, S, n)
    ps_scale_add(1.0, S, -1.0, R, S, n)
    ps_div(S, W2, gam[3], n, tmp, tmp2)
    # G2_12 = (E Gx - F Ey) / 2W
    ps_mul(E, Gx, P, n, tmp)
    ps_mul(F, Ey, Q, n, tmp)
    ps_scale_add(1.0, P, -1.0, Q, S, n)
    ps_div(S, W2, gam[4], n, tmp, tmp2)
    # G2_22 = (E Gy - 2 F Fy + F Gx) / 2W
    ps_mul(E, Gy, P, n, tmp)
    ps_mul(F, Fy, Q, n, tmp)
    ps_mul(F, Gx, R, n, tmp)
    ps_scale_add(1.0, P, -2.0, Q, S, n)
    ps_scale_add(1.0, S, 1.0, R, S, n)
    ps_div(S, W2, gam[5], n, tmp, tmp2)
    return OK, -1


@njit
def geodesic_accel_series(gam, xd, yd, acc, n, work):
    """acc[i] = -(G^i_11 xd xd + 2 G^i_12 xd yd + G^i_22 yd yd) as plane stacks."""
    tmp = work[5, 0]
    XX = work[0]
    XY = work[1]
    YY = work[2]
    T = work[3]
    ps_mul(xd, xd, XX, n, tmp)
    ps_mul(xd, yd, XY, n, tmp)
    ps_mul(yd, yd, YY, n, tmp)
    for i in range(2):
        out = acc[i]
        ps_mul(gam[3 * i], XX, out, n, tmp)
        ps_mul(gam[3 * i + 1], XY, T, n, tmp)
        ps_scale_add(-1.0, out, -2.0, T, out, n)
        ps_mul(gam[3 * i + 2], YY, T, n, tmp)
        ps_scale_add(1.0, out, -1.0, T, out, n)


@njit
def develop_series_kernel(ops, consts, outputs, xs, ys):
    """Fill Taylor coefficients 2..N of a geodesic in place.

    ``xs``/``ys`` are plane stacks of shape (K, N+1) with coefficients 0 and 1
    (and their seed planes) already set. For k = 1..N-1 the Christoffel
    symbols are evaluated on the curve known through order k, truncated to
    k coefficients, and c_{k+1} = R[k-1] / (k (k+1)).
    """
    K = xs.shape[0]
    N1 = xs.shape[1]
    nreg = ops.shape[0]
    regs = np.zeros((nreg, K, N1))
    gam = np.zeros((6, K, N1))
    work = np.zeros((8, K, N1))
    xd = np.zeros((K, N1))
    yd = np.zeros((K, N1))
    acc = np.zeros((2, K, N1))
    for k in range(1, N1 - 1):
        n = k
        status, reg = christoffel_series(ops, consts, outputs, xs, ys, regs, n, gam, work)
        if status != OK:
            return status, reg
        for d in range(K):
            for j in range(n):
                xd[d, j] = (j + 1) * xs[d, j + 1]
                yd[d, j] = (j + 1) * ys[d, j + 1]
        geodesic_accel_series(gam, xd, yd, acc, n, work)
        denom = k * (k + 1.0)
        for d in range(K):
            xs[d, k + 1] = acc[0, d, k - 1] / denom
            ys[d, k + 1] = acc[1, d, k - 1] / denom
    return OK, -1


@njit
def horner(coeffs, t):
    out = 0.0
    for k in range(coeffs.shape[0] - 1, -1, -1):
        out = out * t + coeffs[k]
    return out


# --- RK4 oracle -----------------------------------------------------------------

@njit
def _rhs(ops, consts, outputs, s, regs, gam, out):
    status, reg = christoffel_float(ops, consts, outputs, s[0], s[1], regs, gam)
    if status != OK:
        return status, reg
    u = s[2]
    v = s[3]
    out[0] = u
    out[1] = v
    out[2] = -(gam[0] * u * u + 2.0 * gam[1] * u * v + gam[2] * v * v)
    out[3] = -(gam[3] * u * u + 2.0 * gam[4] * u * v + gam[5] * v * v)
    return OK, -1


@njit
def rk4_kernel(ops, consts, outputs, state0, t_end, steps, traj):
    """Classical RK4 on (x, y, x', y'); ``traj`` receives steps+1 states.

    Returns (status, register, failing step).
    """
    regs = np.zeros(ops.shape[0])
    gam = np.zeros(6)
    k1 = np.zeros(4)
    k2 = np.zeros(4)
    k3 = np.zeros(4)
    k4 = np.zeros(4)
    s = np.zeros(4)
    tmp = np.zeros(4)
    for i in range(4):
        s[i] = state0[i]
        traj[0, i] = s[i]
    h = t_end / steps
    for step in range(steps):
        st, reg = _rhs(ops, consts, outputs, s, regs, gam, k1)
        if st != OK:
            return st, reg, step
        for i in range(4):
            tmp[i] = s[i] + 0.5 * h * k1[i]
        st, reg = _rhs(ops, consts, outputs, tmp, regs, gam, k2)
        if st != OK:
            return st, reg, step
        for i in range(4):
            tmp[i] = s[i] + 0.5 * h * k2[i]
        st, reg = _rhs(ops, consts, outputs, tmp, regs, gam, k3)
        if st != OK:
            return st, reg, step
        for i in range(4):
            tmp[i] = s[i] + h * k3[i]
        st, reg = _rhs(ops, consts, outputs, tmp, regs, gam, k4)
        if st != OK:
            return st, reg, step
        for i in range(4):
            s[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            traj[step + 1, i] = s[i]
    return OK, -1, steps
