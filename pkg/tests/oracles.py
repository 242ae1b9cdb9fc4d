"""Independent reference computations used as test oracles."""

import math

import numpy as np

from geoshoot import evaluate


def central_diff(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def metric_matrix(m, x, y):
    E, F, G = (evaluate(c, x, y) for c in m.components())
    return np.array([[E, F], [F, G]], dtype=float)


def christoffel_bruteforce(m, x, y, partials=None):
    """Gamma^k_ij = 1/2 g^{kl} (d_j g_li + d_i g_lj - d_l g_ij), full index loops.

    ``partials(x, y)`` returns dg[l] = d g / d x^l as 2x2 matrices; defaults
    to the metric's symbolic partials.
    """
    g = metric_matrix(m, x, y)
    ginv = np.linalg.inv(g)
    if partials is None:
        Ex, Ey, Fx, Fy, Gx, Gy = (evaluate(c, x, y) for c in m.partials())
        dg = np.array([[[Ex, Fx], [Fx, Gx]], [[Ey, Fy], [Fy, Gy]]], dtype=float)
    else:
        dg = partials(x, y)
    gam = np.zeros((2, 2, 2))
    for k in range(2):
        for i in range(2):
            for j in range(2):
                s = 0.0
                for l in range(2):
                    s += ginv[k, l] * (dg[j][l, i] + dg[i][l, j] - dg[l][i, j])
                gam[k, i, j] = 0.5 * s
    return gam


def fd_metric_partials(m, h=1e-5):
    def partials(x, y):
        gx = (metric_matrix(m, x + h, y) - metric_matrix(m, x - h, y)) / (2 * h)
        gy = (metric_matrix(m, x, y + h) - metric_matrix(m, x, y - h)) / (2 * h)
        return np.array([gx, gy])

    return partials


def as_six(gam):
    return np.array([gam[0, 0, 0], gam[0, 0, 1], gam[0, 1, 1], gam[1, 0, 0], gam[1, 0, 1], gam[1, 1, 1]])


def hyperbolic_initial_velocity(p, q):
    """Exact initial velocity of the half-plane geodesic p -> q on t in [0, 1].

    Geodesics are circles centred on the x-axis (or vertical lines); the
    curve has constant hyperbolic speed equal to the hyperbolic distance.
    """
    px, py = p
    qx, qy = q
    d = math.acosh(1.0 + ((qx - px) ** 2 + (qy - py) ** 2) / (2.0 * py * qy))
    if px == qx:
        direction = np.array([0.0, math.copysign(1.0, qy - py)])
    else:
        c = (qx * qx + qy * qy - px * px - py * py) / (2.0 * (qx - px))
        direction = np.array([py, -(px - c)])
        direction /= np.linalg.norm(direction)
        if np.dot(direction, [qx - px, qy - py]) < 0:
            direction = -direction
    return d * py * direction


def hyperbolic_geodesic_point(p, a, t):
    """Exact half-plane geodesic through p with velocity a, evaluated at t.

    Uses the Moebius-invariant form: unit-speed vertical geodesic i*e^s mapped
    onto the circle through p tangent to a.
    """
    px, py = p
    speed = math.hypot(a[0], a[1]) / py  # hyperbolic speed
    s = speed * t
    if abs(a[0]) < 1e-15:
        return (px, py * math.exp(math.copysign(s, a[1])))
    # circle centre on the axis, radius R
    c = px + a[1] * py / a[0]
    R = math.hypot(px - c, py)
    # parametrise by u with x = c + R tanh(u), y = R sech(u); ds = du
    u0 = math.atanh((px - c) / R)
    u = u0 + math.copysign(s, a[0])
    return (c + R * math.tanh(u), R / math.cosh(u))
