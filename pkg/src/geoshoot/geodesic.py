"""Geodesics as truncated Taylor series, the exponential map, and an RK4 oracle.

A geodesic x^i(t) = p^i + a^i t + sum_{n>=2} c^i_n t^n is developed by feeding
the curve, as a jet, through the Christoffel symbols and solving the geodesic
equation for the next coefficient. Coefficients are stored normalized
(c_n = x^(n)(0)/n!), so no factorials are ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .jet import Jet, check
from .kernels import develop_series_kernel, horner, rk4_kernel
from .metric import MetricField, christoffel

DEFAULT_ORDER = 7
DEFAULT_STEPS = 10_000


class Point(NamedTuple):
    x: float
    y: float


Velocity = Point


@dataclass(frozen=True)
class GeodesicSeries:
    """coeffs1 = [p1, a1, c1_2, ..., c1_n0], coeffs2 likewise."""

    p: Point
    a: Velocity
    order: int
    coeffs1: np.ndarray
    coeffs2: np.ndarray

    def __call__(self, t: float) -> Point:
        return Point(horner(self.coeffs1, float(t)), horner(self.coeffs2, float(t)))

    def jets(self):
        return Jet(self.coeffs1), Jet(self.coeffs2)


def _as_point(v) -> Point:
    x, y = v
    return Point(float(x), float(y))


def _run_recurrence(m: MetricField, p, a, order: int, seeds: bool):
    if order < 1:
        raise ValueError("order must be >= 1")
    p = _as_point(p)
    a = _as_point(a)
    K = 3 if seeds else 1
    xs = np.zeros((K, order + 1))
    ys = np.zeros((K, order + 1))
    xs[0, 0], ys[0, 0] = p
    xs[0, 1], ys[0, 1] = a
    if seeds:
        xs[1, 1] = 1.0  # d/da1
        ys[2, 1] = 1.0  # d/da2
    tape = m.tape
    status, reg = develop_series_kernel(tape.ops, tape.consts, tape.outputs, xs, ys)
    check(status, node=tape.nodes[reg] if reg >= 0 else None, point=p)
    return p, a, xs, ys


def develop_series(m: MetricField, p, a, order: int = DEFAULT_ORDER) -> GeodesicSeries:
    """Taylor coefficients through t^order of the geodesic from ``p`` with velocity ``a``."""
    p, a, xs, ys = _run_recurrence(m, p, a, order, seeds=False)
    return GeodesicSeries(p, a, order, xs[0], ys[0])


def eval_curve(series: GeodesicSeries, ts) -> list[Point]:
    return [series(t) for t in ts]


def exp_map(m: MetricField, p, a, order: int = DEFAULT_ORDER) -> Point:
    """Truncated-series exponential map: the degree-``order`` geodesic polynomial at t = 1."""
    return develop_series(m, p, a, order)(1.0)


def exp_map_with_jacobian(m: MetricField, p, a, order: int = DEFAULT_ORDER):
    """exp_map and its exact 2x2 derivative with respect to ``a``.

    ``J[i, j] = d exp^i / d a^j``, from dual planes carried through the same
    recurrence.
    """
    _, _, xs, ys = _run_recurrence(m, p, a, order, seeds=True)
    point = Point(horner(xs[0], 1.0), horner(ys[0], 1.0))
    J = np.array(
        [
            [horner(xs[1], 1.0), horner(xs[2], 1.0)],
            [horner(ys[1], 1.0), horner(ys[2], 1.0)],
        ]
    )
    return point, J


def geodesic_defect(m: MetricField, series: GeodesicSeries) -> np.ndarray:
    """Residual of the geodesic equation along the series, shape (2, order-1).

    Evaluated independently of the recurrence kernel: the curve is pushed
    through the generic Christoffel evaluation on :class:`Jet` objects and
    x'' + G(x', x') is formed explicitly. Coefficients 0..order-2 are exact
    for a correct series and should vanish to rounding.
    """
    x, y = series.jets()
    xd, yd = x.derivative(), y.derivative()
    xdd, ydd = xd.derivative(), yd.derivative()
    g = christoffel(m, x, y)
    r1 = xdd + g.g111 * xd * xd + 2.0 * g.g112 * xd * yd + g.g122 * yd * yd
    r2 = ydd + g.g211 * xd * xd + 2.0 * g.g212 * xd * yd + g.g222 * yd * yd
    n = series.order - 1
    return np.vstack([r1.coeffs[:n], r2.coeffs[:n]])


@dataclass(frozen=True)
class Trajectory:
    ts: np.ndarray
    states: np.ndarray  # rows (x, y, x', y')

    @property
    def endpoint(self) -> Point:
        return Point(float(self.states[-1, 0]), float(self.states[-1, 1]))


def integrate_trajectory(m: MetricField, p, a, t_end: float = 1.0, steps: int = DEFAULT_STEPS) -> Trajectory:
    """Fixed-step classical RK4 on the first-order geodesic system."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    p = _as_point(p)
    a = _as_point(a)
    traj = np.zeros((steps + 1, 4))
    tape = m.tape
    state0 = np.array([p.x, p.y, a.x, a.y])
    status, reg, step = rk4_kernel(tape.ops, tape.consts, tape.outputs, state0, float(t_end), int(steps), traj)
    if status:
        s = traj[step]
        check(status, node=tape.nodes[reg] if reg >= 0 else None, point=(s[0], s[1]))
    return Trajectory(np.linspace(0.0, t_end, steps + 1), traj)


def integrate_reference(m: MetricField, p, a, t_end: float = 1.0, steps: int = DEFAULT_STEPS) -> Point:
    """Endpoint of the RK4 geodesic; an oracle independent of the Taylor path."""
    return integrate_trajectory(m, p, a, t_end, steps).endpoint
