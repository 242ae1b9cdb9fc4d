"""Two-point geodesic problem: find A with exp_p(A) = q.

Each seed velocity is refined by damped Newton on the truncated-series endpoint
map, whose Jacobian comes exactly from the dual planes of the recurrence.
Converged roots are merged, checked against the RK4 oracle and ordered by norm.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError
from .geodesic import DEFAULT_ORDER, DEFAULT_STEPS, Point, exp_map_with_jacobian, integrate_reference
from .metric import MetricField, christoffel_at

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    order: int = DEFAULT_ORDER
    newton_tol: float = 1e-12
    max_newton_iters: int = 50
    seed_rings: int = 4
    seed_directions: int = 16
    dedupe_tol: float = 1e-7
    damping: float = 0.5
    max_halvings: int = 30
    verify_steps: int = DEFAULT_STEPS
    verify: bool = True

    def __post_init__(self):
        for name in ("newton_tol", "dedupe_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("order", "max_newton_iters", "seed_rings", "seed_directions", "max_halvings", "verify_steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")


@dataclass(frozen=True)
class ShootingSolution:
    a: Point
    endpoint_series: Point
    residual_series: float
    endpoint_rk: Point | None
    residual_rk: float
    euclidean_norm: float
    g_norm: float
    iterations: int
    seed_index: int
    shortest: bool = False
    history: tuple = field(default=(), repr=False)
    verify_error: str | None = None


def seed_velocities(p, q, cfg: SolverConfig = SolverConfig()) -> list[Point]:
    """Starting guesses: the chord q - p, then a polar grid of radius up to 2|q - p|."""
    dx = float(q[0]) - float(p[0])
    dy = float(q[1]) - float(p[1])
    rho = 2.0 * math.hypot(dx, dy)
    seeds = [Point(dx, dy)]
    if rho == 0.0:
        return seeds
    for k in range(1, cfg.seed_rings + 1):
        r = k / cfg.seed_rings * rho
        for j in range(cfg.seed_directions):
            theta = 2.0 * math.pi * j / cfg.seed_directions
            seeds.append(Point(r * math.cos(theta), r * math.sin(theta)))
    return seeds


@dataclass
class _NewtonResult:
    a: np.ndarray
    endpoint: Point
    residual: float
    iterations: int
    history: list


def _residual(endpoint, q):
    return max(abs(endpoint[0] - q[0]), abs(endpoint[1] - q[1]))


def _evaluate(m, p, a, order):
    try:
        point, J = exp_map_with_jacobian(m, p, a, order)
    except DomainError:
        return None
    if not (np.isfinite(point[0]) and np.isfinite(point[1]) and np.all(np.isfinite(J))):
        return None
    return point, J


def newton(m: MetricField, p, q, seed, cfg: SolverConfig) -> _NewtonResult | None:
    """Damped Newton from one seed; None if the seed is abandoned."""
    a = np.array(seed, dtype=float)
    ev = _evaluate(m, p, a, cfg.order)
    if ev is None:
        return None
    point, J = ev
    r = _residual(point, q)
    history = [r]
    for it in range(cfg.max_newton_iters + 1):
        if r <= cfg.newton_tol:
            return _NewtonResult(a, point, r, it, history)
        if it == cfg.max_newton_iters:
            break
        F = np.array([point[0] - q[0], point[1] - q[1]])
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        lam = 1.0
        for _ in range(cfg.max_halvings + 1):
            trial = a + lam * step
            ev = _evaluate(m, p, trial, cfg.order)
            if ev is not None:
                rt = _residual(ev[0], q)
                if rt < r:
                    a, (point, J), r = trial, ev, rt
                    break
            lam *= cfg.damping
        else:
            return None
        history.append(r)
    return None


def _check_point(m: MetricField, pt, label):
    if m.domain is not None and not m.domain.contains(pt[0], pt[1]):
        raise DomainError(f"{label}: {m.domain.text} violated", point=tuple(pt))
    try:
        christoffel_at(m, pt[0], pt[1])
    except DomainError as exc:
        exc.reason = f"{label}: {exc.reason}"
        raise


def solve(m: MetricField, p, q, cfg: SolverConfig = SolverConfig()) -> list[ShootingSolution]:
    """All deduplicated roots found by multistart, shortest first.

    Raises :class:`DomainError` if p or q lies outside the metric's domain.
    An empty list means no seed converged.
    """
    p = Point(float(p[0]), float(p[1]))
    q = Point(float(q[0]), float(q[1]))
    _check_point(m, p, "start point")
    _check_point(m, q, "end point")

    roots: list[tuple[int, _NewtonResult]] = []
    for idx, seed in enumerate(seed_velocities(p, q, cfg)):
        res = newton(m, p, q, seed, cfg)
        if res is None:
            continue
        if any(np.max(np.abs(res.a - other.a)) < cfg.dedupe_tol for _, other in roots):
            continue
        roots.append((idx, res))
    log.debug("%d distinct roots from %d seeds", len(roots), len(seed_velocities(p, q, cfg)))

    solutions = []
    for idx, res in roots:
        a = Point(float(res.a[0]), float(res.a[1]))
        endpoint_rk, residual_rk, err = None, math.inf, None
        if cfg.verify:
            try:
                endpoint_rk = integrate_reference(m, p, a, 1.0, cfg.verify_steps)
                residual_rk = _residual(endpoint_rk, q)
            except DomainError as exc:
                err = str(exc)
        solutions.append(
            ShootingSolution(
                a=a,
                endpoint_series=res.endpoint,
                residual_series=res.residual,
                endpoint_rk=endpoint_rk,
                residual_rk=residual_rk,
                euclidean_norm=math.hypot(a.x, a.y),
                g_norm=m.g_norm(p, a),
                iterations=res.iterations,
                seed_index=idx,
                history=tuple(res.history),
                verify_error=err,
            )
        )
    return classify_solutions(solutions)


def classify_solutions(solutions) -> list[ShootingSolution]:
    """Sort by Euclidean norm (then g-norm, then seed index) and flag the first as shortest."""
    ordered = sorted(solutions, key=lambda s: (s.euclidean_norm, s.g_norm, s.seed_index))
    return [replace(s, shortest=(i == 0)) for i, s in enumerate(ordered)]
