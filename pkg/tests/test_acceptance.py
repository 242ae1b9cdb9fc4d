"""Exit criteria. Each test prints one PASS/FAIL line (also summarised at the end of the run)."""

import time

import numpy as np

from conftest import CATALOG, random_point, random_velocity, record_criterion
from geoshoot import (
    SolverConfig,
    builtin,
    christoffel,
    develop_series,
    exp_map,
    exp_map_with_jacobian,
    geodesic_defect,
    integrate_reference,
    solve,
)
from geoshoot.cli import main
from oracles import as_six, christoffel_bruteforce, hyperbolic_initial_velocity

RNG_SEED = 1729


def _timed_solve(name, p, q, cfg=SolverConfig()):
    t0 = time.perf_counter()
    sols = solve(builtin(name), p, q, cfg)
    return sols, time.perf_counter() - t0


def test_ac1_sphere_row():
    sols, elapsed = _timed_solve("sphere-chart", (0.5, 0.5), (-1 / 3, 2 / 3))
    best = sols[0] if sols else None
    dev = np.inf if best is None else np.max(np.abs(np.subtract(best.endpoint_series, (-0.333333333, 0.666666666))))
    ok = best is not None and best.shortest and dev <= 1e-8 and elapsed < 5.0
    record_criterion(1, "sphere chart row, endpoint within 1e-8, < 5 s", ok, f"dev={dev:.2e}, t={elapsed:.2f}s")
    assert ok


def test_ac2_half_plane_row():
    p, q = (0.5, 0.5), (0.55, 0.6)
    sols, _ = _timed_solve("half-plane", p, q)
    best = sols[0]
    dev_series = np.max(np.abs(np.subtract(best.endpoint_series, q)))
    rk = integrate_reference(builtin("half-plane"), p, best.a, 1.0, 10_000)
    dev_rk = np.max(np.abs(np.subtract(rk, q)))
    exact = hyperbolic_initial_velocity(p, q)
    rel = np.linalg.norm(np.subtract(best.a, exact)) / np.linalg.norm(exact)
    ok = dev_series <= 1e-8 and dev_rk <= 1e-6 and rel <= 1e-5
    record_criterion(
        2, "half-plane row: series 1e-8, RK 1e-6, exact direction 1e-5", ok,
        f"series={dev_series:.1e}, rk={dev_rk:.1e}, dir rel={rel:.1e}",
    )
    assert ok


def test_ac3_monkey_saddle_row():
    q = (15.0, 7.0)
    sols, elapsed = _timed_solve("monkey-saddle", (1.0, 2.0), q)
    ok = bool(sols)
    detail = "no root"
    if sols:
        best = sols[0]
        dev = np.max(np.abs(np.subtract(best.endpoint_series, q)))
        ok = dev <= 1e-5 and elapsed < 30.0
        detail = f"dev={dev:.1e}, t={elapsed:.2f}s, RK endpoint (not asserted)=({best.endpoint_rk[0]:.6g}, {best.endpoint_rk[1]:.6g})"
    record_criterion(3, "monkey saddle row: polynomial endpoint within 1e-5, < 30 s", ok, detail)
    assert ok


def test_ac4_euclidean_exactness():
    rng = np.random.default_rng(RNG_SEED)
    m = builtin("euclidean")
    failures = 0
    for _ in range(100):
        p = rng.uniform(-5, 5, size=2)
        q = rng.uniform(-5, 5, size=2)
        sols = solve(m, p, q, SolverConfig(verify_steps=100))
        if not (
            len(sols) == 1
            and sols[0].residual_series <= 1e-12
            and np.max(np.abs(np.subtract(sols[0].a, q - p))) <= 1e-12
        ):
            failures += 1
    ok = failures == 0
    record_criterion(4, "euclidean: one root a = q - p, residual <= 1e-12 (100 cases)", ok, f"failures={failures}")
    assert ok


# unit-scale base points: y = 1 on the half-plane, interior points of the hemisphere chart
AC5_POINTS = {
    "half-plane": [(0.0, 1.0), (0.5, 1.0), (-0.7, 1.0)],
    "sphere-chart": [(0.0, 0.0), (0.5, 0.5), (0.3, -0.2)],
}


def test_ac5_taylor_rk_convergence():
    worst7 = 0.0
    monotone = True
    for name, points in AC5_POINTS.items():
        m = builtin(name)
        for p in points:
            for th in np.linspace(0, 2 * np.pi, 8, endpoint=False):
                a = (0.1 * np.cos(th), 0.1 * np.sin(th))
                rk = integrate_reference(m, p, a, 1.0, 10_000)
                gaps = [np.max(np.abs(np.subtract(exp_map(m, p, a, n), rk))) for n in (3, 5, 7)]
                monotone &= gaps[0] > gaps[1] > gaps[2]
                worst7 = max(worst7, gaps[2])
    ok = monotone and worst7 <= 1e-8
    record_criterion(5, "Taylor-RK gap decreases over n0 = 3, 5, 7 and <= 1e-8 at 7", ok, f"worst n0=7 gap={worst7:.1e}")
    assert ok


def test_ac6_defect_suite():
    rng = np.random.default_rng(RNG_SEED + 6)
    worst = 0.0
    for name in CATALOG:
        m = builtin(name)
        for _ in range(20):
            p = random_point(name, rng)
            a = random_velocity(name, p, rng)
            d = geodesic_defect(m, develop_series(m, p, a, 7))
            worst = max(worst, np.max(np.abs(d[:, :6])))
    ok = worst <= 1e-9
    record_criterion(6, "defect coefficients <= 1e-9 through order 5", ok, f"worst={worst:.1e}")
    assert ok


def test_ac7_homogeneity_suite():
    rng = np.random.default_rng(RNG_SEED + 7)
    worst = 0.0
    for i in range(100):
        name = CATALOG[i % len(CATALOG)]
        m = builtin(name)
        p = random_point(name, rng)
        a = random_velocity(name, p, rng)
        lam = rng.uniform(0.0, 1.0)
        on_curve = develop_series(m, p, a, 7)(lam)
        scaled = exp_map(m, p, (lam * a[0], lam * a[1]), 7)
        worst = max(worst, np.max(np.abs(np.subtract(on_curve, scaled))))
    ok = worst <= 1e-10
    record_criterion(7, "homogeneity exp(lam a) = series(a)(lam) to 1e-10 (100 cases)", ok, f"worst={worst:.1e}")
    assert ok


def test_ac8_jacobian_suite():
    rng = np.random.default_rng(RNG_SEED + 8)
    worst = 0.0
    h = 1e-6
    for i in range(100):
        name = CATALOG[i % len(CATALOG)]
        m = builtin(name)
        p = random_point(name, rng)
        a = np.array(random_velocity(name, p, rng))
        _, J = exp_map_with_jacobian(m, p, a, 7)
        fd = np.zeros((2, 2))
        for j in range(2):
            e = np.zeros(2)
            e[j] = h
            fd[:, j] = (np.array(exp_map(m, p, a + e, 7)) - np.array(exp_map(m, p, a - e, 7))) / (2 * h)
        worst = max(worst, np.max(np.abs(J - fd)) / max(1.0, np.max(np.abs(J))))
    ok = worst <= 1e-6
    record_criterion(8, "dual Jacobian vs central differences, 1e-6 relative (100 cases)", ok, f"worst={worst:.1e}")
    assert ok


def test_ac9_christoffel_suite():
    rng = np.random.default_rng(RNG_SEED + 9)
    worst = 0.0
    for name in CATALOG:
        m = builtin(name)
        for _ in range(100):
            x, y = random_point(name, rng)
            closed = np.array(christoffel(m, x, y))
            ref = as_six(christoffel_bruteforce(m, x, y))
            worst = max(worst, np.max(np.abs(closed - ref)) / max(1.0, np.max(np.abs(ref))))
    hp = builtin("half-plane")
    pattern = 0.0
    for _ in range(100):
        x, y = random_point("half-plane", rng)
        g = christoffel(hp, x, y)
        expect = (0.0, -1 / y, 0.0, 1 / y, 0.0, -1 / y)
        pattern = max(pattern, max(abs(a - b) / max(1.0, abs(b)) for a, b in zip(g, expect)))
    ok = worst <= 1e-12 and pattern <= 4 * np.finfo(float).eps
    record_criterion(9, "closed-form Christoffel vs general formula 1e-12; half-plane pattern", ok, f"worst={worst:.1e}, pattern={pattern:.1e}")
    assert ok


def test_ac10_table_determinism(tmp_path, capsys):
    outputs = []
    codes = []
    for run in ("a", "b"):
        codes.append(main(["table", "--out", str(tmp_path / run)]))
        outputs.append(capsys.readouterr().out)
    first = (tmp_path / "a" / "table.json").read_bytes()
    second = (tmp_path / "b" / "table.json").read_bytes()
    ok = codes == [0, 0] and first == second and outputs[0] == outputs[1]
    record_criterion(10, "two table runs produce byte-identical reports", ok, f"exit codes={codes}")
    assert ok
