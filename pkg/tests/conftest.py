import os
import sys

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

from geoshoot import builtin  # noqa: E402

CATALOG = ("euclidean", "sphere-chart", "monkey-saddle", "half-plane")


def random_point(name, rng):
    """A point well inside the chart of a catalog surface."""
    if name == "sphere-chart":
        r = 0.85 * np.sqrt(rng.uniform())
        th = rng.uniform(0, 2 * np.pi)
        return (r * np.cos(th), r * np.sin(th))
    if name == "half-plane":
        return (rng.uniform(-1, 1), rng.uniform(0.3, 2.0))
    return (rng.uniform(-2, 2), rng.uniform(-2, 2))


def random_velocity(name, p, rng, scale=0.3):
    v = rng.uniform(-scale, scale, size=2)
    if name == "half-plane":
        v = v * p[1]
    if name == "sphere-chart":
        v = v * (1 - np.hypot(*p))
    return (float(v[0]), float(v[1]))


@pytest.fixture(params=CATALOG)
def surface(request):
    return request.param, builtin(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


ACCEPTANCE_LINES = []


def record_criterion(number, title, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] AC{number:<2} {title}"
    if detail:
        line += f"  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
