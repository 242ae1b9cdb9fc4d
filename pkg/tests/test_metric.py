import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import CATALOG, random_point
from geoshoot import (
    DefinitenessError,
    DomainError,
    GeoshootError,
    Jet,
    builtin,
    christoffel,
    christoffel_at,
    differentiate,
    evaluate,
    load_surfaces,
    metric_from_components,
    metric_from_graph,
    parse,
    resolve_surface,
)
from geoshoot.jet import constant_term
from oracles import as_six, christoffel_bruteforce, fd_metric_partials


def test_euclidean_components():
    m = metric_from_components("1", "0", "1")
    assert m.metric_at(0.3, 0.7) == (1.0, 0.0, 1.0)
    assert all(v == 0 for v in christoffel(m, 0.3, 0.7))


def test_flat_graph_is_euclidean():
    m = metric_from_graph("0")
    assert m.metric_at(1.0, 2.0) == (1.0, 0.0, 1.0)


def test_indefinite_metric_rejected_at_first_evaluation():
    m = metric_from_components("1", "0", "-1")
    with pytest.raises(DefinitenessError):
        christoffel(m, 0.0, 0.0)
    with pytest.raises(DefinitenessError):
        christoffel_at(m, 0.0, 0.0)


def test_monkey_saddle_induced_metric():
    m = metric_from_graph("x^3 - 3*x*y^2")
    rng = np.random.default_rng(5)
    for x, y in rng.uniform(-2, 2, size=(25, 2)):
        fx, fy = 3 * x * x - 3 * y * y, -6 * x * y
        assert_allclose(m.metric_at(x, y), (1 + fx**2, fx * fy, 1 + fy**2), rtol=1e-13)


def test_sphere_induced_metric_at_half_half():
    m = builtin("sphere-chart")
    f = parse("sqrt(1 - x^2 - y^2)")
    h = 1e-6
    fx = (evaluate(f, 0.5 + h, 0.5) - evaluate(f, 0.5 - h, 0.5)) / (2 * h)
    fy = (evaluate(f, 0.5, 0.5 + h) - evaluate(f, 0.5, 0.5 - h)) / (2 * h)
    assert_allclose((1 + fx * fx, fx * fy, 1 + fy * fy), (1.5, 0.5, 1.5), rtol=1e-8)
    assert_allclose(m.metric_at(0.5, 0.5), (1.5, 0.5, 1.5), rtol=1e-14)


def test_stored_partials_match_differentiate(surface):
    _, m = surface
    rng = np.random.default_rng(6)
    pairs = [(m.E, "x", m.Ex), (m.E, "y", m.Ey), (m.F, "x", m.Fx), (m.F, "y", m.Fy), (m.G, "x", m.Gx), (m.G, "y", m.Gy)]
    name = surface[0]
    for _ in range(5):
        x, y = random_point(name, rng)
        for comp, var, stored in pairs:
            assert evaluate(stored, x, y) == evaluate(differentiate(comp, var), x, y)


def test_half_plane_symbols():
    m = builtin("half-plane")
    g = christoffel(m, 0.3, 0.5)
    assert g == (0.0, -2.0, 0.0, 2.0, 0.0, -2.0)
    for y in (0.2, 0.7, 1.9):
        g = christoffel_at(m, 0.1, y)
        assert_allclose([g.g112, g.g211, g.g222], [-1 / y, 1 / y, -1 / y], rtol=1e-15)
        assert g.g111 == 0 and g.g122 == 0 and g.g212 == 0


def test_sphere_symbols_match_finite_difference_bruteforce():
    m = builtin("sphere-chart")
    ref = as_six(christoffel_bruteforce(m, 0.5, 0.5, fd_metric_partials(m)))
    assert_allclose(christoffel(m, 0.5, 0.5), ref, atol=1e-6)


def test_closed_form_matches_general_formula(surface):
    name, m = surface
    rng = np.random.default_rng(7)
    for _ in range(100):
        x, y = random_point(name, rng)
        closed = np.array(christoffel(m, x, y))
        ref = as_six(christoffel_bruteforce(m, x, y))
        scale = max(1.0, np.max(np.abs(ref)))
        assert np.max(np.abs(closed - ref)) <= 1e-12 * scale


def test_compiled_and_generic_christoffel_agree(surface):
    name, m = surface
    rng = np.random.default_rng(8)
    for _ in range(50):
        x, y = random_point(name, rng)
        assert tuple(christoffel_at(m, x, y)) == tuple(christoffel(m, x, y))


def test_order_zero_jets_bit_identical(surface):
    name, m = surface
    rng = np.random.default_rng(9)
    for _ in range(20):
        x, y = random_point(name, rng)
        plain = christoffel(m, x, y)
        jets = christoffel(m, Jet([x]), Jet([y]))
        assert tuple(constant_term(j) for j in jets) == tuple(plain)


@pytest.mark.parametrize("E,F,G", [("2", "0.5", "3"), ("1", "0", "1"), ("4", "-1", "1")])
def test_constant_metrics_are_flat(E, F, G):
    m = metric_from_components(E, F, G)
    assert all(v == 0 for v in christoffel(m, 0.4, -1.2))


def test_domain_error_has_point():
    m = builtin("half-plane")
    with pytest.raises(DomainError) as info:
        christoffel(m, 0.5, 0.0)
    assert info.value.point == (0.5, 0.0)
    with pytest.raises(DomainError) as info:
        christoffel_at(m, 0.5, 0.0)
    assert "division by zero" in str(info.value)


def test_domain_predicate():
    assert builtin("half-plane").in_domain(0.0, 0.1)
    assert not builtin("half-plane").in_domain(0.0, -0.1)
    assert builtin("sphere-chart").in_domain(0.5, 0.5)
    assert not builtin("sphere-chart").in_domain(0.8, 0.8)


def test_surface_files(tmp_path):
    docs = [
        {"name": "sphere-chart", "kind": "graph", "f": "sqrt(1 - x^2 - y^2)"},
        {"name": "half-plane", "kind": "components", "E": "1/y^2", "F": "0", "G": "1/y^2", "domain": "y > 0"},
    ]
    lines = tmp_path / "surfaces.jsonl"
    lines.write_text("\n".join(json.dumps(d) for d in docs))
    loaded = load_surfaces(lines)
    assert [s.name for s in loaded] == ["sphere-chart", "half-plane"]
    assert loaded[1].domain_hint == "y > 0"
    assert resolve_surface(f"{lines}:half-plane").name == "half-plane"
    with pytest.raises(GeoshootError):
        resolve_surface(str(lines))

    single = tmp_path / "one.json"
    single.write_text(json.dumps(docs[0]))
    m = resolve_surface(str(single))
    assert math.isclose(m.metric_at(0.5, 0.5)[0], 1.5)

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "q", "kind": "polar"}))
    with pytest.raises(GeoshootError):
        load_surfaces(bad)


def test_catalog_names():
    for name in CATALOG:
        assert builtin(name).name == name
    with pytest.raises(GeoshootError):
        builtin("torus")
