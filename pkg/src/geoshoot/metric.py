"""2-D Riemannian metrics g = E dx^2 + 2F dx dy + G dy^2 and their Christoffel symbols."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import expression as ex
from .errors import DefinitenessError, DomainError, GeoshootError
from .jet import check, constant_term
from .kernels import christoffel_float


class ChristoffelValues(NamedTuple):
    """The six independent symbols; g112 stands for both G^1_12 and G^1_21."""

    g111: object
    g112: object
    g122: object
    g211: object
    g212: object
    g222: object


_COMPARATORS = (">=", "<=", ">", "<")


@dataclass(frozen=True)
class Domain:
    """A chart predicate ``lhs <op> rhs``, e.g. ``y > 0``."""

    text: str
    lhs: ex.Expr
    op: str
    rhs: ex.Expr

    @classmethod
    def parse(cls, text: str) -> "Domain":
        for op in _COMPARATORS:
            if op in text:
                left, right = text.split(op, 1)
                if any(c in right for c in "<>"):
                    break
                return cls(text.strip(), ex.parse(left), op, ex.parse(right))
        raise GeoshootError(f"domain must look like '<expr> > <expr>', got {text!r}")

    def contains(self, x: float, y: float) -> bool:
        try:
            a = ex.evaluate(self.lhs, x, y)
            b = ex.evaluate(self.rhs, x, y)
        except DomainError:
            return False
        return {">": a > b, ">=": a >= b, "<": a < b, "<=": a <= b}[self.op]


@dataclass(frozen=True, eq=False)
class MetricField:
    E: ex.Expr
    F: ex.Expr
    G: ex.Expr
    Ex: ex.Expr
    Ey: ex.Expr
    Fx: ex.Expr
    Fy: ex.Expr
    Gx: ex.Expr
    Gy: ex.Expr
    name: str = ""
    domain_hint: str | None = None
    source: dict = field(default_factory=dict, repr=False)

    def components(self):
        return (self.E, self.F, self.G)

    def partials(self):
        return (self.Ex, self.Ey, self.Fx, self.Fy, self.Gx, self.Gy)

    @cached_property
    def tape(self) -> ex.Tape:
        """E, F, G and their six partials lowered to one shared tape."""
        return ex.compile_tape(self.components() + self.partials())

    @cached_property
    def domain(self) -> Domain | None:
        return Domain.parse(self.domain_hint) if self.domain_hint else None

    def in_domain(self, x: float, y: float) -> bool:
        """Check the domain predicate (if any) and positive definiteness at a point."""
        if self.domain is not None and not self.domain.contains(x, y):
            return False
        try:
            christoffel_at(self, x, y)
        except DomainError:
            return False
        return True

    def metric_at(self, x, y):
        return tuple(ex.evaluate(c, x, y) for c in self.components())

    def g_norm(self, p, v) -> float:
        E, F, G = (float(c) for c in self.metric_at(p[0], p[1]))
        q = E * v[0] * v[0] + 2.0 * F * v[0] * v[1] + G * v[1] * v[1]
        return float(np.sqrt(max(q, 0.0)))


def metric_from_components(E, F, G, name="", domain_hint=None) -> MetricField:
    """Build a metric from its components (``Expr`` or source text)."""
    E, F, G = (ex.parse(c) if isinstance(c, str) else c for c in (E, F, G))
    d = ex.differentiate
    return MetricField(
        E, F, G,
        d(E, "x"), d(E, "y"), d(F, "x"), d(F, "y"), d(G, "x"), d(G, "y"),
        name=name,
        domain_hint=domain_hint,
    )


def metric_from_graph(f, name="", domain_hint=None) -> MetricField:
    """Induced metric of the graph z = f(x, y) in R^3."""
    if isinstance(f, str):
        f = ex.parse(f)
    fx = ex.differentiate(f, "x")
    fy = ex.differentiate(f, "y")
    E = ex.add(ex.ONE, ex.power(fx, 2))
    F = ex.mul(fx, fy)
    G = ex.add(ex.ONE, ex.power(fy, 2))
    return metric_from_components(E, F, G, name=name, domain_hint=domain_hint)


def christoffel(m: MetricField, x, y) -> ChristoffelValues:
    """Christoffel symbols at (x, y) over any scalar type (float, Jet, Dual).

    Uses the closed 2-D formulas in E, F, G and their first partials.
    Raises :class:`DefinitenessError` where E <= 0 or EG - F^2 <= 0.
    """
    point = (constant_term(x), constant_term(y))
    try:
        E, F, G = (ex.evaluate(c, x, y) for c in m.components())
        Ex, Ey, Fx, Fy, Gx, Gy = (ex.evaluate(c, x, y) for c in m.partials())
    except DomainError as exc:
        exc.point = point
        raise
    W = E * G - F * F
    if not (constant_term(E) > 0.0 and constant_term(W) > 0.0):
        raise DefinitenessError(
            f"metric not positive definite (E={constant_term(E):.6g}, EG-F^2={constant_term(W):.6g})",
            point=point,
        )
    W2 = 2.0 * W
    return ChristoffelValues(
        (G * Ex - 2.0 * F * Fx + F * Ey) / W2,
        (G * Ey - F * Gx) / W2,
        (2.0 * G * Fy - G * Gx - F * Gy) / W2,
        (2.0 * E * Fx - E * Ey - F * Ex) / W2,
        (E * Gx - F * Ey) / W2,
        (E * Gy - 2.0 * F * Fy + F * Gx) / W2,
    )


def christoffel_at(m: MetricField, x: float, y: float) -> ChristoffelValues:
    """Float-only fast path through the compiled tape."""
    tape = m.tape
    regs = np.zeros(len(tape))
    gam = np.zeros(6)
    status, reg = christoffel_float(tape.ops, tape.consts, tape.outputs, float(x), float(y), regs, gam)
    check(status, node=tape.nodes[reg] if reg >= 0 else None, point=(float(x), float(y)))
    return ChristoffelValues(*(float(g) for g in gam))


# --- surface definitions -------------------------------------------------------

CATALOG_DOCUMENTS = (
    {"name": "euclidean", "kind": "components", "E": "1", "F": "0", "G": "1"},
    {"name": "sphere-chart", "kind": "graph", "f": "sqrt(1 - x^2 - y^2)", "domain": "x^2 + y^2 < 1"},
    {"name": "monkey-saddle", "kind": "graph", "f": "x^3 - 3*x*y^2"},
    {"name": "half-plane", "kind": "components", "E": "1/y^2", "F": "0", "G": "1/y^2", "domain": "y > 0"},
)


def surface_from_document(doc: dict) -> MetricField:
    """Build a metric from one surface-definition document."""
    try:
        kind = doc["kind"]
        name = doc.get("name", "")
        domain = doc.get("domain")
        if kind == "graph":
            m = metric_from_graph(doc["f"], name=name, domain_hint=domain)
        elif kind == "components":
            m = metric_from_components(doc["E"], doc["F"], doc["G"], name=name, domain_hint=domain)
        else:
            raise GeoshootError(f"unknown surface kind {kind!r} (expected 'graph' or 'components')")
    except KeyError as exc:
        raise GeoshootError(f"surface definition missing field {exc.args[0]!r}") from None
    if domain:
        Domain.parse(domain)
    object.__setattr__(m, "source", dict(doc))
    return m


def load_surfaces(path) -> list[MetricField]:
    """Read surface documents from a file.

    Accepts a single JSON object, a JSON array of objects, or one object per line.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
        docs = data if isinstance(data, list) else [data]
    except json.JSONDecodeError:
        docs = [json.loads(line) for line in text.splitlines() if line.strip()]
    return [surface_from_document(d) for d in docs]


def catalog() -> dict[str, MetricField]:
    return {d["name"]: surface_from_document(d) for d in CATALOG_DOCUMENTS}


_CATALOG_CACHE: dict[str, MetricField] = {}


def builtin(name: str) -> MetricField:
    if not _CATALOG_CACHE:
        _CATALOG_CACHE.update(catalog())
    try:
        return _CATALOG_CACHE[name]
    except KeyError:
        raise GeoshootError(f"unknown surface {name!r}; built-ins: {', '.join(sorted(_CATALOG_CACHE))}") from None


def resolve_surface(ref: str) -> MetricField:
    """A built-in name, or a path to a definition file (``path`` or ``path:name``)."""
    if not _CATALOG_CACHE:
        _CATALOG_CACHE.update(catalog())
    if ref in _CATALOG_CACHE:
        return _CATALOG_CACHE[ref]
    path, _, wanted = ref.partition(":") if not Path(ref).exists() else (ref, "", "")
    if not Path(path).exists():
        raise GeoshootError(f"unknown surface {ref!r}; built-ins: {', '.join(sorted(_CATALOG_CACHE))}")
    surfaces = load_surfaces(path)
    if wanted:
        for s in surfaces:
            if s.name == wanted:
                return s
        raise GeoshootError(f"no surface named {wanted!r} in {path}")
    if len(surfaces) != 1:
        names = ", ".join(s.name for s in surfaces)
        raise GeoshootError(f"{path} defines several surfaces ({names}); use {path}:<name>")
    return surfaces[0]

