"""Geodesics of 2-D Riemannian metrics from Taylor series of the exponential map."""

__version__ = "0.1.0"

from ._accel import backend
from .errors import (
    DefinitenessError,
    DomainError,
    GeoshootError,
    ParseError,
    SingularSeriesError,
    UnknownIdentifierError,
)
from .expression import Expr, differentiate, evaluate, parse, to_string
from .geodesic import (
    GeodesicSeries,
    Point,
    develop_series,
    eval_curve,
    exp_map,
    exp_map_with_jacobian,
    geodesic_defect,
    integrate_reference,
    integrate_trajectory,
)
from .jet import Dual, Jet
from .metric import (
    ChristoffelValues,
    MetricField,
    builtin,
    christoffel,
    christoffel_at,
    load_surfaces,
    metric_from_components,
    metric_from_graph,
    resolve_surface,
)
from .shooting import ShootingSolution, SolverConfig, classify_solutions, seed_velocities, solve
