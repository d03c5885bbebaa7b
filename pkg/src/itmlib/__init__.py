"""Exact-arithmetic toolkit for interval translation maps.

Everything runs on arbitrary-precision rationals: arc algebra on the
circle, attractor computation, invariant measures, interval-exchange
conjugacies, rational approximation schedules, and empirical measures
for general piecewise-continuous maps.
"""

from itmlib.circle import Arc, ArcSet, CirclePoint, arc, arcset, frac, mod1
from itmlib.itm import (
    AttractorResult,
    BudgetExceeded,
    EndpointOrbit,
    FiniteType,
    Genericity,
    Homterval,
    HomtervalReport,
    Itm,
    Side,
    itm,
)
from itmlib.measure import (
    AtomicMeasure,
    Cdf,
    Measure,
    NotFiniteType,
    Recurrence,
    attractor_measure,
    cdf_distance,
    find_recurrent_points,
    invariance_residual_exact,
    mass_near_breakpoints,
    mass_near_points,
    pushforward,
    tv_distance,
)
from itmlib.families import (
    PolynomialFamily,
    TrigFamily,
    integral,
    integral_composed,
    invariance_residual_functional,
)
from itmlib.conjugacy import (
    ConjugacyData,
    Iem,
    IemReport,
    NotInvariant,
    build_h,
    build_hbar,
    induce_iem,
    verify_iem,
)
from itmlib.approx import (
    ApproximantSchedule,
    CollisionReport,
    ConvergenceReport,
    InconsistentRelations,
    Level,
    LimitReport,
    OrderViolation,
    Relation,
    RelationSystem,
    detect_convergence,
    detect_relations,
    generate_approximants,
    mass_profile,
    measure_sequence,
    orbit_collision_preservation,
    verify_limit_measure,
)
from itmlib.piecewise import (
    AffinePiece,
    Domain,
    EmpiricalMeasure,
    GeneralPiece,
    HitDiscontinuity,
    PiecewiseMap,
    Verdict,
    VisitFrequencyTable,
    empirical_measure,
    from_itm,
    orbit,
    visit_frequency,
    wandering_discontinuity_check,
)

__all__ = [
    "Arc",
    "ArcSet",
    "CirclePoint",
    "arc",
    "arcset",
    "frac",
    "mod1",
    "AttractorResult",
    "BudgetExceeded",
    "EndpointOrbit",
    "FiniteType",
    "Genericity",
    "Homterval",
    "HomtervalReport",
    "Itm",
    "Side",
    "itm",
    "AtomicMeasure",
    "Cdf",
    "Measure",
    "NotFiniteType",
    "Recurrence",
    "attractor_measure",
    "cdf_distance",
    "find_recurrent_points",
    "invariance_residual_exact",
    "mass_near_breakpoints",
    "mass_near_points",
    "pushforward",
    "tv_distance",
    "PolynomialFamily",
    "TrigFamily",
    "integral",
    "integral_composed",
    "invariance_residual_functional",
    "ConjugacyData",
    "Iem",
    "IemReport",
    "NotInvariant",
    "build_h",
    "build_hbar",
    "induce_iem",
    "verify_iem",
    "ApproximantSchedule",
    "CollisionReport",
    "ConvergenceReport",
    "InconsistentRelations",
    "Level",
    "LimitReport",
    "OrderViolation",
    "Relation",
    "RelationSystem",
    "detect_convergence",
    "detect_relations",
    "generate_approximants",
    "mass_profile",
    "measure_sequence",
    "orbit_collision_preservation",
    "verify_limit_measure",
    "AffinePiece",
    "Domain",
    "EmpiricalMeasure",
    "GeneralPiece",
    "HitDiscontinuity",
    "PiecewiseMap",
    "Verdict",
    "VisitFrequencyTable",
    "empirical_measure",
    "from_itm",
    "orbit",
    "visit_frequency",
    "wandering_discontinuity_check",
]

__version__ = "0.1.0"
