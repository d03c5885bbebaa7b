"""Relation-preserving rational approximation of interval translation maps.

Integer relations among breakpoints and shifts are harvested from exact
one-sided endpoint orbits.  A schedule of rational approximants keeps
every relation exactly while the free coordinates follow continued
fraction convergents of the target, so the invariant measures of the
approximants can be compared level by level: endpoint collisions are
replayed, attractor measures computed, successive distribution distances
checked for a Cauchy tail, and a candidate limit measure tested against
the two invariance hypotheses (vanishing mass near the discontinuities,
small functional residual).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from itmlib.catalog import fibonacci_up_to
from itmlib.circle import ZERO, Rational, frac
from itmlib.itm import (
    DEFAULT_MAX_ARCS,
    DEFAULT_MAX_ITER,
    AttractorResult,
    BudgetExceeded,
    Itm,
    Side,
)
from itmlib.families import invariance_residual_functional
from itmlib.measure import (
    DEFAULT_CYCLE_BUDGET,
    Measure,
    NotFiniteType,
    attractor_measure,
    cdf_distance,
    mass_near_points,
)

DEFAULT_DENOMINATOR_LIMIT = 10**6


class InconsistentRelations(ValueError):
    """The relation system admits no rational solution near the target."""


class OrderViolation(ValueError):
    """An approximant level broke the breakpoint ordering."""

    def __init__(self, bound: int, message: str):
        super().__init__(f"denominator bound {bound}: {message}")
        self.bound = bound


@dataclass(frozen=True)
class Relation:
    """Exact identity t_j - t_i = sum_k l[k] * c_k - w among map parameters.

    l counts orbit steps through each piece and w is the integer winding
    lifting the mod-1 identity to the rationals.  Harvested relations
    carry their witness (the orbit side and itinerary); declared ones do
    not and are never replayed.
    """

    i: int
    j: int
    l: tuple[int, ...]
    w: int
    side: Optional[Side] = None
    itinerary: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "l", tuple(int(v) for v in self.l))
        if any(v < 0 for v in self.l):
            raise ValueError("visit counts must be nonnegative")
        if self.side is not None:
            object.__setattr__(self, "side", Side(self.side))
        if self.itinerary is not None:
            itin = tuple(int(k) for k in self.itinerary)
            object.__setattr__(self, "itinerary", itin)
            if self.side is None:
                raise ValueError("a witness itinerary needs a side")
            if any(not 0 <= k < len(self.l) for k in itin):
                raise ValueError("itinerary steps outside the piece range")
            if tuple(itin.count(k) for k in range(len(self.l))) != self.l:
                raise ValueError("itinerary does not match the visit counts")

    @property
    def depth(self) -> int:
        return sum(self.l)

    @property
    def witnessed(self) -> bool:
        return self.itinerary is not None

    def residual(
        self, breakpoints: Sequence[Fraction], shifts: Sequence[Fraction]
    ) -> Fraction:
        """t_j - t_i - sum_k l[k] * c_k + w at the given parameter values."""
        total = sum(
            (Fraction(lk) * frac(ck) for lk, ck in zip(self.l, shifts)), ZERO
        )
        return frac(breakpoints[self.j]) - frac(breakpoints[self.i]) - total + self.w


@dataclass(frozen=True)
class RelationSystem:
    """Relations together with the orbit depth they were harvested at."""

    relations: tuple[Relation, ...]
    source_depth: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "relations", tuple(self.relations))

    @classmethod
    def empty(cls) -> "RelationSystem":
        return cls((), 0)

    @classmethod
    def declared(cls, relations: Sequence[Relation]) -> "RelationSystem":
        rels = tuple(relations)
        depth = max((r.depth for r in rels), default=0)
        return cls(rels, depth)

    def witnessed_up_to(self, depth: int) -> tuple[Relation, ...]:
        return tuple(r for r in self.relations if r.witnessed and r.depth <= depth)

    def __len__(self) -> int:
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)


def detect_relations(s: Itm, depth: int) -> RelationSystem:
    """Harvest every exact endpoint collision S^r(t_i +/- 0) = t_j, r <= depth.

    Only exact rational coincidences count; near-collisions are ignored.
    Duplicate (i, j, l, w) hits keep their first witness.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    lookup = {t: idx for idx, t in enumerate(s.breakpoints)}
    found: dict[tuple, Relation] = {}
    for i in range(s.n):
        for side in (Side.RIGHT, Side.LEFT):
            orbit = s.evaluate_one_sided(i, side, depth)
            counts = [0] * s.n
            shifted = ZERO
            for r in range(1, depth + 1):
                k = orbit.itinerary[r - 1]
                counts[k] += 1
                shifted += s.shifts[k]
                j = lookup.get(orbit.points[r])
                if j is None:
                    continue
                winding = (
                    s.breakpoints[i].value + shifted - orbit.points[r].value
                )
                assert winding.denominator == 1
                rel = Relation(
                    i=i,
                    j=j,
                    l=tuple(counts),
                    w=int(winding),
                    side=side,
                    itinerary=orbit.itinerary[: r],
                )
                found.setdefault((rel.i, rel.j, rel.l, rel.w), rel)
    return RelationSystem(tuple(found.values()), depth)


@dataclass(frozen=True)
class Level:
    """One approximant: denominator bound, the map, and its distance to target.

    distance is the sup over free coordinates of the approximation error
    (None for hand-built levels).
    """

    bound: int
    map: Itm
    distance: Optional[Fraction] = None


@dataclass(frozen=True)
class ApproximantSchedule:
    """Rational approximants of a target map, all satisfying the relations.

    Every level satisfies every attached relation modulo 1 exactly (the
    residual is an integer), and the recorded free-coordinate distances
    to the target never increase.
    """

    target: Itm
    relations: RelationSystem
    levels: tuple[Level, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", tuple(self.levels))
        for level in self.levels:
            if level.map.n != self.target.n:
                raise ValueError("level piece count differs from the target")
            for rel in self.relations:
                res = rel.residual(
                    [t.value for t in level.map.breakpoints],
                    level.map.shifts,
                )
                if res.denominator != 1:
                    raise ValueError(
                        f"level {level.bound} violates relation "
                        f"({rel.i},{rel.j},{rel.l},{rel.w})"
                    )
        distances = [lv.distance for lv in self.levels if lv.distance is not None]
        if any(b > a for a, b in zip(distances, distances[1:])):
            raise ValueError("level distances to the target must not increase")

    def maps(self) -> tuple[Itm, ...]:
        return tuple(level.map for level in self.levels)


def _solve_relation_system(
    relations: RelationSystem, n: int
) -> tuple[dict[int, tuple[Fraction, list[Fraction]]], list[int]]:
    """Reduce the relation equations over the 2n parameters (t's then c's).

    Returns the dependent columns mapped to (constant, coefficient row
    over all columns) plus the free column list.  Pivots prefer later
    breakpoints, then later shifts, and protect t_0, so anchored targets
    keep their first breakpoint free.
    """
    width = 2 * n
    rows: list[list[Fraction]] = []
    for rel in relations:
        row = [ZERO] * (width + 1)
        row[rel.j] += 1
        row[rel.i] -= 1
        for k, lk in enumerate(rel.l):
            row[n + k] -= lk
        row[width] = Fraction(-rel.w)
        rows.append(row)

    preference = list(range(n - 1, 0, -1)) + list(range(width - 1, n - 1, -1)) + [0]
    pivot_of: dict[int, int] = {}
    used: set[int] = set()
    for col in preference:
        pivot = next(
            (r for r in range(len(rows)) if r not in used and rows[r][col] != 0),
            None,
        )
        if pivot is None:
            continue
        used.add(pivot)
        pivot_of[col] = pivot
        coef = rows[pivot][col]
        rows[pivot] = [v / coef for v in rows[pivot]]
        for r in range(len(rows)):
            if r != pivot and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[pivot])]
    for r in range(len(rows)):
        if r not in used and rows[r][width] != 0:
            raise InconsistentRelations("relation system has no solution")

    free = [col for col in range(width) if col not in pivot_of]
    dependent = {
        col: (rows[r][width], [-rows[r][c] for c in range(width)])
        for col, r in pivot_of.items()
    }
    return dependent, free


def generate_approximants(
    target: Itm,
    relations: Optional[RelationSystem] = None,
    denominators: Optional[Sequence[int]] = None,
    precision: Rational = 0,
) -> ApproximantSchedule:
    """Best rational approximants of the target that keep every relation.

    Dependent coordinates are solved exactly from the free ones, which
    follow continued fraction convergents under each denominator bound.
    precision bounds the allowed relation residual at the target itself
    (0 demands exactness, as for harvested relations).
    """
    relations = relations if relations is not None else RelationSystem.empty()
    if denominators is None:
        denominators = fibonacci_up_to(DEFAULT_DENOMINATOR_LIMIT)
    denominators = [int(q) for q in denominators]
    if not denominators:
        raise ValueError("at least one denominator bound is required")
    if any(q < 1 for q in denominators):
        raise ValueError("denominator bounds must be positive")
    if any(b <= a for a, b in zip(denominators, denominators[1:])):
        raise ValueError("denominator bounds must be strictly increasing")

    n = target.n
    target_vec = [t.value for t in target.breakpoints] + list(target.shifts)
    tol = frac(precision)
    for rel in relations:
        if len(rel.l) != n:
            raise ValueError("relation visit counts do not match the piece count")
        res = rel.residual(target_vec[:n], target_vec[n:])
        if abs(res) > tol:
            raise InconsistentRelations(
                f"target violates relation ({rel.i},{rel.j},{rel.l},{rel.w}) "
                f"by {res}"
            )

    dependent, free = _solve_relation_system(relations, n)

    levels = []
    for bound in denominators:
        values: list[Optional[Fraction]] = [None] * (2 * n)
        distance = ZERO
        for col in free:
            values[col] = target_vec[col].limit_denominator(bound)
            distance = max(distance, abs(values[col] - target_vec[col]))
        for col, (constant, coefs) in dependent.items():
            values[col] = constant + sum(
                (coefs[f] * values[f] for f in free if coefs[f] != 0), ZERO
            )
        breakpoints = [v % 1 for v in values[:n]]
        shifts = values[n:]
        if any(b <= a for a, b in zip(breakpoints, breakpoints[1:])):
            raise OrderViolation(bound, "approximant breakpoints lose their order")
        levels.append(
            Level(bound=bound, map=Itm(breakpoints, shifts), distance=distance)
        )
    return ApproximantSchedule(target=target, relations=relations, levels=levels)


@dataclass(frozen=True)
class CollisionFailure:
    """One replayed witness that broke at a schedule level."""

    level: int
    relation: Relation
    reason: str


@dataclass(frozen=True)
class CollisionReport:
    """Replayed endpoint collisions per level; levels count from 1."""

    depth: int
    checked: int
    failures: tuple[CollisionFailure, ...]
    uniform_from: Optional[int]

    @property
    def all_pass(self) -> bool:
        return not self.failures


def orbit_collision_preservation(
    schedule: ApproximantSchedule,
    relations: Optional[RelationSystem] = None,
    depth: Optional[int] = None,
) -> CollisionReport:
    """Replay every witnessed collision of depth <= depth at every level.

    A replay passes when the approximant's one-sided orbit repeats the
    witness itinerary and lands exactly on the expected breakpoint.
    uniform_from is the first level from which every replay passes.
    """
    relations = relations if relations is not None else schedule.relations
    if depth is None:
        depth = relations.source_depth
    witnessed = relations.witnessed_up_to(depth)
    failures = []
    passing: list[bool] = []
    for m, level in enumerate(schedule.levels, start=1):
        ok = True
        for rel in witnessed:
            orbit = level.map.evaluate_one_sided(rel.i, rel.side, rel.depth)
            if orbit.itinerary != rel.itinerary:
                ok = False
                failures.append(
                    CollisionFailure(m, rel, "orbit itinerary deviates")
                )
                continue
            if orbit.points[-1] != level.map.breakpoints[rel.j]:
                ok = False
                failures.append(
                    CollisionFailure(m, rel, "orbit misses the breakpoint")
                )
        passing.append(ok)
    uniform_from: Optional[int] = None
    for m in range(len(passing), 0, -1):
        if not passing[m - 1]:
            break
        uniform_from = m
    return CollisionReport(
        depth=depth,
        checked=len(witnessed) * len(schedule.levels),
        failures=tuple(failures),
        uniform_from=uniform_from,
    )


@dataclass(frozen=True)
class LevelMeasure:
    """Attractor measure of one level, or the error that prevented it."""

    bound: int
    map: Itm
    attractor: Optional[AttractorResult] = None
    measure: Optional[Measure] = None
    error: Optional[Exception] = None


def measure_sequence(
    schedule: ApproximantSchedule,
    max_iter: int = DEFAULT_MAX_ITER,
    max_arcs: int = DEFAULT_MAX_ARCS,
    cycle_budget: int = DEFAULT_CYCLE_BUDGET,
) -> tuple[LevelMeasure, ...]:
    """Attractor and invariant measure per level; failures do not abort."""
    out = []
    for level in schedule.levels:
        try:
            att = level.map.attractor(max_iter=max_iter, max_arcs=max_arcs)
            mu = attractor_measure(level.map, att, cycle_budget=cycle_budget)
            out.append(
                LevelMeasure(
                    bound=level.bound, map=level.map, attractor=att, measure=mu
                )
            )
        except (NotFiniteType, BudgetExceeded) as exc:
            out.append(LevelMeasure(bound=level.bound, map=level.map, error=exc))
    return tuple(out)


@dataclass(frozen=True)
class ConvergenceReport:
    """Successive distribution distances and the Cauchy-tail verdict.

    cauchy_from is the first index with every later successive distance
    within tol; the candidate is just the last measure, never a proven
    limit.
    """

    distances: tuple[Fraction, ...]
    tol: Fraction
    cauchy_from: Optional[int]
    limit_candidate: Measure

    @property
    def is_cauchy(self) -> bool:
        return self.cauchy_from is not None


def detect_convergence(
    mus: Sequence[Measure], tol: Rational
) -> ConvergenceReport:
    """Check successive cdf distances of the sequence for a tail within tol."""
    if len(mus) < 2:
        raise ValueError("need at least two measures")
    tol = frac(tol)
    distances = tuple(
        cdf_distance(a, b) for a, b in zip(mus, mus[1:])
    )
    cauchy_from: Optional[int] = None
    for idx in range(len(distances), 0, -1):
        if distances[idx - 1] > tol:
            break
        cauchy_from = idx - 1
    return ConvergenceReport(
        distances=distances,
        tol=tol,
        cauchy_from=cauchy_from,
        limit_candidate=mus[-1],
    )


@dataclass(frozen=True)
class LimitReport:
    """Invariance hypotheses for a candidate limit measure.

    Hypothesis (a): mass near the discontinuity points drops below
    tol_mass for small delta.  Hypothesis (b): the functional invariance
    residual stays within tol_res.
    """

    deltas: tuple[Fraction, ...]
    masses: tuple[Fraction, ...]
    mass_ok: bool
    residual: float
    residual_ok: bool
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_limit_measure(
    s_target,
    mu_star: Measure,
    points: Optional[Sequence[Rational]] = None,
    tol_mass: Rational = Fraction(1, 100),
    tol_res: float = 1e-6,
    deltas: Optional[Sequence[Rational]] = None,
    family=None,
) -> LimitReport:
    """Test the two hypotheses making a weak-* limit invariant.

    The neighbourhood mass of the discontinuity set must fall below
    tol_mass along the shrinking deltas, and the functional residual of
    the candidate must be within tol_res.  An atom sitting on a
    discontinuity keeps the mass bounded away from zero and fails (a).
    Masses are summed over the points, an upper bound for the union
    when neighbourhoods overlap.
    """
    if points is None:
        points = s_target.discontinuity_points()
    domain = getattr(s_target, "domain", "circle")
    wrap = isinstance(s_target, Itm) or getattr(domain, "value", domain) == "circle"
    if deltas is None:
        deltas = tuple(Fraction(1, 2**k) for k in range(2, 13))
    deltas = tuple(frac(d) for d in deltas)
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be strictly decreasing")
    masses = tuple(
        sum(mass_near_points(mu_star, points, d, wrap=wrap), ZERO) for d in deltas
    )
    tol_mass = frac(tol_mass)
    mass_ok = bool(masses) and masses[-1] <= tol_mass
    residual = invariance_residual_functional(s_target, mu_star, family)
    residual_ok = residual <= tol_res
    failures = []
    if not mass_ok:
        failures.append("mass near the discontinuity set stays above tolerance")
    if not residual_ok:
        failures.append("functional invariance residual exceeds tolerance")
    return LimitReport(
        deltas=deltas,
        masses=masses,
        mass_ok=mass_ok,
        residual=float(residual),
        residual_ok=residual_ok,
        failures=tuple(failures),
    )


def mass_profile(
    measures: Sequence[LevelMeasure], deltas: Sequence[Rational]
) -> tuple[tuple[Fraction, Fraction], ...]:
    """Per delta, the worst mass near the breakpoints across all levels."""
    out = []
    for d in deltas:
        worst = ZERO
        for lm in measures:
            if lm.measure is None:
                continue
            worst = max(
                worst,
                max(
                    mass_near_points(
                        lm.measure, lm.map.breakpoints, d, wrap=True
                    )
                ),
            )
        out.append((frac(d), worst))
    return tuple(out)
