"""Interval translation maps of the circle.

An ITM is given by breakpoints t_0 < ... < t_{n-1} in [0, 1) and shifts
c_0, ..., c_{n-1}: on the piece [t_j, t_{j+1}) the map acts as
t -> t + c_j mod 1 (indices circular, t_n = t_0).  Everything here is
exact: images and preimages of arc unions, the attractor as a nested
intersection of forward images, backward orbits of the discontinuity
set, and whole-arc tracking of the continuity intervals in between.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence, Union

from itmlib.circle import ONE, ZERO, Arc, ArcSet, CirclePoint, Rational, frac, mod1

DEFAULT_MAX_ITER = 4096
DEFAULT_MAX_ARCS = 2**16
DEFAULT_ORBIT_BUDGET = 2**16


class BudgetExceeded(RuntimeError):
    """An iteration or size budget was hit before the computation resolved."""

    def __init__(self, message: str, budget: str, value: int):
        super().__init__(message)
        self.budget = budget
        self.value = value


class FiniteType(Enum):
    YES = "yes"
    NO_WITHIN_BUDGET = "no-within-budget"
    UNKNOWN = "unknown"


class Genericity(Enum):
    NOT_GENERIC = "not generic"
    NO_PERIODIC_DOMAIN_FOUND = "no periodic domain found"
    UNKNOWN = "unknown"


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class EndpointOrbit:
    """One-sided orbit of a breakpoint: the limit S^r(t_j ± 0) step by step.

    visit_counts[k] is the number of orbit steps taken through piece k, and
    winding is the integer making sum(l_k * c_k) - winding equal to the net
    displacement points[-1] - points[0] as exact rationals.
    """

    base: int
    side: Side
    points: tuple[CirclePoint, ...]
    itinerary: tuple[int, ...]
    visit_counts: tuple[int, ...]
    winding: int

    @property
    def steps(self) -> int:
        return len(self.itinerary)


@dataclass(frozen=True)
class AttractorResult:
    """Forward images A_k of the full circle and their stabilization status.

    finite_type is YES exactly when some A_{m+1} = A_m was found; then
    stabilized_at = m and attractor = A_m is the true intersection of all
    forward images.  NO_WITHIN_BUDGET means the budget ran out first; the
    attractor field then holds the deepest iterate as an upper bound.
    """

    iterates: tuple[ArcSet, ...]
    stabilized_at: Optional[int]
    attractor: ArcSet
    finite_type: FiniteType


@dataclass(frozen=True)
class Homterval:
    """A maximal open arc free of the discontinuity orbit up to some depth.

    arc stores the closure's left endpoint and length; the homterval itself
    is the open interior (arc.start, arc.end).  When the whole-arc forward
    orbit repeats exactly, preperiod and period are set; otherwise both are
    None and the interval is reported unresolved.
    """

    arc: Arc
    preperiod: Optional[int] = None
    period: Optional[int] = None

    @property
    def resolved(self) -> bool:
        return self.period is not None


@dataclass(frozen=True)
class HomtervalReport:
    omega: tuple[CirclePoint, ...]
    homtervals: tuple[Homterval, ...]

    @property
    def resolved(self) -> tuple[Homterval, ...]:
        return tuple(h for h in self.homtervals if h.resolved)

    @property
    def unresolved(self) -> tuple[Homterval, ...]:
        return tuple(h for h in self.homtervals if not h.resolved)


@dataclass(frozen=True)
class Itm:
    """An interval translation map presented by its breakpoints and shifts.

    Accepts raw rationals or strings for convenience; everything is reduced
    mod 1 on construction.  Instances are immutable and all operations are
    pure, so maps can be shared freely.
    """

    breakpoints: tuple[CirclePoint, ...]
    shifts: tuple[Fraction, ...]
    _values: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)
    _piece_sets: tuple[ArcSet, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        bps = tuple(
            p if isinstance(p, CirclePoint) else CirclePoint(frac(p))
            for p in self.breakpoints
        )
        shs = tuple(mod1(c) for c in self.shifts)
        if not bps:
            raise ValueError("at least one piece required")
        if len(bps) != len(shs):
            raise ValueError("breakpoints and shifts must have equal length")
        for k in range(1, len(bps)):
            if not bps[k - 1] < bps[k]:
                raise ValueError(f"breakpoints not strictly increasing at index {k}")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "shifts", shs)
        object.__setattr__(self, "_values", tuple(p.value for p in bps))
        object.__setattr__(
            self, "_piece_sets", tuple(ArcSet([self.piece(j)]) for j in range(len(bps)))
        )

    @property
    def n(self) -> int:
        return len(self.breakpoints)

    def piece(self, j: int) -> Arc:
        """The half-open continuity piece [t_j, t_{j+1})."""
        if self.n == 1:
            return Arc(self.breakpoints[0], ONE)
        nxt = self.breakpoints[(j + 1) % self.n]
        return Arc(self.breakpoints[j], self.breakpoints[j].gap_to(nxt))

    def pieces(self) -> tuple[Arc, ...]:
        return tuple(self.piece(j) for j in range(self.n))

    def piece_index(self, x: CirclePoint) -> int:
        """Index j with x in [t_j, t_{j+1}); breakpoints belong to their right piece."""
        i = bisect.bisect_right(self._values, x.value) - 1
        return i if i >= 0 else self.n - 1

    def evaluate(self, x: CirclePoint) -> CirclePoint:
        return x + self.shifts[self.piece_index(x)]

    def iterate(self, x: CirclePoint, k: int) -> CirclePoint:
        for _ in range(k):
            x = self.evaluate(x)
        return x

    def _limit_piece(self, x: CirclePoint, side: Side) -> int:
        # a left limit sitting exactly on a breakpoint belongs to the piece before it
        if side is Side.LEFT:
            i = bisect.bisect_left(self._values, x.value)
            if i < self.n and self._values[i] == x.value:
                return (i - 1) % self.n
        return self.piece_index(x)

    def evaluate_one_sided(
        self, j: int, side: Union[Side, str], steps: int
    ) -> EndpointOrbit:
        """Orbit of the one-sided limit S^r(t_j + 0) or S^r(t_j - 0).

        The limit is propagated exactly: whenever the current point lands on
        a breakpoint, the left orbit continues through the piece ending
        there, the right orbit through the piece starting there.
        """
        side = Side(side)
        if steps < 0:
            raise ValueError("steps must be nonnegative")
        cur = self.breakpoints[j]
        points = [cur]
        itinerary: list[int] = []
        counts = [0] * self.n
        for _ in range(steps):
            k = self._limit_piece(cur, side)
            itinerary.append(k)
            counts[k] += 1
            cur = cur + self.shifts[k]
            points.append(cur)
        total = sum(
            (Fraction(counts[k]) * self.shifts[k] for k in range(self.n)), ZERO
        )
        winding = total - (points[-1].value - points[0].value)
        assert winding.denominator == 1
        return EndpointOrbit(
            base=j,
            side=side,
            points=tuple(points),
            itinerary=tuple(itinerary),
            visit_counts=tuple(counts),
            winding=int(winding),
        )

    def image(self, a: ArcSet) -> ArcSet:
        """Exact forward image S(A): split at breakpoints, translate, renormalize."""
        parts: list[Arc] = []
        for j in range(self.n):
            hit = a.intersect(self._piece_sets[j])
            if hit:
                parts.extend(hit.translate(self.shifts[j]).arcs)
        return ArcSet(parts)

    def preimage(self, a: ArcSet) -> ArcSet:
        """Exact S^{-1}(A): x lies in the result iff evaluate(x) lies in A."""
        parts: list[Arc] = []
        for j in range(self.n):
            hit = a.translate(-self.shifts[j]).intersect(self._piece_sets[j])
            parts.extend(hit.arcs)
        return ArcSet(parts)

    def attractor(
        self,
        max_iter: int = DEFAULT_MAX_ITER,
        max_arcs: int = DEFAULT_MAX_ARCS,
    ) -> AttractorResult:
        """Iterate A_{k+1} = S(A_k) from the full circle until exact stabilization.

        Stabilization at m means A_{m+1} = A_m, which makes A_m the
        intersection of all forward images.  Nesting A_{k+1} within A_k is
        asserted at every step.  Raises BudgetExceeded when an iterate needs
        more than max_arcs arcs; returns NO_WITHIN_BUDGET after max_iter
        steps without stabilization.
        """
        if max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        current = ArcSet.full()
        iterates = [current]
        for k in range(max_iter):
            nxt = self.image(current)
            if len(nxt) > max_arcs:
                raise BudgetExceeded(
                    f"iterate {k + 1} needs {len(nxt)} arcs (max_arcs={max_arcs})",
                    budget="max_arcs",
                    value=max_arcs,
                )
            if not nxt.is_subset_of(current):
                raise AssertionError("forward images failed to nest")
            if nxt == current:
                return AttractorResult(tuple(iterates), k, current, FiniteType.YES)
            iterates.append(nxt)
            current = nxt
        return AttractorResult(
            tuple(iterates), None, current, FiniteType.NO_WITHIN_BUDGET
        )

    def point_preimages(self, y: CirclePoint) -> list[CirclePoint]:
        """All x with S(x) = y, solved piece by piece."""
        out = []
        for j in range(self.n):
            x = y - self.shifts[j]
            if self.piece_index(x) == j:
                out.append(x)
        return out

    def omega_to_depth(
        self, depth: int, max_points: int = DEFAULT_ORBIT_BUDGET
    ) -> list[CirclePoint]:
        """Backward orbit of the breakpoints: union of S^{-k}(H) for k <= depth."""
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        seen = set(self.breakpoints)
        frontier = list(self.breakpoints)
        for _ in range(depth):
            fresh: list[CirclePoint] = []
            for y in frontier:
                for x in self.point_preimages(y):
                    if x not in seen:
                        seen.add(x)
                        fresh.append(x)
            if len(seen) > max_points:
                raise BudgetExceeded(
                    f"backward orbit exceeds {max_points} points",
                    budget="max_points",
                    value=max_points,
                )
            if not fresh:
                break
            frontier = fresh
        return sorted(seen)

    def _advance_open_arc(
        self, start: Fraction, length: Fraction
    ) -> Optional[tuple[Fraction, Fraction]]:
        # advance the open arc (start, start+length) one step, or None if it
        # straddles a breakpoint and would split
        j = self.piece_index(CirclePoint(start))
        if self.n > 1:
            piece = self.piece(j)
            offset = (start - piece.start.value) % 1
            if offset + length > piece.length:
                return None
        return ((start + self.shifts[j]) % 1, length)

    def _track_arc(
        self, start: Fraction, length: Fraction, budget: int
    ) -> tuple[Optional[int], Optional[int]]:
        state = (start, length)
        seen = {state: 0}
        for step in range(1, budget + 1):
            advanced = self._advance_open_arc(*state)
            if advanced is None:
                return None, None
            if advanced in seen:
                first = seen[advanced]
                return first, step - first
            seen[advanced] = step
            state = advanced
        return None, None

    def classify_homtervals(
        self, depth: int, orbit_budget: int = DEFAULT_ORBIT_BUDGET
    ) -> HomtervalReport:
        """Track the continuity gaps between discontinuity-orbit points.

        The complement of the depth-K backward orbit is a finite union of
        open arcs; each is advanced as a whole arc until its orbit repeats
        exactly (reported as preperiod and period), splits across a
        breakpoint, or exhausts the budget (reported unresolved).
        """
        if depth < 1:
            raise ValueError("depth must be at least 1")
        omega = self.omega_to_depth(depth)
        gaps: list[tuple[Fraction, Fraction]] = []
        for i, p in enumerate(omega):
            q = omega[(i + 1) % len(omega)]
            length = p.gap_to(q) if len(omega) > 1 else ONE
            gaps.append((p.value, length))
        homtervals = []
        for start, length in gaps:
            pre, per = self._track_arc(start, length, orbit_budget)
            homtervals.append(
                Homterval(Arc(CirclePoint(start), length), pre, per)
            )
        return HomtervalReport(tuple(omega), tuple(homtervals))

    def is_generic_within_depth(
        self, depth: int, orbit_budget: int = DEFAULT_ORBIT_BUDGET
    ) -> Genericity:
        """Detect periodic continuity domains up to a depth and budget.

        A resolved periodic homterval refutes genericity outright.  The
        complementary verdict only reports that no periodic domain was found
        within the budget; genericity itself is never certified by a finite
        computation.
        """
        report = self.classify_homtervals(depth, orbit_budget)
        if any(h.resolved for h in report.homtervals):
            return Genericity.NOT_GENERIC
        return Genericity.NO_PERIODIC_DOMAIN_FOUND

    def with_breakpoint(self, x: CirclePoint) -> "Itm":
        """The same map with x inserted as an (artificial) breakpoint."""
        if not isinstance(x, CirclePoint):
            x = CirclePoint(frac(x))
        if x.value in self._values:
            return self
        j = self.piece_index(x)
        i = bisect.bisect_left(self._values, x.value)
        bps = self.breakpoints[:i] + (x,) + self.breakpoints[i:]
        shs = self.shifts[:i] + (self.shifts[j],) + self.shifts[i:]
        return Itm(bps, shs)

    def merged(self) -> "Itm":
        """Canonical form: adjacent pieces with equal shifts fused (circularly).

        A map that is a single rotation collapses to one piece based at 0, so
        exact equality of merged maps decides equality of the underlying
        transformations for these normal forms.
        """
        if self.n == 1:
            return Itm((CirclePoint(ZERO),), self.shifts)
        if all(c == self.shifts[0] for c in self.shifts):
            return Itm((CirclePoint(ZERO),), (self.shifts[0],))
        keep = [j for j in range(self.n) if self.shifts[j] != self.shifts[j - 1]]
        return Itm(
            tuple(self.breakpoints[j] for j in keep),
            tuple(self.shifts[j] for j in keep),
        )

    def common_denominator(self) -> int:
        """lcm of all breakpoint and shift denominators (1 for integer maps)."""
        dens = [p.value.denominator for p in self.breakpoints]
        dens += [c.denominator for c in self.shifts]
        return lcm(*dens)

    def affine_segments(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """The map as affine charts (lo, hi, a, b): x -> a*x + b on [lo, hi).

        Charts cover [0, 1) cut open at 0 and their values stay in [0, 1),
        so non-periodic test functions can be integrated against them; a is
        always 1 here, with b the shift adjusted for the wrap.
        """
        out: list[tuple[Fraction, Fraction, Fraction, Fraction]] = []
        for j in range(self.n):
            c = self.shifts[j]
            for lo, hi in self.piece(j).segments():
                cut = ONE - c
                if c == 0 or hi <= cut:
                    out.append((lo, hi, ONE, c))
                elif lo >= cut:
                    out.append((lo, hi, ONE, c - ONE))
                else:
                    out.append((lo, cut, ONE, c))
                    out.append((cut, hi, ONE, c - ONE))
        out.sort()
        return out

    def discontinuity_points(self) -> tuple[CirclePoint, ...]:
        return self.breakpoints

    def __repr__(self) -> str:
        bps = ", ".join(str(p.value) for p in self.breakpoints)
        shs = ", ".join(str(c) for c in self.shifts)
        return f"Itm([{bps}] -> [{shs}])"


def itm(breakpoints: Sequence, shifts: Sequence) -> Itm:
    """Shorthand constructor from raw rationals or strings."""
    return Itm(tuple(breakpoints), tuple(shifts))
