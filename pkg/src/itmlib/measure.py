"""Measures with piecewise-constant densities and finitely many atoms.

A Measure lives on [0, 1] cut open at 0: density pieces never wrap through
0 (wrapping arcs are split on construction) and atom positions are exact
rationals in [0, 1], so segment maps can keep an atom at 1 distinct from
one at 0.  The representation is canonical, which makes equality of
measures and exact invariance residuals decidable.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from itmlib.circle import ONE, ZERO, Arc, ArcSet, CirclePoint, Rational, frac
from itmlib.itm import AttractorResult, FiniteType, Itm

DEFAULT_CYCLE_BUDGET = 4096


class NotFiniteType(ValueError):
    """The attractor did not stabilize, so no exact invariant measure exists here."""


class CycleNotFound(RuntimeError):
    """Pushforward iteration failed to cycle within the budget."""


class AtomicMeasure(ValueError):
    """A non-atomic measure was required."""


def _merge_density(
    raw: Iterable[tuple[Fraction, Fraction, Fraction]]
) -> tuple[tuple[Fraction, Fraction, Fraction], ...]:
    # sweep-sum overlapping weighted segments on the cut-open line, then
    # merge adjacent runs of equal weight; zero-weight runs are dropped
    events: list[tuple[Fraction, Fraction]] = []
    for lo, hi, w in raw:
        if w < 0:
            raise ValueError("density weights must be nonnegative")
        if hi > lo and w > 0:
            events.append((lo, w))
            events.append((hi, -w))
    if not events:
        return ()
    events.sort(key=lambda e: e[0])
    out: list[list[Fraction]] = []
    level = ZERO
    prev = events[0][0]
    i = 0
    while i < len(events):
        x = events[i][0]
        if x > prev and level > 0:
            if out and out[-1][1] == prev and out[-1][2] == level:
                out[-1][1] = x
            else:
                out.append([prev, x, level])
        while i < len(events) and events[i][0] == x:
            level += events[i][1]
            i += 1
        prev = x
    return tuple((lo, hi, w) for lo, hi, w in out)


def _merge_atoms(
    raw: Iterable[tuple[Fraction, Fraction]]
) -> tuple[tuple[Fraction, Fraction], ...]:
    acc: dict[Fraction, Fraction] = {}
    for pos, mass in raw:
        if mass < 0:
            raise ValueError("atom masses must be nonnegative")
        if not ZERO <= pos <= ONE:
            raise ValueError(f"atom position {pos} outside [0, 1]")
        if mass > 0:
            acc[pos] = acc.get(pos, ZERO) + mass
    return tuple(sorted(acc.items()))


@dataclass(frozen=True)
class Measure:
    """density: disjoint (lo, hi, weight-per-unit-length) pieces, sorted,
    never wrapping through 0; atoms: sorted (position, mass) pairs.

    Construction canonicalizes arbitrary input, so equal measures have
    equal representations and ``==`` decides measure equality.
    """

    density: tuple[tuple[Fraction, Fraction, Fraction], ...] = ()
    atoms: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "density", _merge_density(self.density))
        object.__setattr__(self, "atoms", _merge_atoms(self.atoms))

    @classmethod
    def from_arcs(
        cls,
        weighted_arcs: Iterable[tuple[Arc, Rational]],
        atoms: Iterable[tuple[Rational, Rational]] = (),
    ) -> "Measure":
        """Build from weighted arcs; wrapping arcs are split at 0."""
        density = []
        for a, w in weighted_arcs:
            for lo, hi in a.segments():
                density.append((lo, hi, frac(w)))
        return cls(tuple(density), tuple((frac(p), frac(m)) for p, m in atoms))

    @classmethod
    def lebesgue(cls) -> "Measure":
        return cls(((ZERO, ONE, ONE),))

    @classmethod
    def point_mass(cls, pos: Rational, mass: Rational = 1) -> "Measure":
        return cls((), ((frac(pos), frac(mass)),))

    @classmethod
    def uniform_on(cls, support: ArcSet) -> "Measure":
        """Normalized Lebesgue measure restricted to an arc union."""
        if support.total_length == 0:
            raise ValueError("cannot normalize Lebesgue measure on a null set")
        w = 1 / support.total_length
        return cls(tuple((lo, hi, w) for lo, hi in support.segments()))

    @property
    def total_mass(self) -> Fraction:
        dens = sum((w * (hi - lo) for lo, hi, w in self.density), ZERO)
        return dens + sum((m for _, m in self.atoms), ZERO)

    @property
    def non_atomic(self) -> bool:
        return not self.atoms

    @property
    def is_probability(self) -> bool:
        return self.total_mass == 1

    def scale(self, r: Rational) -> "Measure":
        r = frac(r)
        return Measure(
            tuple((lo, hi, w * r) for lo, hi, w in self.density),
            tuple((p, m * r) for p, m in self.atoms),
        )

    def add(self, other: "Measure") -> "Measure":
        return Measure(self.density + other.density, self.atoms + other.atoms)

    def __add__(self, other: "Measure") -> "Measure":
        return self.add(other)

    def mass_between(
        self,
        lo: Fraction,
        hi: Fraction,
        include_lo: bool = True,
        include_hi: bool = False,
    ) -> Fraction:
        """Mass of the interval from lo to hi on the cut-open line."""
        if hi < lo:
            raise ValueError("need lo <= hi")
        total = ZERO
        for a, b, w in self.density:
            left, right = max(a, lo), min(b, hi)
            if right > left:
                total += w * (right - left)
        for p, m in self.atoms:
            if (lo < p < hi) or (p == lo and include_lo) or (p == hi and include_hi):
                if p == lo == hi and not (include_lo and include_hi):
                    continue
                total += m
        return total

    def mass_of(self, support: ArcSet) -> Fraction:
        """Mass of an arc union (arcs half-open, wraps handled)."""
        return sum(
            (self.mass_between(lo, hi) for lo, hi in support.segments()), ZERO
        )

    def support(self) -> ArcSet:
        """Smallest canonical arc union carrying all density mass (atoms excluded)."""
        return ArcSet.from_segments((lo, hi) for lo, hi, _ in self.density)

    def cdf(self) -> "Cdf":
        return Cdf(self)

    def __repr__(self) -> str:
        d = ", ".join(f"[{lo},{hi})x{w}" for lo, hi, w in self.density)
        a = ", ".join(f"{m}@{p}" for p, m in self.atoms)
        return f"Measure({d or 'no density'}{'; ' + a if a else ''})"


class Cdf:
    """Exact distribution function F(x) = mu([0, x]) with basepoint 0.

    F is piecewise linear with jumps at atoms; ``at`` gives the
    right-continuous value including the atom at x, ``left_limit`` the
    value just below x.
    """

    __slots__ = ("measure", "cuts", "value_at", "value_left")

    def __init__(self, measure: Measure):
        cuts = {ZERO, ONE}
        for lo, hi, _ in measure.density:
            cuts.add(lo)
            cuts.add(hi)
        for p, _ in measure.atoms:
            cuts.add(p)
        self.measure = measure
        self.cuts = tuple(sorted(cuts))
        # One cumulative pass: every density endpoint is a cut, so each
        # gap [prev, x) lies inside a single constant-weight segment.
        atom_at = dict(measure.atoms)
        value_at = []
        value_left = []
        running = ZERO
        seg_idx = 0
        density = measure.density
        prev = ZERO
        for x in self.cuts:
            gap = ZERO
            while seg_idx < len(density) and density[seg_idx][1] <= prev:
                seg_idx += 1
            if x > prev and seg_idx < len(density):
                lo, hi, w = density[seg_idx]
                if lo <= prev < hi:
                    gap = w * (x - prev)
            left = running + gap
            at = left + atom_at.get(x, ZERO)
            value_left.append(left)
            value_at.append(at)
            running = at
            prev = x
        self.value_at = tuple(value_at)
        self.value_left = tuple(value_left)

    def at(self, x: Rational) -> Fraction:
        x = frac(x)
        if x < 0:
            return ZERO
        if x >= 1:
            return self.value_at[-1]
        i = bisect.bisect_right(self.cuts, x) - 1
        if self.cuts[i] == x:
            return self.value_at[i]
        lo, hi = self.cuts[i], self.cuts[i + 1]
        slope = (self.value_left[i + 1] - self.value_at[i]) / (hi - lo)
        return self.value_at[i] + slope * (x - lo)

    def left_limit(self, x: Rational) -> Fraction:
        x = frac(x)
        if x <= 0:
            return ZERO
        if x > 1:
            return self.value_at[-1]
        i = bisect.bisect_left(self.cuts, x)
        if i < len(self.cuts) and self.cuts[i] == x:
            return self.value_left[i]
        lo = self.cuts[i - 1]
        slope = (self.value_left[i] - self.value_at[i - 1]) / (self.cuts[i] - lo)
        return self.value_at[i - 1] + slope * (x - lo)

    def quantile(self, y: Rational) -> Fraction:
        """Smallest x with F(x) >= y (generalized inverse, for sampling)."""
        y = frac(y)
        if y <= 0:
            return ZERO
        i = bisect.bisect_left(self.value_at, y)
        if i >= len(self.cuts):
            return ONE
        if self.value_left[i] >= y and i > 0:
            # the level is reached strictly inside (cuts[i-1], cuts[i])
            lo, hi = self.cuts[i - 1], self.cuts[i]
            slope = (self.value_left[i] - self.value_at[i - 1]) / (hi - lo)
            if slope > 0:
                return lo + (y - self.value_at[i - 1]) / slope
        return self.cuts[i]

    def rightmost_preimage(self, y: Rational) -> Fraction:
        """Largest x in [0, 1] with F(x) = y, for continuous (atom-free) F.

        Level sets of a continuous non-decreasing F are closed intervals;
        this returns their right endpoint exactly.
        """
        if self.measure.atoms:
            raise AtomicMeasure("rightmost preimage needs a continuous CDF")
        y = frac(y)
        v = self.value_at
        if y < 0 or y > v[-1]:
            raise ValueError(f"level {y} is not attained by this CDF")
        i = bisect.bisect_right(v, y) - 1
        if v[i] == y:
            return self.cuts[i]
        lo, hi = self.cuts[i], self.cuts[i + 1]
        slope = (v[i + 1] - v[i]) / (hi - lo)
        return lo + (y - v[i]) / slope


def pushforward(s: Itm, mu: Measure) -> Measure:
    """Exact image measure S#mu: weights ride along with translated pieces."""
    density: list[tuple[Fraction, Fraction, Fraction]] = []
    for lo, hi, w in mu.density:
        chunk = ArcSet.from_segments([(lo, hi)])
        for j in range(s.n):
            hit = chunk.intersect(ArcSet([s.piece(j)]))
            if hit:
                for a, b in hit.translate(s.shifts[j]).segments():
                    density.append((a, b, w))
    atoms = tuple(
        (s.evaluate(CirclePoint(p)).value, m) for p, m in mu.atoms
    )
    return Measure(tuple(density), atoms)


def tv_distance(mu: Measure, nu: Measure) -> Fraction:
    """Exact total variation of mu - nu over the common refinement."""
    cuts = sorted(
        {lo for lo, _, _ in mu.density}
        | {hi for _, hi, _ in mu.density}
        | {lo for lo, _, _ in nu.density}
        | {hi for _, hi, _ in nu.density}
    )
    total = ZERO
    for lo, hi in zip(cuts, cuts[1:]):
        wm = _weight_at(mu, lo, hi)
        wn = _weight_at(nu, lo, hi)
        total += abs(wm - wn) * (hi - lo)
    mu_atoms = dict(mu.atoms)
    nu_atoms = dict(nu.atoms)
    for p in mu_atoms.keys() | nu_atoms.keys():
        total += abs(mu_atoms.get(p, ZERO) - nu_atoms.get(p, ZERO))
    return total


def _weight_at(mu: Measure, lo: Fraction, hi: Fraction) -> Fraction:
    i = bisect.bisect_right(mu.density, (lo, ONE + 1, ZERO)) - 1
    if i >= 0:
        a, b, w = mu.density[i]
        if a <= lo and hi <= b:
            return w
    return ZERO


def invariance_residual_exact(s: Itm, mu: Measure) -> Fraction:
    """Exact ||S#mu - mu||; zero if and only if mu is S-invariant."""
    return tv_distance(pushforward(s, mu), mu)


def attractor_measure(
    s: Itm,
    attr: Optional[AttractorResult] = None,
    cycle_budget: int = DEFAULT_CYCLE_BUDGET,
) -> Measure:
    """Exactly invariant measure carried by a stabilized attractor.

    Starts from normalized Lebesgue measure on the attractor; if that is
    not already invariant, averages the pushforward cycle it settles into.
    The result is verified exactly before being returned.
    """
    if attr is None:
        attr = s.attractor()
    if attr.finite_type is not FiniteType.YES:
        raise NotFiniteType("attractor did not stabilize within budget")
    mu = Measure.uniform_on(attr.attractor)
    if invariance_residual_exact(s, mu) == 0:
        return mu
    seen = {mu: 0}
    seq = [mu]
    cur = mu
    for k in range(1, cycle_budget + 1):
        cur = pushforward(s, cur)
        if cur in seen:
            start = seen[cur]
            period = k - start
            avg = seq[start]
            for m in seq[start + 1 : start + period]:
                avg = avg.add(m)
            avg = avg.scale(Fraction(1, period))
            if invariance_residual_exact(s, avg) != 0:
                raise CycleNotFound("cycle average failed exact verification")
            return avg
        seen[cur] = k
        seq.append(cur)
    raise CycleNotFound(f"no pushforward cycle within {cycle_budget} steps")


def cdf_distance(mu: Measure, nu: Measure) -> Fraction:
    """sup over x of |F_mu(x) - F_nu(x)|, exact.

    Both measures must be probability measures.  The sup of the piecewise
    linear difference is attained at a cut of either CDF or just below one.
    """
    if mu.total_mass != 1 or nu.total_mass != 1:
        raise ValueError("cdf distance requires probability measures")
    fm, fn = mu.cdf(), nu.cdf()
    best = ZERO
    for x in sorted(set(fm.cuts) | set(fn.cuts)):
        best = max(
            best,
            abs(fm.at(x) - fn.at(x)),
            abs(fm.left_limit(x) - fn.left_limit(x)),
        )
    return best


def mass_near_points(
    mu: Measure,
    points: Iterable[Rational],
    delta: Rational,
    wrap: bool = True,
) -> list[Fraction]:
    """Exact mu((t - delta, t + delta)) per point.

    With wrap the neighbourhood lives on the circle; without it the
    interval is clipped to [0, 1], keeping boundary atoms that fall
    strictly inside the open neighbourhood.
    """
    delta = frac(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    out = []
    for p in points:
        t = frac(p)
        if not wrap:
            lo, hi = t - delta, t + delta
            out.append(
                mu.mass_between(
                    max(lo, ZERO),
                    min(hi, ONE),
                    include_lo=lo < 0,
                    include_hi=hi > 1,
                )
            )
            continue
        lo = (t - delta) % 1
        hi = (t + delta) % 1
        if delta > Fraction(1, 2):
            out.append(mu.total_mass)
        elif lo < hi:
            out.append(mu.mass_between(lo, hi, include_lo=False, include_hi=False))
        else:
            total = mu.mass_between(lo, ONE, include_lo=False, include_hi=True)
            total += mu.mass_between(ZERO, hi, include_lo=True, include_hi=False)
            out.append(total)
    return out


def mass_near_breakpoints(mu: Measure, s: Itm, delta: Rational) -> list[Fraction]:
    """Exact mu((t_k - delta, t_k + delta)) for each breakpoint, wrap-aware."""
    return mass_near_points(mu, s.breakpoints, delta, wrap=True)


@dataclass(frozen=True)
class Recurrence:
    """One sampled point with its first eps-return time, if any was found."""

    point: CirclePoint
    time: Optional[int]
    distance: Optional[Fraction]

    @property
    def found(self) -> bool:
        return self.time is not None


def find_recurrent_points(
    s: Itm,
    mu: Measure,
    eps: Rational,
    horizon: int,
    samples: int,
    rng=None,
) -> list[Recurrence]:
    """Search for eps-recurrence from points sampled across supp mu.

    Sample positions are CDF quantiles of mu (a density-weighted grid), or
    random quantile levels when an rng is supplied.  The orbit walk aborts
    early once it revisits a point without having come eps-close, since
    everything after that repeats.
    """
    eps = frac(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    cdf = mu.cdf()
    total = mu.total_mass
    levels = [
        (total * frac(rng.random()).limit_denominator(2**40))
        if rng is not None
        else total * Fraction(2 * i + 1, 2 * samples)
        for i in range(samples)
    ]
    out = []
    for y in levels:
        x = CirclePoint(cdf.quantile(y) % 1)
        found = None
        cur = x
        visited = {cur}
        for m in range(1, horizon + 1):
            cur = s.evaluate(cur)
            d = cur.distance_to(x)
            if d < eps:
                found = Recurrence(x, m, d)
                break
            if cur in visited:
                break
            visited.add(cur)
        out.append(found if found is not None else Recurrence(x, None, None))
    return out
