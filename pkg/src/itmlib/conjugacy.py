"""Metric conjugacy between a map with an invariant measure and an IEM.

Given an exactly invariant non-atomic probability measure mu for a map S,
the distribution function h(x) = mu([0, x]) transports mu to Lebesgue
measure, and y -> h(S(hbar(y))) with hbar the rightmost inverse of h is an
interval exchange on [0, 1).  Everything is exact: the induced shifts, the
semi-conjugacy samples, and the verification that the result preserves
Lebesgue measure and is injective up to measure zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from itmlib.circle import ONE, ZERO, Arc, ArcSet, CirclePoint, Rational, frac
from itmlib.itm import Itm
from itmlib.measure import (
    AtomicMeasure,
    Cdf,
    Measure,
    invariance_residual_exact,
)

DEFAULT_SEMICONJUGACY_SAMPLES = 1024


class NotInvariant(ValueError):
    """The measure is not exactly invariant under the map."""


def build_h(mu: Measure) -> Cdf:
    """The transport map h(x) = mu([0, x]) for a non-atomic probability measure."""
    if mu.atoms:
        raise AtomicMeasure("h requires a non-atomic measure")
    if mu.total_mass != 1:
        raise ValueError("h requires a probability measure")
    return mu.cdf()


def build_hbar(h: Cdf) -> Callable[[Rational], Fraction]:
    """The rightmost inverse: hbar(y) = max{x : h(x) = y}, exact."""
    return h.rightmost_preimage


@dataclass(frozen=True)
class Iem:
    """Interval exchange data: piece starts tau_j and shifts d_j on [0, 1).

    injective is the a.e.-injectivity verdict recorded by verification
    (None when not yet verified).  as_itm() exposes the same map to the
    arc/measure machinery.
    """

    breakpoints: tuple[Fraction, ...]
    shifts: tuple[Fraction, ...]
    injective: Optional[bool] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "breakpoints", tuple(frac(b) for b in self.breakpoints))
        object.__setattr__(self, "shifts", tuple(frac(c) % 1 for c in self.shifts))

    def as_itm(self) -> Itm:
        return Itm(
            tuple(CirclePoint(b) for b in self.breakpoints), self.shifts
        )

    def canonical(self) -> "Iem":
        """Merge adjacent pieces with equal shifts; drops the verdict flag."""
        m = self.as_itm().merged()
        return Iem(
            tuple(p.value for p in m.breakpoints), m.shifts, injective=self.injective
        )

    def evaluate(self, y: Rational) -> Fraction:
        return self.as_itm().evaluate(CirclePoint(frac(y))).value

    @classmethod
    def identity(cls) -> "Iem":
        return cls((ZERO,), (ZERO,), injective=True)

    @classmethod
    def rotation(cls, c: Rational) -> "Iem":
        return cls((ZERO,), (frac(c),), injective=True)

    def same_map(self, other: "Iem") -> bool:
        a, b = self.canonical(), other.canonical()
        return a.breakpoints == b.breakpoints and a.shifts == b.shifts


@dataclass(frozen=True)
class IemReport:
    """Verification outcome: exact length, measure, and injectivity checks."""

    lengths_ok: bool
    lebesgue_ok: bool
    injective: bool
    overlap_length: Fraction
    failures: tuple[str, ...]

    @property
    def all_ok(self) -> bool:
        return self.lengths_ok and self.lebesgue_ok and self.injective


def verify_iem(iem: Iem) -> IemReport:
    """Check (a) pieces translate isometrically, (b) Lebesgue measure is
    preserved on the refinement cut by all image endpoints, (c) images of
    distinct pieces overlap only in zero length."""
    m = iem.as_itm()
    failures: list[str] = []

    lengths_ok = True
    images: list[ArcSet] = []
    total = ZERO
    for j in range(m.n):
        piece = ArcSet([m.piece(j)])
        img = piece.translate(m.shifts[j])
        images.append(img)
        total += piece.total_length
        if img.total_length != piece.total_length:
            lengths_ok = False
            failures.append(f"piece {j} image length differs")
    if total != 1:
        lengths_ok = False
        failures.append("piece lengths do not sum to 1")

    overlap = ZERO
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            overlap += images[i].intersect(images[j]).total_length
    injective = overlap == 0
    if not injective:
        failures.append(f"piece images overlap in total length {overlap}")

    cut_set = {ZERO}
    for img in images:
        for lo, hi in img.segments():
            cut_set.add(lo)
            if hi < ONE:
                cut_set.add(hi)
    cuts = sorted(cut_set)
    lebesgue_ok = True
    for i, lo in enumerate(cuts):
        hi = cuts[i + 1] if i + 1 < len(cuts) else ONE
        cell = ArcSet.from_segments([(lo, hi)])
        pre = m.preimage(cell)
        if pre.total_length != cell.total_length:
            lebesgue_ok = False
            failures.append(f"Lebesgue mass of [{lo},{hi}) changes under preimage")
    return IemReport(lengths_ok, lebesgue_ok, injective, overlap, tuple(failures))


@dataclass(frozen=True)
class SemiConjugacySample:
    """One sampled x with its exact check of h(S(x)) = T(h(x))."""

    x: Fraction
    exceptional: bool
    ok: bool


@dataclass(frozen=True)
class ConjugacyData:
    """The full conjugacy package: h, tau, the induced exchange, verification."""

    source_map: Itm
    mu: Measure
    h: Cdf
    tau: tuple[Fraction, ...]
    induced: Iem
    report: IemReport
    samples: tuple[SemiConjugacySample, ...]

    @property
    def clean_samples(self) -> bool:
        return all(s.ok for s in self.samples if not s.exceptional)

    def is_exceptional(self, x: Rational) -> bool:
        """Exact membership in the exceptional set: x outside the open
        interior of supp mu, where h is locally constant or kinks."""
        x = frac(x)
        for lo, hi, _ in self.mu.density:
            if lo < x < hi:
                return False
        return True


def induce_iem(
    s: Itm,
    mu: Measure,
    samples: int = DEFAULT_SEMICONJUGACY_SAMPLES,
) -> ConjugacyData:
    """Build the interval exchange metrically conjugate to (S, mu).

    The circle is cut at 0 (adding 0 as an artificial breakpoint if
    needed); pieces of zero mu-mass collapse and vanish.  Each connected
    component of the support within a piece becomes one exchange piece,
    with its shift computed exactly at the component midpoint; the
    semi-conjugacy is then sampled on a grid and the exchange is
    verified exactly.
    """
    if mu.atoms:
        raise AtomicMeasure("conjugacy requires a non-atomic measure")
    if mu.total_mass != 1:
        raise ValueError("conjugacy requires a probability measure")
    if invariance_residual_exact(s, mu) != 0:
        raise NotInvariant("measure is not exactly invariant under the map")

    cut = s.with_breakpoint(CirclePoint(ZERO))
    h = build_h(mu)
    tau = tuple(h.at(t.value) for t in cut.breakpoints) + (ONE,)

    # One exchange piece per connected component of supp mu within a piece
    # of the cut map: across a support gap h(S(x)) can jump while h(x)
    # stays flat, so the tau intervals alone may be too coarse.
    supp = mu.support()
    starts: list[Fraction] = []
    shifts: list[Fraction] = []
    for j in range(cut.n):
        carried = supp & ArcSet((cut.piece(j),))
        for lo, hi in carried.segments():
            mid = (lo + hi) / 2
            image = h.at(cut.evaluate(CirclePoint(mid)).value)
            starts.append(h.at(lo))
            shifts.append((image - h.at(mid)) % 1)
    if not starts:
        starts, shifts = [ZERO], [ZERO]

    induced_raw = Iem(tuple(starts), tuple(shifts))
    report = verify_iem(induced_raw)
    induced = Iem(induced_raw.breakpoints, induced_raw.shifts, report.injective)

    t_of = induced.as_itm()
    sample_list = []
    for i in range(samples):
        x = Fraction(2 * i + 1, 2 * samples)
        exceptional = True
        for lo, hi, _ in mu.density:
            if lo < x < hi:
                exceptional = False
                break
        lhs = h.at(s.evaluate(CirclePoint(x)).value)
        rhs = t_of.evaluate(CirclePoint(h.at(x))).value
        sample_list.append(SemiConjugacySample(x, exceptional, lhs == rhs))
    return ConjugacyData(
        source_map=s,
        mu=mu,
        h=h,
        tau=tau,
        induced=induced,
        report=report,
        samples=tuple(sample_list),
    )
