"""Lossless JSON and CSV forms for maps, arc sets, measures, and schedules.

Rationals serialize as strings "p/q" in lowest terms (integers without
the denominator).  Parsing accepts those strings, JSON integers, and
decimal strings like "0.618", which are read exactly; an approximation
target given as a decimal should carry its precision in the config.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence

from itmlib.approx import Relation
from itmlib.circle import Arc, ArcSet, CirclePoint, frac
from itmlib.conjugacy import ConjugacyData
from itmlib.itm import Itm
from itmlib.measure import Cdf, Measure
from itmlib.piecewise import (
    AffinePiece,
    Domain,
    PiecewiseMap,
    VisitFrequencyTable,
)


def rat(x) -> str:
    return str(frac(x))


def parse_rational(v: Any, what: str = "rational") -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str, Fraction)):
        raise ValueError(f"{what} must be an integer or a 'p/q' string: {v!r}")
    try:
        return frac(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad {what}: {v!r}") from exc


def itm_to_json(s: Itm) -> dict:
    return {
        "breakpoints": [rat(b.value) for b in s.breakpoints],
        "shifts": [rat(c) for c in s.shifts],
    }


def itm_from_json(d: Mapping) -> Itm:
    try:
        bps = d["breakpoints"]
        shs = d["shifts"]
    except (KeyError, TypeError) as exc:
        raise ValueError("map JSON needs 'breakpoints' and 'shifts'") from exc
    return Itm(
        tuple(CirclePoint(parse_rational(b, "breakpoint")) for b in bps),
        tuple(parse_rational(c, "shift") for c in shs),
    )


def arcset_to_json(a: ArcSet) -> dict:
    return {
        "arcs": [
            {"start": rat(arc.start.value), "length": rat(arc.length)}
            for arc in a.arcs
        ]
    }


def arcset_from_json(d: Mapping) -> ArcSet:
    arcs = tuple(
        Arc(
            CirclePoint(parse_rational(e["start"], "arc start")),
            parse_rational(e["length"], "arc length"),
        )
        for e in d["arcs"]
    )
    return ArcSet(arcs)


def measure_to_json(mu: Measure) -> dict:
    return {
        "density": [
            {
                "arc": {"start": rat(lo), "length": rat(hi - lo)},
                "weight": rat(w),
            }
            for lo, hi, w in mu.density
        ],
        "atoms": [
            {"point": rat(p), "mass": rat(m)} for p, m in mu.atoms
        ],
    }


def measure_from_json(d: Mapping) -> Measure:
    density = []
    for e in d.get("density", ()):
        lo = parse_rational(e["arc"]["start"], "density start")
        length = parse_rational(e["arc"]["length"], "density length")
        density.append((lo, lo + length, parse_rational(e["weight"], "weight")))
    atoms = [
        (parse_rational(e["point"], "atom point"), parse_rational(e["mass"], "atom mass"))
        for e in d.get("atoms", ())
    ]
    return Measure(tuple(density), tuple(atoms))


def piecewise_to_json(t: PiecewiseMap) -> dict:
    pieces = []
    for p in t.pieces:
        if not isinstance(p, AffinePiece):
            raise ValueError("black-box pieces have no serial form")
        pieces.append(
            {
                "interval": [rat(p.lo), rat(p.hi)],
                "affine": {"a": rat(p.a), "b": rat(p.b)},
            }
        )
    return {
        "domain": t.domain.value,
        "pieces": pieces,
        "boundaryValues": {rat(p): rat(v) for p, v in t.boundary_values},
        "discontinuities": [rat(p) for p in t.discontinuities],
    }


def piecewise_from_json(d: Mapping) -> PiecewiseMap:
    try:
        domain = Domain(d["domain"])
        raw_pieces = d["pieces"]
    except (KeyError, ValueError, TypeError) as exc:
        raise ValueError("piecewise JSON needs 'domain' and 'pieces'") from exc
    pieces = tuple(
        AffinePiece(
            parse_rational(e["interval"][0], "piece start"),
            parse_rational(e["interval"][1], "piece end"),
            parse_rational(e["affine"]["a"], "coefficient a"),
            parse_rational(e["affine"]["b"], "coefficient b"),
        )
        for e in raw_pieces
    )
    bvs = tuple(
        (parse_rational(p, "boundary point"), parse_rational(v, "boundary value"))
        for p, v in d.get("boundaryValues", {}).items()
    )
    disc = d.get("discontinuities")
    return PiecewiseMap(
        domain=domain,
        pieces=pieces,
        boundary_values=bvs,
        discontinuities=(
            tuple(parse_rational(p, "discontinuity") for p in disc)
            if disc is not None
            else None
        ),
    )


def relation_to_json(r: Relation) -> dict:
    out = {"i": r.i, "j": r.j, "l": list(r.l), "w": r.w}
    if r.itinerary is not None:
        out["side"] = r.side.value
        out["itinerary"] = list(r.itinerary)
    return out


def relation_from_json(d: Mapping) -> Relation:
    try:
        return Relation(
            i=int(d["i"]), j=int(d["j"]), l=tuple(int(v) for v in d["l"]), w=int(d["w"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad relation entry: {d!r}") from exc


def parse_schedule_config(d: Mapping) -> dict:
    """Read an approximation schedule config into constructor arguments.

    Returns target (Itm), relations (list or None), denominators (list or
    None), and precision (Fraction).  Decimal coordinate strings parse
    exactly; the precision field widens the declared-relation residual
    check accordingly.
    """
    target = itm_from_json(d.get("target", d))
    relations = None
    if "declaredRelations" in d:
        relations = [relation_from_json(e) for e in d["declaredRelations"]]
    denominators = None
    if "denominators" in d:
        denominators = [int(q) for q in d["denominators"]]
        if any(q < 1 for q in denominators):
            raise ValueError("denominators must be positive")
    precision = parse_rational(d.get("precision", 0), "precision")
    return {
        "target": target,
        "relations": relations,
        "denominators": denominators,
        "precision": precision,
    }


def cdf_csv(mu: Measure, points: Optional[Sequence] = None) -> str:
    """CSV with columns x,F(x), exact, at the CDF breaklist by default."""
    cdf = Cdf(mu)
    xs = cdf.cuts if points is None else tuple(frac(p) for p in points)
    lines = ["x,F(x)"]
    for x in xs:
        lines.append(f"{rat(x)},{rat(cdf.at(x))}")
    return "\n".join(lines) + "\n"


def visit_frequency_csv(table: VisitFrequencyTable) -> str:
    """CSV with columns m,eps,f, exact."""
    lines = ["m,eps,f"]
    for e in table.entries:
        lines.append(f"{e.m},{rat(e.eps)},{rat(e.frequency)}")
    return "\n".join(lines) + "\n"


def conjugacy_csv(data: ConjugacyData) -> str:
    """CSV with columns x,h(x) at the sampled semi-conjugacy points."""
    lines = ["x,h(x)"]
    for s in data.samples:
        lines.append(f"{rat(s.x)},{rat(data.h.at(s.x))}")
    return "\n".join(lines) + "\n"
