"""Command line entry point: config-driven pipelines with JSON reports.

Every command reads a JSON config, resolves defaults and flag overrides
into it, runs one pipeline, and prints a self-describing JSON report to
stdout (also written under --out, along with optional CSV tables and
SVG plots).  Given the same config and seed the report is byte
identical except for the generatedAt timestamp.

Exit codes: 0 success, 1 config error, 2 budget exceeded,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from itmlib import __version__
from itmlib.approx import (
    InconsistentRelations,
    OrderViolation,
    detect_convergence,
    detect_relations,
    generate_approximants,
    measure_sequence,
    verify_limit_measure,
)
from itmlib.circle import frac
from itmlib.conjugacy import AtomicMeasure, NotInvariant, induce_iem
from itmlib.families import PolynomialFamily, TrigFamily
from itmlib.itm import (
    DEFAULT_MAX_ARCS,
    DEFAULT_MAX_ITER,
    DEFAULT_ORBIT_BUDGET,
    BudgetExceeded,
    FiniteType,
    Itm,
)
from itmlib.measure import (
    DEFAULT_CYCLE_BUDGET,
    CycleNotFound,
    NotFiniteType,
    attractor_measure,
    invariance_residual_exact,
)
from itmlib.piecewise import (
    HitDiscontinuity,
    PiecewiseMap,
    empirical_measure,
    from_itm,
    visit_frequency,
    wandering_discontinuity_check,
)
from itmlib.plots import attractor_svg, cdf_svg, conjugacy_svg, density_svg
from itmlib.serialize import (
    arcset_to_json,
    cdf_csv,
    conjugacy_csv,
    itm_from_json,
    itm_to_json,
    measure_from_json,
    measure_to_json,
    parse_rational,
    parse_schedule_config,
    piecewise_from_json,
    piecewise_to_json,
    rat,
    relation_to_json,
    visit_frequency_csv,
)

MEASURE_EMBED_LIMIT = 256


class ConfigError(ValueError):
    """Bad config file or flag combination; maps to exit code 1."""


class VerificationFailure(RuntimeError):
    """A pipeline ran but its exact or tolerance check failed; exit code 3."""


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itmlib",
        description="exact experiments with interval translation maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = (
        ("validate", "parse and validate a map config"),
        ("attractor", "iterate forward images until exact stabilization"),
        ("measure", "build the exactly invariant attractor measure"),
        ("homtervals", "classify continuity intervals and periodic domains"),
        ("relations", "harvest exact breakpoint-orbit relations"),
        ("approximate", "run a rational approximant schedule"),
        ("conjugate", "induce and verify the metrically conjugate exchange"),
        ("empirical", "orbit statistics and the Birkhoff empirical measure"),
        ("verify-limit", "test a candidate limit measure against a map"),
    )
    for name, help_text in commands:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", help="directory for report and artifacts")
        p.add_argument("--plot", action="store_true", help="emit SVG plots")
        p.add_argument("--seed", type=int, help="seed for any sampled choices")
        p.add_argument("--max-iter", type=int, dest="max_iter")
        p.add_argument("--max-arcs", type=int, dest="max_arcs")
        p.add_argument("--depth", type=int)
        p.add_argument("--tol", help="tolerance as P/Q")
        p.add_argument("--levels", type=int, help="truncate schedules")
    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    return config


def _map_config(config: dict) -> dict:
    spec = config.get("map", config)
    if not isinstance(spec, dict):
        raise ConfigError("'map' must be a JSON object")
    return spec


def _is_piecewise(spec: dict) -> bool:
    return "pieces" in spec or "domain" in spec


def _build_itm(spec: dict) -> Itm:
    breakpoints = spec.get("breakpoints")
    if isinstance(breakpoints, list):
        values = [parse_rational(b, "breakpoint") for b in breakpoints]
        for i, (a, b) in enumerate(zip(values, values[1:]), start=1):
            if b <= a:
                raise ConfigError(
                    f"breakpoints not strictly increasing at index {i}"
                )
    try:
        return itm_from_json(spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _build_piecewise(spec: dict) -> PiecewiseMap:
    try:
        return piecewise_from_json(spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _load_any_map(config: dict):
    spec = _map_config(config)
    if _is_piecewise(spec):
        return _build_piecewise(spec)
    return _build_itm(spec)


def _int_option(config: dict, args, key: str, flag: str, default: int) -> int:
    value = getattr(args, flag, None)
    if value is None:
        value = config.get(key, default)
    try:
        value = int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'{key}' must be an integer") from exc
    if value < 1:
        raise ConfigError(f"'{key}' must be positive")
    return value


def _tol_option(config: dict, args, key: str, default) -> Fraction:
    value = args.tol if args.tol is not None else config.get(key, default)
    try:
        tol = parse_rational(value, key)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if tol < 0:
        raise ConfigError(f"'{key}' must be nonnegative")
    return tol


def _cmd_validate(config, args):
    spec = _map_config(config)
    if _is_piecewise(spec):
        t = _build_piecewise(spec)
        resolved = {"map": piecewise_to_json(t)}
        payload = {
            "valid": True,
            "kind": "piecewise",
            "pieces": len(t.pieces),
            "discontinuities": [rat(p) for p in t.discontinuities],
        }
    else:
        s = _build_itm(spec)
        resolved = {"map": itm_to_json(s)}
        payload = {
            "valid": True,
            "kind": "itm",
            "pieces": s.n,
            "commonDenominator": s.common_denominator(),
        }
    return resolved, payload, {}


def _cmd_attractor(config, args):
    s = _build_itm(_map_config(config))
    max_iter = _int_option(config, args, "maxIter", "max_iter", DEFAULT_MAX_ITER)
    max_arcs = _int_option(config, args, "maxArcs", "max_arcs", DEFAULT_MAX_ARCS)
    resolved = {"map": itm_to_json(s), "maxIter": max_iter, "maxArcs": max_arcs}
    result = s.attractor(max_iter=max_iter, max_arcs=max_arcs)
    if result.finite_type is not FiniteType.YES:
        raise BudgetExceeded(
            f"no stabilization within {max_iter} iterations (itm.attractor)",
            budget="max_iter",
            value=max_iter,
        )
    payload = {
        "finiteType": result.finite_type.value,
        "stabilizedAt": result.stabilized_at,
        "attractor": arcset_to_json(result.attractor),
        "attractorLength": rat(result.attractor.total_length),
        "arcCount": len(result.attractor.arcs),
    }
    artifacts = {}
    if args.plot:
        artifacts["attractor.svg"] = attractor_svg(result.iterates)
    return resolved, payload, artifacts


def _cmd_measure(config, args):
    s = _build_itm(_map_config(config))
    max_iter = _int_option(config, args, "maxIter", "max_iter", DEFAULT_MAX_ITER)
    max_arcs = _int_option(config, args, "maxArcs", "max_arcs", DEFAULT_MAX_ARCS)
    cycle_budget = _int_option(
        config, args, "cycleBudget", "_none", DEFAULT_CYCLE_BUDGET
    )
    resolved = {
        "map": itm_to_json(s),
        "maxIter": max_iter,
        "maxArcs": max_arcs,
        "cycleBudget": cycle_budget,
    }
    attr = s.attractor(max_iter=max_iter, max_arcs=max_arcs)
    mu = attractor_measure(s, attr, cycle_budget=cycle_budget)
    residual = invariance_residual_exact(s, mu)
    if residual != 0:
        raise VerificationFailure(
            f"invariance residual {residual} is nonzero (measure.attractor_measure)"
        )
    payload = {
        "stabilizedAt": attr.stabilized_at,
        "measure": measure_to_json(mu),
        "invarianceResidualExact": rat(residual),
        "nonAtomic": mu.non_atomic,
    }
    artifacts = {"cdf.csv": cdf_csv(mu)}
    if args.plot:
        artifacts["density.svg"] = density_svg(mu)
        artifacts["cdf.svg"] = cdf_svg(mu)
    return resolved, payload, artifacts


def _cmd_homtervals(config, args):
    s = _build_itm(_map_config(config))
    depth = _int_option(config, args, "depth", "depth", 8)
    orbit_budget = _int_option(
        config, args, "orbitBudget", "_none", DEFAULT_ORBIT_BUDGET
    )
    resolved = {"map": itm_to_json(s), "depth": depth, "orbitBudget": orbit_budget}
    report = s.classify_homtervals(depth, orbit_budget=orbit_budget)
    genericity = (
        "not generic"
        if any(h.resolved for h in report.homtervals)
        else "no periodic domain found"
    )
    payload = {
        "omegaSize": len(report.omega),
        "homtervals": [
            {
                "start": rat(h.arc.start.value),
                "length": rat(h.arc.length),
                "preperiod": h.preperiod,
                "period": h.period,
                "resolved": h.resolved,
            }
            for h in report.homtervals
        ],
        "genericity": genericity,
    }
    return resolved, payload, {}


def _cmd_relations(config, args):
    s = _build_itm(_map_config(config))
    depth = _int_option(config, args, "depth", "depth", 8)
    resolved = {"map": itm_to_json(s), "depth": depth}
    system = detect_relations(s, depth)
    breakpoints = [b.value for b in s.breakpoints]
    payload = {
        "sourceDepth": system.source_depth,
        "relations": [
            {
                **relation_to_json(r),
                "residual": rat(r.residual(breakpoints, list(s.shifts))),
            }
            for r in system.relations
        ],
    }
    return resolved, payload, {}


def _cmd_approximate(config, args):
    try:
        parsed = parse_schedule_config(config)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    max_iter = _int_option(config, args, "maxIter", "max_iter", DEFAULT_MAX_ITER)
    max_arcs = _int_option(config, args, "maxArcs", "max_arcs", DEFAULT_MAX_ARCS)
    tol = _tol_option(config, args, "tol", Fraction(1, 1000))

    try:
        schedule = generate_approximants(
            parsed["target"],
            relations=parsed["relations"],
            denominators=parsed["denominators"],
            precision=parsed["precision"],
        )
    except InconsistentRelations as exc:
        raise ConfigError(f"{exc} (approx.generate_approximants)") from exc
    except OrderViolation as exc:
        raise ConfigError(f"{exc} (approx.generate_approximants)") from exc

    if args.levels is not None:
        if args.levels < 1:
            raise ConfigError("--levels must be positive")
        schedule = type(schedule)(
            target=schedule.target,
            relations=schedule.relations,
            levels=schedule.levels[: args.levels],
        )

    resolved = {
        "target": itm_to_json(schedule.target),
        "declaredRelations": [relation_to_json(r) for r in schedule.relations],
        "denominators": [level.bound for level in schedule.levels],
        "precision": rat(parsed["precision"]),
        "maxIter": max_iter,
        "maxArcs": max_arcs,
        "tol": rat(tol),
    }

    level_measures = measure_sequence(schedule, max_iter=max_iter, max_arcs=max_arcs)
    if all(lm.error is not None for lm in level_measures):
        first = level_measures[0].error
        raise BudgetExceeded(
            f"every level failed, first error: {first} (approx.measure_sequence)",
            budget="levels",
            value=len(level_measures),
        )

    levels_payload = []
    for level, lm in zip(schedule.levels, level_measures):
        entry = {
            "bound": lm.bound,
            "map": itm_to_json(lm.map),
            "distanceToTarget": None if level.distance is None else rat(level.distance),
        }
        if lm.measure is not None:
            entry["stabilizedAt"] = lm.attractor.stabilized_at
            entry["measure"] = measure_to_json(lm.measure)
        else:
            entry["error"] = str(lm.error)
        levels_payload.append(entry)

    mus = [lm.measure for lm in level_measures if lm.measure is not None]
    convergence = detect_convergence(mus, tol) if len(mus) >= 2 else None
    payload = {
        "levels": levels_payload,
        "convergence": None
        if convergence is None
        else {
            "distances": [rat(d) for d in convergence.distances],
            "tol": rat(convergence.tol),
            "cauchyFrom": convergence.cauchy_from,
            "limitCandidate": (
                None
                if convergence.limit_candidate is None
                else measure_to_json(convergence.limit_candidate)
            ),
        },
    }
    artifacts = {}
    if args.plot and mus:
        artifacts["limit-cdf.svg"] = cdf_svg(mus[-1])
    return resolved, payload, artifacts


def _cmd_conjugate(config, args):
    s = _build_itm(_map_config(config))
    samples = _int_option(config, args, "samples", "_none", 10**4)
    if "measure" in config:
        try:
            mu = measure_from_json(config["measure"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"bad measure: {exc}") from exc
    else:
        mu = attractor_measure(s)
    resolved = {
        "map": itm_to_json(s),
        "measure": measure_to_json(mu),
        "samples": samples,
    }
    try:
        data = induce_iem(s, mu, samples=samples)
    except (NotInvariant, AtomicMeasure) as exc:
        raise VerificationFailure(f"{exc} (conjugacy.induce_iem)") from exc
    if data.report.failures or not data.clean_samples:
        problems = ", ".join(data.report.failures) or "semi-conjugacy samples failed"
        raise VerificationFailure(f"{problems} (conjugacy.verify_iem)")
    exceptional = sum(1 for p in data.samples if p.exceptional)
    payload = {
        "tau": [rat(t) for t in data.tau],
        "induced": {
            "breakpoints": [rat(b) for b in data.induced.breakpoints],
            "shifts": [rat(d) for d in data.induced.shifts],
        },
        "verification": {
            "lengthsOk": data.report.lengths_ok,
            "lebesgueOk": data.report.lebesgue_ok,
            "injective": data.report.injective,
            "overlapLength": rat(data.report.overlap_length),
            "failures": list(data.report.failures),
        },
        "semiConjugacy": {
            "samples": len(data.samples),
            "exceptional": exceptional,
            "clean": data.clean_samples,
        },
    }
    artifacts = {"conjugacy.csv": conjugacy_csv(data)}
    if args.plot:
        artifacts["h.svg"] = conjugacy_svg(data)
    return resolved, payload, artifacts


def _cmd_empirical(config, args):
    spec = _map_config(config)
    if _is_piecewise(spec):
        t = _build_piecewise(spec)
        resolved_map = piecewise_to_json(t)
    else:
        t = from_itm(_build_itm(spec))
        resolved_map = piecewise_to_json(t)
    m = _int_option(config, args, "m", "_none", 1000)
    if "x0" in config:
        x0 = parse_rational(config["x0"], "x0")
    else:
        rng = random.Random(args.seed if args.seed is not None else 0)
        x0 = Fraction(rng.randrange(1, 2**20), 2**20)
    resolved = {"map": resolved_map, "m": m, "x0": rat(x0)}
    if args.seed is not None:
        resolved["seed"] = args.seed

    try:
        emp = empirical_measure(t, x0, m)
    except HitDiscontinuity as exc:
        raise VerificationFailure(f"{exc} (piecewise.orbit)") from exc
    payload = {
        "m": emp.m,
        "basePoint": rat(emp.base_point),
        "nextPoint": rat(emp.next_point),
        "defect": rat(emp.defect),
        "defectVerified": emp.verify_defect(),
        "distinctAtoms": len(emp.measure.atoms),
    }
    if len(emp.measure.atoms) <= MEASURE_EMBED_LIMIT:
        payload["measure"] = measure_to_json(emp.measure)

    artifacts = {}
    if "epsilons" in config:
        epsilons = [parse_rational(e, "epsilon") for e in config["epsilons"]]
        ms = config.get("orbitLengths", m)
        ms = [int(v) for v in ms] if isinstance(ms, list) else int(ms)
        resolved["epsilons"] = [rat(e) for e in epsilons]
        resolved["orbitLengths"] = ms if isinstance(ms, list) else [ms]
        try:
            table = visit_frequency(t, x0, ms, epsilons)
        except (ValueError, HitDiscontinuity) as exc:
            raise VerificationFailure(
                f"{exc} (piecewise.visit_frequency)"
            ) from exc
        payload["visitFrequency"] = {
            "entries": [
                {"m": e.m, "eps": rat(e.eps), "f": rat(e.frequency)}
                for e in table.entries
            ],
            "verdict": table.verdict.value,
        }
        artifacts["visit-frequency.csv"] = visit_frequency_csv(table)

    if "wandering" in config:
        wcfg = config["wandering"]
        try:
            radii = [parse_rational(r, "radius") for r in wcfg["radii"]]
            horizon = int(wcfg["horizon"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad wandering config: {exc}") from exc
        resolved["wandering"] = {
            "radii": [rat(r) for r in radii],
            "horizon": horizon,
        }
        probes = wandering_discontinuity_check(t, radii, horizon)
        payload["wandering"] = [
            {
                "point": rat(p.point),
                "radius": rat(p.radius),
                "verdict": p.verdict,
                "witness": None if p.witness is None else rat(p.witness),
                "returnTime": p.return_time,
            }
            for p in probes
        ]
    if args.plot:
        artifacts["empirical-cdf.svg"] = cdf_svg(emp.measure)
    return resolved, payload, artifacts


def _cmd_verify_limit(config, args):
    target = _load_any_map(config)
    if "measure" not in config:
        raise ConfigError("verify-limit needs a 'measure' entry")
    try:
        mu = measure_from_json(config["measure"])
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad measure: {exc}") from exc
    tol_mass = _tol_option(config, args, "tolMass", Fraction(1, 100))
    tol_res = float(config.get("tolResidual", 1e-6))
    family_cfg = config.get("family", {"kind": "trig", "degree": 8})
    kind = family_cfg.get("kind", "trig")
    degree = int(family_cfg.get("degree", 8))
    if kind == "trig":
        family = TrigFamily(degree)
    elif kind == "polynomial":
        family = PolynomialFamily(degree)
    else:
        raise ConfigError(f"unknown family kind: {kind!r}")
    deltas = None
    if "deltas" in config:
        deltas = [parse_rational(d, "delta") for d in config["deltas"]]

    resolved = {
        "map": (
            piecewise_to_json(target)
            if isinstance(target, PiecewiseMap)
            else itm_to_json(target)
        ),
        "measure": measure_to_json(mu),
        "tolMass": rat(tol_mass),
        "tolResidual": tol_res,
        "family": {"kind": kind, "degree": degree},
    }
    if deltas is not None:
        resolved["deltas"] = [rat(d) for d in deltas]

    report = verify_limit_measure(
        target, mu, tol_mass=tol_mass, tol_res=tol_res, deltas=deltas, family=family
    )
    payload = {
        "deltas": [rat(d) for d in report.deltas],
        "massNearDiscontinuities": [rat(v) for v in report.masses],
        "massOk": report.mass_ok,
        "residual": report.residual,
        "residualOk": report.residual_ok,
        "failures": list(report.failures),
    }
    if report.failures:
        message = "; ".join(report.failures)
        raise VerificationFailure(
            f"{message} (approx.verify_limit_measure)", payload
        )
    return resolved, payload, {}


HANDLERS: dict[str, Callable] = {
    "validate": _cmd_validate,
    "attractor": _cmd_attractor,
    "measure": _cmd_measure,
    "homtervals": _cmd_homtervals,
    "relations": _cmd_relations,
    "approximate": _cmd_approximate,
    "conjugate": _cmd_conjugate,
    "empirical": _cmd_empirical,
    "verify-limit": _cmd_verify_limit,
}


def _emit(command: str, resolved: dict, payload: dict, artifacts: dict, args) -> None:
    report = {
        "command": command,
        "version": __version__,
        "generatedAt": datetime.now(timezone.utc).isoformat(),
        "config": resolved,
        **payload,
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text + "\n", encoding="utf-8")
        for name, content in artifacts.items():
            (out / name).write_text(content, encoding="utf-8")


def main(argv: Optional[list] = None) -> int:
    args = _parser().parse_args(argv)
    command = args.command
    try:
        config = _load_config(args.config)
        resolved, payload, artifacts = HANDLERS[command](config, args)
    except ConfigError as exc:
        print(f"{command}: {exc}", file=sys.stderr)
        return 1
    except (BudgetExceeded, NotFiniteType, CycleNotFound) as exc:
        print(f"{command}: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print(f"{command}: {exc.args[0]}", file=sys.stderr)
        if len(exc.args) > 1 and isinstance(exc.args[1], dict):
            print(json.dumps(exc.args[1], indent=2, sort_keys=True))
        return 3
    _emit(command, resolved, payload, artifacts, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
