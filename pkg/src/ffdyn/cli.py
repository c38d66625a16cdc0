"""Command-line front end: analyze maps, print indicatrices, verify bounds,
compare theory against brute force, sweep prime ranges, evaluate family
thresholds.  Reports are plain JSON or CSV and are byte-identical across runs
with the same configuration."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional

from . import dynamics, groups, theory
from .dynamics import RationalMap
from .errors import (
    DegenerateMapError,
    FfdynError,
    MapSpecError,
    ParameterOutOfRangeError,
    UnsupportedFamilyError,
)
from .intervals import DEFAULT_EXACT_BITS, DEFAULT_PRECISION
from .primefield import is_prime

SCHEMA_VERSION = 1

# Bad inputs exit 2; failures while computing (inseparable maps, exceeded
# budgets, void bounds) exit 3.
_PARSE_ERRORS = (
    MapSpecError,
    UnsupportedFamilyError,
    ParameterOutOfRangeError,
    DegenerateMapError,
    ValueError,
)
_RUNTIME_ERRORS = (FfdynError,)


def _emit(doc, out: Optional[str], fmt: str, csv_lines=None) -> None:
    if fmt == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        if csv_lines is None:
            raise ValueError("this command has no CSV form")
        text = "\n".join(csv_lines) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _point_str(pt) -> str:
    return str(pt)


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(args) -> int:
    phi = RationalMap.parse(args.map)
    graph = dynamics.build_graph(phi, engine=args.engine)
    n = args.n
    doc = {
        "schema_version": SCHEMA_VERSION,
        "map": phi.describe(),
        "degree": phi.degree,
        "image_sizes": dynamics.image_sizes(graph, n),
        "affine_image_sizes": dynamics.affine_image_sizes(graph, n),
        "periodic_count": graph.periodic_count,
        "cycle_lengths": list(graph.cycle_lengths),
        "max_tail_length": dynamics.max_tail_length(graph),
        "bijective": dynamics.is_bijection(graph),
    }
    if args.fiber_n > 0:
        if args.fiber_sample:
            fiber = dynamics.fiber_histogram(
                phi,
                args.fiber_n,
                mode="sample",
                sample_count=args.fiber_sample,
                seed=args.seed,
                graph=graph,
            )
        else:
            fiber = dynamics.fiber_histogram(phi, args.fiber_n, graph=graph)
        doc["fiber"] = {
            "n": fiber.n,
            "mode": fiber.mode,
            "proportions": {str(k): str(v) for k, v in fiber.proportions.items()},
            "targets_considered": fiber.targets_considered,
            "infinity_hits": fiber.infinity_hits,
        }
    orbit = dynamics.check_orbit_separation(phi, n, graph=graph)
    doc["critical"] = {
        "finite": [list(cm) for cm in orbit.critical.finite],
        "infinity_is_critical": orbit.critical.infinity_is_critical,
        "characteristic_small": orbit.critical.characteristic_small,
    }
    doc["orbit_separation"] = {
        "n_max": orbit.n_max,
        "separated": orbit.separated,
        "certified_up_to": orbit.certified_up_to,
        "first_collision": list(orbit.first_collision)
        if orbit.first_collision
        else None,
        "orbits": {
            str(c): [_point_str(v) for v in vals]
            for c, vals in sorted(orbit.orbits.items())
        },
    }
    doc["tameness_advisory_ok"] = dynamics.tameness_advisory(phi, orbit.critical)
    _emit(doc, args.out, args.format)
    return 0


# ---------------------------------------------------------------------------
# indicatrix


_FAMILY_RE = re.compile(r"[CSAD]\d+")


def _parse_group_spec(spec: str, degree: Optional[int]) -> groups.PermutationSet:
    """A base group given either as a family name (A3) or as semicolon
    separated generators ("(0 1); (0 1 2 3)")."""
    spec = spec.strip()
    if _FAMILY_RE.fullmatch(spec):
        fam, d = groups.parse_family(spec)
        return groups.make_group(fam, d)
    gens = [
        groups.parse_permutation(tok.strip()) for tok in spec.split(";") if tok.strip()
    ]
    if not gens:
        raise MapSpecError(f"no generators in group spec {spec!r}")
    deg = max([g.degree for g in gens] + [degree or 1])
    gens = [
        groups.Permutation(g.images + tuple(range(g.degree, deg))) for g in gens
    ]
    return groups.generate_from(gens, degree=deg)


def cmd_indicatrix(args) -> int:
    base_spec = args.group or args.family
    if base_spec is None:
        raise MapSpecError("need --family or --group")
    if args.coset is None and _FAMILY_RE.fullmatch(base_spec.strip()):
        fam, d = groups.parse_family(base_spec)
        phi = groups.closed_form_indicatrix(fam, d)
        subject = base_spec.strip()
        transitive = not (fam == "A" and d == 2)
        fpp_free = phi.at_zero > 0
    else:
        base = _parse_group_spec(base_spec, args.degree)
        if args.coset:
            tau = groups.parse_permutation(args.coset, degree=base.degree)
            gamma = groups.make_coset(tau, base)
            subject = f"{args.coset} . {base_spec.strip()}"
        else:
            gamma = base
            subject = base_spec.strip()
        phi = groups.indicatrix(gamma)
        transitive = groups.is_transitive(base)
        fpp_free = groups.has_fixed_point_free_element(gamma)
    d1, d2 = groups.derivative_invariants(phi)
    fpps = groups.fpp_sequence(
        phi, args.n, exact_bits=args.exact_bits, prec=args.precision
    )
    doc = {
        "schema_version": SCHEMA_VERSION,
        "subject": subject,
        "coefficients": phi.fraction_strings(),
        "pretty": phi.pretty(),
        "degree": phi.degree,
        "derivative_at_1": str(d1),
        "second_derivative_at_1": str(d2),
        "has_fixed_point_free_element": fpp_free,
        "base_group_transitive": transitive,
        "fpp": [
            {"n": i + 1, "value": str(v), "mode": v.mode, "float": v.approx}
            for i, v in enumerate(fpps)
        ],
    }
    csv_lines = ["n,fpp,mode,float"] + [
        f"{i + 1},{v},{v.mode},{v.approx!r}" for i, v in enumerate(fpps)
    ]
    _emit(doc, args.out, args.format, csv_lines)
    return 0


# ---------------------------------------------------------------------------
# bounds


def cmd_bounds(args) -> int:
    fam = args.family.rstrip("d")
    report = theory_verify_bounds(
        fam, args.d, args.n_max, args.exact_bits, args.precision
    )
    rows = [
        {
            "n": r.n,
            "fpp": str(r.fpp),
            "fpp_mode": r.fpp.mode,
            "lower": r.lower,
            "upper": r.upper,
            "pass": r.passed,
            "lower_strict": r.lower_strict,
            "upper_strict": r.upper_strict,
            "equality": r.lower_equality or r.upper_equality,
        }
        for r in report.rows
    ]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "family": report.family,
        "d": report.d,
        "n_max": report.n_max,
        "all_pass": report.all_pass,
        "rows": rows,
    }
    csv_lines = ["n,fpp,lower,upper,pass"] + [
        f"{r['n']},{r['fpp']},{r['lower']},{r['upper']},{r['pass']}" for r in rows
    ]
    _emit(doc, args.out, args.format, csv_lines)
    return 0


def theory_verify_bounds(fam, d, n_max, exact_bits, prec):
    return groups.verify_fpp_bounds(fam, d, n_max, exact_bits=exact_bits, prec=prec)


# ---------------------------------------------------------------------------
# compare and sweep


def _run_compare(map_text, hypothesis, n, coset, M, engine, exact_bits, prec):
    phi = RationalMap.parse(map_text)
    tau = None
    if coset:
        fam, d = groups.parse_family(hypothesis)
        tau = groups.parse_permutation(coset, degree=d)
    return theory.compare(
        phi,
        hypothesis,
        n,
        tau=tau,
        M=Fraction(M),
        engine=engine,
        exact_bits=exact_bits,
        prec=prec,
    )


def cmd_compare(args) -> int:
    report = _run_compare(
        args.map,
        args.hypothesis,
        args.n,
        args.coset,
        args.M,
        args.engine,
        args.exact_bits,
        args.precision,
    )
    _emit(report.to_dict(), args.out, args.format, report.to_csv_lines())
    return 0


def _parse_prime_range(spec: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)\.\.(\d+)", spec.strip())
    if not m:
        raise MapSpecError(f"prime range must look like 10000..11000, got {spec!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise MapSpecError("empty prime range")
    return lo, hi


def _parse_filter(spec: str) -> Optional[tuple[int, int]]:
    spec = spec.strip()
    if spec == "all":
        return None
    m = re.fullmatch(r"(\d+)\s*mod\s*(\d+)", spec)
    if not m:
        raise MapSpecError(f'filter must be "all" or "<r> mod <m>", got {spec!r}')
    return int(m.group(1)), int(m.group(2))


def _sweep_worker(task):
    map_text, hypothesis, n, M, exact_bits, prec = task
    try:
        report = _run_compare(
            map_text, hypothesis, n, None, M, "auto", exact_bits, prec
        )
        return {"status": "ok", "report": report.to_dict()}
    except Exception as exc:  # per-prime failures preserved in the output
        return {"status": "error", "map": map_text, "error": str(exc)}


def cmd_sweep(args) -> int:
    lo, hi = _parse_prime_range(args.primes)
    congruence = _parse_filter(args.filter)
    primes = [
        p
        for p in range(max(2, lo), hi + 1)
        if (congruence is None or p % congruence[1] == congruence[0] % congruence[1])
        and is_prime(p)
    ]
    if not primes:
        raise MapSpecError("no primes satisfy the range and filter")
    template = args.map_template.strip().strip(";")
    probe = RationalMap.parse(f"p={primes[0]}; {template}")
    hypothesis = args.hypothesis or f"S{probe.degree}"
    tasks = [
        (
            f"p={p}; {template}",
            hypothesis,
            args.n,
            args.M,
            args.exact_bits,
            args.precision,
        )
        for p in primes
    ]
    workers = args.workers or os.cpu_count() or 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_worker, tasks))
    else:
        results = [_sweep_worker(t) for t in tasks]
    per_prime = [
        {"p": p, **res} for p, res in sorted(zip(primes, results), key=lambda t: t[0])
    ]
    ok_reports = [r["report"] for r in per_prime if r["status"] == "ok"]
    aggregate = []
    for idx in range(args.n):
        devs, ratios = [], []
        for rep in ok_reports:
            row = rep["rows"][idx]
            devs.append(row["deviation"])
            ratios.append(row["ratio"])
        if devs:
            aggregate.append(
                {
                    "n": idx + 1,
                    "primes": len(devs),
                    "mean_ratio": sum(ratios) / len(ratios),
                    "mean_deviation": sum(devs) / len(devs),
                    "max_deviation": max(devs),
                }
            )
    doc = {
        "schema_version": SCHEMA_VERSION,
        "template": template,
        "hypothesis": hypothesis,
        "n": args.n,
        "prime_range": [lo, hi],
        "filter": args.filter,
        "primes": primes,
        "per_prime": per_prime,
        "aggregate": aggregate,
    }
    csv_lines = ["n,primes,mean_ratio,mean_deviation,max_deviation"] + [
        f"{a['n']},{a['primes']},{a['mean_ratio']!r},{a['mean_deviation']!r},{a['max_deviation']!r}"
        for a in aggregate
    ]
    _emit(doc, args.out, args.format, csv_lines)
    return 3 if any(r["status"] != "ok" for r in per_prime) else 0


# ---------------------------------------------------------------------------
# family


def cmd_family(args) -> int:
    doc = {"schema_version": SCHEMA_VERSION}
    if args.type:
        ft = theory.family_threshold(args.type, args.n, args.a, args.c, args.d)
        doc["family"] = {
            "type": ft.family,
            "params": ft.params,
            "n": ft.n,
            "characteristic_threshold": str(ft.threshold),
            "congruence": f"q = {ft.congruence[0]} mod {ft.congruence[1]}"
            if ft.congruence
            else None,
            "note": ft.note,
        }
        coeffs = theory.family_map_coeffs(args.type, args.a, args.c or 0, args.d or 2)
    else:
        try:
            coeffs = [int(tok) for tok in args.poly.split(",")]
        except ValueError as exc:
            raise MapSpecError(f"bad integer coefficients {args.poly!r}") from exc
    doc["polynomial"] = ",".join(str(c) for c in coeffs)
    height = theory.height_constants(coeffs)
    orbit = theory.exact_orbit_distinctness(coeffs, args.n)
    doc["height"] = {
        "critical_points": [list(cm) for cm in height.critical],
        "drift_constant": height.drift_constant,
        "critical_height": height.critical_height,
        "C": height.C,
        "D": height.D,
        "B": height.B,
        "A": height.A,
        "prime_threshold": str(height.prime_threshold(args.n)),
    }
    doc["orbit"] = {
        "n": orbit.n_max,
        "distinct": orbit.distinct,
        "first_collision": list(orbit.first_collision)
        if orbit.first_collision
        else None,
        "max_abs_value": str(orbit.max_abs_value),
        "sharp_prime_threshold": str(orbit.sharp_prime_threshold),
        "orbits": {str(c): [str(v) for v in vals] for c, vals in orbit.orbits.items()},
    }
    _emit(doc, args.out, args.format)
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(sub, fmt_csv=True):
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument(
        "--format",
        default="json",
        choices=("json", "csv") if fmt_csv else ("json",),
    )
    sub.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    sub.add_argument("--exact-bits", dest="exact_bits", type=int, default=DEFAULT_EXACT_BITS)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ffdyn",
        description="Iterated rational-map statistics over prime fields, "
        "with wreath-product theory predictions.",
    )
    sp = ap.add_subparsers(dest="command", required=True)

    a = sp.add_parser("analyze", help="graph statistics of one map")
    a.add_argument("--map", required=True, help='e.g. "p=5; num=1,0,1"')
    a.add_argument("--n", type=int, default=6, help="max iterate")
    a.add_argument("--fiber-n", dest="fiber_n", type=int, default=1)
    a.add_argument("--fiber-sample", dest="fiber_sample", type=int, default=0)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--engine", default="auto", choices=("auto", "python", "numpy"))
    _add_common(a, fmt_csv=False)
    a.set_defaults(func=cmd_analyze)

    i = sp.add_parser("indicatrix", help="exact indicatrix of a group or coset")
    i.add_argument("--family", default=None, help="e.g. S3, C4, A5, D6")
    i.add_argument("--gens", default=None, help='generators, e.g. "(0 1); (0 1 2 3)"')
    i.add_argument("--coset", default=None, help='coset representative, e.g. "(0 1)"')
    i.add_argument("--degree", type=int, default=None)
    i.add_argument("--n", type=int, default=10, help="FPP table depth")
    _add_common(i)
    i.set_defaults(func=cmd_indicatrix)

    b = sp.add_parser("bounds", help="verify the explicit FPP bound propositions")
    b.add_argument("--family", required=True, help="Cd, Sd, Ad or Dd")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--n-max", dest="n_max", type=int, default=20)
    _add_common(b)
    b.set_defaults(func=cmd_bounds)

    c = sp.add_parser("compare", help="empirical image sizes vs prediction")
    c.add_argument("--map", required=True)
    c.add_argument("--hypothesis", required=True, help="e.g. S2")
    c.add_argument("--coset", default=None)
    c.add_argument("--n", type=int, default=6)
    c.add_argument("--M", type=int, default=3, help="Chebotarev constant M")
    c.add_argument("--engine", default="auto", choices=("auto", "python", "numpy"))
    _add_common(c)
    c.set_defaults(func=cmd_compare)

    s = sp.add_parser("sweep", help="compare across a prime range, in parallel")
    s.add_argument("--map-template", dest="map_template", required=True,
                   help='map spec without p, e.g. "num=1,0,1"')
    s.add_argument("--primes", required=True, help="range like 10000..11000")
    s.add_argument("--filter", default="all", help='"all" or "1 mod 4"')
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--hypothesis", default=None,
                   help="default: the generic S_d for the template degree")
    s.add_argument("--M", type=int, default=3)
    s.add_argument("--workers", type=int, default=0, help="0 = all cores")
    _add_common(s)
    s.set_defaults(func=cmd_sweep)

    f = sp.add_parser("family", help="worked-family thresholds and height data")
    f.add_argument("--type", default=None, choices=("ax_d_plus_c", "odoni"))
    f.add_argument("--a", type=int, default=None)
    f.add_argument("--c", type=int, default=None)
    f.add_argument("--d", type=int, default=None)
    f.add_argument("--poly", default=None, help='integer coefficients "c0,c1,..."')
    f.add_argument("--n", type=int, default=3)
    _add_common(f, fmt_csv=False)
    f.set_defaults(func=cmd_family)

    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _PARSE_ERRORS as exc:
        print(f"ffdyn: {exc}", file=sys.stderr)
        return 2
    except _RUNTIME_ERRORS as exc:
        print(f"ffdyn: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
