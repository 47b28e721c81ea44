"""Command-line front end.

Subcommands: ``construct``, ``matrix``, ``cover``, ``verify``, ``metrics``,
``simulate`` and ``table1``.  The exit status is 0 only when the requested
verification or simulation fully succeeded; invalid input exits with 2 and
a JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import jsonio
from .caching import SCHEMES, build_scheme, greedy_cover, verify_cover
from .delivery import encode, make_library, place, random_demands, run_delivery, schedule
from .designs import (
    Design,
    TransversalDesign,
    complement_design,
    construct_affine_plane_bibd,
    construct_inversive_plane,
    construct_projective_plane_bibd,
    construct_transversal_design,
    trivial_t_design,
    verify_declared,
    verify_transversal_design,
)
from .errors import DesignCacheError
from .fixtures import FIXTURE_NAMES, builtin_design
from .metrics import scheme_metrics, scheme_parameters
from .table import DEFAULT_MAX_INVERSIVE_Q, DEFAULT_MAX_N, table1_rows

FAMILIES = ("affine", "projective", "inversive", "transversal", "trivial", "builtin", "complement")
MAX_ORDER = 16

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    code = "UsageError"


def fmt(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _need(args, name: str) -> int | str:
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for this command")
    return value


def _order(args, name: str) -> int:
    value = _need(args, name)
    if not 2 <= value <= MAX_ORDER:
        raise UsageError(f"--{name} must be between 2 and {MAX_ORDER}, got {value}")
    return value


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _print_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


# ---------------------------------------------------------------------------
# construct


def _construct(args) -> Design | TransversalDesign:
    family = args.family
    if family == "affine":
        return construct_affine_plane_bibd(_order(args, "n"))
    if family == "projective":
        return construct_projective_plane_bibd(_order(args, "n"))
    if family == "inversive":
        return construct_inversive_plane(_order(args, "q"))
    if family == "transversal":
        return construct_transversal_design(_need(args, "k"), _order(args, "q"))
    if family == "trivial":
        return trivial_t_design(_need(args, "n"), _need(args, "k"))
    if family == "builtin":
        return builtin_design(_need(args, "name"))
    if args.design:
        base = jsonio.load_design(args.design)
    else:
        base = builtin_design(_need(args, "name"))
    if isinstance(base, TransversalDesign):
        raise UsageError("complement needs a block design, not a transversal design")
    return complement_design(base)


def cmd_construct(args) -> int:
    d = _construct(args)
    if isinstance(d, TransversalDesign):
        report = verify_transversal_design(d)
    else:
        report = verify_declared(d)
    verdict = "unchecked" if report is None else report.status
    _emit(jsonio.dumps(jsonio.design_to_dict(d)), args.out)
    summary = {"v": d.v, "k": d.k, "b": len(d.blocks), "r": None if report is None else report.r,
               "verification": verdict}
    if args.out:
        if args.json:
            _print_json(summary)
        else:
            print(f"wrote {args.out}: v={d.v} k={d.k} b={summary['b']} r={summary['r']} verification={verdict}")
    return EXIT_FAILED if verdict == "fail" else EXIT_OK


# ---------------------------------------------------------------------------
# scheme pipeline


def _scheme_inputs(args):
    design = jsonio.load_design(_need(args, "design"))
    matrix, cover = build_scheme(_need(args, "scheme"), design, args.t)
    if getattr(args, "greedy", False):
        cover = greedy_cover(matrix)
    return design, matrix, cover


def cmd_matrix(args) -> int:
    _, matrix, _ = _scheme_inputs(args)
    _emit(jsonio.dumps(jsonio.matrix_to_dict(matrix)), args.out)
    return EXIT_OK


def cmd_cover(args) -> int:
    _, matrix, cover = _scheme_inputs(args)
    _emit(jsonio.dumps(jsonio.cover_to_dict(cover)), args.out)
    return EXIT_OK if verify_cover(matrix, cover).is_valid_cover else EXIT_FAILED


def cmd_verify(args) -> int:
    _, matrix, cover = _scheme_inputs(args)
    if args.cover:
        cover = jsonio.cover_from_dict(json.loads(Path(args.cover).read_text(encoding="utf-8")))
    report = verify_cover(matrix, cover)
    data = jsonio.cover_report_to_dict(report)
    if args.json:
        _print_json(data)
    else:
        for key, value in data.items():
            print(f"{key}: {value}")
    return EXIT_OK if report.is_valid_cover else EXIT_FAILED


def cmd_metrics(args) -> int:
    design, matrix, cover = _scheme_inputs(args)
    report = verify_cover(matrix, cover)
    m = scheme_metrics(matrix, cover, args.scheme, scheme_parameters(args.scheme, design, args.t))
    if args.json:
        data = jsonio.metrics_to_dict(m)
        data["cover_valid"] = report.is_valid_cover
        _print_json(data)
    else:
        print(f"scheme: {m.scheme}  params: {m.params}")
        measured = m.measured()
        for name in ("K", "F", "uncached_fraction", "S", "rate"):
            flag = "" if measured[name] == m.predicted[name] else "   MISMATCH"
            print(f"{name:>18}: measured {fmt(measured[name]):>10}  closed form {fmt(m.predicted[name]):>10}{flag}")
        print(f"{'Q':>18}: {m.Q}")
        print(f"cover valid: {report.is_valid_cover}  match: {m.matches}")
        for c in m.claims:
            state = "consistent" if c.consistent else "INCONSISTENT"
            print(f"  [{state}] {c.name}: {c.field} = {c.formula} = {fmt(c.claimed)} vs measured {fmt(c.measured)}")
    return EXIT_OK if report.is_valid_cover and m.matches else EXIT_FAILED


def cmd_simulate(args) -> int:
    design, matrix, cover = _scheme_inputs(args)
    check = verify_cover(matrix, cover)
    if not check.is_valid_cover:
        raise UsageError(f"cover failed verification: {jsonio.cover_report_to_dict(check)}")
    n_files = _need(args, "n_files")
    if n_files < 1:
        raise UsageError("--n-files must be at least 1")
    expected = scheme_metrics(
        matrix, cover, args.scheme, scheme_parameters(args.scheme, design, args.t)
    ).predicted["rate"]
    lib = make_library(n_files, matrix.F, args.chunk, args.seed)
    demands = random_demands(matrix.K, n_files, args.seed)
    report = run_delivery(
        matrix, cover, lib, demands, scheme=args.scheme, expected_rate=expected, seed=args.seed
    )
    if args.dump_transmissions:
        txs = encode(schedule(cover, demands), lib)
        Path(args.dump_transmissions).write_text(
            jsonio.dumps(jsonio.transmissions_to_dict(txs)), encoding="utf-8"
        )
    data = jsonio.simulation_to_dict(report)
    if args.json:
        _print_json(data)
    else:
        print(f"scheme: {args.scheme}  K={report.K} F={report.F} S={report.S}")
        print(f"rate: {fmt(report.rate)}  expected: {fmt(expected)}  match: {report.match}")
        print(f"all_decoded: {report.all_decoded}  failures: {report.failures}")
        print(f"transmitted bytes: {report.transmitted_bytes}  file bytes: {lib.file_bytes}")
        cache = place(matrix, lib)
        print(f"cache bytes per user: {cache.stored_bytes(0)}")
    return EXIT_OK if report.all_decoded and report.match else EXIT_FAILED


def cmd_table1(args) -> int:
    for name in ("max_n", "max_inversive_q"):
        if not 2 <= getattr(args, name) <= MAX_ORDER:
            raise UsageError(f"--{name.replace('_', '-')} must be between 2 and {MAX_ORDER}")
    rows = table1_rows(args.max_n, args.max_inversive_q)
    if args.json:
        out = []
        for r in rows:
            item = {"scheme": r.scheme, "design": r.design, "skipped": r.skipped}
            if r.metrics is not None:
                item.update(jsonio.metrics_to_dict(r.metrics))
                item["cover_valid"] = r.cover_valid
                item["overlaps"] = r.overlaps
                item["scheme"] = r.scheme
            out.append(item)
        _print_json({"rows": out})
    else:
        header = (f"{'scheme':<6} {'design':<32} {'K':>6} {'F':>8} {'1-M/N':>9} {'R':>7}"
                  f"  {'F form':>8} {'1-M/N form':>10} {'R form':>7}  check")
        print(header)
        print("-" * len(header))
        for r in rows:
            if r.skipped:
                print(f"{r.scheme:<6} {r.design:<32} skipped ({r.skipped})")
                continue
            m = r.metrics
            status = "match" if r.ok else "MISMATCH " + ",".join(m.mismatches)
            p = m.predicted
            print(f"{r.scheme:<6} {r.design:<32} {m.K:>6} {m.F:>8} {fmt(m.uncached_fraction):>9} "
                  f"{fmt(m.rate):>7}  {fmt(p['F']):>8} {fmt(p['uncached_fraction']):>10} "
                  f"{fmt(p['rate']):>7}  {status}")
            for c in m.inconsistent_claims:
                print(f"{'':<7}! {c.name}: {c.field} = {c.formula} = {fmt(c.claimed)}, "
                      f"measured {fmt(c.measured)}")
    return EXIT_OK if all(r.ok for r in rows) else EXIT_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="designcache",
        description="Coded caching schemes from combinatorial designs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--out", help="write the result to this path")

    p = sub.add_parser("construct", help="build a design and write it as JSON")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, help="plane order, or point count for trivial")
    p.add_argument("--q", type=int, help="prime power for inversive/transversal")
    p.add_argument("--k", type=int, help="block size for transversal/trivial")
    p.add_argument("--name", choices=FIXTURE_NAMES, help="built-in fixture")
    p.add_argument("--design", help="input design JSON (complement)")
    common(p)
    p.set_defaults(func=cmd_construct)

    for name, func, help_text in (
        ("matrix", cmd_matrix, "write the caching matrix"),
        ("cover", cmd_cover, "write the identity-submatrix cover"),
        ("verify", cmd_verify, "check the cover by brute force"),
        ("metrics", cmd_metrics, "compare measured parameters with closed forms"),
        ("simulate", cmd_simulate, "run placement and delivery on random bytes"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scheme", required=True, choices=tuple(SCHEMES))
        p.add_argument("--design", required=True, help="design JSON path")
        p.add_argument("--t", type=int, help="strength for t1/t2 (default: declared t)")
        p.add_argument("--greedy", action="store_true", help="use the greedy cover instead")
        common(p)
        if name == "verify":
            p.add_argument("--cover", help="verify this cover JSON instead of the constructed one")
        if name == "simulate":
            p.add_argument("--n-files", type=int, required=True)
            p.add_argument("--chunk", type=int, default=16, help="subfile size in bytes")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--dump-transmissions", help="write hex payloads and pivots here")
        p.set_defaults(func=func)

    p = sub.add_parser("table1", help="reproduce the scheme parameter table")
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--max-inversive-q", type=int, default=DEFAULT_MAX_INVERSIVE_Q)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table1)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DesignCacheError, UsageError, ValueError, OSError) as exc:
        code = getattr(exc, "code", type(exc).__name__)
        sys.stderr.write(json.dumps({"error": code, "message": str(exc)}) + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
