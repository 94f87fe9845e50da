"""Command line entry point: resolve, coxring, fan, verify, export."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from .cox import cyclic_cox
from .errors import AmbiguityError, CoxresError, InadmissibleGroupError, ParameterError
from .fan import cyclic_chain_rays, fan_with_pivot
from .groups import GroupSpec
from .report import build_report, export_chain_dot, export_dot, export_json, run_checks, star_data
from .resolution import pretty_label

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INADMISSIBLE = 3
EXIT_AMBIGUOUS = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() controls exit codes."""

    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _group(text: str) -> GroupSpec:
    # inadmissible parameters must reach main() with their own exit code,
    # so only syntax problems are turned into argparse errors here
    try:
        return GroupSpec.parse(text)
    except InadmissibleGroupError as exc:
        raise _Inadmissible(exc) from exc
    except ParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


class _Inadmissible(Exception):
    def __init__(self, exc: InadmissibleGroupError):
        super().__init__(str(exc))
        self.exc = exc


def _pivot(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"pivot must look like i,j; got {text!r}") from exc
    return i, j


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coxres", description="Resolution, fan and Cox ring data of C^2/G.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    group_help = "group as BD:n,m, BT:m, BO:m, BI:m or C:n,q"

    p = sub.add_parser("resolve", help="print the resolution invariant and dual graph")
    p.add_argument("group", type=_group, help=group_help)

    p = sub.add_parser("coxring", help="print the trinomial and the Cox ring generators")
    p.add_argument("group", type=_group, help=group_help)

    p = sub.add_parser("fan", help="print rays and cones")
    p.add_argument("group", type=_group, help=group_help)
    p.add_argument("--pivot", type=_pivot, help="inner ray i,j to pivot the fan on")

    p = sub.add_parser("verify", help="run the named checks; nonzero exit on any failure")
    p.add_argument("group", type=_group, nargs="+", help=group_help)
    p.add_argument("--suite", choices=("fast", "all"), default="fast")
    p.add_argument("--jobs", type=int, default=1, help="groups checked concurrently")

    p = sub.add_parser("export", help="write JSON report or DOT dual graph")
    p.add_argument("group", type=_group, help=group_help)
    p.add_argument("--format", choices=("json", "dot"), required=True)
    p.add_argument("--out", type=Path, help="output path (default stdout)")
    p.add_argument("--suite", choices=("fast", "all"), default="fast", help="checks included in JSON")
    return parser


# ---------------------------------------------------------------------------
# subcommands


def _resolve(spec: GroupSpec, out) -> int:
    if spec.is_cyclic:
        cc = cyclic_cox(*spec.params)
        print(f"{spec.label}: chain [{', '.join(map(str, cc.chain))}]", file=out)
        for j, a in enumerate(cc.chain, start=1):
            print(f"  E_{j}  self-intersection -{a}", file=out)
        return EXIT_OK
    data = star_data(spec)
    g = data.graph
    print(f"{spec.label}: {data.invariant}", file=out)
    print(f"  E_0  self-intersection -{g.d}", file=out)
    for i, branch in enumerate(g.branches, start=1):
        chain = " - ".join(f"E_{{{i},{j}}}(-{a})" for j, a in enumerate(branch, start=1))
        print(f"  branch {i}: E_0 - {chain}", file=out)
    print("  U:", file=out)
    print("    " + " ".join(f"{pretty_label(lab):>7}" for lab in data.U.labels), file=out)
    for row in data.U.matrix.entries:
        print("    " + " ".join(f"{x:>7}" for x in row), file=out)
    return EXIT_OK


def _generator_image(rec) -> str:
    poly = str(rec.poly)
    if poly == "1":
        return rec.character_string()
    if len(rec.poly.terms) > 1:
        poly = f"({poly})"
    return f"{poly} * {rec.character_string()}"


def _coxring(spec: GroupSpec, out) -> int:
    if spec.is_cyclic:
        cc = cyclic_cox(*spec.params)
        print(f"{spec.label}: Cox ring is polynomial in {len(cc.labels)} variables", file=out)
        for rec in cc.records:
            print(f"  {rec.label:>6} -> {_generator_image(rec)}", file=out)
        return EXIT_OK
    data = star_data(spec)
    print(f"{spec.label}: {data.equation.pretty()}", file=out)
    consts = ", ".join(str(c) for c in data.generators.constants)
    print(f"  sigma = {', '.join(data.sigmas.names)}; relation constants {consts}", file=out)
    for rec in data.generators.records:
        print(f"  {pretty_label(rec.label):>8} -> {_generator_image(rec)}", file=out)
    return EXIT_OK


def _fan(spec: GroupSpec, pivot, out) -> int:
    if spec.is_cyclic:
        if pivot is not None:
            raise ParameterError("--pivot applies only to non-cyclic groups")
        rays = cyclic_chain_rays(*spec.params)
        print(f"{spec.label}: {len(rays)} rays, {len(rays) - 1} cones", file=out)
        for k, v in enumerate(rays):
            print(f"  u_{k} = {v}", file=out)
        return EXIT_OK
    data = star_data(spec)
    fan = data.fan if pivot is None else fan_with_pivot(data.rays, *pivot)
    print(f"{spec.label}: {len(fan.rays)} rays, {len(fan.cones)} cones", file=out)
    for ray in fan.rays:
        print(f"  {pretty_label(ray.label):>8} = {ray.coords}", file=out)
    for cone in fan.cone_labels():
        print("  cone " + ", ".join(pretty_label(c) for c in cone), file=out)
    return EXIT_OK


def _verify_one(spec: GroupSpec, suite: str) -> tuple[bool, list[str]]:
    lines, ok = [], True
    for check in run_checks(spec, suite):
        ok &= check.passed
        tail = f"  ({check.witness})" if check.witness and not check.passed else ""
        lines.append(f"{'PASS' if check.passed else 'FAIL'} {spec.label} {check.name}{tail}")
    return ok, lines


def _verify(specs: Sequence[GroupSpec], suite: str, jobs: int, out) -> int:
    # results are collected first and printed in argument order
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda s: _verify_one(s, suite), specs))
    for _, lines in results:
        for line in lines:
            print(line, file=out)
    return EXIT_OK if all(ok for ok, _ in results) else EXIT_FAILED


def _export(spec: GroupSpec, fmt: str, path: Path | None, suite: str, out) -> int:
    if fmt == "json":
        blob = export_json(build_report(spec, suite))
    elif spec.is_cyclic:
        blob = export_chain_dot(cyclic_cox(*spec.params).chain)
    else:
        blob = export_dot(star_data(spec).graph)
    if path is None:
        out.write(blob.decode("utf-8"))
        return EXIT_OK
    try:
        path.write_bytes(blob)
    except OSError as exc:
        raise CoxresError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except _Inadmissible as exc:
        print(f"inadmissible group: {exc}", file=err)
        return EXIT_INADMISSIBLE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        if args.command == "resolve":
            return _resolve(args.group, out)
        if args.command == "coxring":
            return _coxring(args.group, out)
        if args.command == "fan":
            return _fan(args.group, args.pivot, out)
        if args.command == "verify":
            return _verify(args.group, args.suite, args.jobs, out)
        return _export(args.group, args.format, args.out, args.suite, out)
    except AmbiguityError as exc:
        print(f"ambiguous resolution invariant: {exc}", file=err)
        for cand in exc.candidates:
            print(f"  candidate {cand}", file=err)
        return EXIT_AMBIGUOUS
    except InadmissibleGroupError as exc:
        print(f"inadmissible group: {exc}", file=err)
        return EXIT_INADMISSIBLE
    except ParameterError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except CoxresError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
