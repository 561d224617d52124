"""Command-line front end: ``unionfree <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import bench_run, generate, load_suite, rows_to_csv
from .errors import CapabilityError, ContractError, ParseError, UnionFreeError
from .family import (
    SetFamily,
    as_selection,
    classify_structure,
    is_a_degenerate,
    is_a_union_free,
    is_union_free,
    parse_family,
    serialize_family,
)
from .ladder import extract_from_family, meets_target, validate_certificate
from .moser import extract_union_free, moser_bound
from .oracle import OracleLimits, max_a_union_free_exact, max_union_free_exact

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPABILITY = 3
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_IO = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load(path: str) -> SetFamily:
    return parse_family(_read_text(path))


def _read_selection(path: str) -> list[int]:
    text = _read_text(path).strip()
    if text.startswith("{") or text.startswith("["):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno) from None
        if isinstance(doc, dict):
            doc = doc.get("selection", doc.get("elements"))
        if not isinstance(doc, list):
            raise ParseError("selection file needs a list of member indices")
        return [int(i) for i in doc]
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise ParseError(f"bad selection index: {exc}") from None


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report) + "\n")
        return
    for key, value in report.items():
        if isinstance(value, (list, dict)):
            value = json.dumps(value)
        out.write(f"{key}: {value}\n")


def _cmd_extract(args, out) -> int:
    fam = _load(args.input)
    report = extract_union_free(fam)
    doc = report.to_dict(fam)
    doc["verified"] = is_union_free(fam, report.selection)
    _emit(doc, args.format, out)
    return EXIT_OK if doc["verified"] and doc["met"] else EXIT_VALIDATION


def _cmd_extract_a(args, out) -> int:
    fam = _load(args.input)
    cert, order = extract_from_family(fam, args.a)
    valid = validate_certificate(cert, order, args.a, fam if fam.m <= args.limit else None, limit=args.limit)
    doc = cert.to_dict()
    doc["met"] = meets_target(cert.claimed_size, args.a, fam.m) if fam.m >= args.a else cert.claimed_size == fam.m
    doc["valid"] = valid
    doc["sets"] = [sorted(fam.member_set(i)) for i in cert.elements]
    _emit(doc, args.format, out)
    return EXIT_OK if valid and doc["met"] else EXIT_VALIDATION


def _cmd_verify(args, out) -> int:
    fam = _load(args.input)
    sel = as_selection(fam, _read_selection(args.selection))
    doc = {
        "m": fam.m,
        "size": len(sel),
        "structure": classify_structure(fam, sel),
        "union_free": is_union_free(fam, sel),
    }
    ok = doc["union_free"]
    if args.a is not None:
        doc["a"] = args.a
        doc["a_degenerate"] = is_a_degenerate(fam, sel, args.a)
        doc["a_union_free"] = is_a_union_free(fam, sel, args.a, limit=args.limit)
        ok = doc["a_union_free"]
    _emit(doc, args.format, out)
    return EXIT_OK if ok else EXIT_VALIDATION


def _cmd_exact(args, out) -> int:
    fam = _load(args.input)
    limits = OracleLimits(args.max_members, args.time_limit)
    if args.a is None:
        res = max_union_free_exact(fam, limits)
        doc = {"m": fam.m, "bound": moser_bound(fam.m), **res.to_dict()}
    else:
        res = max_a_union_free_exact(fam, args.a, limits)
        doc = {"m": fam.m, "a": args.a, **res.to_dict()}
    doc["sets"] = [sorted(fam.member_set(i)) for i in res.witness]
    _emit(doc, args.format, out)
    return EXIT_OK


def _cmd_gen(args, out) -> int:
    if args.kind == "es":
        spec = {"kind": "es", "n": args.n, "variant": args.variant}
    elif args.kind == "barat":
        spec = {"kind": "barat", "a": args.a, "n": args.n}
    else:
        spec = {"kind": "random", "seed": args.seed, "m": args.m, "u": args.u,
                "density": args.density, "mode": args.mode}
    text = serialize_family(generate(spec), args.family_format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def _cmd_bench(args, out) -> int:
    rows = bench_run(load_suite(args.suite), workers=args.workers)
    text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unionfree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_format(p):
        p.add_argument("--format", choices=("json", "text"), default="json")
        return p

    p = with_format(sub.add_parser("extract", help="union-free extraction report"))
    p.add_argument("input", help="family file, or - for stdin")
    p.set_defaults(func=_cmd_extract)

    p = with_format(sub.add_parser("extract-a", help="a-union-free certificate report"))
    p.add_argument("input")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--limit", type=int, default=24, help="size cap for the exact cross-check")
    p.set_defaults(func=_cmd_extract_a)

    p = with_format(sub.add_parser("verify", help="run predicates on a selection"))
    p.add_argument("input")
    p.add_argument("--selection", required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--limit", type=int, default=24)
    p.set_defaults(func=_cmd_verify)

    p = with_format(sub.add_parser("exact", help="exact maximum by branch and bound"))
    p.add_argument("input")
    p.add_argument("--a", type=int)
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--max-members", type=int)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("gen", help="emit a family file")
    gen = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    es = gen.add_parser("es")
    es.add_argument("--n", type=int, required=True)
    es.add_argument("--variant", choices=("square", "rect", "square_minus", "rect_minus"), default="square")
    bt = gen.add_parser("barat")
    bt.add_argument("--a", type=int, required=True)
    bt.add_argument("--n", type=int, required=True)
    rnd = gen.add_parser("random")
    rnd.add_argument("--seed", type=int, required=True)
    rnd.add_argument("--m", type=int, required=True)
    rnd.add_argument("--u", type=int, required=True)
    rnd.add_argument("--density", type=float, default=0.5)
    rnd.add_argument("--mode", choices=("bernoulli", "interval"), default="bernoulli")
    for g in (es, bt, rnd):
        g.add_argument("-o", "--output")
        g.add_argument("--family-format", choices=("text", "json"), default="text")
        g.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="run a suite and write CSV")
    p.add_argument("--suite", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_bench)
    return parser


def run_cli(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except OSError as exc:
        err.write(f"unionfree: {exc}\n")
        return EXIT_IO
    except CapabilityError as exc:
        err.write(f"unionfree: capability: {exc}\n")
        return EXIT_CAPABILITY
    except ParseError as exc:
        err.write(f"unionfree: parse error: {exc}\n")
        return EXIT_DATA
    except (ContractError, UnionFreeError) as exc:
        err.write(f"unionfree: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())
