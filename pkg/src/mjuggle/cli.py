"""Command line front end.

Exit codes: 0 ok, 1 a requested check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .errors import JugglingError, ParseError, ValidationError
from .series import (char_poly, expand, periodic_gf, periodic_sequence,
                     primitive_sequence, primitive_transform,
                     recurrence_from_charpoly, spot_check)
from .siteswap import parse, simulate, validate
from .states import HeightCappedDiagram, State, count_walks_capped, saturating_cap
from .tables import parse_row_selector, reproduce
from .transfer import build_transfer_matrix, count_walks_transfer
from .walks import (DEFAULT_WALK_LIMIT, SelectionMatrix, count_selections,
                    count_walks_brute, enumerate_walks)

SCHEMA_VERSION = 1
METHODS = ("brute", "matrix", "transfer", "capped")


class UsageError(Exception):
    pass


def _state(text: str, m: int) -> State:
    try:
        return State.parse(text, m)
    except JugglingError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, payload: dict, text_lines: list[str], csv_rows: list[list] | None = None):
    fmt = args.format
    if fmt == "json":
        doc = {"schemaVersion": SCHEMA_VERSION, "command": args.command}
        doc.update(payload)
        print(json.dumps(doc, indent=2))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(csv_rows or [[line] for line in text_lines])
        sys.stdout.write(buf.getvalue())
    else:
        for line in text_lines:
            print(line)


def _count_by(method: str, src: State, dst: State, n: int) -> int | None:
    if method == "brute":
        return count_walks_brute(src, dst, n)
    if method == "matrix":
        return count_selections(SelectionMatrix.for_walk(src, dst, n))
    if method == "capped":
        diagram = HeightCappedDiagram(src.balls, src.m, saturating_cap(src, dst, n))
        return count_walks_capped(diagram, src, dst, n)
    if method == "transfer":
        if n < src.height:
            return None
        return count_walks_transfer(src, dst, n)
    raise UsageError(f"unknown method {method!r}")


def cmd_count(args) -> int:
    src, dst = _state(args.src, args.m), _state(args.dst, args.m)
    if src.balls != dst.balls:
        raise UsageError(f"<{src}> and <{dst}> hold different numbers of balls")
    if args.length < 0:
        raise UsageError("--length must be nonnegative")
    if args.method != "all":
        value = _count_by(args.method, src, dst, args.length)
        if value is None:
            raise UsageError(f"transfer method needs --length >= {src.height}")
        _emit(args, {"from": str(src), "to": str(dst), "m": args.m, "length": args.length,
                     "method": args.method, "count": str(value)},
              [str(value)], [["method", "count"], [args.method, value]])
        return 0
    counts = {}
    for method in METHODS:
        value = _count_by(method, src, dst, args.length)
        if value is not None:
            counts[method] = value
    agree = len(set(counts.values())) == 1
    lines = [f"{k}: {v}" for k, v in counts.items()]
    lines.append("verdict: all methods agree" if agree else "verdict: MISMATCH")
    _emit(args, {"from": str(src), "to": str(dst), "m": args.m, "length": args.length,
                 "counts": {k: str(v) for k, v in counts.items()}, "agree": agree},
          lines, [["method", "count"]] + [[k, v] for k, v in counts.items()])
    return 0 if agree else 1


def cmd_sequence(args) -> int:
    origin = _state(args.state, args.m)
    if args.terms < 1:
        raise UsageError("--terms must be at least 1")
    if args.primitive:
        seq = primitive_sequence(origin, args.terms)
    else:
        dst = origin if args.to is None else _state(args.to, args.m)
        if dst.balls != origin.balls:
            raise UsageError("--to must hold as many balls as --state")
        seq = periodic_sequence(origin, args.terms, terminal=dst)
    bad = spot_check(seq, args.spot_check) if args.spot_check else []
    lines = [",".join(map(str, seq.terms))]
    for n, got, want in bad:
        lines.append(f"spot-check failed at n={n}: sequence {got}, brute force {want}")
    if args.spot_check and not bad:
        lines.append(f"spot-check ok (every {args.spot_check} term(s))")
    _emit(args, {"state": str(origin), "to": str(seq.terminal), "m": args.m, "kind": seq.kind,
                 "terms": [str(t) for t in seq.terms],
                 "spotCheck": None if not args.spot_check else
                 {"every": args.spot_check, "mismatches": [list(map(str, b)) for b in bad]}},
          lines, [["n", seq.kind]] + [[i, t] for i, t in enumerate(seq.terms, start=1)])
    return 1 if bad else 0


def cmd_genfunc(args) -> int:
    origin = _state(args.state, args.m)
    gf = periodic_gf(origin)
    if args.primitive:
        gf = primitive_transform(gf)
    if args.reduced:
        gf = gf.reduced()
    lines = [str(gf)]
    payload = {"state": str(origin), "m": args.m,
               "kind": "primitive" if args.primitive else "periodic",
               "reduced": args.reduced,
               "numerator": [str(c) for c in gf.numerator.coeffs],
               "denominator": [str(c) for c in gf.denominator.coeffs],
               "text": str(gf)}
    if args.terms:
        terms = expand(gf, args.terms)
        lines.append(",".join(map(str, terms)))
        payload["terms"] = [str(t) for t in terms]
    _emit(args, payload, lines,
          [["part", "coefficients"], ["numerator", *gf.numerator.coeffs],
           ["denominator", *gf.denominator.coeffs]])
    return 0


def cmd_validate(args) -> int:
    try:
        pattern = parse(args.pattern, args.m)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    report = validate(pattern)
    lines = [f"pattern: {pattern}",
             f"valid: {'yes' if report.valid else 'no'}",
             f"balls: {report.balls if report.balls is not None else pattern.ball_count}"]
    lines += [f"reason: {r}" for r in report.reasons]
    payload = report.to_json()
    payload["pattern"] = str(pattern)
    ok = report.valid
    if args.state is not None:
        start = _state(args.state, pattern.m)
        try:
            trajectory = simulate(pattern, start)
        except JugglingError as exc:
            ok = False
            lines.append(f"simulation failed: {exc}")
            payload["simulation"] = {"ok": False, "error": str(exc)}
        else:
            lines.append("trajectory: " + " -> ".join(f"<{s}>" for s in trajectory))
            payload["simulation"] = {"ok": True, "trajectory": [str(s) for s in trajectory]}
    payload["ok"] = ok
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_tables(args) -> int:
    selector = None
    if args.row:
        try:
            selector = parse_row_selector(args.row)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    results = reproduce(selector)
    if not results:
        raise UsageError(f"no fixture row matches {args.row!r}")
    passed = sum(r.ok for r in results)
    lines = []
    for r in results:
        status = "ok" if r.ok else "MISMATCH"
        lines.append(f"{r.label}: {status}")
        if not r.terms_ok:
            lines.append(f"  terms expected {r.expected_terms} got {r.got_terms}")
        if not r.gf_ok:
            lines.append(f"  gf expected {r.expected_gf} got {r.got_gf}")
    lines.append(f"{passed}/{len(results)} rows reproduced")
    _emit(args, {"passed": passed, "total": len(results),
                 "rows": [r.to_json() for r in results]},
          lines, [["kind", "state", "m", "ok"]] +
          [[r.kind, r.state, r.m, r.ok] for r in results])
    return 0 if passed == len(results) else 1


def cmd_enumerate(args) -> int:
    src, dst = _state(args.src, args.m), _state(args.dst, args.m)
    if src.balls != dst.balls:
        raise UsageError(f"<{src}> and <{dst}> hold different numbers of balls")
    limit = None if args.limit == 0 else args.limit
    walks = enumerate_walks(src, dst, args.length, limit=limit)
    _emit(args, {"from": str(src), "to": str(dst), "m": args.m, "length": args.length,
                 "walks": [w.to_json() for w in walks]},
          [str(w) for w in walks],
          [["walk", "pattern"]] + [[i, "".join(str(t) for _, t in w.steps)]
                                   for i, w in enumerate(walks, start=1)])
    return 0


def cmd_recurrence(args) -> int:
    if args.state is not None:
        b = _state(args.state, args.m).balls
    elif args.b is not None:
        b = args.b
    else:
        raise UsageError("give --b or --state")
    if b < 0:
        raise UsageError("--b must be nonnegative")
    A = build_transfer_matrix(b, args.m)
    p = char_poly(A)
    rec = recurrence_from_charpoly(p)
    lines = [f"partitions: {' | '.join(str(g) or '(empty)' for g in A.index)}"]
    lines += ["matrix:"] + ["  " + " ".join(str(x) for x in row) for row in A.entries]
    lines += [f"char poly: {p.format(descending=True)}", f"recurrence: {rec}"]
    _emit(args, {"b": b, "m": args.m,
                 "partitions": [list(g.parts) for g in A.index],
                 "matrix": [[str(x) for x in row] for row in A.entries],
                 "charPoly": [str(c) for c in p.coeffs],
                 "recurrence": {"order": rec.order, "weights": [str(w) for w in rec.weights]}},
          lines, [["power", "coefficient"]] + [[i, c] for i, c in enumerate(p.coeffs)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mjuggle", description="Count and check multiplex juggling sequences.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count walks between two states")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--method", choices=METHODS + ("all",), default="brute")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sequence", parents=[common], help="periodic or primitive counts")
    p.add_argument("--state", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--to", default=None, help="end state (periodic only; default: --state)")
    p.add_argument("--primitive", action="store_true")
    p.add_argument("--spot-check", type=int, default=0, metavar="K",
                   help="recompute every K-th term by brute force")
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("genfunc", parents=[common], help="rational generating function")
    p.add_argument("--state", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--primitive", action="store_true")
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--terms", type=int, default=0, help="also print this many terms")
    p.set_defaults(func=cmd_genfunc)

    p = sub.add_parser("validate", parents=[common], help="check a siteswap pattern")
    p.add_argument("--pattern", required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--state", default=None, help="simulate from this state")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("tables", parents=[common], help="reproduce the reference tables")
    p.add_argument("--row", default=None, metavar="STATE:M")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("enumerate", parents=[common], help="list walks between two states")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--limit", type=int, default=DEFAULT_WALK_LIMIT, help="0 for no limit")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("recurrence", parents=[common], help="transfer matrix and recurrence")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--state", default=None)
    p.set_defaults(func=cmd_recurrence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "m", None) is not None and args.m < 1:
        parser.error("--m must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mjuggle {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"mjuggle {args.command}: {exc}", file=sys.stderr)
        return 1
    except JugglingError as exc:
        print(f"mjuggle {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
