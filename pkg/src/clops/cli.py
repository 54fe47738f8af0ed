"""Command-line surface: file formats, subcommands, and JSON reports.

Two text formats are understood. A digraph file is a header line
``digraph <n>`` followed by one ``u v`` arc per line (1-indexed); a table
file is a header ``closure <n>`` or ``setop <n>`` followed by exactly 2^n
lines ``{a,b} -> {c,d}``. ``#`` starts a comment anywhere on a line.

Every command prints one JSON report to standard output. Rationals appear
as ``{"num": a, "den": b}`` and subsets as sorted 1-indexed vertex lists.
Exit codes: 0 success, 2 parse or validation error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .closure import ClosureOperator, validate_closure
from .construct import (
    Digraph,
    chain,
    density_tree,
    from_digraph,
    uniform,
    union_combine,
)
from .partitions import BudgetExceeded, is_solution, solve_exhaustive
from .ranks import (
    complemented_status,
    flats,
    matroid_check,
    profile,
    span_operator,
    unsolvability_obstruction,
)
from .reduction import SetOperator, reduce_to_closure
from .shannon import shannon_entropy
from .subsets import all_masks, format_set, full_mask, parse_set, vertices_of

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_BUDGET = 3

TABLE_SIZE_LIMIT = 16


class CliError(Exception):
    """A parse or validation failure; rendered as a report with exit 2."""


# -- file formats ----------------------------------------------------------


def _content_lines(text: str) -> list[tuple[int, str]]:
    """(line number, stripped content) pairs with comments and blanks removed."""
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def parse_digraph(text: str) -> Digraph:
    lines = _content_lines(text)
    if not lines:
        raise CliError("empty digraph file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "digraph" or not parts[1].isdigit():
        raise CliError(f"line {lineno}: expected header 'digraph <n>', got {header!r}")
    n = int(parts[1])
    arcs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, line in lines[1:]:
        toks = line.split()
        if len(toks) != 2 or not all(t.isdigit() for t in toks):
            raise CliError(f"line {lineno}: expected arc 'u v', got {line!r}")
        u, v = int(toks[0]), int(toks[1])
        if not (1 <= u <= n and 1 <= v <= n):
            raise CliError(f"line {lineno}: vertex out of range 1..{n} in arc {u} {v}")
        if (u, v) in seen:
            raise CliError(f"line {lineno}: duplicate arc {u} {v}")
        seen.add((u, v))
        arcs.append((u, v))
    return Digraph.from_arcs(n, arcs)


def serialize_digraph(d: Digraph) -> str:
    lines = [f"digraph {d.n}"]
    lines += [f"{u} {v}" for (u, v) in sorted(d.arcs)]
    return "\n".join(lines) + "\n"


def parse_closure_table(text: str, validate: bool = True):
    """Parse a ``closure``/``setop`` table; closure tables are checked
    against the axioms (hard error) unless ``validate`` is off."""
    lines = _content_lines(text)
    if not lines:
        raise CliError("empty table file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] not in ("closure", "setop") or not parts[1].isdigit():
        raise CliError(
            f"line {lineno}: expected header 'closure <n>' or 'setop <n>', got {header!r}"
        )
    kind, n = parts[0], int(parts[1])
    if n > TABLE_SIZE_LIMIT:
        raise CliError(f"line {lineno}: tables are limited to n <= {TABLE_SIZE_LIMIT}")
    table = [None] * (1 << n)
    count = 0
    for lineno, line in lines[1:]:
        if "->" not in line:
            raise CliError(f"line {lineno}: expected '{{…}} -> {{…}}', got {line!r}")
        left, right = line.split("->", 1)
        try:
            X = parse_set(left, n)
            img = parse_set(right, n)
        except ValueError as exc:
            raise CliError(f"line {lineno}: {exc}") from exc
        if table[X] is not None:
            raise CliError(f"line {lineno}: subset {format_set(X)} appears twice")
        table[X] = img
        count += 1
    if count != 1 << n:
        missing = next(X for X in all_masks(n) if table[X] is None)
        raise CliError(f"table is missing subset {format_set(missing)} ({count} of {1 << n} lines)")
    if kind == "setop":
        return SetOperator(n, tuple(table))
    op = ClosureOperator(n, table=table)
    if validate:
        report = validate_closure(op)
        if not report.valid:
            v = report.violations[0]
            raise CliError(f"closure axiom violated: {v.describe()}")
    return op


def serialize_table(obj) -> str:
    kind = "setop" if isinstance(obj, SetOperator) else "closure"
    if obj.n > TABLE_SIZE_LIMIT:
        raise CliError(f"tables are limited to n <= {TABLE_SIZE_LIMIT}")
    lines = [f"{kind} {obj.n}"]
    lines += [f"{format_set(X)} -> {format_set(obj(X))}" for X in all_masks(obj.n)]
    return "\n".join(lines) + "\n"


# -- report plumbing -------------------------------------------------------


def _json_value(x):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, bool) or x is None or isinstance(x, (int, float, str)):
        return x
    raise TypeError(f"unreportable value {x!r}")


def _json_set(mask: int) -> list[int]:
    return vertices_of(mask)


def _metadata(op) -> dict:
    meta = {"n": op.n, "label": getattr(op, "label", "")}
    if isinstance(op, ClosureOperator) and op.n <= TABLE_SIZE_LIMIT:
        meta["rank"] = op.rank
    return meta


def _emit(report: dict, out_path: str | None, stream) -> None:
    text = json.dumps(report, indent=2, sort_keys=False)
    print(text, file=stream)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")


# -- input loading ---------------------------------------------------------


def _sniff_kind(text: str) -> str:
    lines = _content_lines(text)
    if lines and lines[0][1].split()[:1] == ["digraph"]:
        return "digraph"
    return "table"


def _load_operator(path: str, kind: str | None, validate: bool):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    kind = kind or _sniff_kind(text)
    if kind == "digraph":
        return from_digraph(parse_digraph(text), label=path)
    if kind == "table":
        return parse_closure_table(text, validate=validate)
    raise CliError(f"unknown input kind {kind!r}")


def _require_closure(obj) -> ClosureOperator:
    if not isinstance(obj, ClosureOperator):
        raise CliError("this command needs a closure operator, not a setop table")
    return obj


def _parse_rational(text: str) -> Fraction:
    """Exact rationals only, written 'a/b' or as an integer; floats rejected."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        if num.lstrip("-").isdigit() and den.isdigit() and int(den):
            return Fraction(int(num), int(den))
    elif text.lstrip("-").isdigit():
        return Fraction(int(text))
    raise CliError(f"expected a rational 'a/b' or an integer, got {text!r}")


# -- subcommands -----------------------------------------------------------


def _cmd_validate(args) -> tuple[dict, int]:
    op = _load_operator(args.input, args.kind, validate=False)
    if isinstance(op, SetOperator):
        return {"kind": "setop", "n": op.n, "valid": True}, EXIT_OK
    report = validate_closure(op)
    body = {
        "kind": "closure",
        "operator": _metadata(op),
        "valid": report.valid,
        "violations": [
            {"axiom": v.axiom, "witnesses": [_json_set(w) for w in v.witnesses]}
            for v in report.violations
        ],
    }
    return body, EXIT_OK if report.valid else EXIT_ERROR


def _cmd_ranks(args) -> tuple[dict, int]:
    op = _require_closure(_load_operator(args.input, args.kind, not args.no_validate))
    p = profile(op)
    body = {"operator": _metadata(op)}
    X = parse_set(args.subset, op.n) if args.subset else full_mask(op.n)
    body["subset"] = _json_set(X)
    body["ork"] = p.ork(X)
    body["irk"] = p.irk(X)
    body["lrk"] = p.lrk(X)
    body["urk"] = p.urk(X)
    body["outer_basis"] = _json_set(p.outer_basis(X))
    body["inner_basis"] = _json_set(p.inner_basis(X))
    return body, EXIT_OK


def _cmd_flats(args) -> tuple[dict, int]:
    op = _require_closure(_load_operator(args.input, args.kind, not args.no_validate))
    return {
        "operator": _metadata(op),
        "flats": [_json_set(F) for F in flats(op)],
    }, EXIT_OK


def _cmd_matroid(args) -> tuple[dict, int]:
    op = _require_closure(_load_operator(args.input, args.kind, not args.no_validate))
    rep = matroid_check(op)
    sp = span_operator(op)
    body = {
        "operator": _metadata(op),
        "is_matroid": rep.is_matroid,
        "exchange": rep.exchange,
        "exchange_witness": (
            None
            if rep.exchange_witness is None
            else {
                "X": _json_set(rep.exchange_witness[0]),
                "u": _json_set(rep.exchange_witness[1]),
                "v": _json_set(rep.exchange_witness[2]),
            }
        ),
        "closed_eq_span": rep.closed_eq_span,
        "closed_are_spans": rep.closed_are_spans,
        "upper_closed_eq_uspan": rep.upper_closed_eq_uspan,
        "upper_closed_are_uspans": rep.upper_closed_are_uspans,
        "span_operator": {
            "valid": sp.report.valid,
            "is_matroid": sp.is_matroid,
            "verdict": sp.verdict,
        },
    }
    return body, EXIT_OK


def _cmd_complemented(args) -> tuple[dict, int]:
    op = _require_closure(_load_operator(args.input, args.kind, not args.no_validate))
    body = {"operator": _metadata(op)}
    if args.subset:
        X = parse_set(args.subset, op.n)
        outer, inner = complemented_status(op, X)
        body.update(subset=_json_set(X), outer=outer, inner=inner)
    else:
        not_outer, not_inner = [], []
        for X in all_masks(op.n):
            outer, inner = complemented_status(op, X)
            if not outer:
                not_outer.append(_json_set(X))
            if not inner:
                not_inner.append(_json_set(X))
        body.update(
            all_outer=not not_outer,
            all_inner=not not_inner,
            not_outer=not_outer,
            not_inner=not_inner,
        )
    return body, EXIT_OK


def _cmd_obstruction(args) -> tuple[dict, int]:
    op = _require_closure(_load_operator(args.input, args.kind, not args.no_validate))
    witness = unsolvability_obstruction(op)
    return {
        "operator": _metadata(op),
        "obstruction": None if witness is None else _json_set(witness),
    }, EXIT_OK


def _cmd_shannon(args) -> tuple[dict, int]:
    op = _require_closure(_load_operator(args.input, args.kind, not args.no_validate))
    result = shannon_entropy(op, mode=args.mode)
    return {
        "operator": _metadata(op),
        "mode": args.mode,
        "shannon_entropy": _json_value(result.value),
        "witness": [
            {"set": _json_set(C), "value": _json_value(v)}
            for C, v in sorted(result.witness.items())
        ],
    }, EXIT_OK


def _cmd_solve(args) -> tuple[dict, int]:
    op = _require_closure(_load_operator(args.input, args.kind, not args.no_validate))
    result = solve_exhaustive(op, args.alphabet, budget=args.budget)
    body = {
        "operator": _metadata(op),
        "alphabet": args.alphabet,
        "budget": args.budget,
        "complete": result.complete,
        "nodes": result.nodes,
        "max_entropy": _json_value(result.max_entropy),
        "is_solution": result.best is not None and is_solution(result.best),
        "best": (
            None
            if result.best is None
            else [list(p.assign) for p in result.best.parts]
        ),
    }
    return body, EXIT_OK if result.complete else EXIT_BUDGET


def _construct_operator(args):
    if args.family == "uniform":
        if len(args.params) != 2:
            raise CliError("construct uniform needs R and N")
        r, n = (int(_parse_rational(p)) for p in args.params)
        return uniform(r, n), None
    if args.family == "chain":
        if len(args.params) != 1:
            raise CliError("construct chain needs N")
        return chain(int(_parse_rational(args.params[0]))), None
    if args.family == "tree":
        if len(args.params) != 2:
            raise CliError("construct tree needs R and H")
        r = int(_parse_rational(args.params[0]))
        H = _parse_rational(args.params[1])
        op, spec = density_tree(r, H)
        return op, spec
    raise CliError(f"unknown construct family {args.family!r}")


def _cmd_construct(args) -> tuple[dict, int]:
    try:
        op, spec = _construct_operator(args)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    body = {"operator": _metadata(op)}
    if spec is not None:
        body["tree"] = {
            "r": spec.r,
            "H": _json_value(spec.H),
            "D": spec.D,
            "N": list(spec.N),
            "L": list(spec.L),
            "C": list(spec.C),
            "degenerate": spec.degenerate,
        }
    if op.n <= TABLE_SIZE_LIMIT:
        body["table"] = serialize_table(op)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(body["table"])
    elif args.out:
        raise CliError(f"cannot serialize a table for n = {op.n} > {TABLE_SIZE_LIMIT}")
    return body, EXIT_OK


_UNION_ALIASES = {
    "disjoint": "disjoint",
    "uni": "unidirectional",
    "unidirectional": "unidirectional",
    "bi": "bidirectional",
    "bidirectional": "bidirectional",
}


def _cmd_combine(args) -> tuple[dict, int]:
    kind = _UNION_ALIASES.get(args.op)
    if kind is None:
        raise CliError(f"unknown union kind {args.op!r}")
    op1 = _require_closure(_load_operator(args.file1, None, not args.no_validate))
    op2 = _require_closure(_load_operator(args.file2, None, not args.no_validate))
    combined = union_combine(op1, op2, kind)
    body = {
        "kind": kind,
        "operands": [_metadata(op1), _metadata(op2)],
        "operator": _metadata(combined),
        "table": serialize_table(combined),
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body["table"])
    return body, EXIT_OK


def _cmd_reduce(args) -> tuple[dict, int]:
    obj = _load_operator(args.input, args.kind, validate=False)
    setop = obj if isinstance(obj, SetOperator) else SetOperator.from_closure(obj)
    op, trace = reduce_to_closure(setop)
    body = {
        "input_n": setop.n,
        "operator": _metadata(op),
        "components": [[_json_set(Y) for Y in comp] for comp in trace.components],
        "iterations": trace.iterations,
        "extensivity_patch_used": trace.extensivity_patch_used,
        "table": serialize_table(op),
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body["table"])
    return body, EXIT_OK


# -- dispatch --------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="also write the primary artifact to this file")
    common.add_argument("--seed", type=int, default=0, help="echoed for reproducibility")
    common.add_argument(
        "--threads", type=int, default=1, help="worker cap; results are identical at any value"
    )
    common.add_argument("--no-validate", action="store_true", help="skip closure-axiom checks on input tables")

    reads_input = argparse.ArgumentParser(add_help=False)
    reads_input.add_argument("--input", required=True, help="operator file")
    reads_input.add_argument("--kind", choices=["digraph", "table"], help="input format (sniffed from the header by default)")

    parser = argparse.ArgumentParser(prog="clops", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common, reads_input]).set_defaults(fn=_cmd_validate)

    p = sub.add_parser("ranks", parents=[common, reads_input])
    p.add_argument("--subset", help='subset literal like "{1,2}" (default: the full set)')
    p.set_defaults(fn=_cmd_ranks)

    sub.add_parser("flats", parents=[common, reads_input]).set_defaults(fn=_cmd_flats)
    sub.add_parser("matroid", parents=[common, reads_input]).set_defaults(fn=_cmd_matroid)

    p = sub.add_parser("complemented", parents=[common, reads_input])
    p.add_argument("--subset", help="check one subset instead of all of them")
    p.set_defaults(fn=_cmd_complemented)

    sub.add_parser("obstruction", parents=[common, reads_input]).set_defaults(fn=_cmd_obstruction)

    p = sub.add_parser("shannon", parents=[common, reads_input])
    p.add_argument("--mode", choices=["reduced", "full"], default="reduced")
    p.set_defaults(fn=_cmd_shannon)

    p = sub.add_parser("solve", parents=[common, reads_input])
    p.add_argument("--alphabet", type=int, required=True, help="alphabet size Q")
    p.add_argument("--budget", type=int, default=200_000, help="search-node cap")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("construct", parents=[common])
    p.add_argument("family", choices=["uniform", "chain", "tree"])
    p.add_argument("params", nargs="*", help="uniform R N | chain N | tree R H (H as 'a/b')")
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("combine", parents=[common])
    p.add_argument("--op", required=True, help="disjoint | uni | bi")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(fn=_cmd_combine)

    sub.add_parser("reduce", parents=[common, reads_input]).set_defaults(fn=_cmd_reduce)
    return parser


def run_command(argv: list[str], stream=None) -> int:
    """Run one CLI invocation; prints a JSON report and returns the exit code."""
    stream = stream if stream is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    report = {"command": argv, "seed": args.seed, "threads": args.threads}
    try:
        body, code = args.fn(args)
    except CliError as exc:
        report["error"] = str(exc)
        _emit(report, None, stream)
        return EXIT_ERROR
    except BudgetExceeded as exc:
        report["error"] = str(exc)
        _emit(report, None, stream)
        return EXIT_BUDGET
    report.update(body)
    _emit(report, args.out if body.get("table") is None else None, stream)
    return code


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
