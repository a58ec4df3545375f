"""Command-line front end.

Two modes:

``minicypher --graph g.json --query 'MATCH (x) RETURN x'``
    Run one query against a graph document and print the result table.

``minicypher gen --cases 1000 --seed 7``
    Generate random cases, run engine and reference implementation on each,
    and report disagreements (serializing them for replay).

Exit codes: 0 success, 1 parse error, 2 evaluation error, 3 graph load
error, 4 oracle disagreement, 64 usage error.  Output is deterministic:
columns are in lexicographic order, rows are sorted by their rendered
encoding, and JSON is emitted with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .errors import CypherError, EvalError, GraphLoadError, ParseError
from .engine import output
from .graph import PropertyGraph, load_graph
from .oracle import (
    GenConfig,
    case_document,
    differential_case,
    gen_case,
    oracle_output,
    save_failure,
)
from .parser import parse_query
from .tables import Table
from .values import Map, NodeId, Path, RelId, Value

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_EVAL = 2
EXIT_GRAPH = 3
EXIT_DISAGREE = 4
EXIT_USAGE = 64


# ---------------------------------------------------------------------------
# Value and table rendering
# ---------------------------------------------------------------------------


def value_to_json(v: Value):
    """Tagged JSON encoding; injective, so sorting rendered rows is stable."""
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, NodeId):
        return {"@node": v.key}
    if isinstance(v, RelId):
        return {"@rel": v.key}
    if isinstance(v, Path):
        ids = [v.nodes[0].key]
        for r, n in zip(v.rels, v.nodes[1:]):
            ids.append(r.key)
            ids.append(n.key)
        return {"@path": ids}
    if isinstance(v, tuple):
        return [value_to_json(x) for x in v]
    if isinstance(v, Map):
        return {"@map": {k: value_to_json(x) for k, x in sorted(v.entries)}}
    raise TypeError(f"unrenderable value: {v!r}")


def _cell_text(v: Value) -> str:
    if v is None:
        return "null"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return v
    if isinstance(v, (NodeId, RelId)):
        return v.key
    # Composites: canonical compact JSON of the tagged encoding.
    return json.dumps(value_to_json(v), sort_keys=True, separators=(",", ":"))


def render_tsv(t: Table) -> str:
    lines = ["\t".join(t.fields)]
    body = []
    for u, count in t.rows():
        row = "\t".join(_cell_text(u[f]) for f in t.fields)
        body.extend([row] * count)
    lines.extend(sorted(body))
    return "\n".join(lines) + "\n"


def render_json(t: Table) -> str:
    rows = []
    for u, count in t.rows():
        encoded = [value_to_json(u[f]) for f in t.fields]
        rows.extend([encoded] * count)
    rows.sort(key=lambda r: json.dumps(r, sort_keys=True))
    doc = {"fields": list(t.fields), "rows": rows}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def render_counted_json(t: Table) -> str:
    rows = []
    for u, count in t.rows():
        record = {f: value_to_json(u[f]) for f in t.fields}
        rows.append({"record": record, "count": count})
    rows.sort(key=lambda r: json.dumps(r["record"], sort_keys=True))
    doc = {"fields": list(t.fields), "rows": rows}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


_RENDERERS = {"tsv": render_tsv, "json": render_json, "counted-json": render_counted_json}


def table_from_counted_json(doc: dict) -> Table:
    """Inverse of render_counted_json, for round-trip checks and tooling."""
    t = Table(doc["fields"])
    for row in doc["rows"]:
        t.add({f: _value_from_json(row["record"][f]) for f in doc["fields"]}, row["count"])
    return t


def _value_from_json(v) -> Value:
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, list):
        return tuple(_value_from_json(x) for x in v)
    if isinstance(v, dict):
        if "@node" in v:
            return NodeId(v["@node"])
        if "@rel" in v:
            return RelId(v["@rel"])
        if "@path" in v:
            ids = v["@path"]
            return Path(tuple(NodeId(i) for i in ids[0::2]),
                        tuple(RelId(i) for i in ids[1::2]))
        if "@map" in v:
            return Map(tuple((k, _value_from_json(x))
                             for k, x in sorted(v["@map"].items())))
    raise ValueError(f"unrecognized encoded value: {v!r}")


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


def _caret_diagnostic(text: str, span: Optional[tuple[int, int]]) -> str:
    if span is None:
        return ""
    start, end = span
    start = max(0, min(start, len(text)))
    line_start = text.rfind("\n", 0, start) + 1
    line_end = text.find("\n", start)
    if line_end == -1:
        line_end = len(text)
    line = text[line_start:line_end]
    col = start - line_start
    width = max(1, min(end, line_end) - start)
    return f"  {line}\n  {' ' * col}{'^' * width}\n"


# ---------------------------------------------------------------------------
# Run mode
# ---------------------------------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage problems via exit code 64."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_run_parser() -> _ArgumentParser:
    p = _ArgumentParser(prog="minicypher", description="Run a query against a property graph.")
    p.add_argument("--graph", metavar="PATH",
                   help="graph JSON document (omitted: the empty graph)")
    q = p.add_mutually_exclusive_group(required=True)
    q.add_argument("--query", metavar="TEXT", help="query text")
    q.add_argument("--query-file", metavar="PATH", help="file containing the query text")
    p.add_argument("--format", choices=sorted(_RENDERERS), default="tsv",
                   help="output format (default: tsv)")
    p.add_argument("--oracle", action="store_true",
                   help="also run the brute-force reference and require agreement")
    return p


def _build_gen_parser() -> _ArgumentParser:
    p = _ArgumentParser(prog="minicypher gen",
                        description="Differential testing against the reference implementation.")
    p.add_argument("--cases", type=int, default=100, metavar="N",
                   help="number of generated cases (default: 100)")
    p.add_argument("--seed", type=int, default=0, metavar="N",
                   help="base seed; case i uses seed+i (default: 0)")
    p.add_argument("--out", metavar="DIR", default="failures",
                   help="directory for serialized disagreements (default: failures)")
    p.add_argument("--max-failures", type=int, default=10, metavar="N",
                   help="stop after this many disagreements (default: 10)")
    return p


def _load_graph_file(path: Optional[str]) -> PropertyGraph:
    if path is None:
        return load_graph({"nodes": [], "relationships": []})
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise GraphLoadError(f"cannot read graph file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise GraphLoadError(f"graph file is not valid JSON: {exc}") from exc
    return load_graph(doc)


def _run(args: argparse.Namespace) -> int:
    try:
        g = _load_graph_file(args.graph)
    except GraphLoadError as exc:
        print(f"graph error: {exc}", file=sys.stderr)
        return EXIT_GRAPH

    if args.query is not None:
        text = args.query
    else:
        try:
            with open(args.query_file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"cannot read query file: {exc}", file=sys.stderr)
            return EXIT_USAGE

    try:
        q = parse_query(text)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        sys.stderr.write(_caret_diagnostic(text, exc.span))
        return EXIT_PARSE

    try:
        result = output(q, g)
    except EvalError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        sys.stderr.write(_caret_diagnostic(text, exc.span))
        return EXIT_EVAL
    except CypherError as exc:
        print(f"evaluation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_EVAL

    if args.oracle:
        try:
            reference = oracle_output(q, g)
        except CypherError as exc:
            print("oracle disagreement: engine produced a table but the "
                  f"reference raised {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_DISAGREE
        if reference != result:
            print("oracle disagreement:", file=sys.stderr)
            print("--- engine ---", file=sys.stderr)
            sys.stderr.write(render_counted_json(result))
            print("--- reference ---", file=sys.stderr)
            sys.stderr.write(render_counted_json(reference))
            return EXIT_DISAGREE

    sys.stdout.write(_RENDERERS[args.format](result))
    return EXIT_OK


def _gen(args: argparse.Namespace) -> int:
    disagreements = 0
    for i in range(args.cases):
        cfg = GenConfig(seed=args.seed + i)
        g, q = gen_case(cfg)
        ok, detail = differential_case(g, q)
        if ok:
            continue
        disagreements += 1
        doc = case_document(g, q, extra={
            "seed": cfg.seed,
            "engine": detail["engine"],
            "oracle": detail["oracle"],
        })
        path = save_failure(args.out, f"case-{cfg.seed}", doc)
        print(f"disagreement at seed {cfg.seed}: {detail['query']}", file=sys.stderr)
        print(f"  serialized to {path}", file=sys.stderr)
        if disagreements >= args.max_failures:
            print("too many disagreements; stopping early", file=sys.stderr)
            break
    print(f"cases: {args.cases}  disagreements: {disagreements}")
    return EXIT_OK if disagreements == 0 else EXIT_DISAGREE


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "gen":
            args = _build_gen_parser().parse_args(argv[1:])
            return _gen(args)
        args = _build_run_parser().parse_args(argv)
        return _run(args)
    except SystemExit as exc:
        # argparse raises SystemExit for --help (code 0) and usage errors.
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
