"""Brute-force reference implementation and random case generation.

The functions here recompute pattern matching and clause semantics from
the definitions with no shortcuts, no pruning beyond the hop bound forced
by relationship distinctness, and no shared code with the optimized
matcher/engine: `oracle_match` literally enumerates every (rigid pattern,
path tuple) pair and counts the witnesses, and `oracle_run_query` re-states
the table transformations row by row.  Expressions are evaluated by the
ordinary evaluator in both implementations — the differential target is
the matching and table algebra, and the evaluator is verified separately
by its own exhaustive suites.

`exhaustive_match` goes one step further for very small inputs: instead of
deriving the unique candidate assignment from each witness pair, it tries
every assignment built from path components and counts satisfaction.  It
exists to cross-check the derivation logic and is exponential.

`gen_case` produces deterministic pseudo-random (graph, query) cases. The
generator is biased toward the sharp corners: zero-length ranges, repeated
variables, undirected slots, anonymous patterns, nulls, and the occasional
deliberately ill-typed expression (both implementations must then agree
that the query has no defined result).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from pathlib import Path as FsPath
from typing import Callable, Iterator, Optional

from . import ast
from .ast import free_vars
from .engine import output as engine_output
from .errors import CypherError, EvalError
from .evaluator import eq_values, eval_expr, is_true
from .graph import BOTH, PropertyGraph, load_graph
from .parser import unparse_expr, unparse_query
from .tables import Record, Table, bag_union, distinct, unit_table
from .values import FunctionRegistry, NodeId, Path, RelId, same_value

Walk = tuple[tuple[NodeId, ...], tuple[RelId, ...]]


# ---------------------------------------------------------------------------
# Path enumeration
# ---------------------------------------------------------------------------


def _all_walks(g: PropertyGraph) -> dict[int, list[Walk]]:
    """Every path over g, grouped by hop count.

    A path may traverse each relationship in either orientation but never
    twice, so |R| bounds the length and the enumeration is finite.
    """
    by_len: dict[int, list[Walk]] = {h: [] for h in range(len(g.rels) + 1)}

    def extend(nodes: list[NodeId], rels: list[RelId]) -> None:
        by_len[len(rels)].append((tuple(nodes), tuple(rels)))
        cur = nodes[-1]
        for r in g.incident(cur, BOTH):
            if r in rels:
                continue
            nodes.append(g.other_end(r, cur))
            rels.append(r)
            extend(nodes, rels)
            nodes.pop()
            rels.pop()

    for n in g.nodes:
        extend([n], [])
    return by_len


def _slot_range(rho: ast.RelPattern) -> tuple[int, Optional[int]]:
    if rho.range_ is None:
        return (1, 1)
    lo, hi = rho.range_
    return (1 if lo is None else lo, hi)


def _seg_choices(rel_pats: tuple[ast.RelPattern, ...], max_total: int) -> list[tuple[int, ...]]:
    """Every tuple of per-slot hop counts within ranges, summing to <= max_total."""
    out: list[tuple[int, ...]] = []

    def rec(i: int, acc: list[int], remaining: int) -> None:
        if i == len(rel_pats):
            out.append(tuple(acc))
            return
        lo, hi = _slot_range(rel_pats[i])
        top = remaining if hi is None else min(hi, remaining)
        for m in range(lo, top + 1):
            acc.append(m)
            rec(i + 1, acc, remaining - m)
            acc.pop()

    rec(0, [], max_total)
    return out


# ---------------------------------------------------------------------------
# Satisfaction, stated rule by rule
# ---------------------------------------------------------------------------


def _struct_ok(
    pat: ast.PathPattern,
    seg: tuple[int, ...],
    nodes: tuple[NodeId, ...],
    rels: tuple[RelId, ...],
    g: PropertyGraph,
) -> bool:
    """Labels, relationship types, and endpoint orientation per direction."""
    node_pats = pat.node_patterns()
    rel_pats = pat.rel_patterns()
    pos = 0
    for i, chi in enumerate(node_pats):
        if chi.labels and not chi.labels <= g.labels(nodes[pos]):
            return False
        if i == len(rel_pats):
            break
        rho = rel_pats[i]
        for j in range(seg[i]):
            r = rels[pos + j]
            a, b = nodes[pos + j], nodes[pos + j + 1]
            if rho.direction == ast.RIGHT:
                if not (g.src(r) == a and g.tgt(r) == b):
                    return False
            elif rho.direction == ast.LEFT:
                if not (g.src(r) == b and g.tgt(r) == a):
                    return False
            else:
                if not ((g.src(r) == a and g.tgt(r) == b) or (g.src(r) == b and g.tgt(r) == a)):
                    return False
            if rho.types and g.rel_type(r) not in rho.types:
                return False
        pos += seg[i]
    return True


def _derive(
    pat: ast.PathPattern,
    seg: tuple[int, ...],
    nodes: tuple[NodeId, ...],
    rels: tuple[RelId, ...],
) -> Optional[dict]:
    """The unique name assignment a witness pair forces, or None when the
    same name would need two different values."""
    cand: dict = {}

    def put(name: str, value) -> bool:
        if name in cand:
            return same_value(cand[name], value)
        cand[name] = value
        return True

    node_pats = pat.node_patterns()
    rel_pats = pat.rel_patterns()
    pos = 0
    for i, chi in enumerate(node_pats):
        if chi.name is not None and not put(chi.name, nodes[pos]):
            return None
        if i == len(rel_pats):
            break
        rho = rel_pats[i]
        m = seg[i]
        if rho.name is not None:
            value = rels[pos] if rho.range_ is None else tuple(rels[pos:pos + m])
            if not put(rho.name, value):
                return None
        pos += m
    if pat.name is not None and not put(pat.name, Path(nodes, rels)):
        return None
    return cand


def _names_ok(
    pat: ast.PathPattern,
    seg: tuple[int, ...],
    nodes: tuple[NodeId, ...],
    rels: tuple[RelId, ...],
    assignment: Record,
) -> bool:
    """The name conditions of the rules under a complete assignment."""
    derived = _derive(pat, seg, nodes, rels)
    if derived is None:
        return False
    return all(
        name in assignment and same_value(assignment[name], value)
        for name, value in derived.items()
    )


def _prop_check_list(
    pat: ast.PathPattern,
    seg: tuple[int, ...],
    nodes: tuple[NodeId, ...],
    rels: tuple[RelId, ...],
) -> list[tuple]:
    checks: list[tuple] = []
    node_pats = pat.node_patterns()
    rel_pats = pat.rel_patterns()
    pos = 0
    for i, chi in enumerate(node_pats):
        if chi.props:
            checks.append((nodes[pos], chi.props))
        if i == len(rel_pats):
            break
        rho = rel_pats[i]
        if rho.props:
            for j in range(seg[i]):
                checks.append((rels[pos + j], rho.props))
        pos += seg[i]
    return checks


def _eval_checks(
    checks: list[tuple],
    g: PropertyGraph,
    assignment: Record,
    functions: FunctionRegistry | None,
) -> bool:
    for ident, props in checks:
        for key, expr in props:
            if eq_values(g.prop(ident, key), eval_expr(expr, g, assignment, functions)) is not True:
                return False
    return True


# ---------------------------------------------------------------------------
# The reference match
# ---------------------------------------------------------------------------


def oracle_match(
    pats: ast.PatternTuple,
    g: PropertyGraph,
    u: Record,
    functions: FunctionRegistry | None = None,
) -> Table:
    """Transcription of the match definition.

    Enumerate every rigid pattern tuple (one hop-count choice per slot) and
    every path tuple of matching lengths with cross-path-distinct
    relationships; each structurally satisfied pair forces exactly one
    binding extension and contributes one to its multiplicity.
    """
    new_fields = tuple(sorted(free_vars(pats) - set(u.keys())))
    out = Table(new_fields)
    walks = _all_walks(g)
    max_hops = len(g.rels)
    paths = pats.paths

    def rec(i: int, used: frozenset[RelId], cand: dict, checks: list[tuple]) -> None:
        if i == len(paths):
            assignment = {**u, **cand}
            if _eval_checks(checks, g, assignment, functions):
                out.add({f: cand[f] for f in new_fields})
            return
        pat = paths[i]
        for seg in _seg_choices(pat.rel_patterns(), max_hops):
            for nodes, rels in walks[sum(seg)]:
                if used & set(rels):
                    continue
                if not _struct_ok(pat, seg, nodes, rels, g):
                    continue
                derived = _derive(pat, seg, nodes, rels)
                if derived is None:
                    continue
                merged = dict(cand)
                conflict = False
                for name, value in derived.items():
                    if name in u:
                        if not same_value(u[name], value):
                            conflict = True
                            break
                    elif name in merged:
                        if not same_value(merged[name], value):
                            conflict = True
                            break
                    else:
                        merged[name] = value
                if conflict:
                    continue
                rec(i + 1, used | set(rels), merged,
                    checks + _prop_check_list(pat, seg, nodes, rels))

    rec(0, frozenset(), {}, [])
    return out


def exhaustive_match(
    pats: ast.PatternTuple,
    g: PropertyGraph,
    u: Record,
    functions: FunctionRegistry | None = None,
) -> Table:
    """Candidate-product form of the match definition (tiny inputs only!).

    Tries every assignment of path components to the unbound names instead
    of deriving the forced one, then counts the witnessing (rigid pattern,
    path tuple) pairs per assignment.  Exists to validate `oracle_match`'s
    derivation step; exponential in everything.
    """
    new_fields = tuple(sorted(free_vars(pats) - set(u.keys())))
    walks = _all_walks(g)
    max_hops = len(g.rels)

    pool: list = list(g.nodes) + list(g.rels)
    for h, ws in walks.items():
        for nodes, rels in ws:
            pool.append(Path(nodes, rels))
    for k in range(max_hops + 1):
        for seq in itertools.permutations(g.rels, k):
            pool.append(tuple(seq))

    def witness_tuples() -> Iterator[list[tuple]]:
        """Yield [(pat, seg, nodes, rels)] with cross-path-distinct rels."""

        def rec(i: int, used: frozenset[RelId], acc: list[tuple]) -> Iterator[list[tuple]]:
            if i == len(pats.paths):
                yield list(acc)
                return
            pat = pats.paths[i]
            for seg in _seg_choices(pat.rel_patterns(), max_hops):
                for nodes, rels in walks[sum(seg)]:
                    if used & set(rels):
                        continue
                    acc.append((pat, seg, nodes, rels))
                    yield from rec(i + 1, used | set(rels), acc)
                    acc.pop()

        yield from rec(0, frozenset(), [])

    out = Table(new_fields)
    for values in itertools.product(pool, repeat=len(new_fields)):
        extension = dict(zip(new_fields, values))
        assignment = {**u, **extension}
        count = 0
        for witness in witness_tuples():
            checks: list[tuple] = []
            ok = True
            for pat, seg, nodes, rels in witness:
                if not (_names_ok(pat, seg, nodes, rels, assignment)
                        and _struct_ok(pat, seg, nodes, rels, g)):
                    ok = False
                    break
                checks.extend(_prop_check_list(pat, seg, nodes, rels))
            if ok and _eval_checks(checks, g, assignment, functions):
                count += 1
        if count:
            out.add(extension, count)
    return out


# ---------------------------------------------------------------------------
# Reference clause/query semantics
# ---------------------------------------------------------------------------


def _oracle_project(
    star: bool,
    items: tuple[ast.Item, ...],
    g: PropertyGraph,
    t: Table,
    functions: FunctionRegistry | None,
) -> Table:
    from .errors import AliasClash, StarOnEmptyFields

    pairs: list[tuple[str, ast.Expr]] = []
    if star:
        if not t.fields:
            raise StarOnEmptyFields("* requires the table to have at least one field")
        pairs.extend((f, ast.Name(f)) for f in t.fields)
    for expr, alias in items:
        pairs.append((alias if alias is not None else unparse_expr(expr), expr))
    names = [a for a, _ in pairs]
    if len(set(names)) != len(names) or not names:
        raise AliasClash(f"bad output names: {names}")
    out = Table(names)
    for u, count in t.rows():
        out.add({a: eval_expr(e, g, u, functions) for a, e in pairs}, count)
    return out


def oracle_run_clause(
    c: ast.Clause,
    g: PropertyGraph,
    t: Table,
    functions: FunctionRegistry | None = None,
) -> Table:
    if isinstance(c, ast.Match):
        out = Table(set(t.fields) | free_vars(c.patterns))
        for u, count in t.rows():
            extensions = oracle_match(c.patterns, g, u, functions)
            kept = []
            for u2, c2 in extensions.rows():
                row = {**u, **u2}
                if c.where is None or is_true(eval_expr(c.where, g, row, functions)):
                    kept.append((row, c2))
            if kept:
                for row, c2 in kept:
                    out.add(row, count * c2)
            elif c.optional:
                out.add({**u, **{f: None for f in out.fields if f not in u}}, count)
        return out

    if isinstance(c, ast.With):
        projected = _oracle_project(c.star, c.items, g, t, functions)
        if c.where is None:
            return projected
        out = Table(projected.fields)
        for u, count in projected.rows():
            if is_true(eval_expr(c.where, g, u, functions)):
                out.add(u, count)
        return out

    if isinstance(c, ast.Unwind):
        from .errors import NameClash

        if c.name in t.fields:
            raise NameClash(f"UNWIND alias `{c.name}` is already a field")
        out = Table(t.fields + (c.name,))
        for u, count in t.rows():
            v = eval_expr(c.expr, g, u, functions)
            elements = v if isinstance(v, tuple) else (v,)
            for x in elements:
                out.add({**u, c.name: x}, count)
        return out

    raise TypeError(f"not a clause: {c!r}")


def oracle_run_query(
    q: ast.Query,
    g: PropertyGraph,
    t: Table,
    functions: FunctionRegistry | None = None,
) -> Table:
    if isinstance(q, ast.UnionQuery):
        combined = bag_union(
            oracle_run_query(q.left, g, t, functions),
            oracle_run_query(q.right, g, t, functions),
        )
        return combined if q.all else distinct(combined)
    cur = t
    for c in q.clauses:
        cur = oracle_run_clause(c, g, cur, functions)
    return _oracle_project(q.ret.star, q.ret.items, g, cur, functions)


def oracle_output(q: ast.Query, g: PropertyGraph, functions: FunctionRegistry | None = None) -> Table:
    return oracle_run_query(q, g, unit_table(), functions)


# ---------------------------------------------------------------------------
# Differential harness
# ---------------------------------------------------------------------------


def _render_rows(t: Table) -> list[str]:
    lines = []
    for u, count in t.rows():
        cells = ", ".join(f"{f}={u[f]!r}" for f in t.fields)
        lines.append(f"({cells}) x{count}")
    return sorted(lines)


def _guarded(fn: Callable[[], Table]) -> tuple[str, object]:
    try:
        return ("table", fn())
    except EvalError as exc:
        return ("error", exc.kind)
    except CypherError as exc:
        return ("error", type(exc).__name__)


def differential_case(
    g: PropertyGraph,
    q: ast.Query,
    functions: FunctionRegistry | None = None,
) -> tuple[bool, dict]:
    """Run both implementations; agree = equal result bags, or both undefined.

    When both sides raise, the case counts as agreement even if the error
    kinds differ (enumeration order may surface a different offending
    expression first); the kinds are recorded for diagnosis.
    """
    eng = _guarded(lambda: engine_output(q, g, functions))
    orc = _guarded(lambda: oracle_output(q, g, functions))
    if eng[0] == "table" and orc[0] == "table":
        agree = eng[1] == orc[1]
    else:
        agree = eng[0] == orc[0] == "error"
    detail = {
        "query": unparse_query(q),
        "engine": _render_rows(eng[1]) if eng[0] == "table" else f"error:{eng[1]}",
        "oracle": _render_rows(orc[1]) if orc[0] == "table" else f"error:{orc[1]}",
    }
    return agree, detail


def case_document(g: PropertyGraph, q: ast.Query, extra: Optional[dict] = None) -> dict:
    """Self-contained replayable form of a case (graph schema + query text)."""
    doc = {"graph": g.to_document(), "query": unparse_query(q)}
    if extra:
        doc.update(extra)
    return doc


def load_case(doc: dict) -> tuple[PropertyGraph, ast.Query]:
    from .parser import parse_query

    return load_graph(doc["graph"]), parse_query(doc["query"])


def save_failure(directory: str, name: str, doc: dict) -> str:
    path = FsPath(directory)
    path.mkdir(parents=True, exist_ok=True)
    target = path / f"{name}.json"
    target.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return str(target)


# ---------------------------------------------------------------------------
# Case generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenConfig:
    """Bounds and alphabets for one generated case; the seed fixes it all."""

    max_nodes: int = 5
    max_rels: int = 5
    node_labels: tuple[str, ...] = ("P", "Q", "R")
    rel_types: tuple[str, ...] = ("a", "b")
    keys: tuple[str, ...] = ("k", "v", "w")
    max_slots: int = 3
    max_range: int = 3
    max_clauses: int = 3
    seed: int = 0


def _key_kind(cfg: GenConfig, key: str) -> str:
    # Every property key has one value kind per configuration, so generated
    # comparisons against stored properties are mostly well-typed.
    return ("int", "str", "list")[cfg.keys.index(key) % 3]


def _gen_value(rng: random.Random, kind: str):
    if kind == "int":
        return rng.randint(0, 3)
    if kind == "str":
        return rng.choice(("x", "y", "zz"))
    return [rng.randint(0, 2) for _ in range(rng.randint(0, 3))]


def _gen_graph(rng: random.Random, cfg: GenConfig) -> PropertyGraph:
    n_nodes = rng.randint(1, max(1, cfg.max_nodes))
    n_rels = rng.randint(0, cfg.max_rels)
    nodes = []
    for i in range(n_nodes):
        labels = [lab for lab in cfg.node_labels if rng.random() < 0.4]
        props = {key: _gen_value(rng, _key_kind(cfg, key))
                 for key in cfg.keys if rng.random() < 0.5}
        nodes.append({"id": f"n{i + 1}", "labels": labels, "properties": props})
    rels = []
    for i in range(n_rels):
        props = {key: _gen_value(rng, _key_kind(cfg, key))
                 for key in cfg.keys if rng.random() < 0.3}
        rels.append({
            "id": f"r{i + 1}",
            "type": rng.choice(cfg.rel_types),
            "src": f"n{rng.randint(1, n_nodes)}",
            "tgt": f"n{rng.randint(1, n_nodes)}",
            "properties": props,
        })
    return load_graph({"nodes": nodes, "relationships": rels})


_NODE_VARS = ("x", "y", "z", "t")
_REL_VARS = ("r", "s", "q")
_PATH_VARS = ("p1", "p2")

_RANGES = (
    (0, 1), (1, 2), (0, 2), (2, 2), (1, 3), (0, None), (1, None),
    (None, 2), (None, None), (2, 1),
)


class _QueryGen:
    """Stateful helper that tracks the in-scope fields while generating."""

    def __init__(self, rng: random.Random, cfg: GenConfig):
        self.rng = rng
        self.cfg = cfg
        self.fields: list[str] = []
        self.kinds: dict[str, str] = {}
        self.fresh_n = 0

    # -- small utilities --------------------------------------------------

    def fresh(self, prefix: str = "c") -> str:
        while True:
            self.fresh_n += 1
            name = f"{prefix}{self.fresh_n}"
            if name not in self.fields:
                return name

    def vars_of(self, *kinds: str) -> list[str]:
        return [f for f in self.fields if self.kinds.get(f) in kinds]

    # -- expressions -------------------------------------------------------

    def int_expr(self, depth: int) -> ast.Expr:
        rng = self.rng
        choices = ["lit"]
        if self.vars_of("node", "rel"):
            choices += ["prop", "prop"]
        if self.vars_of("int"):
            choices += ["var", "var"]
        if depth > 0:
            choices += ["fn", "index", "size"]
        kind = rng.choice(choices)
        if kind == "var":
            return ast.Name(rng.choice(self.vars_of("int")))
        if kind == "prop":
            int_keys = [k for k in self.cfg.keys if _key_kind(self.cfg, k) == "int"]
            if int_keys:
                return ast.Prop(ast.Name(rng.choice(self.vars_of("node", "rel"))),
                                rng.choice(int_keys))
        if kind == "fn" and depth > 0:
            name = rng.choice(("plus", "minus", "mult"))
            return ast.FnCall(name, (self.int_expr(depth - 1), self.int_expr(depth - 1)))
        if kind == "index" and depth > 0:
            return ast.Index(self.list_expr(depth - 1), ast.Lit(rng.randint(-2, 3)))
        if kind == "size" and depth > 0:
            return ast.FnCall("size", (self.list_expr(depth - 1),))
        if rng.random() < 0.08:
            return ast.Lit(None)
        return ast.Lit(rng.randint(0, 3))

    def str_expr(self, depth: int) -> ast.Expr:
        rng = self.rng
        str_keys = [k for k in self.cfg.keys if _key_kind(self.cfg, k) == "str"]
        if str_keys and self.vars_of("node", "rel") and rng.random() < 0.5:
            return ast.Prop(ast.Name(rng.choice(self.vars_of("node", "rel"))),
                            rng.choice(str_keys))
        if depth > 0 and rng.random() < 0.15:
            return ast.FnCall(rng.choice(("toUpper", "toLower")), (self.str_expr(depth - 1),))
        if rng.random() < 0.08:
            return ast.Lit(None)
        return ast.Lit(rng.choice(("x", "y", "zz", "")))

    def list_expr(self, depth: int) -> ast.Expr:
        rng = self.rng
        list_keys = [k for k in self.cfg.keys if _key_kind(self.cfg, k) == "list"]
        roll = rng.random()
        if roll < 0.25 and self.vars_of("rellist"):
            return ast.Name(rng.choice(self.vars_of("rellist")))
        if roll < 0.5 and list_keys and self.vars_of("node", "rel"):
            return ast.Prop(ast.Name(rng.choice(self.vars_of("node", "rel"))),
                            rng.choice(list_keys))
        if roll < 0.65 and depth > 0:
            lo = rng.randint(-1, 2)
            return ast.Slice(self.list_expr(depth - 1), ast.Lit(lo),
                             ast.Lit(rng.randint(lo, 4)) if rng.random() < 0.7 else None)
        n = rng.randint(0, 3)
        return ast.ListLit(tuple(ast.Lit(rng.randint(0, 2)) for _ in range(n)))

    def any_expr(self, depth: int) -> ast.Expr:
        rng = self.rng
        roll = rng.random()
        if roll < 0.3:
            return self.int_expr(depth)
        if roll < 0.5:
            return self.str_expr(depth)
        if roll < 0.65:
            return self.list_expr(depth)
        if roll < 0.85:
            return self.bool_expr(depth)
        if self.fields and roll < 0.95:
            return ast.Name(rng.choice(self.fields))
        return ast.Lit(None)

    def bool_expr(self, depth: int) -> ast.Expr:
        rng = self.rng
        if depth <= 0:
            return ast.Lit(rng.choice((True, False, None)))
        roll = rng.random()
        if roll < 0.05:
            # Deliberately wild: likely a type error; both sides must agree.
            return ast.Cmp(rng.choice(("<", "=", "<=")), self.any_expr(0), self.any_expr(0))
        if roll < 0.30:
            op = rng.choice(("<", "<=", ">=", ">", "=", "<>"))
            if rng.random() < 0.5:
                return ast.Cmp(op, self.int_expr(depth - 1), self.int_expr(depth - 1))
            return ast.Cmp(op, self.str_expr(depth - 1), self.str_expr(depth - 1))
        if roll < 0.40:
            nodes = self.vars_of("node")
            if len(nodes) >= 1:
                a = rng.choice(nodes)
                b = rng.choice(nodes)
                return ast.Cmp(rng.choice(("=", "<>")), ast.Name(a), ast.Name(b))
            return ast.IsNull(self.any_expr(depth - 1), rng.random() < 0.5)
        if roll < 0.50:
            return ast.IsNull(self.any_expr(depth - 1), rng.random() < 0.5)
        if roll < 0.60:
            return ast.StrOp(rng.choice(("STARTS WITH", "ENDS WITH", "CONTAINS")),
                             self.str_expr(depth - 1), self.str_expr(depth - 1))
        if roll < 0.70:
            return ast.InList(self.int_expr(depth - 1), self.list_expr(depth - 1))
        if roll < 0.80:
            return ast.Not(self.bool_expr(depth - 1))
        ctor = rng.choice((ast.And, ast.Or, ast.Xor))
        return ctor(self.bool_expr(depth - 1), self.bool_expr(depth - 1))

    # -- patterns ----------------------------------------------------------

    def node_pattern(self, tuple_node_names: list[str]) -> ast.NodePattern:
        rng = self.rng
        name = None
        if rng.random() < 0.75:
            name = rng.choice(_NODE_VARS)
            if name not in tuple_node_names:
                tuple_node_names.append(name)
        n_labels = rng.choices((0, 1, 2), weights=(55, 35, 10))[0]
        labels = frozenset(rng.sample(self.cfg.node_labels, min(n_labels, len(self.cfg.node_labels))))
        props = self.pattern_props(tuple_node_names)
        return ast.NodePattern(name, labels, props)

    def pattern_props(self, tuple_node_names: list[str]) -> tuple:
        rng = self.rng
        if rng.random() >= 0.25:
            return ()
        key = rng.choice(self.cfg.keys)
        kind = _key_kind(self.cfg, key)
        roll = rng.random()
        if roll < 0.15 and tuple_node_names:
            value: ast.Expr = ast.Prop(ast.Name(rng.choice(tuple_node_names)), key)
        elif roll < 0.20:
            value = ast.Lit(None)
        elif roll < 0.25:
            value = ast.Lit(rng.choice(("zz", 1)))  # may be the wrong kind on purpose
        else:
            raw = _gen_value(rng, kind)
            if isinstance(raw, list):
                value = ast.ListLit(tuple(ast.Lit(x) for x in raw))
            else:
                value = ast.Lit(raw)
        return ((key, value),)

    def rel_pattern(self, tuple_node_names: list[str]) -> ast.RelPattern:
        rng = self.rng
        direction = rng.choice((ast.RIGHT, ast.LEFT, ast.UNDIRECTED))
        name = rng.choice(_REL_VARS) if rng.random() < 0.4 else None
        n_types = rng.choices((0, 1, 2), weights=(50, 35, 15))[0]
        types = frozenset(rng.sample(self.cfg.rel_types, min(n_types, len(self.cfg.rel_types))))
        if rng.random() < 0.5:
            range_ = None
        else:
            candidates = [r for r in _RANGES
                          if r[1] is None or r[1] <= self.cfg.max_range]
            weights = [1 if r == (2, 1) else 4 for r in candidates]
            range_ = rng.choices(candidates, weights=weights)[0]
        props = self.pattern_props(tuple_node_names)
        return ast.RelPattern(direction, name, types, props, range_)

    def path_pattern(self, n_slots: int, tuple_node_names: list[str]) -> ast.PathPattern:
        rng = self.rng
        elements: list = [self.node_pattern(tuple_node_names)]
        for _ in range(n_slots):
            elements.append(self.rel_pattern(tuple_node_names))
            elements.append(self.node_pattern(tuple_node_names))
        name = rng.choice(_PATH_VARS) if rng.random() < 0.12 else None
        return ast.PathPattern(tuple(elements), name)

    def pattern_tuple(self) -> ast.PatternTuple:
        rng = self.rng
        tuple_node_names: list[str] = []
        n_paths = 2 if rng.random() < 0.2 else 1
        budget = self.cfg.max_slots
        paths = []
        for i in range(n_paths):
            n_slots = rng.randint(0, budget) if i < n_paths - 1 else rng.randint(0, budget)
            budget -= n_slots
            paths.append(self.path_pattern(n_slots, tuple_node_names))
        return ast.PatternTuple(tuple(paths))

    def register_pattern(self, pats: ast.PatternTuple) -> None:
        for path in pats.paths:
            if path.name is not None:
                self._add_field(path.name, "path")
            for el in path.elements:
                if el.name is None:
                    continue
                if isinstance(el, ast.NodePattern):
                    self._add_field(el.name, "node")
                elif el.range_ is None:
                    self._add_field(el.name, "rel")
                else:
                    self._add_field(el.name, "rellist")

    def _add_field(self, name: str, kind: str) -> None:
        if name not in self.fields:
            self.fields.append(name)
            self.fields.sort()
        self.kinds[name] = kind

    # -- clauses -----------------------------------------------------------

    def match_clause(self, optional: bool) -> ast.Match:
        pats = self.pattern_tuple()
        self.register_pattern(pats)
        where = self.bool_expr(2) if self.rng.random() < 0.35 else None
        return ast.Match(pats, optional, where)

    def with_clause(self) -> ast.With:
        rng = self.rng
        star = bool(self.fields) and rng.random() < 0.5
        items: list[ast.Item] = []
        new_fields: list[str] = []
        new_kinds: dict[str, str] = {}
        if star:
            new_fields = list(self.fields)
            new_kinds = dict(self.kinds)
            for _ in range(rng.randint(0, 1)):
                alias = self.fresh()
                items.append((self.any_expr(1), alias))
                new_fields.append(alias)
                new_kinds[alias] = "value"
        else:
            n_items = rng.randint(1, max(1, min(2, len(self.fields) + 1)))
            for _ in range(n_items):
                if self.fields and rng.random() < 0.45:
                    name = rng.choice(self.fields)
                    if name in new_fields:
                        continue
                    items.append((ast.Name(name), None))  # bare name, no AS
                    new_fields.append(name)
                    new_kinds[name] = self.kinds.get(name, "value")
                else:
                    alias = self.fresh()
                    items.append((self.any_expr(1), alias))
                    new_fields.append(alias)
                    new_kinds[alias] = "value"
        where = self.bool_expr(2) if rng.random() < 0.3 else None
        clause = ast.With(star, tuple(items), where)
        self.fields = sorted(new_fields)
        self.kinds = new_kinds
        return clause

    def unwind_clause(self) -> ast.Unwind:
        rng = self.rng
        roll = rng.random()
        if roll < 0.55:
            expr: ast.Expr = ast.ListLit(tuple(
                ast.Lit(rng.randint(0, 2)) for _ in range(rng.randint(0, 3))))
        elif roll < 0.8:
            expr = self.list_expr(1)
        elif roll < 0.9:
            expr = self.int_expr(0)  # non-list: unwinds to itself
        else:
            expr = ast.Lit(None)
        name = self.fresh("u")
        clause = ast.Unwind(expr, name)
        self._add_field(name, "value")
        return clause

    def return_clause(self) -> ast.Return:
        rng = self.rng
        if self.fields and rng.random() < 0.4:
            return ast.Return(True, ())
        items: list[ast.Item] = []
        used_names: set[str] = set()
        for _ in range(rng.randint(1, 3)):
            expr = self.any_expr(1)
            if rng.random() < 0.25:
                name = unparse_expr(expr)
                if name in used_names:
                    continue
                items.append((expr, None))
                used_names.add(name)
            else:
                alias = self.fresh()
                items.append((expr, alias))
                used_names.add(alias)
        if not items:
            items.append((ast.Lit(1), self.fresh()))
        return ast.Return(False, tuple(items))

    def clause_query(self, forced_aliases: Optional[list[str]] = None) -> ast.ClauseQuery:
        rng = self.rng
        clauses: list[ast.Clause] = []
        for _ in range(rng.randint(1, self.cfg.max_clauses)):
            if not self.fields:
                roll = rng.random()
                if roll < 0.6:
                    clauses.append(self.match_clause(optional=False))
                elif roll < 0.75:
                    clauses.append(self.match_clause(optional=True))
                else:
                    clauses.append(self.unwind_clause())
            else:
                roll = rng.random()
                if roll < 0.4:
                    clauses.append(self.match_clause(optional=False))
                elif roll < 0.55:
                    clauses.append(self.match_clause(optional=True))
                elif roll < 0.75:
                    clauses.append(self.with_clause())
                else:
                    clauses.append(self.unwind_clause())
        if forced_aliases is not None:
            items = tuple((self.any_expr(1), alias) for alias in forced_aliases)
            return ast.ClauseQuery(tuple(clauses), ast.Return(False, items))
        return ast.ClauseQuery(tuple(clauses), self.return_clause())


def gen_case(cfg: GenConfig) -> tuple[PropertyGraph, ast.Query]:
    """One deterministic pseudo-random case; the seed fixes graph and query."""
    rng = random.Random(cfg.seed)
    g = _gen_graph(rng, cfg)
    gen = _QueryGen(rng, cfg)
    if rng.random() < 0.12:
        left = gen.clause_query()
        aliases = _result_names(left)
        right_gen = _QueryGen(rng, cfg)
        if aliases is not None:
            right = right_gen.clause_query(forced_aliases=aliases)
            q: ast.Query = ast.UnionQuery(left, right, all=rng.random() < 0.5)
            return g, q
        return g, left
    return g, gen.clause_query()


def _result_names(q: ast.ClauseQuery) -> Optional[list[str]]:
    """Output names of a RETURN when the other UNION branch can re-declare
    them with AS: statically known (no star) and plain identifiers (an
    unaliased item like `x.k` names its column after its own text, which
    no explicit alias may spell)."""
    from .parser import KEYWORDS

    if q.ret.star:
        return None
    names = []
    for expr, alias in q.ret.items:
        name = alias if alias is not None else unparse_expr(expr)
        if not name.isidentifier() or name.upper() in KEYWORDS:
            return None
        names.append(name)
    return names
