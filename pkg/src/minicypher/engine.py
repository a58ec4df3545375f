"""Clause and query semantics: tables in, tables out.

A query denotes a transformation of tables; running a query means applying
that transformation to the unit table (one empty record).  Clauses compose
left to right.  Everything here is bag-preserving: a row of multiplicity k
behaves exactly like k copies of the row.
"""

from __future__ import annotations

from . import ast
from .ast import free_vars, pattern_expr_names
from .errors import AliasClash, NameClash, StarOnEmptyFields
from .evaluator import eval_expr, is_true
from .graph import PropertyGraph
from .matcher import match_tuple
from .parser import unparse_expr
from .tables import Record, Table, bag_union, distinct, unit_table
from .values import FunctionRegistry, canon


def _match_rows(
    c: ast.Match,
    g: PropertyGraph,
    t: Table,
    functions: FunctionRegistry | None,
) -> Table:
    """MATCH / OPTIONAL MATCH with the optional WHERE applied after matching."""
    pats = c.patterns
    new_names = free_vars(pats)
    out = Table(set(t.fields) | new_names)

    # The match bag depends on the input row only through the names the
    # pattern mentions (as constraints or inside property expressions), so
    # memoize per restriction of the row to those names.
    relevant = tuple(f for f in t.fields if f in (new_names | pattern_expr_names(pats)))
    memo: dict[tuple, Table] = {}

    for u, count in t.rows():
        key = tuple(canon(u[f]) for f in relevant)
        sub = memo.get(key)
        if sub is None:
            sub = match_tuple(pats, g, u, functions)
            memo[key] = sub
        survived = False
        for u2, c2 in sub.rows():
            merged = {**u, **u2}
            if c.where is not None and not is_true(eval_expr(c.where, g, merged, functions)):
                continue
            survived = True
            out.add(merged, count * c2)
        if c.optional and not survived:
            padding = {f: None for f in out.fields if f not in u}
            out.add({**u, **padding}, count)
    return out


def _project(
    star: bool,
    items: tuple[ast.Item, ...],
    g: PropertyGraph,
    t: Table,
    functions: FunctionRegistry | None,
) -> Table:
    """Shared projection rule of WITH and RETURN."""
    pairs: list[tuple[str, ast.Expr]] = []
    if star:
        if not t.fields:
            raise StarOnEmptyFields("* requires the table to have at least one field")
        for f in t.fields:  # t.fields is sorted
            pairs.append((f, ast.Name(f)))
    for expr, alias in items:
        pairs.append((alias if alias is not None else unparse_expr(expr), expr))
    names = [a for a, _ in pairs]
    dupes = sorted({a for a in names if names.count(a) > 1})
    if dupes:
        raise AliasClash(f"duplicate output name(s): {dupes}")
    if not names:
        raise AliasClash("projection with no output names")
    out = Table(names)
    for u, count in t.rows():
        out.add({a: eval_expr(e, g, u, functions) for a, e in pairs}, count)
    return out


def run_clause(
    c: ast.Clause,
    g: PropertyGraph,
    t: Table,
    functions: FunctionRegistry | None = None,
) -> Table:
    if isinstance(c, ast.Match):
        return _match_rows(c, g, t, functions)

    if isinstance(c, ast.With):
        out = _project(c.star, c.items, g, t, functions)
        if c.where is None:
            return out
        kept = Table(out.fields)
        for u, count in out.rows():
            if is_true(eval_expr(c.where, g, u, functions)):
                kept.add(u, count)
        return kept

    if isinstance(c, ast.Unwind):
        if c.name in t.fields:
            raise NameClash(f"UNWIND alias `{c.name}` is already a field")
        out = Table(t.fields + (c.name,))
        for u, count in t.rows():
            v = eval_expr(c.expr, g, u, functions)
            if isinstance(v, tuple):
                for x in v:
                    out.add({**u, c.name: x}, count)
            else:
                # A non-list value (null included) unwinds to itself.
                out.add({**u, c.name: v}, count)
        return out

    raise TypeError(f"not a clause: {c!r}")


def run_query(
    q: ast.Query,
    g: PropertyGraph,
    t: Table,
    functions: FunctionRegistry | None = None,
) -> Table:
    if isinstance(q, ast.UnionQuery):
        # Both branches transform the same incoming table.
        left = run_query(q.left, g, t, functions)
        right = run_query(q.right, g, t, functions)
        combined = bag_union(left, right)
        return combined if q.all else distinct(combined)
    if isinstance(q, ast.ClauseQuery):
        cur = t
        for c in q.clauses:
            cur = run_clause(c, g, cur, functions)
        return _project(q.ret.star, q.ret.items, g, cur, functions)
    raise TypeError(f"not a query: {q!r}")


def output(q: ast.Query, g: PropertyGraph, functions: FunctionRegistry | None = None) -> Table:
    """The result of q over g: the query transformation applied to T_unit."""
    return run_query(q, g, unit_table(), functions)
