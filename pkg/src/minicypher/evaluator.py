"""Expression evaluation: values under an assignment, in three-valued logic.

``eval_expr(e, g, u)`` produces the value of ``e`` over graph ``g`` with the
names of ``e`` bound by the record ``u``.  The semantics is deliberately
partial: where no rule applies to the operand types at hand (``1 AND 2``,
slicing an integer, ordering a node id) evaluation raises
:class:`~minicypher.errors.EvalError` with kind ``TypeMismatch`` rather than
inventing a result.  The partiality sites are catalogued in
``docs/semantics-notes.md``.

The trilean domain is {True, False, None}; None doubles as the null value.
"""

from __future__ import annotations

import operator
from typing import Optional

from . import ast
from .errors import EvalError, type_mismatch, unknown_name
from .graph import PropertyGraph
from .tables import Record
from .values import (
    FunctionRegistry,
    Map,
    NodeId,
    Path,
    RelId,
    Value,
    apply_base_fn,
)

Trilean = Optional[bool]


# ---------------------------------------------------------------------------
# Trilean connectives (exact truth tables)
# ---------------------------------------------------------------------------


def tri_not(a: Trilean) -> Trilean:
    return None if a is None else not a


def tri_and(a: Trilean, b: Trilean) -> Trilean:
    if a is False or b is False:
        return False
    if a is True and b is True:
        return True
    return None


def tri_or(a: Trilean, b: Trilean) -> Trilean:
    if a is True or b is True:
        return True
    if a is False and b is False:
        return False
    return None


def tri_xor(a: Trilean, b: Trilean) -> Trilean:
    # Unlike AND/OR, XOR cannot absorb null: any null operand wins.
    if a is None or b is None:
        return None
    return a is not b


# ---------------------------------------------------------------------------
# Value equality and ordering
# ---------------------------------------------------------------------------

_COMPOSITE = ("list", "map", "path")


def _tag(v: Value) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):  # bool before int: bool <: int in Python
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, str):
        return "str"
    if isinstance(v, NodeId):
        return "node"
    if isinstance(v, RelId):
        return "rel"
    if isinstance(v, tuple):
        return "list"
    if isinstance(v, Map):
        return "map"
    if isinstance(v, Path):
        return "path"
    raise TypeError(f"not a value: {v!r}")


def eq_values(a: Value, b: Value) -> Trilean:
    """The trilean ``=`` on values.

    Null on either side makes the comparison null.  Values of the same type
    compare by that type's rule (identifiers and paths two-valued, lists and
    maps element-wise trilean).  A composite against a value of any other
    type is false; two different non-composite types have no equality rule
    and raise TypeMismatch.
    """
    if a is None or b is None:
        return None
    ta, tb = _tag(a), _tag(b)
    if ta != tb:
        if ta in _COMPOSITE or tb in _COMPOSITE:
            return False
        raise type_mismatch(f"no equality between {ta} and {tb}")
    if ta in ("bool", "int", "str"):
        return a == b
    if ta in ("node", "rel"):
        return a.key == b.key
    if ta == "path":
        return a.nodes == b.nodes and a.rels == b.rels
    if ta == "list":
        if len(a) != len(b):
            return False
        saw_false = saw_null = False
        for x, y in zip(a, b):
            t = eq_values(x, y)
            if t is False:
                saw_false = True
            elif t is None:
                saw_null = True
        if saw_false:
            return False
        return None if saw_null else True
    # maps
    if a.keys != b.keys:  # covers different key counts too
        return False
    saw_false = saw_null = False
    for k in sorted(a.keys):
        t = eq_values(a.get(k), b.get(k))
        if t is False:
            saw_false = True
        elif t is None:
            saw_null = True
    if saw_false:
        return False
    return None if saw_null else True


_ORDER_OPS = {"<": operator.lt, "<=": operator.le, ">=": operator.ge, ">": operator.gt}


def compare_values(op: str, a: Value, b: Value) -> Trilean:
    """Ordering comparison: null-propagating, defined on int/int and str/str."""
    if a is None or b is None:
        return None
    if isinstance(a, int) and isinstance(b, int) and not isinstance(a, bool) and not isinstance(b, bool):
        return _ORDER_OPS[op](a, b)
    if isinstance(a, str) and isinstance(b, str):
        return _ORDER_OPS[op](a, b)
    raise type_mismatch(f"no order between {_tag(a)} and {_tag(b)}")


def is_true(v: Value) -> bool:
    """Exactly the trilean true (not 1, not a truthy value)."""
    return v is True


# ---------------------------------------------------------------------------
# The evaluator
# ---------------------------------------------------------------------------


def _as_trilean(v: Value, what: str, span) -> Trilean:
    if v is None or isinstance(v, bool):
        return v
    raise type_mismatch(f"{what} expects booleans, got {_tag(v)}", span)


def _need_list(v: Value, what: str, span) -> tuple:
    if isinstance(v, tuple):
        return v
    raise type_mismatch(f"{what} expects a list, got {_tag(v)}", span)


def _need_int(v: Value, what: str, span) -> int:
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    raise type_mismatch(f"{what} expects an integer, got {_tag(v)}", span)


def eval_expr(
    e: ast.Expr,
    g: PropertyGraph,
    u: Record,
    functions: FunctionRegistry | None = None,
) -> Value:
    if isinstance(e, ast.Lit):
        return e.value

    if isinstance(e, ast.Name):
        if e.name not in u:
            raise unknown_name(e.name, e.span)
        return u[e.name]

    if isinstance(e, ast.FnCall):
        args = tuple(eval_expr(a, g, u, functions) for a in e.args)
        try:
            return apply_base_fn(e.name, args, functions)
        except EvalError as exc:
            if exc.span is None:
                exc.span = e.span
            raise

    if isinstance(e, ast.Prop):
        base = eval_expr(e.base, g, u, functions)
        if base is None:
            return None
        if isinstance(base, (NodeId, RelId)):
            return g.prop(base, e.key)
        if isinstance(base, Map):
            return base.get(e.key)  # null when the key is absent
        raise type_mismatch(f"cannot read property `{e.key}` of a {_tag(base)}", e.span)

    if isinstance(e, ast.MapLit):
        # Evaluate every entry (so errors in shadowed entries still surface),
        # then keep only the last occurrence of each key.
        evaluated = [(k, eval_expr(sub, g, u, functions)) for k, sub in e.entries]
        last: dict[str, Value] = {}
        for k, v in evaluated:
            last[k] = v
        return Map(tuple(last.items()))

    if isinstance(e, ast.ListLit):
        return tuple(eval_expr(sub, g, u, functions) for sub in e.items)

    if isinstance(e, ast.Index):
        base = _need_list(eval_expr(e.base, g, u, functions), "indexing", e.span)
        i = _need_int(eval_expr(e.index, g, u, functions), "indexing", e.span)
        m = len(base)
        if 0 <= i < m:
            return base[i]
        if -m <= i < 0:
            return base[m + i]
        return None  # out of range (and every index into an empty list)

    if isinstance(e, ast.Slice):
        base = _need_list(eval_expr(e.base, g, u, functions), "slicing", e.span)
        m = len(base)
        lo = 0 if e.lo is None else _need_int(eval_expr(e.lo, g, u, functions), "slicing", e.span)
        hi = m if e.hi is None else _need_int(eval_expr(e.hi, g, u, functions), "slicing", e.span)
        i = lo if lo >= 0 else m + lo
        j = hi if hi >= 0 else m + hi
        if i <= j and i < m and j > 0:
            return base[max(0, i):min(m, j)]
        return ()

    if isinstance(e, ast.InList):
        item = eval_expr(e.item, g, u, functions)
        container = eval_expr(e.container, g, u, functions)
        if not isinstance(container, tuple):
            raise type_mismatch(f"IN expects a list, got {_tag(container)}", e.span)
        saw_true = saw_null = False
        for w in container:
            try:
                t = eq_values(item, w)
            except EvalError as exc:
                if exc.span is None:
                    exc.span = e.span
                raise
            if t is True:
                saw_true = True
            elif t is None:
                saw_null = True
        if saw_true:
            return True
        return None if saw_null else False

    if isinstance(e, ast.StrOp):
        left = eval_expr(e.left, g, u, functions)
        right = eval_expr(e.right, g, u, functions)
        for v in (left, right):
            if v is not None and not isinstance(v, str):
                raise type_mismatch(f"{e.op} expects strings, got {_tag(v)}", e.span)
        if left is None or right is None:
            return None
        if e.op == "STARTS WITH":
            return left.startswith(right)
        if e.op == "ENDS WITH":
            return left.endswith(right)
        return right in left  # CONTAINS

    if isinstance(e, ast.Or):
        a = _as_trilean(eval_expr(e.left, g, u, functions), "OR", e.span)
        b = _as_trilean(eval_expr(e.right, g, u, functions), "OR", e.span)
        return tri_or(a, b)

    if isinstance(e, ast.And):
        a = _as_trilean(eval_expr(e.left, g, u, functions), "AND", e.span)
        b = _as_trilean(eval_expr(e.right, g, u, functions), "AND", e.span)
        return tri_and(a, b)

    if isinstance(e, ast.Xor):
        a = _as_trilean(eval_expr(e.left, g, u, functions), "XOR", e.span)
        b = _as_trilean(eval_expr(e.right, g, u, functions), "XOR", e.span)
        return tri_xor(a, b)

    if isinstance(e, ast.Not):
        return tri_not(_as_trilean(eval_expr(e.expr, g, u, functions), "NOT", e.span))

    if isinstance(e, ast.IsNull):
        v = eval_expr(e.expr, g, u, functions)
        return (v is not None) if e.negated else (v is None)

    if isinstance(e, ast.Cmp):
        left = eval_expr(e.left, g, u, functions)
        right = eval_expr(e.right, g, u, functions)
        try:
            if e.op == "=":
                return eq_values(left, right)
            if e.op == "<>":
                return tri_not(eq_values(left, right))
            return compare_values(e.op, left, right)
        except EvalError as exc:
            if exc.span is None:
                exc.span = e.span
            raise

    raise TypeError(f"not an expression: {e!r}")
