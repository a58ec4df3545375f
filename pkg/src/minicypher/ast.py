"""Abstract syntax for expressions, patterns, clauses and queries.

All nodes are frozen dataclasses, hashable, and comparable by structure;
the optional source span never takes part in equality, so a parsed tree
equals a hand-built one.  Collections inside nodes are tuples/frozensets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .values import Value

Span = tuple[int, int]

# Relationship pattern directions (also used by the graph adjacency index):
# "->" left-to-right, "<-" right-to-left, "--" undirected.
RIGHT = "->"
LEFT = "<-"
UNDIRECTED = "--"


@dataclass(frozen=True)
class AstNode:
    span: Optional[Span] = field(default=None, compare=False, repr=False, kw_only=True)


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lit(AstNode):
    value: Value = None


@dataclass(frozen=True)
class Name(AstNode):
    name: str = ""


@dataclass(frozen=True)
class FnCall(AstNode):
    name: str = ""
    args: tuple["Expr", ...] = ()


@dataclass(frozen=True)
class Prop(AstNode):
    base: "Expr" = None  # type: ignore[assignment]
    key: str = ""


@dataclass(frozen=True)
class MapLit(AstNode):
    # Duplicate keys are allowed in a map *literal*; evaluation keeps the
    # last occurrence of each key.
    entries: tuple[tuple[str, "Expr"], ...] = ()


@dataclass(frozen=True)
class ListLit(AstNode):
    items: tuple["Expr", ...] = ()


@dataclass(frozen=True)
class Index(AstNode):
    base: "Expr" = None  # type: ignore[assignment]
    index: "Expr" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Slice(AstNode):
    base: "Expr" = None  # type: ignore[assignment]
    lo: Optional["Expr"] = None
    hi: Optional["Expr"] = None


@dataclass(frozen=True)
class InList(AstNode):
    item: "Expr" = None  # type: ignore[assignment]
    container: "Expr" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class StrOp(AstNode):
    op: str = ""  # "STARTS WITH" | "ENDS WITH" | "CONTAINS"
    left: "Expr" = None  # type: ignore[assignment]
    right: "Expr" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Or(AstNode):
    left: "Expr" = None  # type: ignore[assignment]
    right: "Expr" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class And(AstNode):
    left: "Expr" = None  # type: ignore[assignment]
    right: "Expr" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Xor(AstNode):
    left: "Expr" = None  # type: ignore[assignment]
    right: "Expr" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Not(AstNode):
    expr: "Expr" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class IsNull(AstNode):
    expr: "Expr" = None  # type: ignore[assignment]
    negated: bool = False


@dataclass(frozen=True)
class Cmp(AstNode):
    op: str = "="  # one of < <= >= > = <>
    left: "Expr" = None  # type: ignore[assignment]
    right: "Expr" = None  # type: ignore[assignment]


Expr = Union[
    Lit, Name, FnCall, Prop, MapLit, ListLit, Index, Slice, InList,
    StrOp, Or, And, Xor, Not, IsNull, Cmp,
]


def expr_names(e: Expr) -> frozenset[str]:
    """The set of names an expression reads from the assignment."""
    if isinstance(e, Name):
        return frozenset((e.name,))
    if isinstance(e, Lit):
        return frozenset()
    if isinstance(e, FnCall):
        return frozenset().union(*(expr_names(a) for a in e.args)) if e.args else frozenset()
    if isinstance(e, Prop):
        return expr_names(e.base)
    if isinstance(e, MapLit):
        out: frozenset[str] = frozenset()
        for _, sub in e.entries:
            out |= expr_names(sub)
        return out
    if isinstance(e, ListLit):
        out = frozenset()
        for sub in e.items:
            out |= expr_names(sub)
        return out
    if isinstance(e, Index):
        return expr_names(e.base) | expr_names(e.index)
    if isinstance(e, Slice):
        out = expr_names(e.base)
        if e.lo is not None:
            out |= expr_names(e.lo)
        if e.hi is not None:
            out |= expr_names(e.hi)
        return out
    if isinstance(e, InList):
        return expr_names(e.item) | expr_names(e.container)
    if isinstance(e, (StrOp, Or, And, Xor, Cmp)):
        return expr_names(e.left) | expr_names(e.right)
    if isinstance(e, Not):
        return expr_names(e.expr)
    if isinstance(e, IsNull):
        return expr_names(e.expr)
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodePattern(AstNode):
    name: Optional[str] = None
    labels: frozenset[str] = frozenset()
    props: tuple[tuple[str, Expr], ...] = ()


@dataclass(frozen=True)
class RelPattern(AstNode):
    """A relationship pattern.

    ``range_`` is None when no length token was written — the pattern then
    matches exactly one relationship and a name binds the relationship id
    itself.  Otherwise ``range_`` is a (lo, hi) pair where either bound may
    be None (defaulting to 1 and unbounded respectively) and a name binds
    the list of traversed relationships.
    """

    direction: str = RIGHT
    name: Optional[str] = None
    types: frozenset[str] = frozenset()
    props: tuple[tuple[str, Expr], ...] = ()
    range_: Optional[tuple[Optional[int], Optional[int]]] = None


@dataclass(frozen=True)
class PathPattern(AstNode):
    # Alternating node/rel patterns; starts and ends with a NodePattern.
    elements: tuple[Union[NodePattern, RelPattern], ...] = ()
    name: Optional[str] = None

    def node_patterns(self) -> tuple[NodePattern, ...]:
        return self.elements[0::2]  # type: ignore[return-value]

    def rel_patterns(self) -> tuple[RelPattern, ...]:
        return self.elements[1::2]  # type: ignore[return-value]


@dataclass(frozen=True)
class PatternTuple(AstNode):
    paths: tuple[PathPattern, ...] = ()


def range_of(rel: RelPattern) -> tuple[int, Optional[int]]:
    """Effective (lo, hi) hop range; hi None means unbounded."""
    if rel.range_ is None:
        return (1, 1)
    lo, hi = rel.range_
    return (1 if lo is None else lo, hi)


def binds_single_rel(rel: RelPattern) -> bool:
    """True when a name on this pattern binds the relationship id itself."""
    return rel.range_ is None


def is_rigid(pat: Union[RelPattern, PathPattern, PatternTuple]) -> bool:
    if isinstance(pat, RelPattern):
        lo, hi = range_of(pat)
        return hi is not None and lo == hi
    if isinstance(pat, PathPattern):
        return all(is_rigid(r) for r in pat.rel_patterns())
    return all(is_rigid(p) for p in pat.paths)


def free_vars(pat: Union[NodePattern, RelPattern, PathPattern, PatternTuple]) -> frozenset[str]:
    """All non-nil names of the pattern, including path names."""
    if isinstance(pat, (NodePattern, RelPattern)):
        return frozenset(() if pat.name is None else (pat.name,))
    if isinstance(pat, PathPattern):
        out = frozenset(() if pat.name is None else (pat.name,))
        for el in pat.elements:
            out |= free_vars(el)
        return out
    if isinstance(pat, PatternTuple):
        out = frozenset()
        for p in pat.paths:
            out |= free_vars(p)
        return out
    raise TypeError(f"not a pattern: {pat!r}")


def pattern_expr_names(pat: Union[PathPattern, PatternTuple]) -> frozenset[str]:
    """Names read by property expressions inside the pattern."""
    out: frozenset[str] = frozenset()
    if isinstance(pat, PatternTuple):
        for p in pat.paths:
            out |= pattern_expr_names(p)
        return out
    for el in pat.elements:
        for _, e in el.props:
            out |= expr_names(e)
    return out


# ---------------------------------------------------------------------------
# Clauses and queries
# ---------------------------------------------------------------------------

# A projection item: (expression, optional alias).
Item = tuple[Expr, Optional[str]]


@dataclass(frozen=True)
class Match(AstNode):
    patterns: PatternTuple = PatternTuple()
    optional: bool = False
    where: Optional[Expr] = None


@dataclass(frozen=True)
class With(AstNode):
    star: bool = False
    items: tuple[Item, ...] = ()
    where: Optional[Expr] = None


@dataclass(frozen=True)
class Unwind(AstNode):
    expr: Expr = None  # type: ignore[assignment]
    name: str = ""


Clause = Union[Match, With, Unwind]


@dataclass(frozen=True)
class Return(AstNode):
    star: bool = False
    items: tuple[Item, ...] = ()


@dataclass(frozen=True)
class ClauseQuery(AstNode):
    clauses: tuple[Clause, ...] = ()
    ret: Return = Return()


@dataclass(frozen=True)
class UnionQuery(AstNode):
    left: "Query" = None  # type: ignore[assignment]
    right: "Query" = None  # type: ignore[assignment]
    all: bool = False


Query = Union[ClauseQuery, UnionQuery]
