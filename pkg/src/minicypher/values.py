"""The value universe: ids, base values, trilean, lists, maps, paths.

Values are represented by plain Python data wherever that is faithful:

====================  =========================================
null                  ``None``
booleans (trilean)    ``True`` / ``False`` (``None`` is null)
integers              ``int``
strings               ``str``
node/relationship id  :class:`NodeId` / :class:`RelId`
list                  ``tuple`` of values
map                   :class:`Map`
path                  :class:`Path`
====================  =========================================

The one trap in this encoding is that Python considers ``True == 1`` and
``hash(True) == hash(1)``.  Structural identity of values (the notion used
for bag counting, ``distinct`` and duplicate elimination — *not* the
language-level ``=``) therefore goes through :func:`canon`, which produces
a type-tagged, hashable normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .errors import ConcatMismatch, EvalError, type_mismatch


@dataclass(frozen=True)
class NodeId:
    """A node identifier. ``key`` is the document-given id string."""

    key: str

    def __repr__(self) -> str:
        return f"NodeId({self.key})"


@dataclass(frozen=True)
class RelId:
    """A relationship identifier."""

    key: str

    def __repr__(self) -> str:
        return f"RelId({self.key})"


class Map:
    """An immutable map value with pairwise-distinct string keys.

    Insertion order is retained for display purposes only; equality and
    hashing treat the entries as an unordered key set.
    """

    __slots__ = ("entries", "_canon")

    def __init__(self, entries: tuple[tuple[str, "Value"], ...] = ()):
        keys = [k for k, _ in entries]
        if len(keys) != len(set(keys)):
            raise ValueError(f"map keys must be distinct: {keys}")
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "_canon", None)

    def get(self, key: str) -> "Value":
        for k, v in self.entries:
            if k == key:
                return v
        return None

    def has(self, key: str) -> bool:
        return any(k == key for k, _ in self.entries)

    @property
    def keys(self) -> frozenset[str]:
        return frozenset(k for k, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Map):
            return NotImplemented
        return canon(self) == canon(other)

    def __hash__(self) -> int:
        return hash(canon(self))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v!r}" for k, v in self.entries)
        return f"map({inner})"


class Path:
    """A path value: node ids at even positions, relationship ids between.

    ``nodes`` has exactly one more element than ``rels``; a single-node
    path has no relationships at all.
    """

    __slots__ = ("nodes", "rels")

    def __init__(self, nodes: tuple[NodeId, ...], rels: tuple[RelId, ...] = ()):
        if len(nodes) != len(rels) + 1:
            raise ValueError(f"path shape invalid: {len(nodes)} nodes, {len(rels)} rels")
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "rels", tuple(rels))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Path):
            return NotImplemented
        return self.nodes == other.nodes and self.rels == other.rels

    def __hash__(self) -> int:
        return hash((self.nodes, self.rels))

    def __repr__(self) -> str:
        parts = [self.nodes[0].key]
        for r, n in zip(self.rels, self.nodes[1:]):
            parts.append(r.key)
            parts.append(n.key)
        return "path(" + ",".join(parts) + ")"


# A value is one of: None, bool, int, str, NodeId, RelId, tuple (list), Map, Path.
Value = Union[None, bool, int, str, NodeId, RelId, tuple, Map, Path]

CanonValue = tuple


def canon(v: Value) -> CanonValue:
    """Type-tagged normal form used for structural identity of values.

    Two values are the same piece of data iff their canon forms are equal;
    the tag makes ``True``/``1`` (and nested occurrences of them) distinct,
    and map entries are sorted so insertion order does not matter.
    """
    if v is None:
        return ("null",)
    if isinstance(v, bool):  # must precede the int test: bool <: int
        return ("bool", v)
    if isinstance(v, int):
        return ("int", v)
    if isinstance(v, str):
        return ("str", v)
    if isinstance(v, NodeId):
        return ("node", v.key)
    if isinstance(v, RelId):
        return ("rel", v.key)
    if isinstance(v, tuple):
        return ("list", tuple(canon(x) for x in v))
    if isinstance(v, Map):
        if v._canon is None:
            entries = tuple(sorted(((k, canon(w)) for k, w in v.entries), key=lambda kv: kv[0]))
            object.__setattr__(v, "_canon", ("map", entries))
        return v._canon
    if isinstance(v, Path):
        return ("path", tuple(i.key for i in v.nodes), tuple(i.key for i in v.rels))
    raise TypeError(f"not a value: {v!r}")


def same_value(a: Value, b: Value) -> bool:
    """Structural identity (null is identical to null). Not the trilean ``=``."""
    return canon(a) == canon(b)


def is_composite(v: Value) -> bool:
    return isinstance(v, (tuple, Map, Path))


def single_node_path(n: NodeId) -> Path:
    return Path((n,))


def path_concat(p1: Path, p2: Path) -> Path:
    """Join two paths at their shared endpoint node.

    The last node of ``p1`` must equal the first node of ``p2``; the shared
    node appears once in the result.
    """
    if p1.nodes[-1] != p2.nodes[0]:
        raise ConcatMismatch(
            f"cannot concatenate: {p1!r} ends at {p1.nodes[-1].key}, "
            f"{p2!r} starts at {p2.nodes[0].key}"
        )
    return Path(p1.nodes + p2.nodes[1:], p1.rels + p2.rels)


# ---------------------------------------------------------------------------
# Base function registry
# ---------------------------------------------------------------------------

# Functions are looked up by (name, arity); names are case-sensitive.
FunctionRegistry = dict[tuple[str, int], Callable[..., Value]]


def _arith(name: str, op: Callable[[int, int], int]) -> Callable[..., Value]:
    def fn(a: Value, b: Value) -> Value:
        if a is None or b is None:
            return None
        if isinstance(a, bool) or isinstance(b, bool):
            raise type_mismatch(f"{name}() expects integers")
        if not isinstance(a, int) or not isinstance(b, int):
            raise type_mismatch(f"{name}() expects integers, got {a!r}, {b!r}")
        return op(a, b)

    return fn


def _size(v: Value) -> Value:
    if v is None:
        return None
    if isinstance(v, (tuple, str)) and not isinstance(v, bool):
        return len(v)
    raise type_mismatch(f"size() expects a list or string, got {v!r}")


def _to_upper(v: Value) -> Value:
    if v is None:
        return None
    if isinstance(v, str):
        return v.upper()
    raise type_mismatch(f"toUpper() expects a string, got {v!r}")


def _to_lower(v: Value) -> Value:
    if v is None:
        return None
    if isinstance(v, str):
        return v.lower()
    raise type_mismatch(f"toLower() expects a string, got {v!r}")


BASE_FUNCTIONS: FunctionRegistry = {
    ("plus", 2): _arith("plus", lambda a, b: a + b),
    ("minus", 2): _arith("minus", lambda a, b: a - b),
    ("mult", 2): _arith("mult", lambda a, b: a * b),
    ("size", 1): _size,
    ("toUpper", 1): _to_upper,
    ("toLower", 1): _to_lower,
}


def apply_base_fn(name: str, args: tuple[Value, ...], registry: FunctionRegistry | None = None) -> Value:
    """Apply a registered base function; never mutates its arguments."""
    registry = BASE_FUNCTIONS if registry is None else registry
    fn = registry.get((name, len(args)))
    if fn is None:
        if any(n == name for n, _ in registry):
            raise EvalError("ArityMismatch", f"{name}() does not take {len(args)} argument(s)")
        raise EvalError("UnknownFunction", f"unknown function {name}()")
    return fn(*args)
