"""Immutable in-memory property graph with an adjacency index.

A graph is the tuple (nodes, relationships, src, tgt, properties, labels,
types).  Property lookup is total: unset keys read as null.  Instances are
frozen after :func:`load_graph`; all query methods are read-only and safe
to share between threads.
"""

from __future__ import annotations

from typing import Any, Iterable

from .errors import DanglingEndpoint, DuplicateId, SchemaError, UnknownId
from .values import Map, NodeId, RelId, Value

# Directions for the adjacency index.
OUT = "->"
IN = "<-"
BOTH = "--"


def _value_from_json(raw: Any, where: str) -> Value:
    """Decode a JSON property value into a Value. Floats are rejected."""
    if raw is None or isinstance(raw, (bool, int, str)):
        return raw
    if isinstance(raw, float):
        raise SchemaError(f"{where}: floating-point property values are not supported")
    if isinstance(raw, list):
        return tuple(_value_from_json(x, where) for x in raw)
    if isinstance(raw, dict):
        try:
            return Map(tuple((k, _value_from_json(v, where)) for k, v in raw.items()))
        except ValueError as exc:
            raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}: unsupported property value {raw!r}")


def _value_to_json(v: Value) -> Any:
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, tuple):
        return [_value_to_json(x) for x in v]
    if isinstance(v, Map):
        return {k: _value_to_json(w) for k, w in v.entries}
    raise SchemaError(f"cannot store {v!r} as a document property")


class PropertyGraph:
    """Frozen property graph. Build instances with :func:`load_graph`."""

    __slots__ = (
        "nodes", "rels", "_src", "_tgt", "_labels", "_types", "_props",
        "_out", "_in", "__weakref__",
    )

    def __init__(
        self,
        nodes: tuple[NodeId, ...],
        rels: tuple[RelId, ...],
        src: dict[RelId, NodeId],
        tgt: dict[RelId, NodeId],
        labels: dict[NodeId, frozenset[str]],
        types: dict[RelId, str],
        props: dict[tuple[str, str], Value],
    ):
        self.nodes = nodes
        self.rels = rels
        self._src = src
        self._tgt = tgt
        self._labels = labels
        self._types = types
        self._props = props
        # Adjacency index, in document order for determinism.
        out: dict[NodeId, list[RelId]] = {n: [] for n in nodes}
        inc: dict[NodeId, list[RelId]] = {n: [] for n in nodes}
        for r in rels:
            out[src[r]].append(r)
            inc[tgt[r]].append(r)
        self._out = {n: tuple(v) for n, v in out.items()}
        self._in = {n: tuple(v) for n, v in inc.items()}

    # -- lookups ----------------------------------------------------------

    def has_id(self, i: NodeId | RelId) -> bool:
        if isinstance(i, NodeId):
            return i in self._labels
        return i in self._types

    def src(self, r: RelId) -> NodeId:
        self._check_rel(r)
        return self._src[r]

    def tgt(self, r: RelId) -> NodeId:
        self._check_rel(r)
        return self._tgt[r]

    def labels(self, n: NodeId) -> frozenset[str]:
        if n not in self._labels:
            raise UnknownId(f"unknown node id {n.key}")
        return self._labels[n]

    def rel_type(self, r: RelId) -> str:
        self._check_rel(r)
        return self._types[r]

    def prop(self, i: NodeId | RelId, key: str) -> Value:
        """Stored property value, or null when no property is stored."""
        if not self.has_id(i):
            raise UnknownId(f"unknown id {i.key}")
        return self._props.get((i.key, key))

    def incident(self, n: NodeId, direction: str) -> tuple[RelId, ...]:
        """Relationships with src(r)=n (OUT), tgt(r)=n (IN), or either (BOTH)."""
        if n not in self._labels:
            raise UnknownId(f"unknown node id {n.key}")
        if direction == OUT:
            return self._out[n]
        if direction == IN:
            return self._in[n]
        if direction == BOTH:
            outgoing = self._out[n]
            # A self-loop sits in both lists; report it once.
            return outgoing + tuple(r for r in self._in[n] if self._src[r] != n)
        raise ValueError(f"bad direction {direction!r}")

    def other_end(self, r: RelId, n: NodeId) -> NodeId:
        return self._tgt[r] if self._src[r] == n else self._src[r]

    def _check_rel(self, r: RelId) -> None:
        if r not in self._types:
            raise UnknownId(f"unknown relationship id {r.key}")

    # -- document round-trip ----------------------------------------------

    def to_document(self) -> dict:
        """Re-serialize to the graph JSON schema (inverse of load_graph)."""
        return {
            "nodes": [
                {
                    "id": n.key,
                    "labels": sorted(self._labels[n]),
                    "properties": {
                        k: _value_to_json(v)
                        for (i, k), v in sorted(self._props.items())
                        if i == n.key
                    },
                }
                for n in self.nodes
            ],
            "relationships": [
                {
                    "id": r.key,
                    "type": self._types[r],
                    "src": self._src[r].key,
                    "tgt": self._tgt[r].key,
                    "properties": {
                        k: _value_to_json(v)
                        for (i, k), v in sorted(self._props.items())
                        if i == r.key
                    },
                }
                for r in self.rels
            ],
        }

    def __repr__(self) -> str:
        return f"PropertyGraph(|N|={len(self.nodes)}, |R|={len(self.rels)})"


def _expect(doc: dict, key: str, kind: type, where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{where}: missing field `{key}`")
    v = doc[key]
    if not isinstance(v, kind) or isinstance(v, bool):
        raise SchemaError(f"{where}: field `{key}` must be {kind.__name__}")
    return v


def load_graph(document: dict) -> PropertyGraph:
    """Build a PropertyGraph from a parsed JSON document.

    Raises SchemaError on shape problems, DuplicateId for repeated ids
    (node and relationship ids share one namespace), and DanglingEndpoint
    when a relationship references an undeclared node.
    """
    node_docs = _expect(document, "nodes", list, "document")
    rel_docs = _expect(document, "relationships", list, "document")

    seen: set[str] = set()
    nodes: list[NodeId] = []
    labels: dict[NodeId, frozenset[str]] = {}
    props: dict[tuple[str, str], Value] = {}

    for idx, nd in enumerate(node_docs):
        where = f"nodes[{idx}]"
        raw_id = _expect(nd, "id", str, where)
        if raw_id in seen:
            raise DuplicateId(f"{where}: id {raw_id!r} declared twice")
        seen.add(raw_id)
        n = NodeId(raw_id)
        raw_labels = nd.get("labels", [])
        if not isinstance(raw_labels, list) or not all(isinstance(x, str) for x in raw_labels):
            raise SchemaError(f"{where}: `labels` must be a list of strings")
        raw_props = nd.get("properties", {})
        if not isinstance(raw_props, dict):
            raise SchemaError(f"{where}: `properties` must be an object")
        nodes.append(n)
        labels[n] = frozenset(raw_labels)
        for k, raw in raw_props.items():
            v = _value_from_json(raw, f"{where}.properties.{k}")
            if v is not None:
                props[(raw_id, k)] = v

    rels: list[RelId] = []
    src: dict[RelId, NodeId] = {}
    tgt: dict[RelId, NodeId] = {}
    types: dict[RelId, str] = {}
    node_ids = {n.key for n in nodes}

    for idx, rd in enumerate(rel_docs):
        where = f"relationships[{idx}]"
        raw_id = _expect(rd, "id", str, where)
        if raw_id in seen:
            raise DuplicateId(f"{where}: id {raw_id!r} declared twice")
        seen.add(raw_id)
        r = RelId(raw_id)
        rtype = _expect(rd, "type", str, where)
        s = _expect(rd, "src", str, where)
        t = _expect(rd, "tgt", str, where)
        if s not in node_ids:
            raise DanglingEndpoint(f"{where}: src {s!r} is not a declared node")
        if t not in node_ids:
            raise DanglingEndpoint(f"{where}: tgt {t!r} is not a declared node")
        raw_props = rd.get("properties", {})
        if not isinstance(raw_props, dict):
            raise SchemaError(f"{where}: `properties` must be an object")
        rels.append(r)
        src[r] = NodeId(s)
        tgt[r] = NodeId(t)
        types[r] = rtype
        for k, raw in raw_props.items():
            v = _value_from_json(raw, f"{where}.properties.{k}")
            if v is not None:
                props[(raw_id, k)] = v

    return PropertyGraph(tuple(nodes), tuple(rels), src, tgt, labels, types, props)


def graph_ids(g: PropertyGraph) -> Iterable[str]:
    for n in g.nodes:
        yield n.key
    for r in g.rels:
        yield r.key
