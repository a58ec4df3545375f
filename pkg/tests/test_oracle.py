"""The brute-force oracle, the case generator, and the differential harness."""

import json

import pytest

from minicypher.graph import load_graph
from minicypher.matcher import match_tuple
from minicypher.oracle import (
    GenConfig,
    case_document,
    differential_case,
    exhaustive_match,
    gen_case,
    load_case,
    oracle_match,
    oracle_output,
    save_failure,
)
from minicypher.parser import parse_pattern_tuple, parse_query, unparse_query
from minicypher.values import NodeId

PATTERNS = [
    "(x)",
    "(x), (y)",
    "(x)-[q]->(y)",
    "(x)<-[q]-(y)",
    "(x)-[q]-(y)",
    "(x)-[q]->(x)",
    "(x)-[q:KNOWS]->(y)-[r:KNOWS]->(z)",
    "(x)-[:KNOWS*1..2]->(y)",
    "(x)-[*]->(y)",
    "(x)-[q*0..1]->(y)",
    "()-[*0..2]-()",
    "p = (x)-[*1..2]->(y)",
    "(x)-[q]->(y), (z)-[r]->(w)",
    "(x {k: 1})",
    "(x:P)-[:a]->(y)",
]


def small_graphs():
    docs = [
        {"nodes": [], "relationships": []},
        {
            "nodes": [{"id": "n1", "labels": ["P"], "properties": {"k": 1}}],
            "relationships": [
                {"id": "r1", "type": "a", "src": "n1", "tgt": "n1",
                 "properties": {}},
            ],
        },
        {
            "nodes": [
                {"id": "n1", "labels": ["P"], "properties": {"k": 1}},
                {"id": "n2", "labels": [], "properties": {}},
            ],
            "relationships": [
                {"id": "r1", "type": "a", "src": "n1", "tgt": "n2",
                 "properties": {}},
                {"id": "r2", "type": "a", "src": "n1", "tgt": "n2",
                 "properties": {}},
            ],
        },
    ]
    return [load_graph(d) for d in docs]


# ---------------------------------------------------------------------------
# oracle_match against the engine matcher
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("source", PATTERNS)
def test_oracle_agrees_with_matcher_on_teachers(source, teachers):
    pats = parse_pattern_tuple(source)
    assert oracle_match(pats, teachers, {}) == match_tuple(pats, teachers, {})


@pytest.mark.parametrize("source", PATTERNS)
def test_oracle_agrees_with_matcher_on_small_graphs(source):
    pats = parse_pattern_tuple(source)
    for g in small_graphs():
        assert oracle_match(pats, g, {}) == match_tuple(pats, g, {})


def test_oracle_agrees_under_bound_variables(teachers):
    pats = parse_pattern_tuple("(x)-[:KNOWS*]->(y)")
    for u in [{"x": NodeId("n1")}, {"x": NodeId("n4")}, {"x": 7}]:
        assert oracle_match(pats, teachers, u) == match_tuple(pats, teachers, u)


def test_oracle_agrees_on_generated_graphs():
    sources = ["(x)-[*0..2]-(y)", "(x)-[q]->(y)-[*1..2]->(z)", "(x:P), (y:Q)"]
    for seed in range(25):
        g, _ = gen_case(GenConfig(seed=1000 + seed))
        for source in sources:
            pats = parse_pattern_tuple(source)
            assert oracle_match(pats, g, {}) == match_tuple(pats, g, {}), (
                seed, source)


# ---------------------------------------------------------------------------
# the exhaustive checker (kept tiny: it enumerates every assignment)
# ---------------------------------------------------------------------------


def test_exhaustive_agrees_on_tiny_graphs():
    sources = [
        "(x)",
        "(x)-[q]->(y)",
        "(x)-[q]-(y)",
        "(x)-[*0..2]->(y)",
        "(x)-[q]->(x)",
        "p = (x)-[*1..2]->(y)",
    ]
    for g in small_graphs():
        for source in sources:
            pats = parse_pattern_tuple(source)
            want = exhaustive_match(pats, g, {})
            assert oracle_match(pats, g, {}) == want, source
            assert match_tuple(pats, g, {}) == want, source


def test_exhaustive_agrees_with_bound_input():
    g = small_graphs()[2]
    pats = parse_pattern_tuple("(x)-[q]->(y)")
    u = {"x": NodeId("n1")}
    assert exhaustive_match(pats, g, u) == match_tuple(pats, g, u)


# ---------------------------------------------------------------------------
# generator
# ---------------------------------------------------------------------------


def test_gen_case_is_deterministic():
    a = case_document(*gen_case(GenConfig(seed=7)))
    b = case_document(*gen_case(GenConfig(seed=7)))
    assert a == b


def test_gen_case_varies_with_seed():
    docs = {json.dumps(case_document(*gen_case(GenConfig(seed=s))), sort_keys=True)
            for s in range(20)}
    assert len(docs) > 15


def test_generated_queries_parse_back():
    for seed in range(50):
        _, q = gen_case(GenConfig(seed=seed))
        text = unparse_query(q)
        assert unparse_query(parse_query(text)) == text


def test_generator_exercises_the_grammar():
    texts = [unparse_query(gen_case(GenConfig(seed=s))[1]) for s in range(400)]
    blob = "\n".join(texts)
    for needle in ["OPTIONAL MATCH", "UNION", "UNWIND", "WITH", "WHERE", "*"]:
        assert needle in blob, needle


# ---------------------------------------------------------------------------
# case documents and replay
# ---------------------------------------------------------------------------


def test_case_document_round_trips():
    g, q = gen_case(GenConfig(seed=3))
    g2, q2 = load_case(case_document(g, q))
    assert g2.to_document() == g.to_document()
    assert unparse_query(q2) == unparse_query(q)


def test_save_failure_writes_replayable_json(tmp_path):
    g, q = gen_case(GenConfig(seed=11))
    agree, detail = differential_case(g, q)
    path = save_failure(str(tmp_path), "case-11", case_document(g, q, extra=detail))
    with open(path) as fh:
        doc = json.load(fh)
    g2, q2 = load_case(doc)
    assert differential_case(g2, q2)[0] == agree


# ---------------------------------------------------------------------------
# differential harness
# ---------------------------------------------------------------------------


def test_differential_detail_is_reported():
    g, q = gen_case(GenConfig(seed=0))
    agree, detail = differential_case(g, q)
    assert agree
    assert detail["query"] == unparse_query(q)
    assert "engine" in detail and "oracle" in detail


def test_differential_batch():
    for seed in range(300):
        g, q = gen_case(GenConfig(seed=seed))
        agree, detail = differential_case(g, q)
        assert agree, f"seed {seed}: {json.dumps(detail, indent=2, default=str)}"


def test_oracle_output_on_a_full_query(teachers):
    q = parse_query(
        "MATCH (x:Teacher) OPTIONAL MATCH (x)-[:KNOWS]->(y:Student) "
        "RETURN x, y")
    from minicypher.engine import output

    assert oracle_output(q, teachers) == output(q, teachers)
