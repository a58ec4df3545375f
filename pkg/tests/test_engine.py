"""Clause and query semantics over tables."""

import pytest

from minicypher import ast
from minicypher.errors import (
    AliasClash,
    EvalError,
    FieldMismatch,
    NameClash,
    StarOnEmptyFields,
)
from minicypher.engine import output, run_clause, run_query
from minicypher.graph import load_graph
from minicypher.oracle import GenConfig, gen_case, oracle_run_query
from minicypher.parser import parse_query
from minicypher.tables import Table, unit_table
from minicypher.values import NodeId, RelId


def n(i):
    return NodeId(f"n{i}")


def clause_of(text):
    """First clause of a query (parsed in context)."""
    q = parse_query(f"{text} RETURN 1 AS one")
    return q.clauses[0]


def rows(t):
    return sorted((tuple(sorted(u.items(), key=lambda kv: kv[0])), c) for u, c in t.rows())


# ---------------------------------------------------------------------------
# MATCH
# ---------------------------------------------------------------------------


def test_match_extends_each_input_row(teachers):
    t = Table(["x"], [{"x": n(1)}, {"x": n(3)}])
    got = run_clause(clause_of("MATCH (x)-[:KNOWS]->(y)"), teachers, t)
    assert got == Table(["x", "y"], [
        {"x": n(1), "y": n(2)},
        {"x": n(3), "y": n(4)},
    ])


def test_match_multiplies_input_multiplicity(teachers):
    t = Table(["x"])
    t.add({"x": n(1)}, count=3)
    got = run_clause(clause_of("MATCH (x)-[:KNOWS]->(y)"), teachers, t)
    assert got.multiplicity({"x": n(1), "y": n(2)}) == 3


def test_match_where_filters(teachers):
    got = output(parse_query(
        "MATCH (x)-[:KNOWS]->(y) WHERE x.k = 1 RETURN x"), teachers)
    assert got.is_empty()  # no node has a k property


def test_where_keeps_only_true(teachers):
    # false, null, and defined non-boolean values all drop the row
    for cond, expect in [("true", 4), ("false", 0), ("null", 0), ("5", 0), ("'a'", 0)]:
        q = parse_query(f"MATCH (x) WITH x WHERE {cond} RETURN x")
        assert output(q, teachers).total_rows() == expect, cond


def test_where_error_propagates(teachers):
    q = parse_query("MATCH (x) WHERE 1 < 'a' RETURN x")
    with pytest.raises(EvalError):
        output(q, teachers)


def test_match_on_empty_input_stays_empty(teachers):
    t = Table(["x"])  # no rows
    got = run_clause(clause_of("MATCH (x)-[:KNOWS]->(y)"), teachers, t)
    assert got.is_empty()
    assert got.fields == ("x", "y")


# ---------------------------------------------------------------------------
# OPTIONAL MATCH
# ---------------------------------------------------------------------------


def test_optional_match_pads_with_nulls(teachers):
    # n4 has no outgoing KNOWS edge
    t = Table(["x"], [{"x": n(1)}, {"x": n(4)}])
    got = run_clause(clause_of("OPTIONAL MATCH (x)-[:KNOWS]->(y)"), teachers, t)
    assert got == Table(["x", "y"], [
        {"x": n(1), "y": n(2)},
        {"x": n(4), "y": None},
    ])


def test_optional_match_preserves_every_input_row(teachers):
    q = parse_query("MATCH (x) OPTIONAL MATCH (x)-[:NOPE]->(y) RETURN x, y")
    got = output(q, teachers)
    assert got.total_rows() == 4
    assert all(u["y"] is None for u in got.records())


def test_optional_match_padding_keeps_multiplicity(teachers):
    t = Table(["x"])
    t.add({"x": n(4)}, count=2)
    got = run_clause(clause_of("OPTIONAL MATCH (x)-[:KNOWS]->(y)"), teachers, t)
    assert got.multiplicity({"x": n(4), "y": None}) == 2


def test_optional_match_where_failing_all_rows_pads(teachers):
    # matches exist but WHERE kills them: the row is padded, not dropped
    t = Table(["x"], [{"x": n(1)}])
    got = run_clause(clause_of("OPTIONAL MATCH (x)-[q]->(y) WHERE false"), teachers, t)
    assert got == Table(["q", "x", "y"], [{"x": n(1), "q": None, "y": None}])


def test_optional_match_on_unit_table(teachers):
    got = output(parse_query("OPTIONAL MATCH (x:Nope) RETURN x"), teachers)
    assert got == Table(["x"], [{"x": None}])


# ---------------------------------------------------------------------------
# WITH / RETURN projection
# ---------------------------------------------------------------------------


def test_with_projects_and_renames(teachers):
    q = parse_query("MATCH (x:Student) WITH x.k AS k, x AS node RETURN k, node")
    got = output(q, teachers)
    assert got == Table(["k", "node"], [{"k": None, "node": n(2)}])


def test_with_drops_old_fields(teachers):
    q = parse_query("MATCH (x) WITH x.k AS k WHERE x IS NULL RETURN k")
    with pytest.raises(EvalError) as exc:
        output(q, teachers)
    assert exc.value.kind == "UnknownName"


def test_with_star_expands_all_fields(teachers):
    q = parse_query("MATCH (b)-[:KNOWS]->(a) WITH * RETURN *")
    got = output(q, teachers)
    assert got.fields == ("a", "b")
    assert got.total_rows() == 3


def test_with_star_plus_items(teachers):
    q = parse_query("MATCH (x:Student) WITH *, 1 AS one RETURN x, one")
    assert output(q, teachers) == Table(["one", "x"], [{"x": n(2), "one": 1}])


def test_star_on_no_fields_is_an_error(teachers):
    with pytest.raises(StarOnEmptyFields):
        output(parse_query("RETURN *"), teachers)
    with pytest.raises(StarOnEmptyFields):
        output(parse_query("WITH * RETURN 1 AS one"), teachers)


def test_star_clashing_with_item_alias(teachers):
    q = parse_query("MATCH (x) WITH *, 1 AS x RETURN x")
    with pytest.raises(AliasClash):
        output(q, teachers)


def test_duplicate_aliases_rejected(teachers):
    with pytest.raises(AliasClash):
        output(parse_query("RETURN 1 AS a, 2 AS a"), teachers)


def test_unaliased_return_items_name_themselves(teachers):
    q = parse_query("MATCH (x:Student) RETURN x.k, 1 < 2")
    got = output(q, teachers)
    assert got.fields == ("1 < 2", "x.k")
    # the name is the canonical form, not the source spelling
    q = parse_query("MATCH (x:Student) RETURN x . k")
    assert output(q, teachers).fields == ("x.k",)


def test_return_expressions_see_multiplicities(teachers):
    q = parse_query(
        "MATCH (x:Teacher)-[:KNOWS*1..2]->()-[:KNOWS*1..2]->(y:Teacher) "
        "RETURN x.missing")
    got = output(q, teachers)
    # three witness pairs total, all projecting to the same null row
    assert got.multiplicity({"x.missing": None}) == 3


def test_projection_of_duplicate_rows_keeps_counts(teachers):
    q = parse_query("MATCH (x) RETURN x.k")
    got = output(q, teachers)
    assert got.multiplicity({"x.k": None}) == 4


# ---------------------------------------------------------------------------
# UNWIND
# ---------------------------------------------------------------------------


def test_unwind_expands_lists(teachers):
    q = parse_query("UNWIND [1, 2, 2] AS i RETURN i")
    got = output(q, teachers)
    assert got.multiplicity({"i": 1}) == 1
    assert got.multiplicity({"i": 2}) == 2


def test_unwind_empty_list_drops_the_row(teachers):
    assert output(parse_query("UNWIND [] AS i RETURN i"), teachers).is_empty()


def test_unwind_non_list_is_a_singleton(teachers):
    assert output(parse_query("UNWIND 7 AS i RETURN i"), teachers) == \
        Table(["i"], [{"i": 7}])
    assert output(parse_query("UNWIND null AS i RETURN i"), teachers) == \
        Table(["i"], [{"i": None}])


def test_unwind_multiplies_input_counts(teachers):
    q = parse_query("UNWIND [1, 1] AS a UNWIND [2, 3] AS b RETURN a, b")
    got = output(q, teachers)
    assert got.multiplicity({"a": 1, "b": 2}) == 2


def test_unwind_alias_clash_with_existing_field(teachers):
    q = parse_query("MATCH (x) UNWIND [1] AS x RETURN x")
    with pytest.raises(NameClash):
        output(q, teachers)


# ---------------------------------------------------------------------------
# UNION
# ---------------------------------------------------------------------------


def test_union_all_concatenates(teachers):
    q = parse_query("RETURN 1 AS a UNION ALL RETURN 1 AS a")
    got = output(q, teachers)
    assert got.multiplicity({"a": 1}) == 2


def test_union_deduplicates(teachers):
    q = parse_query("RETURN 1 AS a UNION RETURN 1 AS a")
    assert output(q, teachers) == Table(["a"], [{"a": 1}])


def test_union_requires_same_fields(teachers):
    q = parse_query("RETURN 1 AS a UNION RETURN 1 AS b")
    with pytest.raises(FieldMismatch):
        output(q, teachers)


def test_union_branches_share_the_input_table(teachers):
    # both branches transform the *same* incoming table, so feeding a
    # two-row table through a UNION doubles each branch's contribution
    q = parse_query("MATCH (x) RETURN x.k AS k UNION ALL MATCH (y) RETURN y.k AS k")
    t = Table(["z"], [{"z": 1}, {"z": 2}])
    got = run_query(q, teachers, t)
    # each branch: 2 input rows x 4 nodes = 8 rows of k:null
    assert got.multiplicity({"k": None}) == 16


def test_union_distinct_collapses_across_branches(teachers):
    q = parse_query("MATCH (x:Teacher) RETURN x UNION MATCH (y) RETURN y AS x")
    got = output(q, teachers)
    assert got.total_rows() == 4  # n1..n4, each once


# ---------------------------------------------------------------------------
# Composition and equivalences
# ---------------------------------------------------------------------------


def test_query_is_the_fold_of_its_clauses(teachers):
    q = parse_query(
        "MATCH (x:Teacher) OPTIONAL MATCH (x)-[:KNOWS]->(y) "
        "WITH x, y UNWIND [1, 2] AS i RETURN x, y, i")
    stepped = unit_table()
    for c in q.clauses:
        stepped = run_clause(c, teachers, stepped)
    final = run_query(ast.ClauseQuery((), q.ret), teachers, stepped)
    assert final == output(q, teachers)


def test_prefix_stepping_matches_oracle_on_generated_cases():
    for seed in range(60):
        g, q = gen_case(GenConfig(seed=seed))
        if not isinstance(q, ast.ClauseQuery) or not q.clauses:
            continue
        try:
            t1 = run_clause(q.clauses[0], g, unit_table())
            rest = ast.ClauseQuery(q.clauses[1:], q.ret)
            engine_stepped = run_query(rest, g, t1)
            want = oracle_run_query(q, g, unit_table())
        except Exception:
            continue  # error cases are the differential harness's job
        assert engine_stepped == want, seed


def test_match_cache_respects_property_expressions():
    # two input rows that differ only in a field read by a pattern property
    # expression must not share a cached match result
    g = load_graph({
        "nodes": [
            {"id": "n1", "labels": [], "properties": {"k": 1}},
            {"id": "n2", "labels": [], "properties": {"k": 2}},
        ],
        "relationships": [],
    })
    q = parse_query("UNWIND [1, 2] AS w MATCH (x {k: w}) RETURN w, x")
    assert output(q, g) == Table(["w", "x"], [
        {"w": 1, "x": n(1)},
        {"w": 2, "x": n(2)},
    ])


def test_match_cache_shares_unrelated_fields(teachers):
    # rows differing only in fields the pattern never reads give one answer
    q = parse_query("UNWIND [1, 2, 3] AS w MATCH (x:Student) RETURN w, x")
    got = output(q, teachers)
    assert got.total_rows() == 3
    assert {u["w"] for u in got.records()} == {1, 2, 3}


def test_output_equals_run_query_on_unit(teachers):
    q = parse_query("MATCH (x:Teacher) RETURN x")
    assert output(q, teachers) == run_query(q, teachers, unit_table())
