"""Expression evaluation: truth tables, the shared case battery, and
cross-cutting properties of equality and the connectives.
"""

import itertools

import pytest

from minicypher.errors import EvalError
from minicypher.evaluator import (
    compare_values,
    eq_values,
    eval_expr,
    is_true,
    tri_and,
    tri_not,
    tri_or,
    tri_xor,
)
from minicypher.parser import parse_expr
from minicypher.values import Map, NodeId, Path, RelId, canon

from expr_cases import CASES, Err, build_env, build_graph

T, F, N = True, False, None


# ---------------------------------------------------------------------------
# Truth tables, cell by cell
# ---------------------------------------------------------------------------

OR_TABLE = {
    (T, T): T, (T, F): T, (T, N): T,
    (F, T): T, (F, F): F, (F, N): N,
    (N, T): T, (N, F): N, (N, N): N,
}

AND_TABLE = {
    (T, T): T, (T, F): F, (T, N): N,
    (F, T): F, (F, F): F, (F, N): F,
    (N, T): N, (N, F): F, (N, N): N,
}

XOR_TABLE = {
    (T, T): F, (T, F): T, (T, N): N,
    (F, T): T, (F, F): F, (F, N): N,
    (N, T): N, (N, F): N, (N, N): N,
}

NOT_TABLE = {T: F, F: T, N: N}

_LIT = {T: "true", F: "false", N: "null"}


def test_or_table():
    for (a, b), want in OR_TABLE.items():
        assert tri_or(a, b) is want
        assert eval_expr(parse_expr(f"{_LIT[a]} OR {_LIT[b]}"), build_graph(), {}) is want


def test_and_table():
    for (a, b), want in AND_TABLE.items():
        assert tri_and(a, b) is want
        assert eval_expr(parse_expr(f"{_LIT[a]} AND {_LIT[b]}"), build_graph(), {}) is want


def test_xor_table():
    for (a, b), want in XOR_TABLE.items():
        assert tri_xor(a, b) is want
        assert eval_expr(parse_expr(f"{_LIT[a]} XOR {_LIT[b]}"), build_graph(), {}) is want


def test_not_table():
    for a, want in NOT_TABLE.items():
        assert tri_not(a) is want
        assert eval_expr(parse_expr(f"NOT {_LIT[a]}"), build_graph(), {}) is want


def test_de_morgan_holds_in_trilean_logic():
    for a, b in itertools.product((T, F, N), repeat=2):
        assert tri_not(tri_and(a, b)) is tri_or(tri_not(a), tri_not(b))
        assert tri_not(tri_or(a, b)) is tri_and(tri_not(a), tri_not(b))


def test_xor_differs_from_or_and_composition_on_null():
    # XOR is null-dominant; it is *not* (a OR b) AND NOT (a AND b) at nulls.
    assert tri_xor(T, N) is N
    assert tri_and(tri_or(T, N), tri_not(tri_and(T, N))) is N  # happens to agree here
    assert tri_xor(F, N) is N
    assert tri_and(tri_or(F, N), tri_not(tri_and(F, N))) is N


# ---------------------------------------------------------------------------
# The shared case battery
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("src,expected", CASES, ids=[c[0] for c in CASES])
def test_expression_case(src, expected):
    g = build_graph()
    env = build_env()
    e = parse_expr(src)
    if isinstance(expected, Err):
        with pytest.raises(EvalError) as exc:
            eval_expr(e, g, env)
        if expected.kind is not None:
            assert exc.value.kind == expected.kind
    else:
        got = eval_expr(e, g, env)
        assert canon(got) == canon(expected), f"{src}: {got!r} != {expected!r}"


def test_battery_is_large_enough():
    assert len(CASES) >= 60


# ---------------------------------------------------------------------------
# Equality as a three-valued relation
# ---------------------------------------------------------------------------

_N1, _N2, _R1 = NodeId("n1"), NodeId("n2"), RelId("r1")

# A pool of values whose pairwise equality exercises every type pairing.
VALUE_POOL = [
    None, True, False, 0, 1, "", "a",
    _N1, _N2, _R1,
    (), (1,), (1, None), (None,),
    Map(()), Map((("a", 1),)), Map((("a", None),)),
    Path((_N1,), ()), Path((_N1, _N2), (_R1,)),
]


def _eq_or_err(a, b):
    try:
        return ("val", eq_values(a, b))
    except EvalError as exc:
        return ("err", exc.kind)


def test_equality_is_symmetric_across_the_pool():
    for a, b in itertools.product(VALUE_POOL, repeat=2):
        assert _eq_or_err(a, b) == _eq_or_err(b, a), (a, b)


def test_equality_is_reflexive_modulo_null():
    # v = v is true unless v contains null somewhere, in which case null.
    for v in VALUE_POOL:
        kind, got = _eq_or_err(v, v)
        assert kind == "val"
        assert got in (True, None)


def test_null_equals_anything_is_null():
    for v in VALUE_POOL:
        if v is None:
            continue
        assert eq_values(None, v) is None
        assert eq_values(v, None) is None


def test_composite_vs_scalar_is_false_not_error():
    for comp in [(), (1,), Map(()), Path((_N1,), ())]:
        for scalar in [True, 0, "a", _N1]:
            assert eq_values(comp, scalar) is False


def test_in_agrees_with_equality_fold():
    # x IN list must behave exactly like a strict OR-fold of x = e over the
    # elements (errors included), with false for the empty list.
    g = build_graph()
    items = [0, 1, None, True, "a"]
    for x in items:
        for xs in itertools.permutations(items, 2):
            outcomes = [_eq_or_err(x, w) for w in xs]
            expr = parse_expr("probe IN container")
            env = {"probe": x, "container": tuple(xs)}
            if any(kind == "err" for kind, _ in outcomes):
                with pytest.raises(EvalError):
                    eval_expr(expr, g, env)
                continue
            got = eval_expr(expr, g, env)
            if any(v is True for _, v in outcomes):
                assert got is True
            elif any(v is None for _, v in outcomes):
                assert got is None
            else:
                assert got is False


def test_comparison_null_propagation_and_types():
    assert compare_values("<", None, None) is None
    assert compare_values("<=", 1, None) is None
    assert compare_values(">", None, "a") is None
    with pytest.raises(EvalError):
        compare_values("<", 1, "a")
    with pytest.raises(EvalError):
        compare_values("<", True, False)


def test_is_true_is_strict():
    assert is_true(True)
    for v in (False, None, 1, "true", (), Map(())):
        assert not is_true(v)


def test_errors_carry_spans():
    e = parse_expr("1 = 'a'")
    with pytest.raises(EvalError) as exc:
        eval_expr(e, build_graph(), {})
    assert exc.value.span is not None
    with pytest.raises(EvalError) as exc:
        eval_expr(parse_expr("  missing  "), build_graph(), {})
    assert exc.value.span == (2, 9)
