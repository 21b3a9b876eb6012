import random

import pytest

from conftest import A, B, C, D, E, F, T1_BP
from stdt.errors import InfeasibleProfile, InputError, NoSuchNode, UnbalancedInput
from stdt.tree import (OPS, OrderedTree, Query, json_skeleton, load_tree, oracle_query, parse_bp,
                       random_tree, to_bp, xml_skeleton)


def test_single_node():
    t = parse_bp("()")
    assert t.n == 1
    assert to_bp(t) == "()"


def test_t1_shape(t1):
    assert t1.n == 6
    assert [t1.degree(x) for x in range(1, 7)] == [3, 0, 2, 0, 0, 0]
    assert t1.children[C] == [E, F]
    assert to_bp(t1) == T1_BP


def test_path_bp():
    assert to_bp(OrderedTree([1, 1, 0])) == "((()))"


@pytest.mark.parametrize("bad", ["(()", "())(", ")(", "", "(x)"])
def test_malformed_bp(bad):
    with pytest.raises(InputError):
        parse_bp(bad)


def test_unbalanced_is_specific():
    with pytest.raises(UnbalancedInput):
        parse_bp("(()")


def test_t1_queries(t1):
    assert t1.depth(E) == 2
    assert t1.lca(E, F) == C
    assert t1.parent_of(F) == C
    assert t1.child_rank(D) == 3
    assert t1.degree(C) == 2
    assert t1.num_descendants(A) == 6
    assert t1.height(A) == 2
    assert t1.level_ancestor(F, 2) == A
    assert t1.child_select(A, 2) == C


def test_t1_no_answer(t1):
    with pytest.raises(NoSuchNode):
        t1.parent_of(A)
    with pytest.raises(NoSuchNode):
        t1.child_select(B, 1)
    with pytest.raises(NoSuchNode):
        t1.level_ancestor(E, 3)


def test_identities():
    t = random_tree(200, "uniform", 4)
    for x in range(1, t.n + 1):
        assert t.level_ancestor(x, 0) == x
        assert t.lca(x, x) == x
        assert t.preorder_select(t.preorder_rank(x)) == x


def _all_queries(t):
    for x in range(1, t.n + 1):
        for op, k in OPS.items():
            if k == 1:
                yield Query(op, (x,))
            else:
                for y in range(0, t.n + 2):
                    yield Query(op, (x, y))


@pytest.mark.parametrize("prof,n", [("uniform", 40), ("skewed:0.5", 31), ("star", 9), ("path", 12)])
def test_fast_methods_match_oracle(prof, n):
    # the array-backed methods against the pointer-chasing oracle
    t = random_tree(n, prof, 1)
    for q in _all_queries(t):
        try:
            want = oracle_query(t, q)
        except NoSuchNode:
            with pytest.raises(NoSuchNode):
                t.answer(q)
            continue
        assert t.answer(q) == want, q


def test_query_validation():
    with pytest.raises(InputError):
        Query("nope", (1,))
    with pytest.raises(InputError):
        Query("lca", (1,))


@pytest.mark.parametrize("prof", ["uniform", "path", "star", "skewed:0.9", "skewed:0.5"])
def test_generator_is_balanced_and_deterministic(prof):
    t = random_tree(301, prof, 9)
    assert t.n == 301
    assert parse_bp(to_bp(t)) == t
    assert random_tree(301, prof, 9) == t


def test_generator_path_distribution():
    assert random_tree(10, "path", 0).degree_counts() == {0: 1, 1: 9}


def test_generator_full_binary():
    t = random_tree(63, "full-binary", 2)
    assert set(t.degree_counts()) == {0, 2}
    with pytest.raises(InfeasibleProfile):
        random_tree(64, "full-binary", 2)


def test_generator_skew_fraction():
    t = random_tree(10000, "skewed:0.9", 0)
    assert abs(t.degree_counts()[1] / t.n - 0.9) < 0.01


def test_bad_profile():
    with pytest.raises(InfeasibleProfile):
        random_tree(10, "banana", 0)


def test_json_skeleton():
    t = json_skeleton('{"a": [1, 2, {"b": null}], "c": 3}')
    assert t.degrees() == [2, 3, 0, 0, 1, 0, 0]


def test_xml_skeleton():
    t = xml_skeleton("<r><a><b/><c/></a><d/></r>")
    assert to_bp(t) == "((()())())"


def test_load_tree_sniffs(tmp_path):
    for name, text in [("x.bp", T1_BP), ("x.json", "[[], 1]"), ("x.xml", "<a><b/></a>")]:
        p = tmp_path / name
        p.write_text(text)
        assert load_tree(str(p)).n >= 2
    p = tmp_path / "junk"
    p.write_text("hello")
    with pytest.raises(InputError):
        load_tree(str(p))


def test_random_bp_roundtrip_many():
    rng = random.Random(0)
    for _ in range(50):
        t = random_tree(rng.randint(1, 80), "uniform", rng.randint(0, 999))
        assert parse_bp(t.to_bp()) == t
