import random

import pytest

from stdt import verify
from stdt.ab_tree import (EMPTY, LEAF, ClassTable, boundary_stats, decompose_step, f_of, f_prime,
                          join, marked, piece_to_marked, split_c, split_L)
from stdt.decomposition import decompose
from stdt.entropy import DegreeDistribution, EntropyModel
from stdt.errors import ShapeMismatch
from stdt.tree import random_tree


@pytest.fixture
def model():
    # n = 4 with n0 = 2, n1 = 1, n2 = 1 at L = 4: r0 = 1, r1 = 2, r2 = 2
    return EntropyModel(DegreeDistribution(4, {0: 2, 1: 1, 2: 1}), 4)


def same(a, b):
    return a.tree == b.tree and a.boundary == b.boundary


def test_f_of_worked_piece(model):
    # root r with children a, b; a has child c; c is the boundary leaf
    f = f_of(marked("((())())", 3), model)
    assert f.h_star == 6 * model.L
    assert tuple(f)[1:] == (4, 1, 2, 1, 2, 2, 2)


def test_f_of_single_edge(model):
    f = f_of(marked("(())"), model)
    assert f.h_star == model.cost(1) + model.cost(0)
    assert tuple(f)[1:] == (2, 1, 0, 1, 1, 0, 0)


def test_f_of_empty(model):
    assert f_of(None, model) == EMPTY


def test_split_parameter():
    assert split_L(9, 4) == 5
    assert split_L(3, 24) == 2
    assert split_c(24) == 5 and split_c(2) == 1


def test_smallest_piece_is_a_leaf():
    assert decompose_step(marked("(())"), 4) == (LEAF, [])


def test_single_part_join():
    S = marked("(())")
    assert same(join("(())", [S, None, None, None]), S)


def test_path_of_nine_chains():
    S = marked("(" * 9 + ")" * 9)
    g, parts = decompose_step(S, 4)
    assert g == "(((())))"
    assert len(parts) == 4 and parts[-1] is None
    assert [p.boundary is not None for p in parts[:3]] == [True, True, False]
    assert same(join(g, parts), S)


def test_two_parts_share_root():
    a, b = marked("(()())"), marked("(())")
    S = join("(()())", [a, b])
    assert S.tree.to_bp() == "(()()())"
    assert S.tree.degree(1) == 3


def test_join_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        join("((()))", [marked("(())"), marked("(())")])  # first part has no boundary leaf
    with pytest.raises(ShapeMismatch):
        join("(()())", [marked("(())"), None])


def test_boundary_stats_chain(model):
    a, b = marked("((()))", 3), marked("(()())")
    fs = [f_of(a, model), f_of(b, model)]
    # x is the shared node: subtree size = size of part 2, degree = its root degree
    assert boundary_stats("((()))", fs) == [(1, 3, 2)]
    assert f_prime("((()))", fs, model).size == 3 + 3 - 1


def test_boundary_stats_shared_root(model):
    fs = [f_of(marked("(()())"), model), f_of(marked("(())"), model)]
    assert boundary_stats("(()())", fs) == [(0, 4, 3)]
    assert boundary_stats("(())", fs[:1]) == []


def test_f_prime_identity(model):
    S = marked("((())())", 3)
    f = f_of(S, model)
    assert f_prime("(())", [f, EMPTY, EMPTY], model) == f


def _corpus_pieces(n=3000, L=64):
    out = []
    for prof in ["uniform", "skewed:0.5", "skewed:0.9", "full-binary", "star", "path"]:
        t = random_tree(n + (prof == "full-binary" and n % 2 == 0), prof, 11)
        model = EntropyModel(DegreeDistribution.of(t), L)
        out.append((model, [piece_to_marked(t, p) for p in decompose(t, L).pieces]))
    return out


@pytest.mark.parametrize("B", [3, 8, 24])
def test_split_properties(B):
    total = 0
    for model, pieces in _corpus_pieces():
        stats = verify.split_suite(pieces, model, B)
        total += stats.steps
        r = {x.name: x for x in stats.results(B)}
        assert r["P1"].ok and r["P3"].ok, (r["P1"].witness, r["P3"].witness)
        assert verify.recombine_suite(stats.harvest, B, random.Random(B), 500).ok
        if B >= 20:
            assert r["P4"].ok, r["P4"].detail
    assert total > 100


def test_boundary_piece_splits_and_joins():
    t = random_tree(600, "uniform", 3)
    d = decompose(t, 40)
    S = next(piece_to_marked(t, p) for p in d.pieces if p.boundary_leaf and p.size > 30)
    g, parts = decompose_step(S, 24)
    assert g != LEAF
    assert sum(1 for p in parts if p is not None and p.boundary is not None) >= 1
    assert same(join(g, parts), S)


# -- class counts -------------------------------------------------------------

@pytest.fixture(scope="module")
def even_table():
    # Sigma = {0, 2}
    m = EntropyModel(DegreeDistribution(9, {0: 5, 2: 4}), 4)
    return ClassTable(m, 2, 8)


def test_empty_class(even_table):
    assert even_table.M(EMPTY) == 1


def test_class_counts_sigma_02(even_table):
    assert len(even_table.classes) > 20
    assert even_table.check_counts() == []


def test_size_two_classes(even_table):
    for f, g in even_table.classes:
        if f.size == 2:
            assert even_table.count(f, g) == 1


def test_rank_unrank_bijection(even_table):
    t = even_table
    for f, g in t.classes:
        seen = set()
        for r in range(t.count(f, g)):
            S = t.unrank(f, g, r)
            assert f_of(S, t.model) == f
            assert decompose_step(S, t.B)[0] == g
            assert t.rank(S) == r
            seen.add((S.tree.to_bp(), S.boundary))
        assert len(seen) == t.count(f, g)


@pytest.mark.parametrize("B", [2, 3])
def test_class_counts_random_models(B):
    dists = verify.tiny_models(random.Random(B), 2)
    assert verify.class_count_suite(dists, Bs=(B,)).ok
