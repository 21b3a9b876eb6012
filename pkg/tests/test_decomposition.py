import pytest

from stdt.decomposition import (HEAVY1, HEAVY2, LIGHT, Decomposition, Piece, check_cover,
                                component_tree, decompose, heavy_classify, max_pieces, pack)
from stdt.errors import OversizedChild, TreeTooSmall
from stdt.tree import OrderedTree, random_tree


def path(n):
    return OrderedTree([1] * (n - 1) + [0])


def star(leaves):
    return OrderedTree([leaves] + [0] * leaves)


def test_heavy_on_path():
    labels = heavy_classify(path(10), 3)
    # subtree sizes along the path are 10, 9, ..., 1
    assert labels[1:9] == [HEAVY1] * 8
    assert labels[9:] == [LIGHT, LIGHT]


def test_heavy_on_star():
    labels = heavy_classify(star(10), 3)
    assert labels[1] == HEAVY1
    assert set(labels[2:]) == {LIGHT}


def test_heavy_threshold_one():
    t = random_tree(50, "uniform", 1)
    assert LIGHT not in heavy_classify(t, 1)[1:]


def test_heavy_branching():
    # root with two children of size 3 each
    t = OrderedTree([2, 2, 0, 0, 2, 0, 0])
    assert heavy_classify(t, 3)[1] == HEAVY2


@pytest.mark.parametrize("sizes,L,groups", [
    ([2, 2, 1, 3], 4, [[1, 2], [3, 4]]),
    ([1, 1, 1], 4, [[1, 2, 3]]),
    ([1], 4, [[1]]),
])
def test_pack(sizes, L, groups):
    assert pack(0, [1, 2, 3, 4][:len(sizes)], sizes, L) == groups


def test_pack_rejects_heavy_child():
    with pytest.raises(OversizedChild):
        pack(0, [1], [4], 4)


def test_path_of_ten():
    d = decompose(path(10), 3)
    assert all(2 <= p.size <= 7 for p in d.pieces)
    assert check_cover(d).ok
    assert len(d.pieces) <= max_pieces(10, 3)
    tl = component_tree(d)
    # pieces chain: the TL below the synthetic root is a path
    assert len(tl.children[0]) == 1
    assert all(len(c) <= 1 for c in tl.children[1:])


def test_star_of_twelve():
    d = decompose(star(12), 4)
    assert {p.root for p in d.pieces} == {1}
    sizes = [p.size for p in d.pieces]
    assert sum(1 for s in sizes if not 4 <= s <= 7) <= 1
    tl = component_tree(d)
    assert len(tl.children[0]) == len(d.pieces)


def test_two_nodes():
    d = decompose(OrderedTree([1, 0]), 2)
    assert len(d.pieces) == 1
    assert d.pieces[0].boundary_leaf is None
    assert component_tree(d).to_bp() == "(())"


def test_single_node_refused():
    with pytest.raises(TreeTooSmall):
        decompose(OrderedTree([0]), 2)


def test_duplicated_edge_detected():
    t = path(4)
    pieces = [Piece(t, 1, [2]), Piece(t, 1, [2])]
    rep = check_cover(Decomposition(t, 2, pieces))
    assert not rep.ok
    names = [name for name, ok, _ in rep.failures()]
    assert any(name.startswith("property-1") for name in names)


def test_oversized_piece_detected():
    t = star(12)  # one piece of 13 nodes with L = 4 breaks the 2L+1 window
    rep = check_cover(Decomposition(t, 4, [Piece(t, 1, list(range(2, 14)))]))
    assert any(name.startswith("property-2") for name, _, _ in rep.failures())


@pytest.mark.parametrize("prof", ["uniform", "path", "star", "full-binary", "skewed:0.5", "skewed:0.9"])
@pytest.mark.parametrize("L", [2, 3, 8, 64])
def test_cover_corpus(prof, L):
    t = random_tree(1001, prof, 5)
    d = decompose(t, L)
    rep = check_cover(d)
    assert rep.ok, str(rep)


def test_marked_leaf_is_boundary():
    t = random_tree(300, "uniform", 2)
    leaf = max(x for x in range(1, t.n + 1) if t.degree(x) == 0)
    d = decompose(t, 8, marked=leaf)
    assert check_cover(d).ok
    owners = [p for p in d.pieces if p.contains_nonroot(leaf)]
    assert owners and owners[0].boundary_leaf == leaf


def test_component_tree_depths():
    t = random_tree(500, "skewed:0.5", 3)
    d = decompose(t, 8)
    tl = component_tree(d)
    for i, p in enumerate(d.pieces, 1):
        assert tl.wdepth[i] == t.depth(p.root)
