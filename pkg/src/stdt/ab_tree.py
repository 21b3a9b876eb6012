"""Splitting a piece into at most B sub-pieces, joining them back, and the
summary vector f that lets a piece's summary be assembled from its parts.

A piece is a ``MarkedTree``: an OrderedTree plus an optional designated
boundary leaf (local preorder id).  The split of a piece S runs the cover
algorithm on S with parameter ``split_L(|S|, B)``; g(S) is the
balanced-parentheses string of the resulting piece tree, or ``LEAF`` when
that cover has one piece or more than B.
"""

import math
import os
from collections import namedtuple

from .decomposition import component_tree, decompose
from .entropy import all_degree_sequences
from .errors import CannotFit, CorruptPayload, ShapeMismatch, TooLarge
from .tree import OrderedTree, parse_bp

LEAF = ""
DEFAULT_B = 24


def split_c(B):
    """Constant c in L(S) = ceil(c|S|/B).

    Large B: the least c with 4B/c + 2 <= B, so a cover almost always fits in
    B parts while parts stay under about 2c|S|/B <= |S|/2 nodes.  Small B
    cannot have both; c = 2 keeps the splits fine-grained (c = 1 for B = 2,
    where c = 2 would make the whole piece light).
    """
    if B >= 20:
        return -(-4 * B // (B - 2))
    return 1 if B == 2 else 2


MarkedTree = namedtuple("MarkedTree", "tree boundary")

FVector = namedtuple(
    "FVector",
    "h_star size size_right size_boundary size_max root_degree "
    "boundary_distance boundary_preorder",
)

EMPTY = FVector(0, 0, 0, 0, 0, 0, 0, 0)


def marked(bp, boundary=None):
    """Shorthand used in tests and examples."""
    return MarkedTree(parse_bp(bp), boundary)


def split_L(size, B, c=None):
    """Cover parameter used to split a piece of ``size`` nodes.

    A function of the size alone: two pieces whose parts have equal
    summaries are split the same way, which is what makes
    decompose_step(join(g, parts)) == (g, parts).
    """
    if c is None:
        c = split_c(B)
    return max(2, math.ceil(c * size / B))


def f_of(S, model):
    """Summary vector of a piece (EMPTY for a missing part)."""
    if S is None:
        return EMPTY
    t, b = S.tree, S.boundary
    n = t.n
    h = model.h_star(t.degrees())
    kids = t.children[1]
    size_right = t.size[kids[-1]] if kids else 0
    on_path = set()
    size_boundary = distance = preorder = 0
    if b:
        y = b
        while y != 1:
            on_path.add(y)
            if t.parent[y] == 1:
                size_boundary = t.size[y]
            y = t.parent[y]
        distance = t.depth_of[b]
        preorder = b - 1
    size_max = 0
    for y in range(2, n + 1):
        if y not in on_path and t.size[y] > size_max:
            size_max = t.size[y]
    return FVector(h, n, size_right, size_boundary, size_max, len(kids), distance, preorder)


def piece_to_marked(tree, piece):
    nodes = piece.nodes()
    kids = set(piece.children)
    degrees = []
    boundary = None
    for k, y in enumerate(nodes, 1):
        if k == 1:
            degrees.append(len(piece.children))
        elif y == piece.cut:
            degrees.append(0)
        else:
            degrees.append(len(tree.children[y]))
        if y == piece.boundary_leaf:
            boundary = k
    del kids
    return MarkedTree(OrderedTree(degrees), boundary)


def decompose_step(S, B, leaf_size=1, c=None):
    """Return (g, parts) with exactly B parts (None = empty) or (LEAF, [])."""
    n = S.tree.n
    if n <= max(leaf_size, 1):
        return LEAF, []
    d = decompose(S.tree, split_L(n, B, c), marked=S.boundary)
    k = len(d.pieces)
    if k == 1 or k > B:
        return LEAF, []
    tl = component_tree(d)
    order = tl.preorder()[1:]
    parts = [piece_to_marked(S.tree, d.pieces[t - 1]) for t in order]
    return tl.to_bp(), parts + [None] * (B - k)


def tl_from_bp(g):
    """(parent, children) of the piece tree written as ``g``; node 0 is the root."""
    t = parse_bp(g)
    k = t.n - 1
    parent = [-1] + [t.parent[x] - 1 for x in range(2, k + 2)]
    children = [[c - 1 for c in t.children[x]] for x in range(1, k + 2)]
    return parent, children


def _check_shape(g, items, present):
    parent, children = tl_from_bp(g)
    k = len(parent) - 1
    if len(items) < k or any(not present(x) for x in items[:k]) or any(present(x) for x in items[k:]):
        raise ShapeMismatch("g has {} parts but {} non-empty parts were given".format(
            k, sum(1 for x in items if present(x))))
    return parent, children, k


def join(g, parts):
    """Glue parts back together along the piece tree written as g."""
    if g == LEAF:
        raise ShapeMismatch("a leaf has no parts to join")
    parent, children, k = _check_shape(g, parts, lambda p: p is not None)
    designated = [t for t in range(1, k + 1) if not children[t] and parts[t - 1].boundary]
    for t in range(1, k + 1):
        if children[t] and not parts[t - 1].boundary:
            raise ShapeMismatch("part {} needs a boundary leaf".format(t))
    if len(designated) > 1:
        raise ShapeMismatch("more than one part carries the boundary leaf")
    out = []
    where = [None]

    def shared(u):
        out.append(sum(parts[c - 1].tree.degree(1) for c in children[u]))
        for c in children[u]:
            emit(c)

    def emit(c):
        tree, b = parts[c - 1]
        for q in range(2, tree.n + 1):
            if q == b and children[c]:
                shared(c)
            else:
                out.append(len(tree.children[q]))
                if q == b:
                    where[0] = len(out)

    shared(0)
    return MarkedTree(OrderedTree(out), where[0])


def _tl_sums(children, order, fl):
    """below[t]: nodes hanging under part t's boundary leaf."""
    below = [0] * len(children)
    for t in reversed(order):
        for c in children[t]:
            below[t] += fl[c].size - 1 + below[c]
    return below


def _preorder(children):
    out, todo = [], [0]
    while todo:
        v = todo.pop()
        out.append(v)
        todo.extend(reversed(children[v]))
    return out


def boundary_stats(g, f_list):
    """[(component node, subtree size, degree)] for every node shared by parts.

    Component node 0 stands for the root (listed only when two or more parts
    meet there); node t for the boundary leaf of part t.
    """
    parent, children, k = _check_shape(g, f_list, lambda f: f.size > 0)
    fl = [None] + list(f_list[:k])
    below = _tl_sums(children, _preorder(children), fl)
    out = []
    for t in _preorder(children):
        if not children[t] or (t == 0 and len(children[0]) < 2):
            continue
        size = 1 + below[t]
        deg = sum(fl[c].root_degree for c in children[t])
        out.append((t, size, deg))
    return out


def f_prime(g, f_list, model):
    """f(join(g, parts)) computed from g and the parts' summaries alone."""
    parent, children, k = _check_shape(g, f_list, lambda f: f.size > 0)
    fl = [None] + list(f_list[:k])
    order = _preorder(children)
    below = _tl_sums(children, order, fl)
    cost = model.cost

    def width(c):
        return fl[c].size - 1 + below[c]

    def widest(c):
        # largest subtree among c's non-root nodes, measured in the glued tree
        if fl[c].boundary_distance and children[c]:
            return fl[c].size_boundary + below[c]
        return fl[c].size_max

    shared_deg = {u: sum(fl[c].root_degree for c in children[u]) for u in order if children[u]}
    h = sum(fl[t].h_star - cost(fl[t].root_degree) for t in range(1, k + 1))
    for u, deg in shared_deg.items():
        h += cost(deg)
        if u:
            h -= cost(0)
    size = 1 + sum(fl[t].size - 1 for t in range(1, k + 1))
    root_degree = shared_deg[0]

    last = children[0][-1]
    fc = fl[last]
    size_right = fc.size_right
    if fc.boundary_distance and children[last] and fc.boundary_preorder >= fc.size - fc.size_right:
        size_right += below[last]

    designated = [t for t in range(1, k + 1) if not children[t] and fl[t].boundary_distance]
    if not designated:
        size_max = max(widest(c) for c in children[0])
        return FVector(h, size, size_right, 0, size_max, root_degree, 0, 0)

    path = []
    t = designated[0]
    while t:
        path.append(t)
        t = parent[t]
    path.reverse()
    distance = sum(fl[t].boundary_distance for t in path)
    size_boundary = fl[path[0]].size_boundary + below[path[0]]
    preorder = 0
    size_max = max(fl[t].size_max for t in path)
    u = 0
    for a in path:
        for c in children[u]:
            if c == a:
                break
            preorder += width(c)
        for c in children[u]:
            if c != a:
                size_max = max(size_max, widest(c))
        preorder += fl[a].boundary_preorder
        u = a
    return FVector(h, size, size_right, size_boundary, size_max, root_degree, distance, preorder)


# -- class counting and enumerative ranking -----------------------------------

TINY_SIGMA = 3
TINY_SIZE = 12


def table_budget():
    """Object cap for exhaustive class tables (env STDT_TABLE_BUDGET)."""
    return int(os.environ.get("STDT_TABLE_BUDGET", "2000000"))


def _key(S):
    return (tuple(S.tree.degrees()), S.boundary or 0)


class ClassTable(object):
    """Every marked Sigma-tree up to ``max_size`` nodes, grouped by (f, g).

    ``enum_count`` is the direct count N(f, g); ``count`` evaluates the
    recurrence N(f, g) = sum over realized child summaries of prod M(f_i),
    with leaves counted directly.  Ranks follow the same recurrence, so a
    piece is stored as one integer below N(f, g).
    """

    def __init__(self, model, B, max_size=10, budget=None):
        if len(model.sigma) > TINY_SIGMA or max_size > TINY_SIZE:
            raise TooLarge("class tables need |Sigma| <= {} and size <= {}".format(
                TINY_SIGMA, TINY_SIZE))
        self.model = model
        self.B = B
        self.max_size = max_size
        budget = table_budget() if budget is None else budget
        sigma = model.sigma
        members = {}
        splits = {}
        seen = 0
        for m in range(1, max_size + 1):
            for seq in all_degree_sequences(m):
                if any(d not in sigma for d in seq[1:]):
                    continue
                tree = OrderedTree(seq)
                marks = [None] + [x for x in range(2, m + 1) if not tree.children[x]]
                for b in marks:
                    seen += 1
                    if seen > budget:
                        raise TooLarge("class table exceeds {} objects".format(budget))
                    S = MarkedTree(tree, b)
                    g, parts = decompose_step(S, B)
                    f = f_of(S, model)
                    members.setdefault((f, g), []).append(_key(S))
                    if g != LEAF:
                        splits.setdefault((f, g), set()).add(tuple(f_of(p, model) for p in parts))
        self.members = {c: sorted(v) for c, v in members.items()}
        self.leaf_rank = {}
        for (f, g), keys in self.members.items():
            if g == LEAF:
                for i, k in enumerate(keys):
                    self.leaf_rank[k] = i
        self.splits = {c: sorted(v) for c, v in splits.items()}
        self.gs = {}
        for f, g in self.members:
            self.gs.setdefault(f, []).append(g)
        for f in self.gs:
            self.gs[f].sort()
        self._count = {}
        self._weights = {}

    @property
    def classes(self):
        return list(self.members)

    def enum_count(self, f, g):
        return len(self.members.get((f, g), ()))

    def M(self, f):
        if f == EMPTY:
            return 1
        return sum(self.count(f, g) for g in self.gs.get(f, ()))

    def count(self, f, g):
        c = (f, g)
        if c not in self._count:
            if g == LEAF:
                n = self.enum_count(f, g)
            else:
                n = sum(self._weight(a) for a in self.splits.get(c, ()))
            self._count[c] = n
        return self._count[c]

    def _weight(self, alphas):
        if alphas not in self._weights:
            w = 1
            for a in alphas:
                w *= self.M(a)
            self._weights[alphas] = w
        return self._weights[alphas]

    def check_counts(self):
        """Classes where recurrence and enumeration disagree (empty = identity holds)."""
        return [(f, g, self.count(f, g), self.enum_count(f, g))
                for f, g in self.members if self.count(f, g) != self.enum_count(f, g)]

    def _within(self, f, S):
        """Rank of S among all objects with summary f (all g together)."""
        g, parts = decompose_step(S, self.B)
        off = 0
        for h in self.gs[f]:
            if h == g:
                break
            off += self.count(f, h)
        return off + self.rank(S, f, g, parts)

    def rank(self, S, f=None, g=None, parts=None):
        if f is None:
            f = f_of(S, self.model)
        if g is None:
            g, parts = decompose_step(S, self.B)
        if (f, g) not in self.members:
            raise CannotFit("piece lies outside the class table")
        if g == LEAF:
            return self.leaf_rank[_key(S)]
        alphas = tuple(f_of(p, self.model) for p in parts)
        r = 0
        for a in self.splits[(f, g)]:
            if a == alphas:
                break
            r += self._weight(a)
        sub = 0
        for p, a in zip(parts, alphas):
            sub = sub * self.M(a) + (self._within(a, p) if p is not None else 0)
        return r + sub

    def split_rank(self, f, g, r):
        """Child summaries and (g_i, rank_i) per part for rank r of class (f, g)."""
        if not 0 <= r < self.count(f, g):
            raise CorruptPayload("rank {} outside class of size {}".format(r, self.count(f, g)))
        for alphas in self.splits[(f, g)]:
            w = self._weight(alphas)
            if r < w:
                break
            r -= w
        subs = []
        for a in reversed(alphas):
            m = self.M(a)
            subs.append(r % m)
            r //= m
        subs.reverse()
        out = []
        for a, s in zip(alphas, subs):
            if a == EMPTY:
                out.append((a, None, 0))
                continue
            for h in self.gs[a]:
                c = self.count(a, h)
                if s < c:
                    break
                s -= c
            out.append((a, h, s))
        return out

    def unrank(self, f, g, r):
        if g == LEAF:
            keys = self.members.get((f, g), ())
            if not 0 <= r < len(keys):
                raise CorruptPayload("rank {} outside leaf class of size {}".format(r, len(keys)))
            seq, b = keys[r]
            return MarkedTree(OrderedTree(list(seq)), b or None)
        parts = [self.unrank(a, h, s) if h is not None else None
                 for a, h, s in self.split_rank(f, g, r)]
        return join(g, parts)
