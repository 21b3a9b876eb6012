"""Cover of an ordered tree by small subtrees ("pieces") and the piece tree.

Pieces share nodes only at their roots and at one boundary leaf each, and
every edge of the tree lies in exactly one piece.  A piece is stored as its
root, the consecutive run of root children it owns, and an optional cut
node whose strict descendants belong to other pieces.
"""

import math

from .errors import OversizedChild, TreeTooSmall

LIGHT, HEAVY1, HEAVY2 = "light", "heavy_type1", "heavy_type2"

# piece-count constant asserted by the checker
C_PIECES = 4


def max_pieces(n, L):
    return math.ceil(C_PIECES * n / L) + 2


class Piece(object):
    __slots__ = ("root", "children", "cut", "boundary_leaf", "size", "intervals")

    def __init__(self, tree, root, children, cut=None, boundary_leaf=None):
        self.root = root
        self.children = tuple(children)
        self.cut = cut
        self.boundary_leaf = boundary_leaf
        first = self.children[0]
        last = self.children[-1]
        end = last + tree.size[last] - 1
        if cut is not None and tree.size[cut] > 1:
            hole = (cut + 1, cut + tree.size[cut] - 1)
            ivs = [(first, cut)]
            if hole[1] < end:
                ivs.append((hole[1] + 1, end))
        else:
            ivs = [(first, end)]
        self.intervals = tuple(ivs)
        self.size = 1 + sum(b - a + 1 for a, b in ivs)

    def nodes(self):
        """Global ids in preorder (root first)."""
        out = [self.root]
        for a, b in self.intervals:
            out.extend(range(a, b + 1))
        return out

    def contains_nonroot(self, x):
        return any(a <= x <= b for a, b in self.intervals)

    def sort_key(self):
        return (self.root, self.children[0])

    def __repr__(self):
        return "Piece(root={}, children={}, boundary={}, size={})".format(
            self.root, list(self.children), self.boundary_leaf, self.size)


class Decomposition(object):
    def __init__(self, tree, L, pieces, marked=None, heavy=None):
        self.tree = tree
        self.L = L
        self.pieces = pieces
        self.marked = marked
        self.heavy = heavy

    def __len__(self):
        return len(self.pieces)


def heavy_flags(tree, L, marked=None):
    flags = [False] + [tree.size[x] >= L for x in range(1, tree.n + 1)]
    x = marked
    while x:
        flags[x] = True
        x = tree.parent[x]
    return flags


def heavy_classify(tree, L, marked=None):
    """Per-node label list (index 0 unused).

    A node is heavy when its subtree has at least L nodes; with ``marked``
    every ancestor-or-self of the marked leaf is heavy as well.
    """
    flags = heavy_flags(tree, L, marked)
    labels = [None] * (tree.n + 1)
    for x in range(1, tree.n + 1):
        if not flags[x]:
            labels[x] = LIGHT
        elif sum(1 for c in tree.children[x] if flags[c]) >= 2:
            labels[x] = HEAVY2
        else:
            labels[x] = HEAVY1
    return labels


def pack(x, children, sizes, L):
    """Greedy left-to-right grouping of ``children`` of ``x``.

    A group closes as soon as x plus its members reach L nodes.  Returns a
    list of child lists.
    """
    for c, s in zip(children, sizes):
        if s > L - 1:
            raise OversizedChild("child {} of {} has size {} >= L={}".format(c, x, s, L))
    groups = []
    i, k = 0, len(children)
    while i < k:
        total, j = 1, i
        while j < k:
            total += sizes[j]
            j += 1
            if total >= L:
                break
        groups.append(list(children[i:j]))
        i = j
    return groups


def decompose(tree, L, marked=None):
    """Decompose ``tree`` into pieces of at most 2L+1 nodes.

    ``marked`` optionally designates a leaf that must end up as the boundary
    leaf of the piece containing it (used when decomposing a piece again).
    """
    if tree.n < 2:
        raise TreeTooSmall("cannot decompose a single node")
    L = max(L, 2)
    size, children, parent = tree.size, tree.children, tree.parent
    labels = heavy_classify(tree, L, marked)
    heavy = [lab != LIGHT for lab in labels]
    heavy[0] = False
    pieces = []

    def boundary_of(cut):
        if cut is not None and (children[cut] or cut == marked):
            return cut
        return None

    def emit(root, kids, cut=None):
        pieces.append(Piece(tree, root, kids, cut, boundary_of(cut)))

    def emit_pack(x, kids, sizes, cut_child=None, cut=None):
        for group in pack(x, kids, sizes, L):
            emit(x, group, cut if cut_child in group else None)

    if not heavy[1]:
        emit_pack(1, children[1], [size[c] for c in children[1]])
        return _finish(tree, L, pieces, marked, heavy)

    # phase 1: type-2 heavy nodes
    for x in range(1, tree.n + 1):
        if labels[x] != HEAVY2:
            continue
        if x != 1 and labels[parent[x]] != HEAVY2:
            emit(parent[x], [x], cut=x)
        run = []
        for c in children[x]:
            if heavy[c]:
                emit_pack(x, run, [size[y] for y in run])
                run = []
                emit(x, [c], cut=c)
            else:
                run.append(c)
        emit_pack(x, run, [size[y] for y in run])

    # phase 2: maximal paths of type-1 heavy nodes
    for x in range(1, tree.n + 1):
        if labels[x] != HEAVY1 or (x != 1 and labels[parent[x]] == HEAVY1):
            continue
        path = [x]
        below = None
        while True:
            hc = [c for c in children[path[-1]] if heavy[c]]
            if not hc:
                break
            if labels[hc[0]] == HEAVY2:
                below = hc[0]
                break
            path.append(hc[0])
        _phase2(tree, L, path, below, marked, size, children, emit_pack)

    return _finish(tree, L, pieces, marked, heavy)


def _phase2(tree, L, path, below, marked, size, children, emit_pack):
    b = len(path) - 1
    while True:
        xb = path[b]
        if below is not None:
            # the bottom node must be a leaf of the part above it, so its
            # remaining children are packed on their own, split around below
            kids = children[xb]
            pos = kids.index(below)
            for run in (kids[:pos], kids[pos + 1:]):
                emit_pack(xb, run, [size[c] for c in run])
            excl = size[xb] - 1
            cut = xb
        else:
            excl = 0
            cut = xb if xb == marked else None
        i = 0
        for j in range(b, -1, -1):
            if size[path[j]] - excl >= L:
                i = j
                break
        xi = path[i]
        if i == b:
            kids = children[xi] if below is None else []
            emit_pack(xi, kids, [size[c] for c in kids])
        else:
            nxt = path[i + 1]
            kids = children[xi]
            sizes = [size[c] - excl if c == nxt else size[c] for c in kids]
            emit_pack(xi, kids, sizes, cut_child=nxt, cut=cut)
        if i == 0:
            return
        _emit_pair(tree, emit_pack, path[i - 1], xi)
        b = i - 1
        below = xi


def _emit_pair(tree, emit_pack, a, b):
    # a two-node piece {a, b}; b is the cut and the boundary leaf
    emit_pack(a, [b], [1], cut_child=b, cut=b)


def _finish(tree, L, pieces, marked, heavy):
    pieces.sort(key=Piece.sort_key)
    return Decomposition(tree, L, pieces, marked, heavy)


# -- component tree -----------------------------------------------------------

class ComponentTree(object):
    """Tree over pieces plus a synthetic root.

    TL node 0 is the synthetic root; piece i is TL node i + 1.  ``weight[v]``
    is the weight of the edge above v: the root-to-boundary distance of the
    parent piece (0 below the synthetic root).  ``wdepth[v]`` is therefore the
    depth of the root of piece v - 1 in the original tree.
    """

    def __init__(self, parent, children, weight):
        self.parent = parent
        self.children = children
        self.weight = weight
        self.size = len(parent)
        wdepth = [0] * self.size
        for v in self.preorder():
            if v:
                wdepth[v] = wdepth[parent[v]] + weight[v]
        self.wdepth = wdepth

    def preorder(self):
        out, todo = [], [0]
        while todo:
            v = todo.pop()
            out.append(v)
            todo.extend(reversed(self.children[v]))
        return out

    def to_bp(self):
        out = []

        def walk(v):
            out.append("(")
            for c in self.children[v]:
                walk(c)
            out.append(")")

        walk(0)
        return "".join(out)

    def ancestors(self, v):
        """v, parent(v), ..., 0."""
        out = [v]
        while v:
            v = self.parent[v]
            out.append(v)
        return out


def piece_distance(tree, piece):
    if piece.boundary_leaf is None:
        return 0
    return tree.depth_of[piece.boundary_leaf] - tree.depth_of[piece.root]


def component_tree(d):
    tree = d.tree
    by_root = {}
    for i, p in enumerate(d.pieces):
        by_root.setdefault(p.root, []).append(i + 1)
    k = len(d.pieces)
    parent = [0] * (k + 1)
    children = [[] for _ in range(k + 1)]
    weight = [0] * (k + 1)
    children[0] = list(by_root.get(1, []))
    for i, p in enumerate(d.pieces):
        if p.boundary_leaf is None:
            continue
        dist = piece_distance(tree, p)
        for v in by_root.get(p.boundary_leaf, []):
            parent[v] = i + 1
            weight[v] = dist
            children[i + 1].append(v)
    parent[0] = -1
    return ComponentTree(parent, children, weight)


# -- property checker -----------------------------------------------------------

class Report(object):
    def __init__(self):
        self.entries = []

    def add(self, name, ok, witness=None):
        self.entries.append((name, bool(ok), witness))

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.entries)

    def failures(self):
        return [e for e in self.entries if not e[1]]

    def lines(self):
        for name, ok, witness in self.entries:
            if ok:
                yield "PASS {}".format(name)
            else:
                yield "FAIL {}: {}".format(name, witness)

    def __str__(self):
        return "\n".join(self.lines())


def check_cover(d):
    """Check the six cover properties and the heavy-path observation literally."""
    tree, L = d.tree, d.L
    rep = Report()
    pieces = d.pieces
    node_sets = [p.nodes() for p in pieces]

    # 1: every edge in exactly one piece
    count = [0] * (tree.n + 1)  # edge (parent[y], y) keyed by y
    bad = None
    for p, nodes in zip(pieces, node_sets):
        members = set(nodes)
        for y in nodes:
            if y == p.root:
                continue
            if tree.parent[y] not in members:
                bad = bad or ("piece {} is not connected at {}".format(p, y))
            count[y] += 1
    dup = next((y for y in range(2, tree.n + 1) if count[y] != 1), None)
    witness = bad
    if dup is not None:
        witness = "edge ({}, {}) covered {} times".format(tree.parent[dup], dup, count[dup])
    rep.add("property-1 edge partition", bad is None and dup is None, witness)

    # 2: sizes
    wrong = [p for p, nodes in zip(pieces, node_sets) if not 2 <= len(nodes) <= 2 * L + 1]
    rep.add("property-2 size window", not wrong, wrong[:1])

    # 3: piece count
    limit = max_pieces(tree.n, L)
    rep.add("property-3 piece count", len(pieces) <= limit,
            "{} pieces > {}".format(len(pieces), limit))

    # 4/5: sharing only at the root and one boundary leaf
    occurrences = [0] * (tree.n + 1)
    for nodes in node_sets:
        for y in nodes:
            occurrences[y] += 1
    w4 = w5 = None
    for p, nodes in zip(pieces, node_sets):
        members = set(nodes)
        shared = [y for y in nodes if occurrences[y] > 1]
        allowed = {p.root, p.boundary_leaf}
        if len(shared) > 2 or any(y not in allowed for y in shared):
            w4 = w4 or "{} shares {}".format(p, shared)
        for y in shared + ([p.boundary_leaf] if p.boundary_leaf else []):
            if y == p.root:
                continue
            if any(c in members for c in tree.children[y]):
                w5 = w5 or "{}: boundary node {} is not a leaf".format(p, y)
    rep.add("property-4 at most two boundary nodes", w4 is None, w4)
    rep.add("property-5 boundary nodes are root or leaf", w5 is None, w5)

    # 6: two preorder intervals characterise the non-root nodes
    w6 = None
    for p, nodes in zip(pieces, node_sets):
        nonroot = sorted(nodes[1:])
        runs = []
        for y in nonroot:
            if runs and runs[-1][1] == y - 1:
                runs[-1][1] = y
            else:
                runs.append([y, y])
        if len(runs) > 2:
            w6 = w6 or "{} needs {} intervals".format(p, len(runs))
        # the interval test must accept every member and reject the nodes
        # just outside each run
        edges = [y for a, b in runs for y in (a - 1, b + 1)]
        if (not all(p.contains_nonroot(y) for y in nonroot)
                or any(p.contains_nonroot(y) for y in edges)):
            w6 = w6 or "{}: intervals disagree with membership".format(p)
    rep.add("property-6 two preorder intervals", w6 is None, w6)

    # heavy nodes of each piece: a root-to-boundary path, or just the root
    heavy = d.heavy or heavy_flags(tree, L, d.marked)
    wo = None
    for p, nodes in zip(pieces, node_sets):
        hv = sorted(y for y in nodes if heavy[y])
        if p.boundary_leaf is not None:
            want, y = [], p.boundary_leaf
            while y != p.root:
                want.append(y)
                y = tree.parent[y]
            want = sorted(want + [p.root])
            if hv != want:
                wo = wo or "{}: heavy {} != path {}".format(p, hv, want)
        elif any(y != p.root for y in hv):
            wo = wo or "{}: heavy {} below a root of a leaf piece".format(p, hv)
    rep.add("heavy-path nodes", wo is None, wo)
    return rep


check_lemma1 = check_cover
