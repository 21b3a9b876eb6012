"""The top-level index: macro trees glued along the component tree.

Global nodes are preorder ranks.  A node other than the root belongs, as a
non-root member, to exactly one macro tree; the boundary bits mark where the
owner changes along preorder and ``macro_map`` names the owner of each run.
"""

import math
import threading
from collections import OrderedDict, namedtuple

from .ab_tree import DEFAULT_B, TINY_SIZE, ClassTable, piece_to_marked
from .bitvector import SparseBitvector
from .codec import MacroCodec, default_chunk_leaf
from .decomposition import component_tree, decompose
from .entropy import DegreeDistribution, EntropyModel, entropy
from .errors import DepthOutOfRange, InputError, NoSuchNode, TreeError
from .stitch import Layout, Stitcher, start_probe, stop_probe
from .tree import OrderedTree, dispatch

NAV_CACHE = 256

Params = namedtuple("Params", "L B t backend chunk_leaf")


def default_params(n, t=1):
    """(L, B): L = floor(log2 n)^(t+2) capped at n/2; B fixed (see DEFAULT_B)."""
    lg = max(1, int(math.floor(math.log2(n)))) if n > 1 else 1
    L = max(2, min(lg ** (t + 2), n // 2))
    return L, DEFAULT_B


class WeightedAncestor(object):
    """Jump tables over a weighted tree (node 0 is the root).

    ``up[j][v]`` is the 2^j-th ancestor of v (0 saturates).  ``query(v, d)``
    is the nearest ancestor-or-self u of v with wdepth(u) <= wdepth(v) - d.
    """

    def __init__(self, parent, wdepth):
        k = len(parent)
        self.wdepth = wdepth
        par = [max(p, 0) for p in parent]
        depth = [0] * k
        for v in _topological(par):
            if v:
                depth[v] = depth[par[v]] + 1
        self.depth = depth
        up = [par]
        levels = max(1, max(depth).bit_length())
        for _ in range(1, levels):
            prev = up[-1]
            up.append([prev[prev[v]] for v in range(k)])
        self.up = up

    def climb(self, v, target):
        """Deepest ancestor-or-self u of v with wdepth(u) <= target."""
        w = self.wdepth
        if w[v] <= target:
            return v
        for row in reversed(self.up):
            if w[row[v]] > target:
                v = row[v]
        return self.up[0][v]

    def query(self, v, d):
        if d < 0 or d > self.wdepth[v]:
            raise DepthOutOfRange("weight {} outside 0..{}".format(d, self.wdepth[v]))
        return self.climb(v, self.wdepth[v] - d)

    def lca(self, a, b):
        dep, up = self.depth, self.up
        if dep[a] < dep[b]:
            a, b = b, a
        diff = dep[a] - dep[b]
        j = 0
        while diff:
            if diff & 1:
                a = up[j][a]
            diff >>= 1
            j += 1
        if a == b:
            return a
        for row in reversed(up):
            if row[a] != row[b]:
                a, b = row[a], row[b]
        return up[0][a]

    def space_bits(self):
        k = len(self.wdepth)
        return len(self.up) * k * max(1, k.bit_length())


def _topological(par):
    kids = [[] for _ in par]
    for v, p in enumerate(par):
        if v:
            kids[p].append(v)
    out, todo = [], [0]
    while todo:
        v = todo.pop()
        out.append(v)
        todo.extend(kids[v])
    return out


def weighted_level_ancestor(tl, v, d):
    """Nearest ancestor u of TL node v with wdepth(u) <= wdepth(v) - d."""
    return WeightedAncestor(tl.parent, tl.wdepth).query(v, d)


class SuccinctTree(Stitcher):
    """Compressed tree answering every navigation query on preorder ids."""

    def __init__(self, n, params, dist, macros, tl_parent, tl_children, tl_weight,
                 heights, boundary, macro_map, table=None):
        self.n = n
        self.params = params
        self.dist = dist
        self.macros = macros
        self.tl_parent = tl_parent
        self.tl_children = tl_children
        self.tl_weight = tl_weight
        self.heights = heights
        self.boundary = boundary
        self.macro_map = macro_map
        self.model = EntropyModel(dist, params.L)
        self._local = threading.local()
        if n == 1:
            self._single = OrderedTree([0])
            self.codec = None
            return
        if params.backend == "enum" and table is None:
            table = ClassTable(self.model, params.B, max(e.f.size for e in macros))
        self.codec = MacroCodec(self.model, params.B, params.backend, params.chunk_leaf, table)
        k = len(macros)
        f = [None] + [e.f for e in macros]
        self.layout = Layout(
            tl_parent, tl_children,
            [0] + [x.size for x in f[1:]],
            [0] + [x.root_degree for x in f[1:]],
            [0] + [x.boundary_distance for x in f[1:]],
            [0] + [x.boundary_preorder for x in f[1:]],
            [0] + list(heights))
        for t in range(1, k + 1):
            if tl_parent[t] and tl_weight[t] != f[tl_parent[t]].boundary_distance:
                raise TreeError("component tree weights disagree with macro summaries")
        self.root_depths = [self.layout.wdepth[t] for t in range(1, k + 1)]
        self.wla = WeightedAncestor(tl_parent, self.layout.wdepth)

    # -- plumbing used by Stitcher --------------------------------------------

    def _cache(self):
        c = getattr(self._local, "navs", None)
        if c is None:
            c = self._local.navs = OrderedDict()
        return c

    def part(self, t):
        c = self._cache()
        nav = c.get(t)
        if nav is None:
            nav = c[t] = self.codec.navigator(self.macros[t - 1], piece_key=t)
            if len(c) > NAV_CACHE:
                c.popitem(last=False)
        else:
            c.move_to_end(t)
        return nav

    def locate(self, p):
        j = self.boundary.rank1(p)
        t = self.macro_map[j - 1]
        q = self.layout.local(t, p)
        if not q:
            raise TreeError("node {} not found in macro tree {}".format(p, t))
        return t, q

    def tl_lca(self, a, b):
        return self.wla.lca(a, b)

    def climb(self, v, target):
        return self.wla.climb(v, target)

    # -- public ------------------------------------------------------------------

    def query(self, q):
        if self.n == 1:
            return dispatch(self._single, q)
        return dispatch(self, q)

    def probe_query(self, q):
        """(answer or exception, probe) with the aB-nodes and macro trees touched."""
        probe = start_probe()
        try:
            try:
                ans = self.query(q)
            except NoSuchNode as exc:
                ans = exc
        finally:
            stop_probe()
        return ans, probe

    def macro_of(self, x):
        """Macro tree holding x as a non-root node (x >= 2)."""
        return self.locate(x)[0]

    def decode_macro(self, t):
        return self.codec.decode(self.macros[t - 1])

    def space_report(self):
        return space_report(self)


def _owner_runs(tree, pieces):
    owner = [0] * (tree.n + 1)
    for i, p in enumerate(pieces, 1):
        for x in p.nodes()[1:]:
            owner[x] = i
    positions, runs = [], []
    for x in range(2, tree.n + 1):
        if x == 2 or owner[x] != owner[x - 1]:
            positions.append(x)
            runs.append(owner[x])
    return positions, runs


def build(tree, L=None, B=None, backend="arith", t=1, chunk_leaf=None, table=None):
    """Index ``tree``; unset parameters take the defaults of default_params."""
    n = tree.n
    dL, dB = default_params(n, t)
    L = dL if L is None else L
    B = dB if B is None else B
    if L < 2 or B < 2:
        raise InputError("need L >= 2 and B >= 2")
    if backend not in ("arith", "enum"):
        raise InputError("unknown backend {!r}".format(backend))
    if chunk_leaf is None:
        chunk_leaf = default_chunk_leaf(B, L)
    params = Params(L, B, t, backend, chunk_leaf)
    dist = DegreeDistribution.of(tree)
    if n == 1:
        return SuccinctTree(1, params, dist, [], [-1], [[]], [0], [], SparseBitvector(1, []), [])
    d = decompose(tree, L)
    tl = component_tree(d)
    # number macro trees in component-tree preorder so its BP string fixes them
    order = tl.preorder()
    new_id = {v: i for i, v in enumerate(order)}
    tl_parent = [-1] + [new_id[tl.parent[v]] for v in order[1:]]
    tl_children = [[new_id[c] for c in tl.children[v]] for v in order]
    tl_weight = [tl.weight[v] for v in order]
    raw = [d.pieces[v - 1] for v in order[1:]]
    pieces = [piece_to_marked(tree, p) for p in raw]
    model = EntropyModel(dist, L)
    if backend == "enum" and table is None:
        table = ClassTable(model, B, max(p.tree.n for p in pieces))
    codec = MacroCodec(model, B, backend, chunk_leaf, table)
    macros = [codec.encode(S) for S in pieces]
    heights = [S.tree.height(1) for S in pieces]
    positions, runs = _owner_runs(tree, raw)
    return SuccinctTree(n, params, dist, macros, tl_parent, tl_children, tl_weight,
                        heights, SparseBitvector(n, positions), runs, table)


# -- space accounting --------------------------------------------------------------

def _bl(x):
    return max(1, int(x).bit_length())


def _gamma_len(x):
    return 2 * _bl(x) - 1


def summary_bits(f, model):
    """Self-delimiting size of one macro summary: gamma(size), gamma(h* + 1),
    then the six other fields in bitlen(size - 1) bits each."""
    return _gamma_len(f.size) + _gamma_len(f.h_star + 1) + 6 * _bl(f.size - 1)


def space_report(st):
    """Bits per component, reference quantities and derived ratios."""
    n = st.n
    L = st.params.L
    macros = st.macros
    k = len(macros)
    rep = OrderedDict()
    model = st.model
    rep["n"] = n
    rep["L"] = L
    rep["B"] = st.params.B
    rep["backend"] = st.params.backend
    rep["macros"] = k
    codes = sum(len(e.payload) for e in macros)
    skeleton = sum(len(e.skeleton) for e in macros)
    payload = codes + skeleton
    comps = OrderedDict()
    # a macro's encoding is its chunk codes plus the split skeleton
    comps["payload_codes"] = codes
    comps["payload_skeleton"] = skeleton
    comps["macro_summaries"] = sum(summary_bits(e.f, model) + len(e.g) for e in macros)
    comps["boundary_bits"] = st.boundary.space_bits()
    comps["macro_map"] = len(st.macro_map) * _bl(k)
    comps["root_depths"] = k * _bl(n)
    comps["heights"] = sum(_bl(e.f.size - 1) for e in macros)
    # edge weights equal the parent's boundary distance, already in its summary
    comps["component_tree"] = 2 * (k + 1)
    comps["level_ancestor"] = st.wla.space_bits() if k else 0
    comps["degree_table"] = len(st.dist.counts) * 2 * _bl(n)
    comps["params"] = 4 * 64
    rep["bits"] = comps
    total = sum(comps.values())
    structural = total - payload
    rep["payload_bits"] = payload
    rep["total_bits"] = total
    rep["structural_bits"] = structural
    rep["bits_per_node"] = total / n
    H = entropy(st.dist)
    rep["H"] = H
    rep["nH"] = n * H
    rep["sum_H_star"] = sum(e.f.h_star for e in macros) / L
    rep["bp_baseline"] = 2 * n
    unit = (n / L) * math.log2(n) if n > 1 else 1.0
    rep["c_aux"] = structural / unit
    return rep
