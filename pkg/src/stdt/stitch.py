"""Query answering on a tree glued together from parts along a component tree.

The same rules serve the top-level index (parts = macro trees) and every
inner node of an aB-tree (parts = sub-pieces).  Positions are preorder
ranks in the glued tree; each part answers local queries on its own
preorder ranks.  Component-tree node 0 is the synthetic root and part t
sits at node t (1-based).
"""

import threading

from .errors import NoSuchNode

_probe = threading.local()


class Probe(object):
    """Per-query instrumentation: distinct aB-nodes and macro trees touched."""

    def __init__(self):
        self.nodes = set()
        self.pieces = set()

    @property
    def visits(self):
        return len(self.nodes)


def start_probe():
    p = Probe()
    _probe.current = p
    return p


def stop_probe():
    _probe.current = None


def touch(node_key, piece_key=None):
    p = getattr(_probe, "current", None)
    if p is not None:
        p.nodes.add(node_key)
        if piece_key is not None:
            p.pieces.add(piece_key)


class Layout(object):
    """Offsets derived from the component tree and the per-part summaries.

    sizes, root_degrees, dists, bps are 1-based lists (index 0 unused);
    dists[t] > 0 iff part t has a boundary leaf, bps[t] counts part nodes
    preceding it.  ``heights`` is a list or a function of t, read on the
    first height query.
    """

    def __init__(self, tl_parent, tl_children, sizes, root_degrees, dists, bps, heights):
        k = len(sizes) - 1
        self.k = k
        self.tl_parent = tl_parent
        self.tl_children = tl_children
        self.sizes = sizes
        self.root_degrees = root_degrees
        self.dists = dists
        self.heights = heights
        # local position of the boundary leaf, or size + 1 when there is none
        self.bloc = [0] + [bps[t] + 1 if dists[t] else sizes[t] + 1 for t in range(1, k + 1)]
        order = self._preorder()
        self.order = order
        below = [0] * (k + 1)
        for t in reversed(order):
            if t:
                below[tl_parent[t]] += sizes[t] - 1 + below[t]
        self.below = below          # nodes hanging under the boundary leaf
        start = [0] * (k + 1)
        rootpos = [0] * (k + 1)
        wdepth = [0] * (k + 1)
        bpos = [0] * (k + 1)
        bpos[0] = 1
        for u in order:
            nxt = bpos[u] + 1
            for c in tl_children[u]:
                rootpos[c] = bpos[u]
                start[c] = nxt
                wdepth[c] = wdepth[u] + (dists[u] if u else 0)
                if dists[c]:
                    bpos[c] = nxt + self.bloc[c] - 2
                nxt += sizes[c] - 1 + below[c]
        self.start = start
        self.rootpos = rootpos
        self.wdepth = wdepth
        self.bpos = bpos
        self.total = 1 + sum(sizes[t] - 1 for t in range(1, k + 1))
        self._hanging = None

    def _heights(self):
        k, h = self.k, self.heights
        hb = [-1] * (k + 1)
        hfull = [0] * (k + 1)
        for t in reversed(self.order):
            if t:
                ht = h(t) if callable(h) else h[t]
                if self.tl_children[t]:
                    ht = max(ht, self.dists[t] + hb[t])
                hfull[t] = ht
                hb[self.tl_parent[t]] = max(hb[self.tl_parent[t]], ht)
        self._hanging = hb
        self._hfull = hfull

    @property
    def hanging(self):
        """Height below the shared node of each component node."""
        if self._hanging is None:
            self._heights()
        return self._hanging

    @property
    def hfull(self):
        if self._hanging is None:
            self._heights()
        return self._hfull

    def _preorder(self):
        out, todo = [], [0]
        while todo:
            v = todo.pop()
            out.append(v)
            todo.extend(reversed(self.tl_children[v]))
        return out

    def locate(self, p):
        """(part, local position) owning glued position p >= 2."""
        for t in range(1, self.k + 1):
            got = self.local(t, p)
            if got:
                return t, got
        raise NoSuchNode("position {} not in any part".format(p))

    def local(self, t, p):
        s, b = self.start[t], self.bloc[t]
        if s <= p <= s + min(b, self.sizes[t]) - 2:
            return p - s + 2
        off = p - s + 2 - self.below[t]
        if b < off <= self.sizes[t] and p > s + b - 2:
            return off
        return 0

    def to_global(self, t, q):
        if q == 1:
            return self.rootpos[t]
        if q <= self.bloc[t]:
            return self.start[t] + q - 2
        return self.start[t] + q - 2 + self.below[t]


class Stitcher(object):
    """Mixin answering every query from a Layout and per-part navigators.

    Subclasses provide ``layout``, ``part(t)`` (local navigator) and may
    override ``locate``, ``tl_lca`` and ``climb`` with faster structures.
    """

    n = 0

    def locate(self, p):
        return self.layout.locate(p)

    def tl_lca(self, a, b):
        par = self.layout.tl_parent
        seen = set()
        while True:
            seen.add(a)
            if a == 0:
                break
            a = par[a]
        while b not in seen:
            b = par[b]
        return b

    def climb(self, v, target):
        """Deepest ancestor-or-self u of component node v with wdepth(u) <= target."""
        lay = self.layout
        while v and lay.wdepth[v] > target:
            v = lay.tl_parent[v]
        return v

    def _check(self, p):
        if not 1 <= p <= self.n:
            raise NoSuchNode("node {} not in 1..{}".format(p, self.n))

    def _shared(self, p):
        """Component node whose shared node sits at p, or None."""
        if p == 1:
            return 0
        t, q = self.locate(p)
        lay = self.layout
        if q == lay.bloc[t] and lay.tl_children[t]:
            return t
        return None

    def depth(self, p):
        self._check(p)
        if p == 1:
            return 0
        t, q = self.locate(p)
        return self.layout.wdepth[t] + self.part(t).depth(q)

    def parent_of(self, p):
        self._check(p)
        if p == 1:
            raise NoSuchNode("the root has no parent")
        t, q = self.locate(p)
        return self.layout.to_global(t, self.part(t).parent_of(q))

    def num_descendants(self, p):
        self._check(p)
        if p == 1:
            return self.n
        t, q = self.locate(p)
        lay = self.layout
        nav = self.part(t)
        s = nav.num_descendants(q)
        if lay.tl_children[t] and nav.is_ancestor(q, lay.bloc[t]):
            s += lay.below[t]
        return s

    def height(self, p):
        self._check(p)
        lay = self.layout
        if p == 1:
            return max(lay.hanging[0], 0)
        t, q = self.locate(p)
        nav = self.part(t)
        h = nav.height(q)
        if lay.tl_children[t] and nav.is_ancestor(q, lay.bloc[t]):
            h = max(h, lay.dists[t] - nav.depth(q) + lay.hanging[t])
        return h

    def degree(self, p):
        self._check(p)
        u = self._shared(p)
        lay = self.layout
        if u is not None:
            return sum(lay.root_degrees[c] for c in lay.tl_children[u])
        t, q = self.locate(p)
        return self.part(t).degree(q)

    def child_select(self, p, i):
        self._check(p)
        u = self._shared(p)
        lay = self.layout
        if u is not None:
            if i >= 1:
                for c in lay.tl_children[u]:
                    if i <= lay.root_degrees[c]:
                        return lay.to_global(c, self.part(c).child_select(1, i))
                    i -= lay.root_degrees[c]
            raise NoSuchNode("node {} has too few children".format(p))
        t, q = self.locate(p)
        return lay.to_global(t, self.part(t).child_select(q, i))

    def child_rank(self, p):
        self._check(p)
        if p == 1:
            raise NoSuchNode("the root has no siblings")
        t, q = self.locate(p)
        nav = self.part(t)
        r = nav.child_rank(q)
        if nav.parent_of(q) == 1:
            lay = self.layout
            for c in lay.tl_children[lay.tl_parent[t]]:
                if c == t:
                    break
                r += lay.root_degrees[c]
        return r

    def level_ancestor(self, p, d):
        self._check(p)
        if d < 0:
            raise NoSuchNode("negative level")
        if p == 1:
            if d == 0:
                return 1
            raise NoSuchNode("level_ancestor({}, {}) out of range".format(p, d))
        t, q = self.locate(p)
        lay = self.layout
        nav = self.part(t)
        dl = nav.depth(q)
        if d <= dl:
            return lay.to_global(t, nav.level_ancestor(q, d))
        target = lay.wdepth[t] + dl - d
        if target < 0:
            raise NoSuchNode("level_ancestor({}, {}) out of range".format(p, d))
        a = self.climb(lay.tl_parent[t], target)
        if a == 0:
            return 1
        up = lay.dists[a] - (target - lay.wdepth[a])
        nav_a = self.part(a)
        return lay.to_global(a, nav_a.level_ancestor(lay.bloc[a], up))

    def lca(self, p1, p2):
        self._check(p1)
        self._check(p2)
        if p1 == 1 or p2 == 1:
            return 1
        t1, q1 = self.locate(p1)
        t2, q2 = self.locate(p2)
        lay = self.layout
        if t1 == t2:
            return lay.to_global(t1, self.part(t1).lca(q1, q2))
        w = self.tl_lca(t1, t2)
        if w == t1:
            return lay.to_global(t1, self.part(t1).lca(q1, lay.bloc[t1]))
        if w == t2:
            return lay.to_global(t2, self.part(t2).lca(q2, lay.bloc[t2]))
        return lay.bpos[w]

    def preorder_rank(self, p):
        self._check(p)
        return p

    def preorder_select(self, i):
        if not 1 <= i <= self.n:
            raise NoSuchNode("preorder_select({}) out of range".format(i))
        return i

    def is_ancestor(self, a, x):
        return a <= x < a + self.num_descendants(a)
