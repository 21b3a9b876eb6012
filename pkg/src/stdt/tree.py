"""Explicit ordered trees, balanced-parentheses I/O and the naive query oracle.

Nodes are identified by their preorder rank, 1..n.  ``parent[1] == 0``.
"""

import json
import random
from collections import namedtuple
from xml.etree import ElementTree

from .errors import (
    InfeasibleProfile,
    InputError,
    MultipleRoots,
    NoSuchNode,
    UnbalancedInput,
)

# name -> number of arguments
OPS = {
    "depth": 1,
    "height": 1,
    "num_descendants": 1,
    "parent": 1,
    "lca": 2,
    "level_ancestor": 2,
    "degree": 1,
    "child_rank": 1,
    "child_select": 2,
    "preorder_rank": 1,
    "preorder_select": 1,
}

# arguments that are node ids (the rest are plain integers)
NODE_ARGS = {
    "lca": (0, 1),
    "level_ancestor": (0,),
    "child_select": (0,),
    "preorder_select": (),
}


class Query(namedtuple("Query", "op args")):
    """One tree query, e.g. ``Query("lca", (3, 5))``."""

    __slots__ = ()

    def __new__(cls, op, args=()):
        if op not in OPS:
            raise InputError("unknown query {!r}".format(op))
        args = tuple(int(a) for a in args)
        if len(args) != OPS[op]:
            raise InputError("{} takes {} argument(s)".format(op, OPS[op]))
        return super().__new__(cls, op, args)

    def node_args(self):
        return [self.args[i] for i in NODE_ARGS.get(self.op, (0,))]

    def __str__(self):
        return "{}({})".format(self.op, ",".join(map(str, self.args)))


class OrderedTree(object):
    """Static ordered tree with nodes numbered 1..n in preorder.

    Besides being the ground truth for tests, the array-based query methods
    serve as the navigator for explicitly decoded chunks.
    """

    def __init__(self, degrees):
        degrees = list(degrees)
        n = len(degrees)
        if n == 0:
            raise InputError("a tree needs at least one node")
        parent = [0] * (n + 1)
        children = [[] for _ in range(n + 1)]
        stack = []  # (node, remaining children)
        for x, d in enumerate(degrees, 1):
            if d < 0:
                raise InputError("negative degree")
            if x > 1:
                if not stack:
                    raise MultipleRoots("degree sequence describes a forest")
                p = stack[-1]
                parent[x] = p[0]
                children[p[0]].append(x)
                p[1] -= 1
                if p[1] == 0:
                    stack.pop()
            if d:
                stack.append([x, d])
        if stack:
            raise UnbalancedInput("degree sequence is not a tree")
        self.n = n
        self.parent = parent
        self.children = children
        size = [1] * (n + 1)
        size[0] = 0
        for x in range(n, 1, -1):
            size[parent[x]] += size[x]
        self.size = size
        depth = [0] * (n + 1)
        for x in range(2, n + 1):
            depth[x] = depth[parent[x]] + 1
        self.depth_of = depth
        self._height = None
        self._crank = None

    @classmethod
    def from_parents(cls, parent):
        """Build from a 1-based parent list already in preorder."""
        n = len(parent) - 1
        deg = [0] * (n + 1)
        for x in range(2, n + 1):
            deg[parent[x]] += 1
        t = cls(deg[1:])
        if t.parent != list(parent):
            raise InputError("parent list is not in preorder")
        return t

    def degrees(self):
        """Preorder degree sequence."""
        return [len(self.children[x]) for x in range(1, self.n + 1)]

    def degree_counts(self):
        counts = {}
        for x in range(1, self.n + 1):
            d = len(self.children[x])
            counts[d] = counts.get(d, 0) + 1
        return counts

    def to_bp(self):
        return to_bp(self)

    def __eq__(self, other):
        return isinstance(other, OrderedTree) and self.parent == other.parent

    def __hash__(self):
        return hash(tuple(self.parent))

    def __repr__(self):
        if self.n <= 32:
            return "OrderedTree({!r})".format(self.to_bp())
        return "OrderedTree(n={})".format(self.n)

    # -- navigation -------------------------------------------------------

    def _check(self, x):
        if not 1 <= x <= self.n:
            raise NoSuchNode("node {} not in 1..{}".format(x, self.n))

    def depth(self, x):
        self._check(x)
        return self.depth_of[x]

    def height(self, x):
        self._check(x)
        if self._height is None:
            h = [0] * (self.n + 1)
            for y in range(self.n, 1, -1):
                p = self.parent[y]
                if h[y] + 1 > h[p]:
                    h[p] = h[y] + 1
            self._height = h
        return self._height[x]

    def num_descendants(self, x):
        self._check(x)
        return self.size[x]

    def parent_of(self, x):
        self._check(x)
        if x == 1:
            raise NoSuchNode("the root has no parent")
        return self.parent[x]

    def degree(self, x):
        self._check(x)
        return len(self.children[x])

    def child_select(self, x, i):
        self._check(x)
        ch = self.children[x]
        if not 1 <= i <= len(ch):
            raise NoSuchNode("node {} has no child {}".format(x, i))
        return ch[i - 1]

    def child_rank(self, x):
        self._check(x)
        if x == 1:
            raise NoSuchNode("the root has no siblings")
        if self._crank is None:
            r = [0] * (self.n + 1)
            for y in range(1, self.n + 1):
                for k, c in enumerate(self.children[y], 1):
                    r[c] = k
            self._crank = r
        return self._crank[x]

    def level_ancestor(self, x, i):
        self._check(x)
        if i < 0 or i > self.depth_of[x]:
            raise NoSuchNode("level_ancestor({}, {}) out of range".format(x, i))
        for _ in range(i):
            x = self.parent[x]
        return x

    def lca(self, x, y):
        self._check(x)
        self._check(y)
        dx, dy = self.depth_of[x], self.depth_of[y]
        while dx > dy:
            x = self.parent[x]
            dx -= 1
        while dy > dx:
            y = self.parent[y]
            dy -= 1
        while x != y:
            x, y = self.parent[x], self.parent[y]
        return x

    def preorder_rank(self, x):
        self._check(x)
        return x

    def preorder_select(self, i):
        if not 1 <= i <= self.n:
            raise NoSuchNode("preorder_select({}) out of range".format(i))
        return i

    def is_ancestor(self, a, x):
        """True iff a is an ancestor of x or x itself."""
        return a <= x < a + self.size[a]

    def answer(self, q):
        """Answer ``q`` with the array-based methods."""
        return dispatch(self, q)


def dispatch(nav, q):
    """Route a Query to the navigator method of the same name."""
    op, a = q.op, q.args
    if op == "parent":
        return nav.parent_of(a[0])
    return getattr(nav, op)(*a)


# -- balanced parentheses -------------------------------------------------

def parse_bp(text):
    """Parse "(()())"-style text; whitespace (e.g. trailing newline) is ignored."""
    text = "".join(text.split())
    if not text:
        raise UnbalancedInput("empty input")
    degrees = []
    stack = []
    closed_root = False
    for pos, ch in enumerate(text):
        if ch == "(":
            if closed_root:
                raise MultipleRoots("second root at offset {}".format(pos))
            if stack:
                degrees[stack[-1]] += 1
            stack.append(len(degrees))
            degrees.append(0)
        elif ch == ")":
            if not stack:
                raise UnbalancedInput("unmatched ')' at offset {}".format(pos))
            stack.pop()
            if not stack:
                closed_root = True
        else:
            raise UnbalancedInput("unexpected character {!r} at offset {}".format(ch, pos))
    if stack:
        raise UnbalancedInput("{} unclosed '('".format(len(stack)))
    return OrderedTree(degrees)


def to_bp(tree):
    out = []
    stack = []
    for x in range(1, tree.n + 1):
        while stack and not tree.is_ancestor(stack[-1], x):
            out.append(")")
            stack.pop()
        out.append("(")
        stack.append(x)
    out.append(")" * len(stack))
    return "".join(out)


# -- naive oracle -----------------------------------------------------------

def _ancestors(tree, x):
    path = [x]
    while x != 1:
        x = tree.parent[x]
        path.append(x)
    return path


def oracle_query(tree, q):
    """Answer ``q`` by direct traversal of the explicit tree.

    Deliberately avoids the precomputed size/depth arrays so it stays an
    independent check of everything built on top of them.
    """
    op, a = q.op, q.args
    n = tree.n
    for v in q.node_args():
        if not 1 <= v <= n:
            raise NoSuchNode("node {} not in 1..{}".format(v, n))
    if op == "preorder_select":
        if not 1 <= a[0] <= n:
            raise NoSuchNode("preorder_select({}) out of range".format(a[0]))
        order = []
        todo = [1]
        while todo:
            x = todo.pop()
            order.append(x)
            todo.extend(reversed(tree.children[x]))
        return order[a[0] - 1]
    x = a[0]
    if op == "preorder_rank":
        return x
    if op == "depth":
        return len(_ancestors(tree, x)) - 1
    if op == "parent":
        if x == 1:
            raise NoSuchNode("the root has no parent")
        return tree.parent[x]
    if op == "degree":
        return len(tree.children[x])
    if op == "num_descendants" or op == "height":
        count, best = 0, 0
        todo = [(x, 0)]
        while todo:
            y, d = todo.pop()
            count += 1
            best = max(best, d)
            todo.extend((c, d + 1) for c in tree.children[y])
        return count if op == "num_descendants" else best
    if op == "child_rank":
        if x == 1:
            raise NoSuchNode("the root has no siblings")
        return tree.children[tree.parent[x]].index(x) + 1
    if op == "child_select":
        ch = tree.children[x]
        if not 1 <= a[1] <= len(ch):
            raise NoSuchNode("node {} has no child {}".format(x, a[1]))
        return ch[a[1] - 1]
    if op == "level_ancestor":
        anc = _ancestors(tree, x)
        if not 0 <= a[1] < len(anc):
            raise NoSuchNode("level_ancestor({}, {}) out of range".format(x, a[1]))
        return anc[a[1]]
    if op == "lca":
        ax = _ancestors(tree, x)
        ay = set(_ancestors(tree, a[1]))
        for v in ax:
            if v in ay:
                return v
    raise AssertionError(op)


# -- generators -------------------------------------------------------------

PROFILES = ("uniform", "path", "star", "full-binary", "skewed")


def _cycle_rotate(degrees):
    """Rotate a degree sequence summing to n-1 into a valid preorder sequence."""
    s, best, at = 0, 1, 0
    for k, d in enumerate(degrees):
        s += d - 1
        if s < best:
            best, at = s, k
    k = (at + 1) % len(degrees)
    return degrees[k:] + degrees[:k]


def _random_composition(total, parts, rng):
    bars = sorted(rng.sample(range(total + parts - 1), parts - 1))
    out, prev = [], -1
    for b in bars + [total + parts - 1]:
        out.append(b - prev - 1)
        prev = b
    return out


def parse_profile(profile):
    """"skewed:0.9" -> ("skewed", 0.9); plain names -> (name, None)."""
    if isinstance(profile, tuple):
        return profile
    name, _, arg = profile.partition(":")
    if name == "uniform-random":
        name = "uniform"
    if name not in PROFILES:
        raise InfeasibleProfile("unknown profile {!r}".format(profile))
    if name == "skewed":
        p = float(arg) if arg else 0.5
        if not 0 <= p < 1:
            raise InfeasibleProfile("skew fraction must be in [0, 1)")
        return name, p
    return name, None


def random_tree(n, profile="uniform", seed=0):
    """Deterministic random tree with ``n`` nodes drawn from ``profile``.

    Profiles: uniform (uniform over ordered trees), path, star, full-binary,
    skewed:p (fraction p of unary nodes, the rest leaves and binary nodes).
    """
    if n < 1:
        raise InfeasibleProfile("n must be at least 1")
    name, p = parse_profile(profile)
    rng = random.Random("{}:{}:{}".format(n, name, seed if p is None else (seed, p)))
    if n == 1:
        return OrderedTree([0])
    if name == "path":
        return OrderedTree([1] * (n - 1) + [0])
    if name == "star":
        return OrderedTree([n - 1] + [0] * (n - 1))
    if name == "uniform":
        degrees = _random_composition(n - 1, n, rng)
    elif name == "full-binary":
        if n % 2 == 0:
            raise InfeasibleProfile("a full binary tree has an odd node count")
        degrees = [2] * (n // 2) + [0] * (n // 2 + 1)
        rng.shuffle(degrees)
    else:
        unary = int(round(p * n))
        if (n - unary) % 2 == 0:
            unary += 1 if unary < n - 1 else -1
        unary = min(unary, n - 1)
        binary = (n - unary - 1) // 2
        degrees = [1] * unary + [2] * binary + [0] * (binary + 1)
        rng.shuffle(degrees)
    return OrderedTree(_cycle_rotate(degrees))


# -- document skeletons -------------------------------------------------------

def _json_degrees(obj, out):
    if isinstance(obj, dict):
        items = list(obj.values())
    elif isinstance(obj, list):
        items = obj
    else:
        items = []
    out.append(len(items))
    for v in items:
        _json_degrees(v, out)


def json_skeleton(text):
    """Element tree of a JSON document: containers are inner nodes, scalars leaves."""
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise InputError("bad JSON: {}".format(e))
    out = []
    _json_degrees(doc, out)
    return OrderedTree(out)


def xml_skeleton(text):
    """Element tree of an XML document (text, attributes and tags dropped)."""
    try:
        root = ElementTree.fromstring(text)
    except ElementTree.ParseError as e:
        raise InputError("bad XML: {}".format(e))
    out = []
    todo = [root]
    while todo:
        el = todo.pop()
        kids = list(el)
        out.append(len(kids))
        todo.extend(reversed(kids))
    return OrderedTree(out)


def load_tree(path):
    """Read a tree from a .bp/.json/.xml file (by content sniffing)."""
    with open(path) as fh:
        text = fh.read()
    head = text.lstrip()[:1]
    if head == "(" or head == ")":
        return parse_bp(text)
    if head == "<":
        return xml_skeleton(text)
    if head in ("{", "["):
        return json_skeleton(text)
    raise InputError("{}: not a BP, JSON or XML document".format(path))
