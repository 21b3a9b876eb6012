"""Storing one macro tree and answering local queries on the stored form.

Two backends share the split recursion of ``ab_tree``:

``enum``   the piece is the integer rank of its class member; needs a
           ClassTable, so only tiny models qualify.
``arith``  the split recursion stops at chunks of at most ``chunk_leaf``
           nodes.  Each chunk's degree sequence is arithmetic coded; the
           split shapes and child summaries form a separate skeleton.

Skeleton layout, per aB-node of size s (MSB first):
  flag (1 bit, only when s > chunk_leaf): 1 = split, 0 = chunk
  chunk: gamma(code length + 1)
  split: g as bits ("(" = 1) unless it is the macro's own node; then per
         part t of k: size as gamma code (omitted for t = k), root degree,
         [boundary flag when needed], distance, preorder, height, each in
         bitlen(size_t - 1) bits; then the parts' skeletons in order.
The payload is the concatenation of chunk codes in the same order.  A chunk
with nothing to code (every position fixed) has an empty code.
"""

from collections import namedtuple

from .ab_tree import EMPTY, LEAF, MarkedTree, decompose_step, f_of, join, tl_from_bp
from .bits import (ArithmeticDecoder, ArithmeticEncoder, BitReader, Bits, BitWriter,
                   FrequencyTable, concat)
from .errors import CorruptPayload, InputError, ShapeMismatch, TreeError
from .stitch import Layout, Stitcher, touch
from .tree import OrderedTree, dispatch

BACKENDS = ("enum", "arith")

EncodedMacroTree = namedtuple("EncodedMacroTree", "f g backend payload skeleton")

Summary = namedtuple("Summary", "size root_degree dist bp height")


def default_chunk_leaf(B, L):
    """Largest chunk coded as one unit; chunks of L nodes keep the skeleton
    under a tenth of a bit per node at desk scale."""
    return max(B, 16, L)


def _height(tree):
    return tree.height(1)


def _g_bits(g):
    return Bits(int(g.replace("(", "1").replace(")", "0"), 2), len(g))


def _read_g(rd):
    depth, out = 0, []
    while True:
        b = rd.read()
        out.append("(" if b else ")")
        depth += 1 if b else -1
        if depth <= 0:
            break
        if len(out) > 4096:
            raise CorruptPayload("runaway split shape")
    if depth < 0:
        raise CorruptPayload("bad split shape")
    return "".join(out)


def _valid_degrees(seq):
    need = 1
    for d in seq:
        if need <= 0 or d < 0:
            return False
        need += d - 1
    return need == 0


class _Chunk(object):
    """Decoded-on-demand leaf of the split recursion."""

    def __init__(self, codec, summary, payload, start, end, key):
        self.codec = codec
        self.summary = summary
        self.payload = payload
        self.start = start
        self.end = end
        self.key = key
        self._tree = None

    def tree(self):
        if self._tree is None:
            s = self.summary
            self._tree = self.codec.decode_chunk(
                self.payload, self.start, self.end, s.size, s.root_degree, s.bp + 1 if s.dist else None)
        return self._tree


class _Split(object):
    def __init__(self, summary, g, parts, key):
        self.summary = summary
        self.g = g
        self.parts = parts
        self.key = key


class LeafNav(object):
    """Local queries on a decoded chunk; records the visit."""

    def __init__(self, get_tree, key, piece_key):
        self._get = get_tree
        self.key = key
        self.piece_key = piece_key

    def __getattr__(self, name):
        touch(self.key, self.piece_key)
        return getattr(self._get(), name)


class SplitNav(Stitcher):
    def __init__(self, size, g, summaries, make_part, key, piece_key):
        parent, children = tl_from_bp(g)
        k = len(summaries)
        self.n = size
        self.key = key
        self.piece_key = piece_key
        self._make = make_part
        self._parts = {}
        self.layout = Layout(
            parent, children,
            [0] + [s.size for s in summaries],
            [0] + [s.root_degree for s in summaries],
            [0] + [s.dist for s in summaries],
            [0] + [s.bp for s in summaries],
            [0] + [s.height for s in summaries] if all(s.height is not None for s in summaries)
            else (lambda t: self.part(t).height(1)))
        if self.layout.total != size or k != len(parent) - 1:
            raise CorruptPayload("split summaries do not add up")

    def _check(self, p):
        touch(self.key, self.piece_key)
        Stitcher._check(self, p)

    def part(self, t):
        nav = self._parts.get(t)
        if nav is None:
            nav = self._parts[t] = self._make(t)
        return nav


class MacroCodec(object):
    """Encoder, decoder and navigator factory for one (model, B, backend)."""

    def __init__(self, model, B, backend="arith", chunk_leaf=None, table=None):
        if backend not in BACKENDS:
            raise InputError("unknown backend {!r}".format(backend))
        if B < 2:
            raise InputError("B must be at least 2")
        self.model = model
        self.B = B
        self.backend = backend
        self.chunk_leaf = chunk_leaf if chunk_leaf is not None else default_chunk_leaf(B, model.L)
        self.table = table
        if backend == "enum" and table is None:
            raise InputError("the enum backend needs a class table")
        self._freq = None

    @property
    def freq(self):
        if self._freq is None:
            costs = {d: self.model.cost(d) for d in self.model.sigma}
            self._freq = FrequencyTable(costs, self.model.L)
        return self._freq

    # -- encoding --------------------------------------------------------------

    def encode(self, S):
        f = f_of(S, self.model)
        if self.backend == "enum":
            g, parts = decompose_step(S, self.B)
            r = self.table.rank(S, f, g, parts)
            width = (self.table.count(f, g) - 1).bit_length()
            return EncodedMacroTree(f, g, "enum", Bits(r, width), Bits())
        skel = BitWriter()
        chunks = []
        g = self._encode_node(S, skel, chunks, top=True)
        return EncodedMacroTree(f, g, "arith", concat(chunks), skel.bits())

    def _split(self, S):
        if S.tree.n <= self.chunk_leaf:
            return LEAF, []
        return decompose_step(S, self.B)

    def _encode_node(self, S, skel, chunks, top=False):
        n = S.tree.n
        g, parts = self._split(S)
        if not top and n > self.chunk_leaf:
            skel.write(0 if g == LEAF else 1)
        if g == LEAF:
            code = self.encode_chunk(S)
            skel.write_gamma(len(code) + 1)
            chunks.append(code)
            return g
        if not top:
            skel.extend(_g_bits(g))
        parent, children = tl_from_bp(g)
        parts = [p for p in parts if p is not None]
        k = len(parts)
        for t, P in enumerate(parts, 1):
            m = P.tree.n
            if t < k:
                skel.write_gamma(m)
            v = (m - 1).bit_length()
            skel.write_int(P.tree.degree(1), v)
            if S.boundary and not children[t]:
                skel.write(1 if P.boundary else 0)
            if P.boundary:
                skel.write_int(P.tree.depth_of[P.boundary], v)
                skel.write_int(P.boundary - 1, v)
            skel.write_int(_height(P.tree), v)
        for P in parts:
            self._encode_node(P, skel, chunks)
        return g

    def _positions(self, n, b):
        return [q for q in range(2, n) if q != b]

    def encode_chunk(self, S):
        pos = self._positions(S.tree.n, S.boundary)
        if not pos:
            return Bits()
        enc = ArithmeticEncoder(self.freq)
        degs = S.tree.degrees()
        for q in pos:
            d = degs[q - 1]
            if d not in self.freq.index:
                raise CorruptPayload("degree {} outside the model".format(d))
            enc.encode(d)
        return enc.finish()

    def decode_chunk(self, bits, start, end, n, root_degree, b):
        seq = [0] * n
        seq[0] = root_degree
        pos = self._positions(n, b)
        if pos:
            dec = ArithmeticDecoder(self.freq, bits, start, end)
            for q in pos:
                seq[q - 1] = dec.decode()
        elif end != start:
            raise CorruptPayload("fixed chunk carries a code")
        if not _valid_degrees(seq):
            raise CorruptPayload("chunk does not decode to a tree")
        return OrderedTree(seq)

    # -- skeleton parsing ------------------------------------------------------

    def _summary_of_f(self, f):
        return Summary(f.size, f.root_degree, f.boundary_distance, f.boundary_preorder, None)

    def parse(self, e, key=(0,)):
        """Skeleton of an arith record as nested _Split/_Chunk objects."""
        rd = BitReader(e.skeleton)
        pos = [0]
        try:
            root = self._parse_node(rd, pos, e.payload, self._summary_of_f(e.f), e.g, key)
        except (TreeError, ValueError, IndexError) as exc:
            if isinstance(exc, CorruptPayload):
                raise
            raise CorruptPayload("bad skeleton: {}".format(exc))
        if rd.pos != e.skeleton.nbits or pos[0] != e.payload.nbits:
            raise CorruptPayload("skeleton or payload length mismatch")
        return root

    def _parse_node(self, rd, pos, payload, summ, g, key):
        n = summ.size
        if g is None:
            if n > self.chunk_leaf and rd.read():
                g = _read_g(rd)
            else:
                g = LEAF
        if g == LEAF:
            ln = rd.read_gamma() - 1
            start = pos[0]
            pos[0] += ln
            if pos[0] > payload.nbits:
                raise CorruptPayload("chunk runs past the payload")
            return _Chunk(self, summ, payload, start, pos[0], key)
        parent, children = tl_from_bp(g)
        k = len(parent) - 1
        if k < 2 or k > self.B:
            raise CorruptPayload("split with {} parts".format(k))
        sums = []
        used = 1
        for t in range(1, k + 1):
            m = rd.read_gamma() if t < k else n - used + 1
            if m < 2:
                raise CorruptPayload("part size {}".format(m))
            used += m - 1
            v = (m - 1).bit_length()
            rdeg = rd.read_int(v)
            has_b = bool(children[t]) or (summ.dist > 0 and rd.read() == 1)
            dist = bp = 0
            if has_b:
                dist = rd.read_int(v)
                bp = rd.read_int(v)
                if not 0 < dist <= bp < m:
                    raise CorruptPayload("bad boundary summary")
            sums.append(Summary(m, rdeg, dist, bp, rd.read_int(v)))
        parts = [self._parse_node(rd, pos, payload, s, None, key + (t,))
                 for t, s in enumerate(sums, 1)]
        return _Split(summ, g, parts, key)

    # -- decoding and navigation -----------------------------------------------

    def decode(self, e):
        if e.backend != self.backend:
            raise CorruptPayload("record backend {} != codec backend {}".format(e.backend, self.backend))
        if e.backend == "enum":
            t = self.table
            width = (t.count(e.f, e.g) - 1).bit_length()
            if e.payload.nbits != width:
                raise CorruptPayload("rank needs {} bits, got {}".format(width, e.payload.nbits))
            return t.unrank(e.f, e.g, e.payload.value)
        return self._assemble(self.parse(e))

    def _assemble(self, node):
        if isinstance(node, _Chunk):
            s = node.summary
            return MarkedTree(node.tree(), s.bp + 1 if s.dist else None)
        try:
            return join(node.g, [self._assemble(p) for p in node.parts] + [None] * (self.B - len(node.parts)))
        except ShapeMismatch as exc:
            raise CorruptPayload(str(exc))

    def navigator(self, e, piece_key=None):
        """Object answering local queries (preorder ids 1..|S|) on a record."""
        key = (piece_key,)
        if e.backend == "enum":
            return self._enum_nav(e.f, e.g, e.payload.value, key, piece_key)
        return self._arith_nav(self.parse(e, key), piece_key)

    def _arith_nav(self, node, piece_key):
        if isinstance(node, _Chunk):
            return LeafNav(node.tree, node.key, piece_key)
        return SplitNav(node.summary.size, node.g, [p.summary for p in node.parts],
                        lambda t: self._arith_nav(node.parts[t - 1], piece_key), node.key, piece_key)

    def _enum_nav(self, f, g, r, key, piece_key):
        table = self.table
        if g == LEAF:
            cache = []

            def get():
                if not cache:
                    cache.append(table.unrank(f, g, r).tree)
                return cache[0]
            return LeafNav(get, key, piece_key)
        subs = [x for x in table.split_rank(f, g, r) if x[0] != EMPTY]
        summaries = [Summary(a.size, a.root_degree, a.boundary_distance, a.boundary_preorder, None)
                     for a, h, s in subs]
        return SplitNav(f.size, g, summaries,
                        lambda t: self._enum_nav(subs[t - 1][0], subs[t - 1][1], subs[t - 1][2],
                                                 key + (t,), piece_key), key, piece_key)


def navigate(codec, e, q):
    """Answer a query on local preorder ids of the record ``e``."""
    return dispatch(codec.navigator(e), q)


def encode_macro(S, model, B, backend="arith", **kw):
    return MacroCodec(model, B, backend, **kw).encode(S)


def decode_macro(e, model, B, **kw):
    return MacroCodec(model, B, e.backend, **kw).decode(e)
