"""Binary image of a SuccinctTree.  All integers little-endian.

    magic "STDT", version u8 = 1, flags u8 (bit 0: 1 = arith, 0 = enum)
    n, L, B, t, chunk_leaf                      u64 each
    degree table   count u32, then (degree u32, n_i u64) by increasing degree
    component tree k u32, BP bits (2k + 2, packed MSB first), k weights u32
    root depths    k u32
    boundary bits  ones u32, then the 1-positions u32
    macro map      runs u32, then runs x u32
    per macro      h* u64, size .. boundary_preorder 7 x u32,
                   g: length u8 + packed bits, payload: bit length u32 + bytes,
                   skeleton: bit length u32 + bytes, height u32

Macro trees are numbered in component-tree preorder, so the BP string alone
fixes the parent links.
"""

import struct

from .ab_tree import FVector, tl_from_bp
from .bits import Bits
from .bitvector import SparseBitvector
from .codec import EncodedMacroTree, _g_bits
from .entropy import DegreeDistribution
from .errors import FormatError, TreeError
from .succinct import Params, SuccinctTree

MAGIC = b"STDT"
VERSION = 1


class _Out(object):
    def __init__(self):
        self.parts = []

    def u8(self, x):
        self.parts.append(struct.pack("<B", x))

    def u32(self, x):
        self.parts.append(struct.pack("<I", x))

    def u64(self, x):
        self.parts.append(struct.pack("<Q", x))

    def bits(self, b):
        self.parts.append(b.to_bytes())

    def data(self):
        return b"".join(self.parts)


class _In(object):
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def take(self, k):
        if self.pos + k > len(self.data):
            raise FormatError("truncated container")
        out = self.data[self.pos:self.pos + k]
        self.pos += k
        return out

    def u8(self):
        return self.take(1)[0]

    def u32(self):
        return struct.unpack("<I", self.take(4))[0]

    def u64(self):
        return struct.unpack("<Q", self.take(8))[0]

    def bits(self, nbits):
        try:
            return Bits.from_bytes(self.take((nbits + 7) // 8), nbits)
        except TreeError as exc:
            raise FormatError(str(exc))


def _tl_bp(children):
    out = []

    def walk(v):
        out.append("(")
        for c in children[v]:
            walk(c)
        out.append(")")

    walk(0)
    return "".join(out)


def dumps(st):
    o = _Out()
    o.parts.append(MAGIC)
    o.u8(VERSION)
    o.u8(1 if st.params.backend == "arith" else 0)
    p = st.params
    for x in (st.n, p.L, p.B, p.t, p.chunk_leaf):
        o.u64(x)
    counts = sorted(st.dist.counts.items())
    o.u32(len(counts))
    for d, c in counts:
        o.u32(d)
        o.u64(c)
    k = len(st.macros)
    o.u32(k)
    o.bits(_g_bits(_tl_bp(st.tl_children)))
    for t in range(1, k + 1):
        o.u32(st.tl_weight[t])
    depths = st.root_depths if k else []
    for x in depths:
        o.u32(x)
    pos = st.boundary.positions()
    o.u32(len(pos))
    for x in pos:
        o.u32(x)
    o.u32(len(st.macro_map))
    for x in st.macro_map:
        o.u32(x)
    for e, h in zip(st.macros, st.heights):
        o.u64(e.f.h_star)
        for x in e.f[1:]:
            o.u32(x)
        o.u8(len(e.g))
        if e.g:
            o.bits(_g_bits(e.g))
        o.u32(len(e.payload))
        o.bits(e.payload)
        o.u32(len(e.skeleton))
        o.bits(e.skeleton)
        o.u32(h)
    return o.data()


def loads(data, table=None):
    i = _In(data)
    if i.take(4) != MAGIC:
        raise FormatError("not an STDT container")
    if i.u8() != VERSION:
        raise FormatError("unsupported container version")
    flags = i.u8()
    if flags & ~1:
        raise FormatError("unknown flags {:#x}".format(flags))
    backend = "arith" if flags & 1 else "enum"
    n, L, B, t, chunk_leaf = (i.u64() for _ in range(5))
    counts = {}
    for _ in range(i.u32()):
        d = i.u32()
        counts[d] = i.u64()
    try:
        dist = DegreeDistribution(n, counts)
    except TreeError as exc:
        raise FormatError("bad degree table: {}".format(exc))
    k = i.u32()
    bp = i.bits(2 * k + 2)
    g = str(bp).replace("1", "(").replace("0", ")")
    try:
        tl_parent, tl_children = tl_from_bp(g)
    except TreeError as exc:
        raise FormatError("bad component tree: {}".format(exc))
    if len(tl_parent) != k + 1:
        raise FormatError("component tree size mismatch")
    tl_weight = [0] + [i.u32() for _ in range(k)]
    depths = [i.u32() for _ in range(k)]
    positions = [i.u32() for _ in range(i.u32())]
    runs = [i.u32() for _ in range(i.u32())]
    macros, heights = [], []
    for _ in range(k):
        h_star = i.u64()
        f = FVector(h_star, *[i.u32() for _ in range(7)])
        gl = i.u8()
        gbits = i.bits(gl)
        mg = str(gbits).replace("1", "(").replace("0", ")") if gl else ""
        payload = i.bits(i.u32())
        skeleton = i.bits(i.u32())
        heights.append(i.u32())
        macros.append(EncodedMacroTree(f, mg, backend, payload, skeleton))
    if i.pos != len(data):
        raise FormatError("{} trailing bytes".format(len(data) - i.pos))
    params = Params(L, B, t, backend, chunk_leaf)
    try:
        st = SuccinctTree(n, params, dist, macros, tl_parent, tl_children, tl_weight,
                          heights, SparseBitvector(n, positions), runs, table)
    except TreeError as exc:
        raise FormatError("inconsistent container: {}".format(exc))
    if k and st.root_depths != depths:
        raise FormatError("root depths disagree with the component tree")
    return st


def write(st, path):
    with open(path, "wb") as fh:
        fh.write(dumps(st))


def read(path, table=None):
    with open(path, "rb") as fh:
        return loads(fh.read(), table)
