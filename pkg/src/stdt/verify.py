"""Property suites shared by the CLI ``verify`` command and the test-suite.

Each suite returns a ``Result`` (name, ok, detail, witness) so callers can
print one line per check and stop on nothing.
"""

import math
import random
from collections import namedtuple

from .ab_tree import (LEAF, ClassTable, decompose_step, f_of, f_prime, join, piece_to_marked)
from .decomposition import check_cover, component_tree, decompose, max_pieces
from .entropy import (DegreeDistribution, EntropyModel, sigma_string_h_stars,
                      sigma_tree_h_stars, within_power_bound)
from .errors import NoSuchNode, TreeError
from .tree import OPS, Query, oracle_query

Result = namedtuple("Result", "name ok detail witness")

# Parts have at least two nodes, so a 3-node piece has delta >= 2B/3 > B/2
# under any split rule; the part-size bound is asserted from 4 nodes up.
P4_MIN_SIZE = 4

QUERY_KINDS = tuple(OPS)


def _same(a, b):
    return a.tree == b.tree and a.boundary == b.boundary


# -- queries ---------------------------------------------------------------------

def queries_for(n, x, rng):
    """One query of every kind anchored at node x; second arguments random."""
    out = []
    for op in QUERY_KINDS:
        if op == "lca":
            args = (x, rng.randint(1, n))
        elif op == "level_ancestor":
            args = (x, rng.randint(0, 6) if rng.random() < 0.7 else rng.randint(0, n))
        elif op == "child_select":
            args = (x, rng.randint(1, 4))
        elif op == "preorder_select":
            args = (rng.randint(1, n),)
        else:
            args = (x,)
        out.append(Query(op, args))
    return out


def answer_or_none(fn, q):
    try:
        return fn(q)
    except NoSuchNode:
        return None


def oracle_sweep(index, tree, rng, all_nodes=None, samples=10000, oracle_samples=None):
    """Compare index.query with the naive oracle.

    Every node (one query of each kind) when ``all_nodes``; otherwise
    ``samples`` random (node, kind) pairs, visited in node order so decoded
    chunks are reused.  With ``oracle_samples`` set, a sampled sweep checks
    every pair against the explicit tree's array-backed answers and only
    that many pairs against the slow pointer-chasing oracle as well.
    """
    n = tree.n
    if all_nodes is None:
        all_nodes = n <= 2000
    if all_nodes:
        qs = [q for x in range(1, n + 1) for q in queries_for(n, x, rng)]
    else:
        xs = sorted(rng.randint(1, n) for _ in range(samples))
        qs = [rng.choice(queries_for(n, x, rng)) for x in xs]
    slow = set(range(len(qs)))
    if oracle_samples is not None and not all_nodes:
        slow = set(rng.sample(range(len(qs)), min(oracle_samples, len(qs))))
    bad = []
    for i, q in enumerate(qs):
        got = answer_or_none(index.query, q)
        if i in slow:
            want = answer_or_none(lambda q: oracle_query(tree, q), q)
        else:
            want = answer_or_none(tree.answer, q)
        if got != want:
            bad.append((str(q), got, want))
    return Result("oracle", not bad, "{} queries, {} mismatches".format(len(qs), len(bad)),
                  bad[:3])


# -- cover -----------------------------------------------------------------------

def cover_suite(tree, Ls):
    """check_cover (which includes the piece-count bound) for every L in Ls."""
    out = []
    for L in Ls:
        if tree.n < 2:
            continue
        d = decompose(tree, L)
        rep = check_cover(d)
        bound = max_pieces(tree.n, L)
        ok = rep.ok
        detail = "L={} pieces={} bound={}".format(L, len(d.pieces), bound)
        out.append(Result("cover", ok, detail, rep.failures()[:2]))
    return out


# -- split properties ------------------------------------------------------------------

class SplitStats(object):
    def __init__(self):
        self.steps = 0
        self.p1_bad = []
        self.p3_bad = []
        self.delta = 0.0       # over pieces with >= P4_MIN_SIZE nodes
        self.delta_all = 0.0
        self.leaves = 0
        self.harvest = []      # (g, parts, f list)

    def results(self, B):
        return [
            Result("P1", not self.p1_bad, "{} split steps".format(self.steps), self.p1_bad[:2]),
            Result("P3", not self.p3_bad, "{} split steps".format(self.steps), self.p3_bad[:2]),
            Result("P4", self.delta <= B / 2.0,
                   "delta={:.3f} (all sizes {:.3f}) bound B/2={}".format(
                       self.delta, self.delta_all, B / 2.0), []),
        ]


def split_suite(pieces, model, B, stats=None, min_size=2, harvest=True):
    """Recursively split every piece; check join and f' at each step."""
    stats = stats or SplitStats()
    todo = list(pieces)
    while todo:
        S = todo.pop()
        if S.tree.n < min_size:
            continue
        g, parts = decompose_step(S, B)
        if g == LEAF:
            stats.leaves += 1
            continue
        stats.steps += 1
        if not _same(join(g, parts), S):
            stats.p1_bad.append((S.tree.to_bp(), S.boundary))
        fs = [f_of(p, model) for p in parts]
        if f_prime(g, fs, model) != f_of(S, model):
            stats.p3_bad.append((S.tree.to_bp(), S.boundary))
        big = max(p.tree.n for p in parts if p is not None)
        delta = big * B / S.tree.n
        stats.delta_all = max(stats.delta_all, delta)
        if S.tree.n >= P4_MIN_SIZE:
            stats.delta = max(stats.delta, delta)
        if harvest:
            stats.harvest.append((g, parts, fs))
        todo.extend(p for p in parts if p is not None)
    return stats


def recombine_suite(harvest, B, rng, count):
    """(P2): swap parts for others with the same summary, split the join again."""
    pool = {}
    for g, parts, fs in harvest:
        for p, f in zip(parts, fs):
            if p is not None:
                pool.setdefault(f, []).append(p)
    usable = [h for h in harvest if any(p is not None and len(pool[f]) > 1
                                        for p, f in zip(h[1], h[2]))] or harvest
    bad = []
    done = 0
    while done < count and usable:
        g, parts, fs = rng.choice(usable)
        new = [rng.choice(pool[f]) if p is not None else None for p, f in zip(parts, fs)]
        S = join(g, new)
        g2, p2 = decompose_step(S, B)
        ok = g2 == g and all((a is None and b is None) or (a is not None and b is not None and _same(a, b))
                             for a, b in zip(new, p2))
        if not ok:
            bad.append((g, S.tree.to_bp()))
        done += 1
    return Result("P2", not bad and done >= count,
                  "{} recombined tuples, {} failures".format(done, len(bad)), bad[:2])


# -- class counts and entropy bounds ---------------------------------------------------

def tiny_models(rng, count, n_range=(6, 14)):
    """Degree distributions with |Sigma| <= 3 taken from random small trees."""
    from .tree import random_tree
    out = []
    seen = set()
    tries = 0
    while len(out) < count and tries < 200 * count:
        tries += 1
        n = rng.randint(*n_range)
        prof = rng.choice(["uniform", "skewed:0.5", "skewed:0.3", "full-binary"])
        if prof == "full-binary" and n % 2 == 0:
            n += 1
        t = random_tree(n, prof, rng.randint(0, 10 ** 6))
        dist = DegreeDistribution.of(t)
        key = tuple(sorted(dist.counts.items()))
        if len(dist.counts) <= 3 and key not in seen:
            seen.add(key)
            out.append(dist)
    return out


def class_count_suite(dists, Bs=(2, 3), max_size=10, L=4):
    total = 0
    bad = []
    for dist in dists:
        model = EntropyModel(dist, L)
        for B in Bs:
            table = ClassTable(model, B, max_size)
            total += len(table.classes)
            for f, g, rec, enum in table.check_counts():
                bad.append((dict(dist.counts), B, g, rec, enum))
    return Result("class_count", not bad, "recurrence equals enumeration for {} classes".format(total)
                  if not bad else "{} of {} classes disagree".format(len(bad), total), bad[:3])


def counting_bound_suite(dists, m_max=8, L=4):
    """Sigma-tree counts <= 2^(a+1) and Sigma-string counts <= 2^a, per value a."""
    bad = []
    checked = 0
    for dist in dists:
        model = EntropyModel(dist, L)
        for m in range(1, m_max + 1):
            for a, c in sigma_tree_h_stars(m, model).items():
                checked += 1
                if not within_power_bound(c, a, L, 1):
                    bad.append(("tree", dict(dist.counts), m, a, c))
            for a, c in sigma_string_h_stars(m, model, exhaustive=len(model.sigma) ** m <= 10 ** 6).items():
                checked += 1
                if not within_power_bound(c, a, L, 0):
                    bad.append(("string", dict(dist.counts), m, a, c))
    return Result("counting_bound", not bad, "{} (m, a) counts checked".format(checked), bad[:3])


def enum_space_suite(index):
    """Per-macro payload <= ceil(log2 N(f, g)) + 2 for an enum-backed index."""
    table = index.codec.table
    bad = []
    for t, e in enumerate(index.macros, 1):
        N = table.count(e.f, e.g)
        limit = (math.ceil(math.log2(N)) if N > 1 else 0) + 2
        if len(e.payload) > limit:
            bad.append((t, len(e.payload), N))
    return Result("enum_space", not bad, "{} macro trees".format(len(index.macros)), bad[:3])


def macro_pieces(tree, L):
    """Marked pieces in the order build() stores them (component-tree preorder)."""
    d = decompose(tree, L)
    order = component_tree(d).preorder()[1:]
    return [piece_to_marked(tree, d.pieces[v - 1]) for v in order]


def roundtrip_suite(index, tree):
    """Every stored macro decodes to the piece it came from."""
    bad = []
    if tree.n > 1:
        for t, S in enumerate(macro_pieces(tree, index.params.L), 1):
            try:
                got = index.decode_macro(t)
            except TreeError as exc:
                bad.append((t, "{}: {}".format(type(exc).__name__, exc)))
                continue
            if not _same(got, S):
                bad.append((t, got.tree.to_bp(), S.tree.to_bp()))
    return Result("roundtrip", not bad, "{} macro trees decoded".format(len(index.macros)), bad[:3])


def fault_suite(index, tree, rng, trials=20):
    """Flip one payload bit per trial and decode.

    A flip is caught when decoding raises or the decoded macro tree differs
    from the original piece.  Arithmetic codes carry slack in their last
    interval, so a flip may also decode to the identical tree; such flips
    lose no information and are counted as harmless.
    """
    from .codec import EncodedMacroTree
    targets = [t for t, e in enumerate(index.macros, 1) if len(e.payload)]
    if not targets:
        return Result("fault", True, "no payload bits to flip", [])
    pieces = macro_pieces(tree, index.params.L)
    raised = changed = harmless = 0
    for _ in range(trials):
        t = rng.choice(targets)
        e = index.macros[t - 1]
        i = rng.randrange(len(e.payload))
        bad = EncodedMacroTree(e.f, e.g, e.backend, e.payload.flip(i), e.skeleton)
        try:
            S = index.codec.decode(bad)
        except TreeError:
            raised += 1
            continue
        if _same(S, pieces[t - 1]):
            harmless += 1
        else:
            changed += 1
    detail = "{} flips: {} rejected by decode, {} caught by comparison, {} harmless".format(
        trials, raised, changed, harmless)
    return Result("fault", raised + changed > 0 or harmless == trials, detail, [])


def default_rng(seed):
    return random.Random("verify:{}".format(seed))
