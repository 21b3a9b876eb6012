"""Acceptance criteria 1-8 at their stated tolerances.

Each criterion records one PASS/FAIL line; pytest prints them in the
terminal summary and ``python3 tests/test_acceptance.py`` prints them alone.
The shared corpus is built once per session.
"""

import functools
import math
import os
import random
import statistics
import sys
import tempfile
import time

import pytest

from stdt import container, verify
from stdt.cli import bench
from stdt.entropy import DegreeDistribution, EntropyModel
from stdt.succinct import build
from stdt.tree import random_tree

PROFILES = ("path", "star", "full-binary", "uniform", "skewed:0.5", "skewed:0.9")
SMALL_REPEAT = ("uniform", "skewed:0.5", "skewed:0.9")
LARGE_N = (10 ** 4, 10 ** 5)
RECOMBINE_TOTAL = 10 ** 4
COVER_LS = (2, 3, 8, 64)

RESULTS = {}


def record(num, ok, detail):
    RESULTS[num] = (bool(ok), detail)
    line = summary_line(num)
    print(line)
    return ok


def summary_line(num):
    ok, detail = RESULTS[num]
    return "criterion {}: {} - {}".format(num, "PASS" if ok else "FAIL", detail)


def summary_lines():
    return [summary_line(k) for k in sorted(RESULTS)]


def _n_for(profile, n):
    return n - 1 if profile == "full-binary" and n % 2 == 0 else n


class Case(object):
    def __init__(self, profile, n, seed, params):
        self.profile, self.n, self.seed, self.params = profile, n, seed, params
        self.tree = random_tree(n, profile, seed)
        self.index = build(self.tree, **params)

    def __repr__(self):
        return "{}(n={}, seed={}, {})".format(self.profile, self.n, self.seed, self.params)


@functools.lru_cache(maxsize=None)
def corpus():
    """Small trees exhaustively over n = 1..64, then 10^3, 10^4 and 10^5 nodes."""
    cases = []
    for n in range(1, 65):
        for prof in PROFILES:
            if prof == "full-binary" and n % 2 == 0:
                continue
            cases.append(Case(prof, n, 0, {}))
        for prof in SMALL_REPEAT:
            # small L and chunks force deep aB-trees and many macro trees
            cases.append(Case(prof, n, 1, dict(L=4, chunk_leaf=2)))
    for prof in PROFILES:
        n = _n_for(prof, 1000)
        cases.append(Case(prof, n, 0, {}))
        cases.append(Case(prof, n, 1, dict(L=8)))
    for n in LARGE_N:
        for prof in PROFILES:
            cases.append(Case(prof, _n_for(prof, n), 0, {}))
    return cases


def large_cases(n=None):
    return [c for c in corpus() if c.n > 2000 and (n is None or c.n >= n)]


# -- 1 ------------------------------------------------------------------------------

def criterion_1():
    t0 = time.time()
    cases = corpus()
    queries = 0
    bad = []
    for c in cases:
        rng = random.Random("c1:{!r}".format(c))
        r = verify.oracle_sweep(c.index, c.tree, rng, samples=10 ** 4, oracle_samples=500)
        queries += int(r.detail.split()[0])
        if not r.ok:
            bad.append((c, r.witness))
    detail = "{} trees, {} queries, {} trees with mismatches, {:.0f}s".format(
        len(cases), queries, len(bad), time.time() - t0)
    if bad:
        detail += "; first: {!r}".format(bad[0])
    return record(1, not bad and len(cases) >= 500, detail)


# -- 2 ------------------------------------------------------------------------------

def criterion_2():
    checked = 0
    bad = []
    worst = 0.0
    for c in corpus():
        for r in verify.cover_suite(c.tree, COVER_LS):
            checked += 1
            pieces, bound = [int(x.split("=")[1]) for x in r.detail.split()[1:]]
            worst = max(worst, pieces / bound)
            if not r.ok:
                bad.append((c, r.detail, r.witness))
    detail = "{} decompositions, L in {}, max pieces/bound {:.3f}, {} failures".format(
        checked, COVER_LS, worst, len(bad))
    if bad:
        detail += "; first: {!r}".format(bad[0])
    return record(2, not bad, detail)


# -- 3 ------------------------------------------------------------------------------

def criterion_3():
    steps = 0
    delta = delta_all = 0.0
    p1 = p3 = 0
    tuples = failures = 0
    cases = [c for c in corpus() if c.n > 1]
    big = [c for c in cases if c.n >= 1000]
    per_case = -(-RECOMBINE_TOTAL // len(big))
    B = None
    for c in cases:
        B = c.index.params.B
        model = EntropyModel(c.index.dist, c.index.params.L)
        stats = verify.split_suite(verify.macro_pieces(c.tree, c.index.params.L), model, B,
                                   harvest=c in big)
        steps += stats.steps
        p1 += len(stats.p1_bad)
        p3 += len(stats.p3_bad)
        delta = max(delta, stats.delta)
        delta_all = max(delta_all, stats.delta_all)
        if c in big and stats.harvest:
            r = verify.recombine_suite(stats.harvest, B, random.Random("c3:{!r}".format(c)), per_case)
            tuples += int(r.detail.split()[0])
            failures += int(r.detail.split()[3])
    ok = p1 == 0 and p3 == 0 and failures == 0 and tuples >= RECOMBINE_TOTAL and delta <= B / 2
    detail = ("{} split steps: P1 {} failures, P3 {} failures; P2 {} recombined tuples, {} failures; "
              "P4 delta {:.3f} <= B/2 = {} on pieces of >= {} nodes (all sizes {:.3f})").format(
        steps, p1, p3, tuples, failures, delta, B / 2, verify.P4_MIN_SIZE, delta_all)
    return record(3, ok, detail)


# -- 4 ------------------------------------------------------------------------------

def tiny_dists():
    dists = verify.tiny_models(random.Random("c4"), 6, n_range=(6, 12))
    # fixed shapes: Sigma = {0, 2}, {0, 1}, {0, 1, 2}
    dists += [DegreeDistribution(9, {0: 5, 2: 4}), DegreeDistribution(5, {0: 1, 1: 4}),
              DegreeDistribution(8, {0: 3, 1: 3, 2: 2})]
    return dists


def criterion_4():
    dists = tiny_dists()
    l2 = verify.class_count_suite(dists, Bs=(2, 3), max_size=10)
    l3 = verify.counting_bound_suite(dists, m_max=8)
    detail = "{} tiny models; {}; counting bounds: {}".format(len(dists), l2.detail, l3.detail)
    if not l2.ok:
        detail += "; witness {!r}".format(l2.witness)
    if not l3.ok:
        detail += "; witness {!r}".format(l3.witness)
    return record(4, l2.ok and l3.ok, detail)


# -- 5 ------------------------------------------------------------------------------

def criterion_5():
    macros = 0
    bad = []
    slack = []
    for prof in ("full-binary", "skewed:0.5", "skewed:0.9", "path"):
        for n in (9, 31, 127, 511):
            for B in (2, 3, 24):
                t = random_tree(n, prof, 5)
                st = build(t, L=4, B=B, backend="enum")
                r = verify.enum_space_suite(st)
                rt = verify.roundtrip_suite(st, t)
                macros += len(st.macros)
                table = st.codec.table
                for e in st.macros:
                    N = table.count(e.f, e.g)
                    slack.append((math.ceil(math.log2(N)) if N > 1 else 0) + 2 - len(e.payload))
                if not (r.ok and rt.ok):
                    bad.append((prof, n, B, r.witness or rt.witness))
    detail = "{} macro trees, payload <= ceil(log2 N)+2 everywhere, min slack {} bits".format(
        macros, min(slack))
    if bad:
        detail = "{} failing builds; first {!r}".format(len(bad), bad[0])
    return record(5, not bad, detail)


# -- 6 ------------------------------------------------------------------------------

def criterion_6():
    parts = []
    ok = True
    for c in large_cases(10 ** 5):
        rep = c.index.space_report()
        n = rep["n"]
        slack = (rep["payload_bits"] - rep["sum_H_star"]) / n
        a = rep["payload_bits"] <= rep["sum_H_star"] + 0.1 * n
        cc = rep["c_aux"] <= 64
        line = "{}: payload-H* {:+.3f}/node{} c_aux {:.1f}{} bits/node {:.3f} H {:.3f}".format(
            c.profile, slack, "" if a else " (a FAIL)", rep["c_aux"], "" if cc else " (c FAIL)",
            rep["bits_per_node"], rep["H"])
        ok = ok and a and cc
        if c.profile == "skewed:0.9":
            b = rep["bits_per_node"] < 1.5 and rep["total_bits"] < rep["bp_baseline"]
            ok = ok and b
            line += "" if b else " (b FAIL)"
        parts.append(line)
    return record(6, ok, "; ".join(parts))


# -- 7 ------------------------------------------------------------------------------

def criterion_7(ops=5000):
    ok = True
    worst_v = worst_p = 0
    medians = {}
    budgets = set()
    for c in large_cases():
        records, summary = bench(c.index, {op: 1 for op in verify.QUERY_KINDS}, ops,
                                 "c7:{!r}".format(c))
        ok = ok and summary["within_budget"] and not any(r["identity_failures"] for r in records)
        worst_v = max(worst_v, summary["max_visits"])
        worst_p = max(worst_p, summary["max_pieces"])
        budgets.add(summary["visit_budget"])
        for r in records:
            medians.setdefault(r["op"], []).append(r["median_us"])
    med = ", ".join("{} {:.0f}us".format(op, statistics.median(v)) for op, v in sorted(medians.items()))
    detail = "{} indexes x {} queries: max pieces {} (<= 3), max aB visits {} (budget {}); median {}".format(
        len(large_cases()), ops, worst_p, worst_v, "/".join(map(str, sorted(budgets))), med)
    return record(7, ok, detail)


# -- 8 ------------------------------------------------------------------------------

def criterion_8():
    cases = [c for c in corpus() if c.n in (1, 2, 63) or c.n >= 1000]
    cases += [Case("skewed:0.5", 301, 2, dict(L=4, backend="enum"))]
    bad = []
    with tempfile.TemporaryDirectory() as d:
        for i, c in enumerate(cases):
            data = container.dumps(c.index)
            again = container.dumps(build(c.tree, **c.params))
            path = os.path.join(d, "{}.stdt".format(i))
            container.write(c.index, path)
            back = container.read(path)
            rng = random.Random("c8:{}".format(i))
            sweep = verify.oracle_sweep(back, c.tree, rng, samples=2000, oracle_samples=200)
            same = [verify.answer_or_none(back.query, q) == verify.answer_or_none(c.index.query, q)
                    for q in verify.queries_for(c.tree.n, rng.randint(1, c.tree.n), rng)]
            if data != again or container.dumps(back) != data or not sweep.ok or not all(same):
                bad.append(c)
    detail = "{} indexes: byte-identical rebuilds, disk round-trip, query equivalence; {} failures".format(
        len(cases), len(bad))
    if bad:
        detail += "; first {!r}".format(bad[0])
    return record(8, not bad, detail)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=["criterion_{}".format(i) for i in range(1, 9)])
def test_criterion(criterion):
    ok = criterion()
    num = CRITERIA.index(criterion) + 1
    assert ok, summary_line(num)


if __name__ == "__main__":
    failed = 0
    for fn in CRITERIA:
        failed += not fn()
    sys.exit(1 if failed else 0)
