"""Command line: build, query, stats, verify, bench, selfcheck.

Reports go to stdout as one JSON object per line; diagnostics go to stderr.
Exit status: 0 ok, 1 a checked property failed, 2 bad input, 3 internal error.
"""

import argparse
import heapq
import json
import os
import statistics
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor

from . import container, verify
from .entropy import EntropyModel
from .errors import InputError, NoSuchNode, TooLarge, TreeError
from .succinct import build as build_index
from .tree import OPS, Query, load_tree, random_tree

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def emit(record, out=None):
    out = out or sys.stdout
    out.write(json.dumps(record, sort_keys=False) + "\n")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _at_least_two(text):
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("must be >= 2")
    return v


def _add_params(p):
    p.add_argument("--L", type=_at_least_two, help="macro tree size parameter")
    p.add_argument("--B", type=_at_least_two, help="aB-tree branching factor")
    p.add_argument("--t", type=_positive, default=1, help="L = floor(log2 n)^(t+2) when --L is unset")
    p.add_argument("--backend", choices=("arith", "enum"), default="arith")
    p.add_argument("--chunk-leaf", type=_positive, help="arith: largest piece coded as one chunk")


def _build(tree, args):
    return build_index(tree, L=args.L, B=args.B, backend=args.backend, t=args.t,
                       chunk_leaf=args.chunk_leaf)


# -- baselines -----------------------------------------------------------------------

def huffman_bits(counts):
    """Total length of a Huffman code over node degrees (0 for one symbol)."""
    if len(counts) < 2:
        return 0
    heap = list(counts.values())
    heapq.heapify(heap)
    total = 0
    while len(heap) > 1:
        a = heapq.heappop(heap)
        b = heapq.heappop(heap)
        total += a + b
        heapq.heappush(heap, a + b)
    return total


def report_record(st):
    rep = st.space_report()
    rep["baselines"] = {
        "bp_2n": 2 * st.n,
        "nH": rep["nH"],
        "huffman_degrees": huffman_bits(st.dist.counts),
    }
    return rep


# -- commands ------------------------------------------------------------------------

def cmd_build(args):
    tree = load_tree(args.input)
    st = _build(tree, args)
    container.write(st, args.output)
    rep = report_record(st)
    rep["output"] = args.output
    emit(rep)
    return EXIT_OK


def cmd_query(args):
    st = container.read(args.file)
    q = Query(args.op, args.args)
    for v in q.node_args():
        if not 1 <= v <= st.n:
            raise InputError("node {} not in 1..{}".format(v, st.n))
    try:
        ans = st.query(q)
        emit({"op": q.op, "args": list(q.args), "answer": ans})
    except NoSuchNode as exc:
        emit({"op": q.op, "args": list(q.args), "answer": None, "error": str(exc)})
    return EXIT_OK


def cmd_stats(args):
    st = container.read(args.file)
    rep = report_record(st)
    rep["degrees"] = {str(d): c for d, c in sorted(st.dist.counts.items())}
    emit(rep)
    return EXIT_OK


def _result_record(r):
    rec = {"check": r.name, "ok": bool(r.ok), "detail": r.detail}
    if not r.ok and r.witness:
        rec["witness"] = [repr(w) for w in r.witness]
    return rec


def run_verify(tree, args, rng, recombine=2000, tiny_models=3, out=None):
    """Every property suite on one tree; returns the list of Results."""
    results = []

    def add(r):
        results.append(r)
        emit(_result_record(r), out)

    for r in verify.cover_suite(tree, (2, 3, 8, 64)):
        add(r)
    st = _build(tree, args)
    if tree.n > 1:
        model = EntropyModel(st.dist, st.params.L)
        stats = verify.split_suite(verify.macro_pieces(tree, st.params.L), model, st.params.B)
        for r in stats.results(st.params.B):
            add(r)
        if stats.harvest and recombine:
            add(verify.recombine_suite(stats.harvest, st.params.B, rng, recombine))
    if tiny_models:
        dists = verify.tiny_models(rng, tiny_models)
        add(verify.class_count_suite(dists))
        add(verify.counting_bound_suite(dists))
    add(verify.roundtrip_suite(st, tree))
    if st.params.backend == "enum" and tree.n > 1:
        add(verify.enum_space_suite(st))
    add(verify.oracle_sweep(st, tree, rng))
    if tree.n > 1:
        add(verify.fault_suite(st, tree, rng))
    return results


def cmd_verify(args):
    if args.input:
        tree = load_tree(args.input)
    else:
        tree = random_tree(args.n, args.gen, args.seed)
    rng = verify.default_rng(args.seed)
    results = run_verify(tree, args, rng, args.recombine, args.tiny_models)
    failed = [r.name for r in results if not r.ok]
    emit({"summary": "verify", "n": tree.n, "checks": len(results), "failed": failed})
    return EXIT_FAIL if failed else EXIT_OK


# -- bench -----------------------------------------------------------------------------

def parse_mix(spec):
    """"lca:2,depth:1" -> {"lca": 2, "depth": 1}; "all" -> every kind weight 1."""
    spec = (spec or "").strip()
    if not spec:
        return {}
    if spec == "all":
        return {op: 1 for op in OPS}
    mix = {}
    for item in spec.split(","):
        name, _, w = item.strip().partition(":")
        if name not in OPS:
            raise InputError("unknown query kind {!r} in mix".format(name))
        try:
            weight = float(w) if w else 1.0
        except ValueError:
            raise InputError("bad weight in mix item {!r}".format(item))
        if weight < 0:
            raise InputError("negative weight in mix item {!r}".format(item))
        mix[name] = weight
    return {k: v for k, v in mix.items() if v > 0}


def visit_budget(L, B):
    """3 * (ceil(log_B(2L + 1)) + 1), computed on integers."""
    k, p = 0, 1
    while p < 2 * L + 1:
        p *= B
        k += 1
    return 3 * (k + 1)


def bench_queries(n, mix, count, rng):
    ops = sorted(mix)
    weights = [mix[o] for o in ops]
    kinds = rng.choices(ops, weights, k=count) if ops else []
    out = []
    for op in kinds:
        x = rng.randint(1, n)
        if op in ("lca",):
            args = (x, rng.randint(1, n))
        elif op == "level_ancestor":
            args = (x, rng.randint(0, 8))
        elif op == "child_select":
            args = (x, rng.randint(1, 3))
        else:
            args = (x,)
        out.append(Query(op, args))
    # node order keeps decoded chunks warm, as a scan-heavy client would
    out.sort(key=lambda q: q.args)
    return out


def _run_batch(st, qs):
    rows = []
    for q in qs:
        t0 = time.perf_counter()
        ans, probe = st.probe_query(q)
        dt = time.perf_counter() - t0
        ok = True
        if q.op == "preorder_select" and not isinstance(ans, NoSuchNode):
            ok = st.query(Query("preorder_rank", (ans,))) == q.args[0]
        rows.append((q.op, dt, probe.visits, len(probe.pieces), ok))
    return rows


def bench(st, mix, count, seed, threads=1):
    rng = verify.default_rng(seed)
    qs = bench_queries(st.n, mix, count, rng)
    if threads > 1 and qs:
        size = (len(qs) + threads - 1) // threads
        batches = [qs[i:i + size] for i in range(0, len(qs), size)]
        with ThreadPoolExecutor(threads) as pool:
            rows = [r for part in pool.map(lambda b: _run_batch(st, b), batches) for r in part]
    else:
        rows = _run_batch(st, qs)
    by_op = {}
    for op, dt, visits, pieces, ok in rows:
        by_op.setdefault(op, []).append((dt, visits, pieces, ok))
    budget = visit_budget(st.params.L, st.params.B)
    records = []
    for op in sorted(by_op):
        data = by_op[op]
        lat = sorted(d[0] for d in data)
        p99 = lat[min(len(lat) - 1, int(0.99 * len(lat)))]
        records.append({
            "op": op, "count": len(data),
            "median_us": round(statistics.median(lat) * 1e6, 2),
            "p99_us": round(p99 * 1e6, 2),
            "max_visits": max(d[1] for d in data),
            "mean_visits": round(sum(d[1] for d in data) / len(data), 3),
            "max_pieces": max(d[2] for d in data),
            "identity_failures": sum(1 for d in data if not d[3]),
        })
    summary = {
        "summary": "bench", "queries": len(rows), "visit_budget": budget,
        "max_visits": max((r["max_visits"] for r in records), default=0),
        "max_pieces": max((r["max_pieces"] for r in records), default=0),
    }
    summary["within_budget"] = summary["max_visits"] <= budget and summary["max_pieces"] <= 3
    return records, summary


def cmd_bench(args):
    st = container.read(args.file)
    records, summary = bench(st, parse_mix(args.mix), args.ops, args.seed, args.threads)
    for r in records:
        emit(r)
    emit(summary)
    bad = not summary["within_budget"] or any(r["identity_failures"] for r in records)
    return EXIT_FAIL if bad else EXIT_OK


# -- selfcheck ------------------------------------------------------------------------

SELFCHECK_CORPUS = (
    ("path", 40, "arith"), ("star", 40, "arith"), ("full-binary", 63, "enum"),
    ("uniform", 300, "arith"), ("skewed:0.5", 200, "enum"), ("skewed:0.9", 1500, "arith"),
)


def cmd_selfcheck(args):
    failed = []
    for prof, n, backend in SELFCHECK_CORPUS:
        tree = random_tree(n, prof, args.seed)
        ns = argparse.Namespace(L=4 if backend == "enum" else None, B=None,
                                t=1, backend=backend, chunk_leaf=None)
        rng = verify.default_rng("{}:{}".format(args.seed, prof))
        results = run_verify(tree, ns, rng, recombine=300, tiny_models=1 if prof == "path" else 0)
        failed += ["{}/{}".format(prof, r.name) for r in results if not r.ok]
        st = _build(tree, ns)
        data = container.dumps(st)
        same = data == container.dumps(_build(tree, ns))
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "t.stdt")
            container.write(st, path)
            back = container.read(path)
        sweep = verify.oracle_sweep(back, tree, rng)
        ok = same and sweep.ok
        emit({"check": "container", "profile": prof, "ok": ok,
              "detail": "deterministic={} {}".format(same, sweep.detail)})
        if not ok:
            failed.append("{}/container".format(prof))
    emit({"summary": "selfcheck", "failed": failed})
    return EXIT_FAIL if failed else EXIT_OK


# -- entry point --------------------------------------------------------------------

def make_parser():
    ap = argparse.ArgumentParser(prog="stdt", description="Entropy-compressed ordered tree index.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a tree file (BP, JSON or XML)")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    _add_params(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer one query on a container")
    p.add_argument("file")
    p.add_argument("--op", required=True, choices=sorted(OPS))
    p.add_argument("--args", nargs="+", type=int, required=True)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", help="space report of a container")
    p.add_argument("file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="run the property suites on one tree")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input")
    src.add_argument("--gen", metavar="PROFILE")
    p.add_argument("--n", type=_positive, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--recombine", type=int, default=10000, help="recombined tuples for the P2 check")
    p.add_argument("--tiny-models", type=int, default=3, help="models for the class-count checks")
    _add_params(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="latency and descent cost of a query mix")
    p.add_argument("file")
    p.add_argument("--ops", type=int, required=True)
    p.add_argument("--mix", default="all", help='e.g. "lca:2,depth:1" or "all"; empty for none')
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=_positive, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selfcheck", help="quick end-to-end run on a built-in corpus")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, TooLarge) as exc:
        sys.stderr.write("error: {}: {}\n".format(type(exc).__name__, exc))
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write("error: {}\n".format(exc))
        return EXIT_INPUT
    except (TreeError, AssertionError) as exc:
        sys.stderr.write("internal error: {}: {}\n".format(type(exc).__name__, exc))
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
