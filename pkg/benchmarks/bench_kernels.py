"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each kernel on a synthetic workload with both backends, checks the
outputs agree exactly, and reports wall time plus speedup.  Also times a
full BM25 search pass through the public API with either backend swapped
in.

Usage: python benchmarks/bench_kernels.py [--docs 20000] [--queries 200]
"""

import argparse
import random
import time
from array import array

from faqrank import _kernels, bm25
from faqrank._kernels import _pure
from faqrank.corpus import FaqItem

try:
    from faqrank._kernels import _native
except ImportError:
    _native = None


def timed(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return time.perf_counter() - start, result


def bench_bm25_accumulate(gen, n_docs, n_queries):
    denoms = array("d", [gen.uniform(0.3, 3.0) for _ in range(n_docs)])
    terms = []
    for _ in range(n_queries * 4):  # four postings lists per query
        size = gen.randint(n_docs // 20, n_docs // 4)
        docs = array("q", sorted(gen.sample(range(n_docs), size)))
        tfs = array("q", [gen.randint(1, 6) for _ in range(size)])
        terms.append((docs, tfs, gen.uniform(0.05, 3.0)))

    def run(impl):
        scores = array("d", bytes(8 * n_docs))
        for docs, tfs, idf in terms:
            impl(docs, tfs, idf, 2.2, denoms, scores)
        return scores

    return run


def bench_matvec(gen, n_rows, dim, n_queries):
    mat = array("d", [gen.uniform(-1, 1) for _ in range(n_rows * dim)])
    queries = [array("d", [gen.uniform(-1, 1) for _ in range(dim)])
               for _ in range(n_queries)]

    def run(impl):
        out = array("d", bytes(8 * n_rows))
        for q in queries:
            impl(mat, q, n_rows, dim, out)
        return out

    return run


def bench_lcs(gen, n_pairs, length):
    pairs = [
        (array("q", [gen.randint(0, 40) for _ in range(length)]),
         array("q", [gen.randint(0, 40) for _ in range(length)]))
        for _ in range(n_pairs)
    ]

    def run(impl):
        return [impl(a, b) for a, b in pairs]

    return run


def bench_search_end_to_end(gen, n_docs, n_queries):
    words = [f"w{i}" for i in range(400)]
    bank = [
        FaqItem(id=f"f{i:05d}",
                question=" ".join(gen.choice(words) for _ in range(12)),
                answer="x", source="bench", language="en", form="question")
        for i in range(n_docs)
    ]
    index = bm25.build_index(bank, "qq")
    queries = [" ".join(gen.choice(words) for _ in range(5)) for _ in range(n_queries)]

    def run(impl):
        saved = _kernels.bm25_accumulate, _kernels.positive_indices
        _kernels.bm25_accumulate = impl.bm25_accumulate
        _kernels.positive_indices = impl.positive_indices
        try:
            return [
                [(e.faq_id, e.score) for e in bm25.search(index, q, 100).entries]
                for q in queries
            ]
        finally:
            _kernels.bm25_accumulate, _kernels.positive_indices = saved

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=20000)
    parser.add_argument("--queries", type=int, default=200)
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    if _native is None:
        print("native extension not built; timing the pure backend only")

    gen = random.Random(args.seed)
    benches = [
        ("bm25_accumulate", bench_bm25_accumulate(gen, args.docs, args.queries),
         lambda impl: impl.bm25_accumulate),
        ("matvec", bench_matvec(gen, min(args.docs, 8000), args.dim, args.queries),
         lambda impl: impl.matvec),
        ("lcs_length", bench_lcs(gen, 400, 60), lambda impl: impl.lcs_length),
        ("bm25.search (end-to-end)", bench_search_end_to_end(gen, args.docs, 50),
         lambda impl: impl),
    ]

    print(f"{'kernel':<28}{'python':>12}{'native':>12}{'speedup':>10}")
    for name, run, pick in benches:
        py_time, py_out = timed(run, pick(_pure))
        if _native is None:
            print(f"{name:<28}{py_time:>11.3f}s{'-':>12}{'-':>10}")
            continue
        nat_time, nat_out = timed(run, pick(_native))
        if list(py_out) != list(nat_out):
            raise SystemExit(f"{name}: backend outputs differ")
        print(f"{name:<28}{py_time:>11.3f}s{nat_time:>11.3f}s"
              f"{py_time / nat_time:>9.1f}x")


if __name__ == "__main__":
    main()
