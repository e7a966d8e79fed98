"""Command-line entry point.

Every subcommand is a pure function of its input files, flags, and explicit
seeds; re-running a command writes byte-identical output.  Exit codes:
0 success, 1 validation error, 2 I/O error, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from faqrank import bm25, dense, fusion, metrics, nli_agree, qg_eval, qpp_tools, relevance, trec
from faqrank.corpus import (
    load_annotations,
    load_faq_bank,
    load_nli_items,
    load_queries,
    split_dataset,
)
from faqrank.text import tokenize

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _read_lines(path: str | Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh if line.strip()]


def _read_token_corpus(path: str | Path) -> list[list[str]]:
    return [tokenize(line) for line in _read_lines(path)]


def _write_lines(path: str | Path, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def _parse_ratios(text: str, expected: int | None = None) -> list[float]:
    try:
        ratios = [float(part) for part in text.split(":")]
    except ValueError:
        raise ValueError(f"bad ratio string '{text}'; expected numbers like 7:1:2")
    if expected is not None and len(ratios) != expected:
        raise ValueError(f"expected {expected} ratio components, got {len(ratios)}")
    return ratios


def _load_label_file(path: str | Path) -> dict[str, str]:
    labels: dict[str, str] = {}
    for lineno, line in enumerate(_read_lines(path), start=1):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'id<TAB>label'")
        item_id, label = parts
        if item_id in labels:
            raise ValueError(f"{path}:{lineno}: duplicate id '{item_id}'")
        labels[item_id] = label
    return labels


def cmd_index(args) -> None:
    bank = load_faq_bank(args.bank)
    index = bm25.build_index(bank, mode=args.mode, k1=args.k1, b=args.b)
    bm25.save_index(index, args.out)


def cmd_search(args) -> None:
    index = bm25.load_index(args.index)
    queries = load_queries(args.queries)
    runs = {
        q.id: bm25.search(index, q.text, args.k, query_id=q.id, tag=args.tag)
        for q in queries
    }
    trec.save_run(runs, args.out)


def cmd_dense_search(args) -> None:
    if args.hash_dim is not None:
        if not args.bank or not args.queries:
            raise ValueError("--hash-dim requires --bank and --queries")
        bank = load_faq_bank(args.bank)
        field = args.field
        store = dense.EmbeddingStore.from_pairs(
            (item.id,
             dense.hash_encode(tokenize(bm25.document_text(item, "qq" if field == "question" else "qa")),
                               args.hash_dim))
            for item in bank
        )
        queries = load_queries(args.queries)
        query_vectors = [(q.id, dense.hash_encode(tokenize(q.text), args.hash_dim))
                         for q in queries]
    else:
        if not args.embeddings or not args.query_embeddings:
            raise ValueError("provide --embeddings and --query-embeddings, or --hash-dim")
        store = dense.load_embeddings(args.embeddings)
        query_store = dense.load_embeddings(args.query_embeddings)
        query_vectors = [(qid, query_store.vector(qid)) for qid in query_store.ids]
    runs = {
        qid: dense.search(store, vec, args.k, query_id=qid, tag=args.tag)
        for qid, vec in query_vectors
    }
    trec.save_run(runs, args.out)


def cmd_fuse(args) -> None:
    if len(args.runs) < 2:
        raise ValueError("fuse needs at least 2 run files")
    run_files = [trec.load_run(path) for path in args.runs]
    query_ids = sorted(set().union(*run_files))
    fused = {}
    for query_id in query_ids:
        present = [runs[query_id] for runs in run_files if query_id in runs]
        fused[query_id] = fusion.combsum(present, k=args.k,
                                         total_sources=len(run_files))
    trec.save_run(fused, args.out)


def cmd_pool(args) -> None:
    run_files = [trec.load_run(path) for path in args.runs]
    query_ids = sorted(set().union(*run_files))
    if not query_ids:
        raise ValueError("run files contain no queries")
    lines = []
    pools = []
    for query_id in query_ids:
        present = [runs[query_id] for runs in run_files if query_id in runs]
        pool = fusion.build_candidate_pool(present, per_list_k=args.per_list_k)
        pools.append(pool)
        lines.extend(f"{query_id}\t{faq_id}" for faq_id in pool)
    _write_lines(args.out, lines)
    stats = fusion.pool_stats(pools)
    print(f"mean_pool_size {_fmt(stats.mean_size)}")


def cmd_aggregate(args) -> None:
    judgments = relevance.aggregate(load_annotations(args.annotations))
    queries = load_queries(args.queries)
    result = relevance.filter_unanswerable(queries, judgments)
    relevance.emit_qrels(judgments, args.out_qrels)
    print(f"removed_unanswerable {result.removed_count}")


def cmd_eval_retrieval(args) -> None:
    runs = trec.load_run(args.run)
    qrels = trec.load_qrels(args.qrels)
    if not runs:
        raise ValueError("run file contains no queries")
    query_ids = sorted(runs)
    ap = [metrics.average_precision(runs[q], qrels, cutoff=args.map_cutoff)
          for q in query_ids]
    rr = [metrics.reciprocal_rank(runs[q], qrels) for q in query_ids]
    p5 = [metrics.precision_at_k(runs[q], qrels, 5) for q in query_ids]
    print(f"MAP {_fmt(metrics.mean_over_queries(ap))}")
    print(f"MRR {_fmt(metrics.mean_over_queries(rr))}")
    print(f"P@5 {_fmt(metrics.mean_over_queries(p5))}")


def cmd_eval_diversity(args) -> None:
    corpus = _read_token_corpus(args.corpus)
    for n in args.n:
        print(f"Dist-{n} {_fmt(qg_eval.distinct_n(corpus, n))}")
        print(f"Ent-{n} {_fmt(qg_eval.entropy_n(corpus, n))}")
    if args.reference:
        reference_lines = _read_token_corpus(args.reference)
        if not reference_lines:
            raise ValueError("reference file is empty")
        reference = reference_lines[0]
        print(f"Top1-BLEU {_fmt(qg_eval.top1_relevance(corpus, reference, 'bleu'))}")
        print(f"Top1-ROUGE-L {_fmt(qg_eval.top1_relevance(corpus, reference, 'rouge_l'))}")


def cmd_type_dist(args) -> None:
    corpus = _read_token_corpus(args.corpus)
    phrase_set = qpp_tools.load_phrase_set(args.phrases)
    dist = qg_eval.type_distribution(corpus, phrase_set)
    for label in sorted(dist.probabilities):
        print(f"{label}\t{_fmt(dist.probabilities[label])}")
    if args.kl:
        if not args.truth:
            raise ValueError("--kl requires --truth")
        truth = qg_eval.type_distribution(_read_token_corpus(args.truth), phrase_set)
        print(f"KL {_fmt(qg_eval.kl_divergence(dist, truth, epsilon=args.epsilon))}")


def cmd_qpp_phrases(args) -> None:
    questions = _read_token_corpus(args.questions)
    phrase_set = qpp_tools.build_phrase_sets(questions, n_max=args.n_max, zeta=args.zeta)
    qpp_tools.save_phrase_set(phrase_set, args.out)


def cmd_merge_drop(args) -> None:
    spans = qpp_tools.load_spans(args.spans)
    token_count = args.token_count
    if token_count is None:
        token_count = max((s.end for s in spans), default=-1) + 1
    result = qpp_tools.merge_and_drop(spans, token_count, eta=args.eta, gamma=args.gamma)
    qpp_tools.save_spans(result, args.out)


def cmd_dev_sample(args) -> None:
    pools: dict[str, list[str]] = {}
    for lineno, line in enumerate(_read_lines(args.pools), start=1):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{args.pools}:{lineno}: expected 'stratum<TAB>item'")
        pools.setdefault(parts[0], []).append(parts[1])
    ratio_values = _parse_ratios(args.ratios, expected=len(pools))
    ratios = dict(zip(pools, ratio_values))  # first-appearance order
    sample = qpp_tools.stratified_sample(pools, ratios, total=args.total, seed=args.seed)
    _write_lines(args.out, sample)


def cmd_nli_label(args) -> None:
    items = load_nli_items(args.items)
    labels = nli_agree.label_items(items, scheme=args.scheme)
    _write_lines(args.out, [f"{item_id}\t{label}" for item_id, label in labels])


def cmd_nli_eval(args) -> None:
    gold = _load_label_file(args.gold)
    pred = _load_label_file(args.pred)
    if set(gold) != set(pred):
        raise ValueError("gold and prediction files cover different item ids")
    ids = sorted(gold)
    report = metrics.classification_report(
        [gold[i] for i in ids], [pred[i] for i in ids], nli_agree.FINER_LABELS
    )
    print(f"accuracy {_fmt(report.accuracy)}")
    for label in nli_agree.FINER_LABELS:
        print(f"F1-{label} {_fmt(report.per_label_f1[label])}")
    print(f"macro-F1 {_fmt(report.macro_f1)}")
    print("confusion labels " + " ".join(report.confusion.labels))
    for label, row in zip(report.confusion.labels, report.confusion.counts):
        print(f"confusion {label} " + " ".join(str(c) for c in row))


def cmd_split(args) -> None:
    ids = _read_lines(args.ids)
    ratios = _parse_ratios(args.ratios, expected=3)
    assignments = split_dataset(ids, (ratios[0], ratios[1], ratios[2]), seed=args.seed)
    _write_lines(args.out, [f"{a.item_id}\t{a.split}" for a in assignments])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faqrank",
        description="Deterministic FAQ retrieval and evaluation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build a BM25 index from an FAQ bank")
    p.add_argument("--bank", required=True)
    p.add_argument("--mode", required=True, choices=bm25.FIELD_MODES)
    p.add_argument("--k1", type=float, default=bm25.DEFAULT_K1)
    p.add_argument("--b", type=float, default=bm25.DEFAULT_B)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="run BM25 queries against a saved index")
    p.add_argument("--index", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tag", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("dense-search", help="rank by cosine over embedding vectors")
    p.add_argument("--embeddings")
    p.add_argument("--query-embeddings")
    p.add_argument("--hash-dim", type=int,
                   help="encode raw text with the built-in hashed encoder")
    p.add_argument("--bank", help="FAQ bank (with --hash-dim)")
    p.add_argument("--queries", help="query file (with --hash-dim)")
    p.add_argument("--field", choices=("question", "answer"), default="question",
                   help="bank field to encode (with --hash-dim)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tag", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dense_search)

    p = sub.add_parser("fuse", help="CombSum-fuse two or more run files")
    p.add_argument("--runs", nargs="+", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("pool", help="build per-query candidate pools from runs")
    p.add_argument("--runs", nargs="+", required=True)
    p.add_argument("--per-list-k", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pool)

    p = sub.add_parser("aggregate", help="aggregate annotations into qrels")
    p.add_argument("--annotations", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--out-qrels", required=True)
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("eval-retrieval", help="MAP/MRR/P@5 of a run against qrels")
    p.add_argument("--run", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--map-cutoff", type=int, default=100)
    p.set_defaults(func=cmd_eval_retrieval)

    p = sub.add_parser("eval-diversity", help="Distinct-n/Entropy-n of a question corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--n", type=int, nargs="+", default=[3, 4])
    p.add_argument("--reference", help="gold question; adds top-1 BLEU/ROUGE-L")
    p.set_defaults(func=cmd_eval_diversity)

    p = sub.add_parser("type-dist", help="question-type distribution and KL divergence")
    p.add_argument("--corpus", required=True)
    p.add_argument("--phrases", required=True)
    p.add_argument("--truth", help="ground-truth question corpus")
    p.add_argument("--kl", action="store_true")
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.set_defaults(func=cmd_type_dist)

    p = sub.add_parser("qpp-phrases", help="build a question-phrase set")
    p.add_argument("--questions", required=True)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--zeta", type=float, default=qpp_tools.DEFAULT_ZETA)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_qpp_phrases)

    p = sub.add_parser("merge-drop", help="merge/drop short extracted spans")
    p.add_argument("--spans", required=True)
    p.add_argument("--eta", type=int, default=qpp_tools.DEFAULT_ETA)
    p.add_argument("--gamma", type=int, default=qpp_tools.DEFAULT_GAMMA)
    p.add_argument("--token-count", type=int,
                   help="document length in tokens (default: max span end + 1)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_merge_drop)

    p = sub.add_parser("dev-sample", help="stratified seeded sampling from pools")
    p.add_argument("--pools", required=True)
    p.add_argument("--ratios", required=True, help="e.g. 1:3:6, in stratum file order")
    p.add_argument("--total", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dev_sample)

    p = sub.add_parser("nli-label", help="label NLI items (finer or heuristic scheme)")
    p.add_argument("--items", required=True)
    p.add_argument("--scheme", required=True, choices=("finer", "heuristic"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_nli_label)

    p = sub.add_parser("nli-eval", help="score predicted labels against gold labels")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.set_defaults(func=cmd_nli_eval)

    p = sub.add_parser("split", help="seeded train/dev/test split of an id list")
    p.add_argument("--ids", required=True)
    p.add_argument("--ratios", required=True, help="e.g. 7:1:2")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    try:
        args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
