import math
import random
from collections import Counter

import pytest

from faqrank import bm25
from faqrank.text import tokenize
from helpers import make_item


def oracle_scores(doc_tokens, query_tokens, k1, b):
    """Direct evaluation of the documented BM25 formula, doc at a time."""
    n = len(doc_tokens)
    avgdl = sum(len(t) for t in doc_tokens.values()) / n
    df = Counter()
    for tokens in doc_tokens.values():
        for term in set(tokens):
            df[term] += 1
    scores = {}
    for doc_id, tokens in doc_tokens.items():
        counts = Counter(tokens)
        dl = len(tokens)
        total = 0.0
        for term in query_tokens:
            tf = counts.get(term, 0)
            if tf == 0:
                continue
            idf = math.log(1 + (n - df[term] + 0.5) / (df[term] + 0.5))
            total += idf * (tf * (k1 + 1)) / (tf + k1 * (1 - b + b * dl / avgdl))
        if total > 0:
            scores[doc_id] = total
    return scores


def oracle_rank(scores, k):
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]


def _bank(pairs):
    return [make_item(doc_id, question, answer) for doc_id, question, answer in pairs]


def test_build_qq_doc_length_is_question_tokens():
    index = bm25.build_index(_bank([("f1", "What is COVID-19?", "A viral disease.")]), "qq")
    assert index.doc_count == 1
    assert index.doc_lengths == (4,)  # what, is, covid, 19


def test_build_qqa_concatenates_fields():
    index = bm25.build_index(_bank([("f1", "What is COVID-19?", "A viral disease.")]), "qqa")
    assert index.doc_lengths == (7,)


def test_build_postings_match_hand_built_map():
    bank = _bank([
        ("f1", "masks protect people", "wear masks"),
        ("f2", "people gather", "avoid people"),
        ("f3", "wash hands", "soap helps"),
    ])
    index = bm25.build_index(bank, "qqa")
    expected = {}
    for pos, item in enumerate(bank):
        for term, tf in Counter(tokenize(item.question + " " + item.answer)).items():
            expected.setdefault(term, []).append((pos, tf))
    got = {
        term: list(zip(plist[0], plist[1])) for term, plist in index.postings.items()
    }
    assert got == expected


def test_build_rejects_empty_bank():
    with pytest.raises(ValueError):
        bm25.build_index([], "qq")


def test_score_zero_when_no_overlap():
    index = bm25.build_index(_bank([("f1", "alpha beta", "gamma")]), "qq")
    assert bm25.score(index, ["delta"], "f1") == 0.0


def test_score_matches_hand_evaluation():
    bank = _bank([("d1", "a b", "x"), ("d2", "a c", "x"), ("d3", "d", "x")])
    index = bm25.build_index(bank, "qq", k1=1.2, b=0.75)
    # by hand: df(a)=2, N=3, idf=ln(1+1.5/2.5); tf=1, |d|=2, avgdl=5/3
    idf = math.log(1 + (3 - 2 + 0.5) / (2 + 0.5))
    denom = 1 + 1.2 * (1 - 0.75 + 0.75 * 2 / (5 / 3))
    assert bm25.score(index, ["a"], "d1") == pytest.approx(idf * 2.2 / denom, abs=1e-12)


def test_score_is_deterministic():
    index = bm25.build_index(_bank([("f1", "a b a", "c")]), "qq")
    first = bm25.score(index, ["a", "b", "a"], "f1")
    assert bm25.score(index, ["a", "b", "a"], "f1") == first


def test_score_unknown_doc():
    index = bm25.build_index(_bank([("f1", "a", "b")]), "qq")
    with pytest.raises(KeyError):
        bm25.score(index, ["a"], "nope")


def test_search_k_larger_than_corpus():
    index = bm25.build_index(_bank([("f1", "a b", "x"), ("f2", "a", "x")]), "qq")
    result = bm25.search(index, "a", k=10)
    assert [e.faq_id for e in result.entries] == ["f2", "f1"]  # shorter doc wins


def test_search_tie_broken_by_ascending_id():
    index = bm25.build_index(_bank([("fb", "same text", "x"), ("fa", "same text", "x")]), "qq")
    result = bm25.search(index, "same", k=5)
    assert [e.faq_id for e in result.entries] == ["fa", "fb"]


def test_search_excludes_zero_scores():
    index = bm25.build_index(_bank([("f1", "a", "x"), ("f2", "b", "x")]), "qq")
    result = bm25.search(index, "a", k=5)
    assert [e.faq_id for e in result.entries] == ["f1"]


def _random_corpus(gen, max_docs=50, max_terms=8):
    vocab = ["t%d" % i for i in range(12)]
    n_docs = gen.randint(1, max_docs)
    docs = {}
    for d in range(n_docs):
        length = gen.randint(1, max_terms)
        docs["d%03d" % d] = [gen.choice(vocab) for _ in range(length)]
    return docs


def test_search_equals_brute_force_on_random_corpora():
    gen = random.Random(7)
    for _ in range(100):
        docs = _random_corpus(gen)
        bank = [make_item(doc_id, " ".join(tokens), "unused answer")
                for doc_id, tokens in docs.items()]
        k1 = gen.choice([0.9, 1.2, 1.5])
        b = gen.choice([0.0, 0.4, 0.75, 1.0])
        index = bm25.build_index(bank, "qq", k1=k1, b=b)
        query_tokens = [gen.choice(["t0", "t1", "t2", "t3", "zzz"])
                        for _ in range(gen.randint(1, 5))]
        k = gen.randint(1, 60)
        got = bm25.search(index, " ".join(query_tokens), k)
        expected = oracle_rank(oracle_scores(docs, query_tokens, k1, b), k)
        assert [e.faq_id for e in got.entries] == [doc_id for doc_id, _ in expected]
        for entry, (_, score) in zip(got.entries, expected):
            assert entry.score == pytest.approx(score, abs=1e-12)


def test_search_prefix_property():
    gen = random.Random(8)
    docs = _random_corpus(gen, max_docs=30)
    bank = [make_item(d, " ".join(t), "a") for d, t in docs.items()]
    index = bm25.build_index(bank, "qq")
    full = bm25.search(index, "t0 t1 t2", k=30)
    for k in range(1, 31):
        part = bm25.search(index, "t0 t1 t2", k=k)
        assert [e.faq_id for e in part.entries] == [e.faq_id for e in full.entries[:k]]


def test_scores_non_negative_and_sorted():
    gen = random.Random(9)
    docs = _random_corpus(gen, max_docs=25)
    bank = [make_item(d, " ".join(t), "a") for d, t in docs.items()]
    index = bm25.build_index(bank, "qq")
    result = bm25.search(index, "t0 t1 t4 t5", k=25)
    entries = result.entries
    assert all(e.score > 0 for e in entries)
    for first, second in zip(entries, entries[1:]):
        assert first.score >= second.score
        if first.score == second.score:
            assert first.faq_id < second.faq_id


def test_index_save_load_roundtrip(tmp_path):
    bank = _bank([
        ("f1", "masks and vaccines", "wear masks daily"),
        ("f2", "vaccines for kids", "consult your doctor"),
    ])
    index = bm25.build_index(bank, "qqa", k1=1.4, b=0.6)
    path = tmp_path / "index.jsonl"
    bm25.save_index(index, path)
    loaded = bm25.load_index(path)
    assert loaded.mode == "qqa"
    assert loaded.doc_ids == index.doc_ids
    assert loaded.doc_lengths == index.doc_lengths
    assert loaded.avgdl == index.avgdl
    query = "masks vaccines doctor"
    before = bm25.search(index, query, k=5)
    after = bm25.search(loaded, query, k=5)
    assert [(e.faq_id, e.score) for e in before.entries] == \
        [(e.faq_id, e.score) for e in after.entries]
