import math
import random

import pytest

from faqrank.corpus import FormatError
from faqrank.dense import (
    EmbeddingStore,
    cosine,
    hash_encode,
    load_embeddings,
    save_embeddings,
    search,
)


def test_load_embeddings_infers_dim(tmp_path):
    path = tmp_path / "emb.jsonl"
    path.write_text('{"id": "a", "vec": [1, 0, 0, 0]}\n{"id": "b", "vec": [0, 1, 0, 0]}\n',
                    encoding="utf-8")
    store = load_embeddings(path)
    assert store.dim == 4
    assert store.ids == ("a", "b")


def test_load_embeddings_dim_mismatch(tmp_path):
    path = tmp_path / "emb.jsonl"
    path.write_text('{"id": "a", "vec": [1, 0, 0, 0]}\n{"id": "b", "vec": [0, 1, 0, 0, 0]}\n',
                    encoding="utf-8")
    with pytest.raises(FormatError, match="mismatch"):
        load_embeddings(path)


def test_load_embeddings_non_finite(tmp_path):
    path = tmp_path / "emb.jsonl"
    path.write_text('{"id": "a", "vec": [NaN, 0]}\n', encoding="utf-8")
    with pytest.raises(FormatError, match="non-finite"):
        load_embeddings(path)


def test_load_embeddings_duplicate_id(tmp_path):
    path = tmp_path / "emb.jsonl"
    path.write_text('{"id": "a", "vec": [1]}\n{"id": "a", "vec": [2]}\n', encoding="utf-8")
    with pytest.raises(FormatError, match="duplicate"):
        load_embeddings(path)


def test_save_load_roundtrip(tmp_path):
    store = EmbeddingStore.from_pairs([("a", [0.25, -1.5]), ("b", [3.0, 0.125])])
    save_embeddings(store, tmp_path / "emb.jsonl")
    loaded = load_embeddings(tmp_path / "emb.jsonl")
    assert loaded.ids == store.ids
    assert loaded.vector("a") == store.vector("a")
    assert loaded.vector("b") == store.vector("b")


def test_hash_encode_repeated_token_single_coordinate():
    vec = hash_encode(["covid", "covid"], dim=16)
    nonzero = [v for v in vec if v != 0]
    assert len(nonzero) == 1
    assert abs(nonzero[0]) == 1.0


def test_hash_encode_deterministic():
    assert hash_encode(["a", "b", "c"], 32) == hash_encode(["a", "b", "c"], 32)


def test_hash_encode_unit_norm():
    gen = random.Random(4)
    words = ["alpha", "beta", "gamma", "delta", "covid", "mask"]
    for _ in range(50):
        tokens = [gen.choice(words) for _ in range(gen.randint(1, 10))]
        vec = hash_encode(tokens, dim=8)
        assert math.sqrt(sum(v * v for v in vec)) == pytest.approx(1.0, abs=1e-9)


def test_hash_encode_order_invariant():
    a = hash_encode(["x", "y", "z", "x"], 16)
    b = hash_encode(["z", "x", "x", "y"], 16)
    assert a == b


def test_hash_encode_rejects_empty():
    with pytest.raises(ValueError):
        hash_encode([], 8)


def test_cosine_identity():
    assert cosine([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == pytest.approx(1.0, abs=1e-12)


def test_cosine_orthogonal():
    assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_cosine_hand_value():
    assert cosine([1.0, 1.0], [1.0, 0.0]) == pytest.approx(0.7071, abs=1e-4)


def test_cosine_symmetric():
    gen = random.Random(5)
    for _ in range(100):
        u = [gen.uniform(-1, 1) for _ in range(6)]
        v = [gen.uniform(-1, 1) for _ in range(6)]
        assert cosine(u, v) == pytest.approx(cosine(v, u), abs=1e-12)


def test_cosine_errors():
    with pytest.raises(ValueError):
        cosine([1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        cosine([0.0, 0.0], [1.0, 0.0])


def test_search_finds_exact_vector():
    store = EmbeddingStore.from_pairs([("hit", [3.0, 4.0]), ("miss", [-4.0, 3.0])])
    result = search(store, [3.0, 4.0], k=2, query_id="q")
    assert result.entries[0].faq_id == "hit"
    assert result.entries[0].score == 1.0


def test_search_k_exceeds_store():
    store = EmbeddingStore.from_pairs([("a", [1.0, 0.0]), ("b", [0.0, 1.0])])
    assert len(search(store, [1.0, 1.0], k=10).entries) == 2


def _cosine_oracle(u, v):
    dot_uv = sum(a * b for a, b in zip(u, v))
    norm_u = math.sqrt(sum(a * a for a in u))
    norm_v = math.sqrt(sum(b * b for b in v))
    return dot_uv / (norm_u * norm_v)


def test_search_matches_cosine_sort_oracle():
    gen = random.Random(6)
    for _ in range(20):
        pairs = [
            (f"v{i:02d}", [gen.uniform(-1, 1) for _ in range(5)]) for i in range(10)
        ]
        store = EmbeddingStore.from_pairs(pairs)
        query = [gen.uniform(-1, 1) for _ in range(5)]
        expected = sorted(
            ((vid, _cosine_oracle(vec, query)) for vid, vec in pairs),
            key=lambda kv: (-kv[1], kv[0]),
        )[:4]
        got = search(store, query, k=4)
        assert [e.faq_id for e in got.entries] == [vid for vid, _ in expected]
        for entry, (_, value) in zip(got.entries, expected):
            assert entry.score == pytest.approx(value, abs=1e-12)


def test_search_prefix_property():
    gen = random.Random(11)
    pairs = [(f"v{i}", [gen.uniform(-1, 1) for _ in range(4)]) for i in range(8)]
    store = EmbeddingStore.from_pairs(pairs)
    query = [1.0, 0.5, -0.25, 0.0]
    full = search(store, query, k=8)
    for k in range(1, 9):
        assert [e.faq_id for e in search(store, query, k=k).entries] == \
            [e.faq_id for e in full.entries[:k]]


def test_search_dim_mismatch():
    store = EmbeddingStore.from_pairs([("a", [1.0, 0.0])])
    with pytest.raises(ValueError):
        search(store, [1.0, 0.0, 0.0], k=1)
