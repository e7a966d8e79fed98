"""Backend parity: the compiled kernels must match the pure-Python twins
bit for bit, not merely within tolerance."""

import random
from array import array

import pytest

from faqrank._kernels import _pure

try:
    from faqrank._kernels import _native
except ImportError:
    _native = None

needs_native = pytest.mark.skipif(_native is None, reason="native extension not built")


@needs_native
def test_bm25_accumulate_bitwise_equal():
    gen = random.Random(101)
    for _ in range(50):
        n_docs = gen.randint(1, 40)
        n_postings = gen.randint(1, n_docs)
        docs = array("q", sorted(gen.sample(range(n_docs), n_postings)))
        tfs = array("q", [gen.randint(1, 9) for _ in range(n_postings)])
        denoms = array("d", [gen.uniform(0.1, 3.0) for _ in range(n_docs)])
        idf = gen.uniform(0.01, 3.0)
        k1p1 = gen.uniform(1.0, 3.0)
        a = array("d", [0.0] * n_docs)
        b = array("d", [0.0] * n_docs)
        _native.bm25_accumulate(docs, tfs, idf, k1p1, denoms, a)
        _pure.bm25_accumulate(docs, tfs, idf, k1p1, denoms, b)
        assert list(a) == list(b)


@needs_native
def test_positive_indices_equal():
    gen = random.Random(106)
    for _ in range(50):
        scores = array("d", [gen.choice([0.0, gen.uniform(-1, 1)])
                             for _ in range(gen.randint(0, 30))])
        assert _native.positive_indices(scores) == _pure.positive_indices(scores)


@needs_native
def test_dot_bitwise_equal():
    gen = random.Random(102)
    for _ in range(100):
        n = gen.randint(1, 64)
        a = array("d", [gen.uniform(-2, 2) for _ in range(n + 3)])
        b = array("d", [gen.uniform(-2, 2) for _ in range(n + 5)])
        assert _native.dot(a, 3, b, 5, n) == _pure.dot(a, 3, b, 5, n)


@needs_native
def test_matvec_bitwise_equal():
    gen = random.Random(103)
    for _ in range(30):
        rows = gen.randint(1, 20)
        dim = gen.randint(1, 32)
        mat = array("d", [gen.uniform(-1, 1) for _ in range(rows * dim)])
        vec = array("d", [gen.uniform(-1, 1) for _ in range(dim)])
        got_native = array("d", [0.0] * rows)
        got_pure = array("d", [0.0] * rows)
        _native.matvec(mat, vec, rows, dim, got_native)
        _pure.matvec(mat, vec, rows, dim, got_pure)
        assert list(got_native) == list(got_pure)


@needs_native
def test_lcs_equal():
    gen = random.Random(104)
    for _ in range(200):
        a = array("q", [gen.randint(0, 5) for _ in range(gen.randint(0, 30))])
        b = array("q", [gen.randint(0, 5) for _ in range(gen.randint(0, 30))])
        assert _native.lcs_length(a, b) == _pure.lcs_length(a, b)


def _lcs_oracle(a, b):
    # Full-table DP, the textbook recurrence.
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(a)][len(b)]


def test_pure_lcs_matches_full_table_oracle():
    gen = random.Random(105)
    for _ in range(100):
        a = [gen.randint(0, 4) for _ in range(gen.randint(0, 20))]
        b = [gen.randint(0, 4) for _ in range(gen.randint(0, 20))]
        assert _pure.lcs_length(array("q", a), array("q", b)) == _lcs_oracle(a, b)
