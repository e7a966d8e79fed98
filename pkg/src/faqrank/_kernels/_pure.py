"""Pure-Python kernels, the fallback when the compiled extension is absent.

Each function here has a compiled twin in _native.pyx.  The two must stay
bit-identical: every floating-point operation is written in the same order
with the same expression shape, so IEEE-754 double rounding agrees between
the interpreter and the C code.  Do not "optimize" one side without the
other.
"""


def bm25_accumulate(doc_indices, tfs, idf, k1p1, denoms, scores):
    """Add one query term's contribution to every posting's document score.

    doc_indices/tfs are one term's parallel posting arrays, denoms holds the
    precomputed per-document k1*(1-b+b*len/avgdl), and scores is the dense
    accumulator indexed by document position.
    """
    for p in range(len(doc_indices)):
        i = doc_indices[p]
        tf = tfs[p]
        scores[i] += idf * ((tf * k1p1) / (tf + denoms[i]))


def positive_indices(scores):
    """Indices of strictly positive entries, ascending."""
    return [i for i in range(len(scores)) if scores[i] > 0.0]


def dot(a, a_start, b, b_start, n):
    """Sequential dot product of a[a_start:a_start+n] and b[b_start:b_start+n]."""
    s = 0.0
    for j in range(n):
        s += a[a_start + j] * b[b_start + j]
    return s


def matvec(mat, vec, n_rows, dim, out):
    """Row-wise dot products of a flat row-major (n_rows x dim) matrix with vec."""
    for r in range(n_rows):
        s = 0.0
        base = r * dim
        for j in range(dim):
            s += mat[base + j] * vec[j]
        out[r] = s


def lcs_length(a, b):
    """Length of the longest common subsequence of two int sequences."""
    n = len(a)
    m = len(b)
    if n == 0 or m == 0:
        return 0
    prev = [0] * (m + 1)
    cur = [0] * (m + 1)
    for i in range(n):
        ai = a[i]
        cur[0] = 0
        for j in range(m):
            if ai == b[j]:
                cur[j + 1] = prev[j] + 1
            elif cur[j] >= prev[j + 1]:
                cur[j + 1] = cur[j]
            else:
                cur[j + 1] = prev[j + 1]
        prev, cur = cur, prev
    return prev[m]
