# cython: boundscheck=False, wraparound=False, cdivision=False
"""Compiled kernels; bit-identical twins of _pure.py.

Floating-point expressions mirror _pure.py operation for operation so both
backends round identically.  Do not reorder any arithmetic here without
changing _pure.py the same way.
"""

from array import array


def bm25_accumulate(const long long[::1] doc_indices,
                    const long long[::1] tfs,
                    double idf,
                    double k1p1,
                    const double[::1] denoms,
                    double[::1] scores):
    cdef Py_ssize_t p
    cdef long long i
    cdef double tf
    for p in range(doc_indices.shape[0]):
        i = doc_indices[p]
        tf = <double> tfs[p]
        scores[i] += idf * ((tf * k1p1) / (tf + denoms[i]))


def positive_indices(const double[::1] scores):
    cdef list out = []
    cdef Py_ssize_t i
    for i in range(scores.shape[0]):
        if scores[i] > 0.0:
            out.append(i)
    return out


def dot(const double[::1] a, Py_ssize_t a_start,
        const double[::1] b, Py_ssize_t b_start,
        Py_ssize_t n):
    cdef double s = 0.0
    cdef Py_ssize_t j
    for j in range(n):
        s += a[a_start + j] * b[b_start + j]
    return s


def matvec(const double[::1] mat, const double[::1] vec,
           Py_ssize_t n_rows, Py_ssize_t dim, double[::1] out):
    cdef Py_ssize_t r, j, base
    cdef double s
    for r in range(n_rows):
        s = 0.0
        base = r * dim
        for j in range(dim):
            s += mat[base + j] * vec[j]
        out[r] = s


def lcs_length(const long long[::1] a, const long long[::1] b):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    if n == 0 or m == 0:
        return 0
    prev_arr = array("q", bytes(8 * (m + 1)))
    cur_arr = array("q", bytes(8 * (m + 1)))
    cdef long long[::1] prev_v = prev_arr
    cdef long long[::1] cur_v = cur_arr
    cdef long long[::1] tmp
    cdef Py_ssize_t i, j
    cdef long long ai
    for i in range(n):
        ai = a[i]
        cur_v[0] = 0
        for j in range(m):
            if ai == b[j]:
                cur_v[j + 1] = prev_v[j] + 1
            elif cur_v[j] >= prev_v[j + 1]:
                cur_v[j + 1] = cur_v[j]
            else:
                cur_v[j + 1] = prev_v[j + 1]
        tmp = prev_v
        prev_v = cur_v
        cur_v = tmp
    return prev_v[m]
