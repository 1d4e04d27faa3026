# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled root-tracking kernels; same contract as ``coxrep._slow``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

import numpy as np

from coxrep.errors import ToleranceError


cdef inline void _set_identity(double* P, int n) noexcept nogil:
    cdef int i
    memset(P, 0, n * n * sizeof(double))
    for i in range(n):
        P[i * n + i] = 1.0


cdef inline void _left_mul(double* P, const double* B, int n, int s, double* tmp) noexcept nogil:
    cdef int i, j
    cdef double acc
    for j in range(n):
        acc = 0.0
        for i in range(n):
            acc += B[s * n + i] * P[i * n + j]
        tmp[j] = acc
    for j in range(n):
        P[s * n + j] -= 2.0 * tmp[j]


cdef inline void _right_mul(double* P, const double* B, int n, int s) noexcept nogil:
    cdef int i, j
    cdef double c
    for i in range(n):
        c = 2.0 * P[i * n + s]
        if c != 0.0:
            for j in range(n):
                P[i * n + j] -= c * B[s * n + j]


cdef inline int _column_sign(const double* P, int n, int s, double tol) noexcept nogil:
    # 1 positive, -1 negative, 0 undecidable
    cdef double lo = P[s], hi = P[s], v
    cdef int i
    for i in range(1, n):
        v = P[i * n + s]
        if v < lo:
            lo = v
        elif v > hi:
            hi = v
    if hi > tol and lo >= -tol:
        return 1
    if lo < -tol and hi <= tol:
        return -1
    return 0


cdef int _strip(double* P, const double* B, int n, double tol, int limit, int* out) noexcept nogil:
    # returns the number of letters stripped, -1 on tolerance failure, -2 on overrun
    cdef int count = 0, s, found, sg
    while True:
        found = -1
        for s in range(n):
            sg = _column_sign(P, n, s, tol)
            if sg == 0:
                return -1
            if sg < 0:
                found = s
                break
        if found < 0:
            return count
        if count >= limit:
            return -2
        if out != NULL:
            out[count] = found
        count += 1
        _right_mul(P, B, n, found)


cdef double* _copy_form(object b, int* n_out) except NULL:
    cdef const double[:, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef int n = bv.shape[0], i, j
    cdef double* B = <double*> malloc(n * n * sizeof(double))
    if B == NULL:
        raise MemoryError()
    for i in range(n):
        for j in range(n):
            B[i * n + j] = bv[i, j]
    n_out[0] = n
    return B


def normal_form(letters, b, double tol):
    """ShortLex-least reduced word of the element spelled by ``letters``."""
    cdef int n, L, k, r, s
    cdef double* B = _copy_form(b, &n)
    cdef list word = list(letters)
    L = len(word)
    cdef double* P = <double*> malloc(n * n * sizeof(double))
    cdef double* tmp = <double*> malloc(n * sizeof(double))
    cdef int* out = <int*> malloc((L + 1) * sizeof(int))
    try:
        _set_identity(P, n)
        for k in range(L):
            s = word[k]
            _left_mul(P, B, n, s, tmp)
        r = _strip(P, B, n, tol, L, out)
        if r == -1:
            raise ToleranceError("root coordinate inside the tolerance band")
        if r == -2:
            raise ToleranceError("descent stripping exceeded the word length")
        return tuple([out[k] for k in range(r)])
    finally:
        free(B)
        free(P)
        free(tmp)
        free(out)


def word_length(letters, b, double tol):
    return len(normal_form(letters, b, tol))


def is_left_descent(letters, int s, b, double tol):
    """True iff l(s g) < l(g) for g spelled by ``letters``."""
    cdef int n, k, sg
    cdef double* B = _copy_form(b, &n)
    cdef double* P = <double*> malloc(n * n * sizeof(double))
    cdef double* tmp = <double*> malloc(n * sizeof(double))
    try:
        _set_identity(P, n)
        for k in letters:
            _left_mul(P, B, n, k, tmp)
        sg = _column_sign(P, n, s, tol)
        if sg == 0:
            raise ToleranceError("root coordinate inside the tolerance band")
        return sg < 0
    finally:
        free(B)
        free(P)
        free(tmp)


def lengths_matrix(words, b, double tol):
    """int64 array D[i, j] = l(w_i^-1 w_j)."""
    cdef int n, m = len(words), i, j, a, c, d, k, s, r, nn
    cdef double* B = _copy_form(b, &n)
    nn = n * n
    cdef double* fwd = <double*> malloc(m * nn * sizeof(double) + 1)
    cdef double* inv = <double*> malloc(m * nn * sizeof(double) + 1)
    cdef double* P = <double*> malloc(nn * sizeof(double))
    cdef double* tmp = <double*> malloc(n * sizeof(double))
    cdef int* lens = <int*> malloc(m * sizeof(int) + 1)
    cdef double acc
    cdef double* Fi
    cdef double* Ij
    D = np.zeros((m, m), dtype=np.int64)
    cdef long long[:, ::1] Dv = D
    cdef int failed = 0
    try:
        for i in range(m):
            w = words[i]
            lens[i] = len(w)
            _set_identity(fwd + i * nn, n)
            _set_identity(inv + i * nn, n)
            for s in w:
                _right_mul(fwd + i * nn, B, n, s)
                _left_mul(inv + i * nn, B, n, s, tmp)
        with nogil:
            for i in range(m):
                Fi = fwd + i * nn
                for j in range(i + 1, m):
                    Ij = inv + j * nn
                    for a in range(n):
                        for d in range(n):
                            acc = 0.0
                            for c in range(n):
                                acc += Ij[a * n + c] * Fi[c * n + d]
                            P[a * n + d] = acc
                    r = _strip(P, B, n, tol, lens[i] + lens[j], NULL)
                    if r < 0:
                        failed = 1
                        break
                    Dv[i, j] = r
                    Dv[j, i] = r
                if failed:
                    break
        if failed:
            raise ToleranceError("root coordinate inside the tolerance band")
        return D
    finally:
        free(B)
        free(fwd)
        free(inv)
        free(P)
        free(tmp)
        free(lens)
