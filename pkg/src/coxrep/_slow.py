"""Pure-Python root-tracking kernels (fallback for the compiled ``_fast``).

Both backends expose the same four functions and must agree exactly.
An element g is tracked through P = sigma(g^-1); column s of P is the
root g^-1(alpha_s), which is negative exactly when s is a left descent of g.
"""

from coxrep.errors import ToleranceError


def _rows(b):
    return [list(map(float, row)) for row in b]


def _identity(n):
    return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]


def _left_mul(P, B, s):
    # P <- sigma(s) P; only row s changes
    n = len(P)
    bs = B[s]
    for j in range(n):
        acc = 0.0
        for i in range(n):
            acc += bs[i] * P[i][j]
        P[s][j] -= 2.0 * acc


def _right_mul(P, B, s):
    # P <- P sigma(s); rank-one update through column s
    n = len(P)
    bs = B[s]
    for i in range(n):
        c = 2.0 * P[i][s]
        if c != 0.0:
            row = P[i]
            for j in range(n):
                row[j] -= c * bs[j]


def _column_sign(P, s, tol):
    lo = hi = P[0][s]
    for row in P:
        v = row[s]
        if v < lo:
            lo = v
        elif v > hi:
            hi = v
    if hi > tol and lo >= -tol:
        return 1
    if lo < -tol and hi <= tol:
        return -1
    raise ToleranceError(f"root column {s} has coordinates in [{lo:.3g}, {hi:.3g}]")


def _inverse_matrix(letters, B):
    P = _identity(len(B))
    for s in letters:
        _left_mul(P, B, s)
    return P


def _strip(P, B, tol, limit, record):
    out = []
    n = len(P)
    while True:
        found = -1
        for s in range(n):
            if _column_sign(P, s, tol) < 0:
                found = s
                break
        if found < 0:
            return out
        out.append(found)
        if len(out) > limit:
            raise ToleranceError("descent stripping exceeded the word length")
        _right_mul(P, B, found)


def normal_form(letters, b, tol):
    """ShortLex-least reduced word of the element spelled by ``letters``."""
    B = _rows(b)
    letters = tuple(letters)
    P = _inverse_matrix(letters, B)
    return tuple(_strip(P, B, tol, len(letters), True))


def word_length(letters, b, tol):
    return len(normal_form(letters, b, tol))


def is_left_descent(letters, s, b, tol):
    """True iff l(s g) < l(g) for g spelled by ``letters``."""
    B = _rows(b)
    P = _inverse_matrix(tuple(letters), B)
    return _column_sign(P, s, tol) < 0


def lengths_matrix(words, b, tol):
    """Integer matrix D[i][j] = l(w_i^-1 w_j) as nested lists."""
    B = _rows(b)
    n = len(B)
    fwd = []
    inv = []
    for w in words:
        F = _identity(n)
        for s in w:
            _right_mul(F, B, s)
        fwd.append(F)
        inv.append(_inverse_matrix(w, B))
    k = len(words)
    D = [[0] * k for _ in range(k)]
    for i in range(k):
        Fi = fwd[i]
        for j in range(i + 1, k):
            Ij = inv[j]
            # sigma((w_i^-1 w_j)^-1) = sigma(w_j^-1) sigma(w_i)
            P = [[sum(Ij[a][c] * Fi[c][d] for c in range(n)) for d in range(n)] for a in range(n)]
            d = len(_strip(P, B, tol, len(words[i]) + len(words[j]), False))
            D[i][j] = D[j][i] = d
    return D
