"""Independent reference computations used by the tests.

None of these touch the root-system code: lengths come from concrete
faithful models of the groups (permutations, dihedral rotation/flip pairs,
free reduction) and are found by breadth-first search or direct formulas.
"""

from __future__ import annotations

import itertools
import math
from collections import deque

import numpy as np


# --- symmetric groups: s_i = (i, i+1), length = number of inversions ----------


def perm_of_word(word, n):
    p = list(range(n))
    for s in word:
        p[s], p[s + 1] = p[s + 1], p[s]
    return tuple(p)


def inversions(p) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])


def sym_length(word, n) -> int:
    return inversions(perm_of_word(word, n))


# --- dihedral groups: elements (k, f) meaning rotation^k flip^f ------------------


def dihedral_mul(a, b, m):
    k1, f1 = a
    k2, f2 = b
    k = k1 + (-k2 if f1 else k2)
    if m is not None:
        k %= m
    return (k, f1 ^ f2)


def dihedral_of_word(word, m):
    # s0 = flip, s1 = rotation * flip
    gens = [(0, 1), (1, 1)]
    x = (0, 0)
    for s in word:
        x = dihedral_mul(x, gens[s], m)
    return x


def dihedral_length(word, m) -> int:
    """m = None for the infinite dihedral group."""
    k, f = dihedral_of_word(word, m)
    if m is None:
        # rotations (st)^j have length 2|j|, reflections have odd length
        if f == 0:
            return 2 * abs(k)
        # (k, 1) = rotation^k * s0: k >= 1 -> (s1 s0)^(k-1) s1 ..., closed form 2|k| - 1 or 2|k| + 1
        return 2 * k - 1 if k >= 1 else 1 - 2 * k
    return _dihedral_bfs(m)[(k, f)]


_BFS_CACHE: dict = {}


def _dihedral_bfs(m):
    if m in _BFS_CACHE:
        return _BFS_CACHE[m]
    gens = [(0, 1), (1, 1)]
    dist = {(0, 0): 0}
    q = deque([(0, 0)])
    while q:
        x = q.popleft()
        for g in gens:
            y = dihedral_mul(x, g, m)
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    _BFS_CACHE[m] = dist
    return dist


# --- universal groups: all m = inf, length = free reduction ----------------------


def free_reduce(word):
    out = []
    for s in word:
        if out and out[-1] == s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


# --- right-angled groups: length by BFS over a graph product model ----------------


def right_angled_length(word, commuting: set[frozenset]) -> int:
    """Length in a right-angled group by exhaustive shortening with commutation moves.

    Uses the standard fact that a word is reduced iff no two equal letters can
    be brought together by commuting moves; that is checked directly.
    """
    w = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w)):
            for j in range(i + 1, len(w)):
                if w[i] == w[j]:
                    between = w[i + 1 : j]
                    if all(frozenset((w[i], b)) in commuting for b in between):
                        del w[j]
                        del w[i]
                        changed = True
                        break
                if frozenset((w[i], w[j])) not in commuting:
                    break
            if changed:
                break
    return len(w)


def length_oracle(name: str):
    """word -> length for the presets that have a concrete model."""
    if name == "a1":
        return lambda w: len(w) % 2
    if name == "a2":
        return lambda w: sym_length(w, 3)
    if name == "a3":
        return lambda w: sym_length(w, 4)
    if name == "b2":
        return lambda w: dihedral_length(w, 4)
    if name == "g2":
        return lambda w: dihedral_length(w, 6)
    if name == "iinf":
        return lambda w: dihedral_length(w, None)
    if name == "u3":
        return lambda w: len(free_reduce(w))
    if name == "ra3":
        return lambda w: right_angled_length(w, {frozenset((1, 2))})
    raise KeyError(name)


def all_words(rank, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(range(rank), repeat=n)


# --- kernel-form oracles --------------------------------------------------------


def midpoint_form(f, h, alpha, lo, hi, n=2000):
    """Midpoint double quadrature of sum alpha^min(s,t) f(s) conj h(t) on [lo, hi]^2."""
    t = lo + (np.arange(n) + 0.5) * (hi - lo) / n
    w = (hi - lo) / n
    fv, hv = np.asarray(f(t), dtype=complex), np.asarray(h(t), dtype=complex)
    K = alpha ** np.minimum.outer(t, t)
    return complex(fv @ K @ np.conj(hv)) * w * w


def direct_discrete_form(f: dict, h: dict, alpha):
    return sum(alpha ** min(k, l) * a * np.conj(b) for k, a in f.items() for l, b in h.items())


def fejer_direct(N, t):
    return sum((1 - abs(k) / (N + 1)) * np.exp(1j * k * t) for k in range(-N, N + 1)).real


def gauss_series_direct(q, mu, t, J):
    return sum(q ** (j * j - mu * abs(j)) * np.exp(-1j * j * t) for j in range(-J, J + 1)).real


def is_close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


PI = math.pi
