"""Standard geometric representation of a Coxeter group on R^rank.

The form is B(e_i, e_j) = -cos(pi / m_ij), with -1 for infinite orders,
and a generator acts as the reflection sigma(s) x = x - 2 B(e_s, x) e_s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

from coxrep import _backend
from coxrep.errors import ToleranceError
from coxrep.matrix import INF, CoxeterMatrix

if TYPE_CHECKING:
    from coxrep.coxeter import Ball, CoxeterGroup, Element

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BilinearForm:
    b: np.ndarray

    @property
    def rank(self) -> int:
        return self.b.shape[0]


# cos(pi/m) where the float evaluation would miss the exact value
_EXACT_COS = {2: 0.0, 3: 0.5}


@lru_cache(maxsize=None)
def build_form(matrix: CoxeterMatrix) -> BilinearForm:
    n = matrix.rank
    b = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            m = matrix.m[i][j]
            if i == j:
                b[i, j] = 1.0
            elif m == INF:
                b[i, j] = -1.0
            elif m in _EXACT_COS:
                b[i, j] = -_EXACT_COS[m]
            else:
                b[i, j] = -math.cos(math.pi / m)
    b.setflags(write=False)
    return BilinearForm(b)


def apply_sigma(s: int, x: np.ndarray, form: BilinearForm) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = x.copy()
    out[s] -= 2.0 * (form.b[s] @ x)
    return out


def act(word, x: np.ndarray, form: BilinearForm) -> np.ndarray:
    """sigma(w_1 ... w_k) x, applying the last letter first."""
    x = np.asarray(x, dtype=float)
    for s in reversed(tuple(word)):
        x = apply_sigma(s, x, form)
    return x


def simple_root(s: int, rank: int) -> np.ndarray:
    e = np.zeros(rank)
    e[s] = 1.0
    return e


def root_sign(x: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    """+1 for a positive root, -1 for a negative one; raises inside the band."""
    lo, hi = float(np.min(x)), float(np.max(x))
    if hi > tol and lo >= -tol:
        return 1
    if lo < -tol and hi <= tol:
        return -1
    raise ToleranceError(f"root with coordinates in [{lo:.3g}, {hi:.3g}] has no decidable sign")


def is_descent(g: "Element", s: int, form: BilinearForm, tol: float = DEFAULT_TOL) -> bool:
    """Whether l(s g) < l(g), read off the sign of g^-1(alpha_s)."""
    return _backend.is_left_descent(g.word, s, form.b, tol)


@dataclass(frozen=True)
class Reflection:
    element: "Element"
    root: tuple[float, ...]

    def __str__(self):
        return str(self.element)


def enumerate_reflections(ball: "Ball", group: "CoxeterGroup") -> list[Reflection]:
    """All conjugates u^-1 s u that lie in ``ball``, each with its positive root.

    Ordered by (length, ShortLex) of the reflection.
    """
    found: dict = {}
    n = group.rank
    for u in ball.elements:
        inv = tuple(reversed(u.word))
        for s in range(n):
            t = group.reduce(inv + (s,) + u.word)
            if t in found or t not in ball.index:
                continue
            root = act(inv, simple_root(s, n), group.form)
            if root_sign(root, group.tol) < 0:
                root = -root
            found[t] = Reflection(t, tuple(float(v) for v in root))
    return [found[t] for t in sorted(found, key=lambda e: e.key)]


class ReflectionTable:
    """Reflections of a ball with fixed bit positions for N-set bitsets."""

    def __init__(self, reflections: list[Reflection], radius: int):
        self.reflections = tuple(reflections)
        self.radius = radius
        self.index = {r.element: k for k, r in enumerate(self.reflections)}

    @classmethod
    def from_ball(cls, ball: "Ball", group: "CoxeterGroup") -> "ReflectionTable":
        return cls(enumerate_reflections(ball, group), ball.radius)

    def __len__(self):
        return len(self.reflections)

    def __contains__(self, element):
        return element in self.index

    def position(self, element) -> int:
        return self.index[element]

    def __getitem__(self, k: int) -> Reflection:
        return self.reflections[k]
