"""Words, canonical normal forms, multiplication and Cayley balls.

Elements are stored by their ShortLex-least reduced word.  Two reductions
are provided: :func:`reduce_reference` works purely with braid moves and
cancellations, :func:`reduce_fast` strips left descents detected in the
geometric representation.  They must agree on every word.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from coxrep import _backend
from coxrep.errors import BallCapExceeded, MalformedMatrixError, ToleranceError
from coxrep.geometry import DEFAULT_TOL, build_form
from coxrep.matrix import INF, CoxeterMatrix

log = logging.getLogger(__name__)

Word = tuple[int, ...]

DEFAULT_BALL_CAP = 200_000


@dataclass(frozen=True)
class Element:
    """A group element, held as its canonical (ShortLex-least reduced) word."""

    word: Word

    @property
    def key(self) -> tuple[int, Word]:
        return (len(self.word), self.word)

    def __len__(self):
        return len(self.word)

    def __lt__(self, other: "Element"):
        return self.key < other.key

    def __str__(self):
        return ".".join(f"s{i}" for i in self.word)

    def __repr__(self):
        return f"Element({str(self) or 'e'})"


def parse_word(text: str, rank: int) -> Word:
    """Parse ``"s0.s1.s0"`` (empty string or ``"e"`` for the identity)."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    letters = []
    for part in text.split("."):
        part = part.strip()
        if not part.startswith("s") or not part[1:].isdigit():
            raise ValueError(f"bad generator name {part!r} in {text!r}")
        k = int(part[1:])
        if not 0 <= k < rank:
            raise ValueError(f"generator {part} out of range for rank {rank}")
        letters.append(k)
    return tuple(letters)


def _check_letters(word: Sequence[int], rank: int) -> Word:
    word = tuple(int(s) for s in word)
    for s in word:
        if not 0 <= s < rank:
            raise MalformedMatrixError(f"letter {s} out of range [0, {rank})")
    return word


def braid_neighbours(word: Word, matrix: CoxeterMatrix) -> Iterable[Word]:
    """Words obtained by a single braid move s t s ... -> t s t ... of length m(s, t)."""
    n = len(word)
    for i in range(n - 1):
        s, t = word[i], word[i + 1]
        if s == t:
            continue
        m = matrix.m[s][t]
        if m == INF or i + m > n:
            continue
        m = int(m)
        if all(word[i + k] == (s if k % 2 == 0 else t) for k in range(m)):
            swapped = tuple(t if k % 2 == 0 else s for k in range(m))
            yield word[:i] + swapped + word[i + m:]


def braid_class(word: Word, matrix: CoxeterMatrix) -> set[Word]:
    seen = {word}
    frontier = [word]
    while frontier:
        nxt = []
        for w in frontier:
            for v in braid_neighbours(w, matrix):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


@lru_cache(maxsize=1 << 18)
def _reference(word: Word, matrix: CoxeterMatrix) -> Word:
    current = word
    while True:
        cls = braid_class(current, matrix)
        shorter = None
        for w in cls:
            for i in range(len(w) - 1):
                if w[i] == w[i + 1]:
                    shorter = w[:i] + w[i + 2:]
                    break
            if shorter is not None:
                break
        if shorter is None:
            return min(cls)
        current = shorter


def reduce_reference(word: Sequence[int], matrix: CoxeterMatrix) -> Element:
    """Canonical element by exhaustive braid moves and cancellations.

    Exponential in the worst case; used as the oracle for :func:`reduce_fast`.
    """
    return Element(_reference(_check_letters(word, matrix.rank), matrix))


def reduce_fast(word: Sequence[int], matrix: CoxeterMatrix, tol: float = DEFAULT_TOL) -> Element:
    """Canonical element by repeatedly stripping the smallest left descent.

    Raises :class:`ToleranceError` when a root sign is undecidable.
    """
    word = _check_letters(word, matrix.rank)
    return Element(_backend.normal_form(word, build_form(matrix).b, tol))


def reduced_words(g: Element, matrix: CoxeterMatrix) -> list[Word]:
    """All reduced words of ``g`` in ShortLex order (braid closure of its normal form)."""
    return sorted(braid_class(g.word, matrix))


@dataclass(frozen=True)
class Ball:
    radius: int
    elements: tuple[Element, ...]
    index: dict

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self.index

    def position(self, g: Element) -> int:
        return self.index[g]

    def with_length(self, k: int) -> list[Element]:
        return [g for g in self.elements if len(g) == k]

    def sphere_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for g in self.elements:
            sizes[len(g)] += 1
        return sizes


class CoxeterGroup:
    """Group operations over one Coxeter matrix."""

    def __init__(self, matrix: CoxeterMatrix, tol: float = DEFAULT_TOL):
        self.matrix = matrix
        self.tol = tol
        self.form = build_form(matrix)
        self._reduce = lru_cache(maxsize=1 << 20)(self._reduce_uncached)
        self._balls: dict[int, Ball] = {}

    @property
    def rank(self) -> int:
        return self.matrix.rank

    @property
    def identity(self) -> Element:
        return Element(())

    def generator(self, s: int) -> Element:
        return Element((s,))

    @property
    def generators(self) -> list[Element]:
        return [Element((s,)) for s in range(self.rank)]

    def _reduce_uncached(self, word: Word) -> Element:
        try:
            return Element(_backend.normal_form(word, self.form.b, self.tol))
        except ToleranceError:
            log.warning("tolerance failure reducing %s; using braid-move reduction", word)
            return reduce_reference(word, self.matrix)

    def reduce(self, word: Sequence[int]) -> Element:
        return self._reduce(_check_letters(word, self.rank))

    def element(self, text: str) -> Element:
        return self.reduce(parse_word(text, self.rank))

    def multiply(self, *factors: Element) -> Element:
        word: Word = ()
        for f in factors:
            word += f.word
        return self.reduce(word)

    def inverse(self, g: Element) -> Element:
        return self.reduce(tuple(reversed(g.word)))

    def conjugate(self, t: Element, u: Element) -> Element:
        """u^-1 t u."""
        return self.reduce(tuple(reversed(u.word)) + t.word + u.word)

    @staticmethod
    def length(g: Element) -> int:
        return len(g.word)

    def distance(self, g: Element, h: Element) -> int:
        return len(self.reduce(tuple(reversed(g.word)) + h.word).word)

    def is_descent(self, g: Element, s: int) -> bool:
        return _backend.is_left_descent(g.word, s, self.form.b, self.tol)

    def enumerate_ball(self, radius: int, cap: int = DEFAULT_BALL_CAP) -> Ball:
        """Breadth-first ball {g : l(g) <= radius}, sorted by (length, ShortLex)."""
        if radius < 0:
            raise ValueError("radius must be non-negative")
        cached = self._balls.get(radius)
        if cached is not None and len(cached) <= cap:
            return cached
        layers = [[self.identity]]
        total = 1
        for k in range(1, radius + 1):
            nxt = set()
            for g in layers[-1]:
                for s in range(self.rank):
                    h = self.reduce(g.word + (s,))
                    if len(h) == k:
                        nxt.add(h)
            if not nxt:
                break
            total += len(nxt)
            if total > cap:
                raise BallCapExceeded(k - 1, total, cap)
            layers.append(sorted(nxt))
        elements = tuple(g for layer in layers for g in layer)
        ball = Ball(radius, elements, {g: i for i, g in enumerate(elements)})
        self._balls[radius] = ball
        return ball

    def lengths_matrix(self, elements: Sequence[Element]):
        """D[i, j] = d(g_i, g_j) = l(g_i^-1 g_j) as an int64 array."""
        words = [g.word for g in elements]
        try:
            return _backend.lengths_matrix(words, self.form.b, self.tol)
        except ToleranceError:
            log.warning("tolerance failure in distance matrix; using braid-move reduction")
            import numpy as np

            k = len(words)
            D = np.zeros((k, k), dtype=np.int64)
            for i in range(k):
                for j in range(i + 1, k):
                    d = len(reduce_reference(tuple(reversed(words[i])) + words[j], self.matrix))
                    D[i, j] = D[j, i] = d
            return D


def length(g: Element) -> int:
    return len(g.word)


def multiply(a: Element, b: Element, matrix: CoxeterMatrix) -> Element:
    return reduce_fast(a.word + b.word, matrix)


def inverse(g: Element, matrix: CoxeterMatrix) -> Element:
    return reduce_fast(tuple(reversed(g.word)), matrix)


def distance(g: Element, h: Element, matrix: CoxeterMatrix) -> int:
    return len(reduce_fast(tuple(reversed(g.word)) + h.word, matrix))


def enumerate_ball(matrix: CoxeterMatrix, radius: int, cap: int = DEFAULT_BALL_CAP) -> Ball:
    return CoxeterGroup(matrix).enumerate_ball(radius, cap)
