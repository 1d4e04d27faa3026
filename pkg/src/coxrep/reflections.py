"""Reflection sets N_g, orbit partitions and the family of intersections.

N_g = {t in T : l(t g) < l(g)}.  From a reduced word w_1 ... w_n of g its
members come out ordered as w_1, w_1 w_2 w_1, ..., w_1 ... w_n ... w_1.
Sets are stored as Python ints used as bitsets over a
:class:`~coxrep.geometry.ReflectionTable`.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from coxrep.coxeter import CoxeterGroup, Element, Word, reduced_words
from coxrep.errors import ReflectionTableTooSmall
from coxrep.geometry import Reflection, ReflectionTable

log = logging.getLogger(__name__)

DEFAULT_ORDER_CAP = 8


@dataclass(frozen=True)
class NSet:
    owner: Element
    ordered: tuple[Reflection, ...]
    members: int

    def __len__(self):
        return len(self.ordered)

    def __contains__(self, t: Element):
        return any(r.element == t for r in self.ordered)


def _ordered_reflections(word: Word, group: CoxeterGroup) -> list[Element]:
    return [group.reduce(word[:k] + tuple(reversed(word[: k - 1]))) for k in range(1, len(word) + 1)]


def n_set(g: Element, table: ReflectionTable, group: CoxeterGroup) -> NSet:
    """N_g in the order induced by the normal form of ``g``."""
    ordered = []
    members = 0
    for t in _ordered_reflections(g.word, group):
        if t not in table:
            raise ReflectionTableTooSmall(
                f"{t} (from N_{g}) is outside the reflection table of radius {table.radius}"
            )
        k = table.position(t)
        ordered.append(table[k])
        members |= 1 << k
    return NSet(g, tuple(ordered), members)


def sym_diff_distance(g: Element, h: Element, table: ReflectionTable, group: CoxeterGroup) -> int:
    """card(N_g symmetric-difference N_h)."""
    return (n_set(g, table, group).members ^ n_set(h, table, group).members).bit_count()


@dataclass(frozen=True)
class OrbitPartition:
    gamma_generators: tuple[Element, ...]
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    escaped: int

    @property
    def count(self) -> int:
        return len(self.classes)


def orbit_partition(
    table: ReflectionTable, gamma: Sequence[Element], group: CoxeterGroup
) -> OrbitPartition:
    """Classes of t ~ gamma^-1 t gamma over the supplied generators and their inverses.

    Conjugates falling outside the table are skipped and counted in ``escaped``.
    """
    n = len(table)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    escaped = 0
    conjugators = []
    for gam in gamma:
        conjugators.append(gam)
        conjugators.append(group.inverse(gam))
    for gam in conjugators:
        for k, refl in enumerate(table.reflections):
            c = group.conjugate(refl.element, gam)
            if c not in table:
                escaped += 1
                continue
            a, b = find(k), find(table.position(c))
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for k in range(n):
        groups.setdefault(find(k), []).append(k)
    classes = tuple(sorted((tuple(v) for v in groups.values()), key=lambda c: c[0]))
    class_of = [0] * n
    for i, cls in enumerate(classes):
        for k in cls:
            class_of[k] = i
    if escaped:
        log.info("%d conjugates left the reflection table of radius %d", escaped, table.radius)
    return OrbitPartition(tuple(gamma), classes, tuple(class_of), escaped)


def class_sequences(nset: NSet, partition: OrbitPartition, table: ReflectionTable) -> dict[int, list[int]]:
    """Table positions of N_g, split by orbit class, each in the order of N_g."""
    out: dict[int, list[int]] = {}
    for r in nset.ordered:
        k = table.position(r.element)
        out.setdefault(partition.class_of[k], []).append(k)
    return out


def initial_segment_check(
    g: Element, u: Element, partition: OrbitPartition, table: ReflectionTable, group: CoxeterGroup
) -> bool:
    """Whether every N_g^i intersected with N_u is an initial segment of N_g^i."""
    ng = n_set(g, table, group)
    nu = n_set(u, table, group).members
    for seq in class_sequences(ng, partition, table).values():
        bits = [(nu >> k) & 1 for k in seq]
        if any(bits[i] < bits[i + 1] for i in range(len(bits) - 1)):
            return False
    return True


def order_independence_check(
    g: Element,
    partition: OrbitPartition,
    table: ReflectionTable,
    group: CoxeterGroup,
    cap: int = DEFAULT_ORDER_CAP,
) -> bool:
    """Whether every reduced word of ``g`` induces the same order on each N_g^i."""
    if len(g) > cap:
        raise ValueError(f"l(g) = {len(g)} exceeds the reduced-word enumeration cap {cap}")
    reference = None
    for word in reduced_words(g, group.matrix):
        per_class: dict[int, list[int]] = {}
        for t in _ordered_reflections(word, group):
            if t not in table:
                raise ReflectionTableTooSmall(f"{t} is outside the reflection table")
            k = table.position(t)
            per_class.setdefault(partition.class_of[k], []).append(k)
        if reference is None:
            reference = per_class
        elif per_class != reference:
            return False
    return True


@dataclass(frozen=True)
class NgFamily:
    """The distinct sets N_g intersected with N_u over a ball of u.

    ``sets`` are bitsets over table positions, sorted by (cardinality, value).
    """

    base: Element
    nset: NSet
    sets: tuple[int, ...]

    def __len__(self):
        return len(self.sets)

    def cardinalities(self) -> list[int]:
        return [s.bit_count() for s in self.sets]


def n_g_family(g: Element, ball, table: ReflectionTable, group: CoxeterGroup) -> NgFamily:
    """N^g restricted to u in ``ball``; membership t in N_u is tested as l(t u) < l(u)."""
    ng = n_set(g, table, group)
    refl = [(r.element, 1 << table.position(r.element)) for r in ng.ordered]
    seen = set()
    for u in ball.elements:
        mask = 0
        lu = len(u)
        for t, bit in refl:
            if len(group.multiply(t, u)) < lu:
                mask |= bit
        seen.add(mask)
    return NgFamily(g, ng, tuple(sorted(seen, key=lambda s: (s.bit_count(), s))))
