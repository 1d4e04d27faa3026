"""Finite stages of the representations pi_z on the space with Gram form r^d.

A :class:`BallSpace` is a Cayley ball together with the matrix
``G[u, v] = r^{d(u, v)}``, so ``<f, h>_r = f^T G conj(h)``.  Operators map a
domain ball into a (larger) codomain ball; for ``g`` of length at most the
radius difference nothing is truncated, and the largest generalized singular
value is an honest lower bound of the operator norm on the full space.
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from coxrep.coxeter import Ball, CoxeterGroup, Element
from coxrep.errors import BallOverflow
from coxrep.geometry import ReflectionTable
from coxrep.kernels import HermitianKernelMatrix, principal_arg, psd_check
from coxrep.positivity import mu_prime_search
from coxrep.reflections import OrbitPartition, n_g_family, n_set

log = logging.getLogger(__name__)

ENTRY_TOL = 1e-12
CONDITION_LIMIT = 1e12
EIG_FLOOR = 1e-14
KAPPA_RESOLUTION = 2.0**-12
KAPPA_MAX = 2.0
FAMILY_LIMIT = 4000


def _check_r(r: float) -> float:
    r = float(r)
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    return r


def _check_theta(theta: complex) -> complex:
    theta = complex(theta)
    if abs(abs(theta) - 1.0) > ENTRY_TOL:
        raise ValueError(f"theta must be unimodular, got |theta| = {abs(theta)}")
    return theta


def _split(z: complex) -> tuple[float, complex]:
    z = complex(z)
    r = abs(z)
    if not 0.0 < r < 1.0:
        raise ValueError(f"z must satisfy 0 < |z| < 1, got {z}")
    return r, z / r


@dataclass(frozen=True)
class BallSpace:
    ball: Ball
    r: float
    gram: HermitianKernelMatrix
    distances: np.ndarray
    group: CoxeterGroup = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.ball)

    def inner(self, f: np.ndarray, h: np.ndarray) -> complex:
        return complex(np.asarray(f) @ self.gram.entries @ np.conj(h))

    def norm(self, f: np.ndarray) -> float:
        return math.sqrt(max(self.inner(f, f).real, 0.0))

    def delta(self, u: Element) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.ball.position(u)] = 1.0
        return v

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.gram.entries)[0])


def build_gram(ball: Ball, r: float, group: CoxeterGroup) -> BallSpace:
    r = _check_r(r)
    d = np.asarray(group.lengths_matrix(ball.elements), dtype=np.int64)
    gram = np.power(r, d.astype(float))
    return BallSpace(ball, r, HermitianKernelMatrix(gram, ball.elements), d, group)


@dataclass(frozen=True)
class BallOperator:
    domain: BallSpace
    codomain: BallSpace
    matrix: np.ndarray

    def __matmul__(self, other: "BallOperator") -> "BallOperator":
        if other.codomain.ball is not self.domain.ball:
            raise ValueError("operator spaces do not compose")
        return BallOperator(other.domain, self.codomain, self.matrix @ other.matrix)

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.matrix @ f

    def is_monomial(self, tol: float = ENTRY_TOL) -> bool:
        nz = np.abs(self.matrix) > tol
        if not np.all(nz.sum(axis=0) == 1):
            return False
        return bool(np.all(np.abs(np.abs(self.matrix[nz]) - 1.0) <= tol))


def _theta_power(theta: complex, k: int) -> complex:
    # integer powers of a unimodular number, exact for +-1 and +-i
    if theta in (1, -1, 1j, -1j):
        return theta ** k
    return cmath.exp(1j * cmath.phase(theta) * k)


def cocycle_diag(u: Element, g: Element, theta: complex, space: BallSpace) -> BallOperator:
    """Diagonal operator f(v) -> theta^(l(u^-1 v) - l(g^-1 v)) f(v) on ``space``."""
    theta = _check_theta(theta)
    group = space.group
    ui, gi = group.inverse(u), group.inverse(g)
    diag = [
        _theta_power(theta, len(group.multiply(ui, v)) - len(group.multiply(gi, v)))
        for v in space.ball.elements
    ]
    return BallOperator(space, space, np.diag(np.asarray(diag, dtype=complex)))


def _translate(g: Element, domain: BallSpace, codomain: BallSpace) -> list[tuple[int, int, Element, Element]]:
    group = domain.group
    out = []
    for j, u in enumerate(domain.ball.elements):
        gu = group.multiply(g, u)
        if gu not in codomain.ball:
            raise BallOverflow(f"{g} * {u} = {gu} leaves the codomain ball of radius {codomain.ball.radius}")
        out.append((j, codomain.ball.position(gu), u, gu))
    return out


def pi_r(g: Element, domain: BallSpace, codomain: BallSpace | None = None) -> BallOperator:
    """Left translation delta_u -> delta_{gu}."""
    codomain = codomain or domain
    A = np.zeros((codomain.dim, domain.dim), dtype=complex)
    for j, i, _, _ in _translate(g, domain, codomain):
        A[i, j] = 1.0
    return BallOperator(domain, codomain, A)


def pi_z(g: Element, z: complex, domain: BallSpace, codomain: BallSpace | None = None) -> BallOperator:
    """delta_u -> theta^(l(gu) - l(u)) delta_{gu} with z = r theta."""
    codomain = codomain or domain
    r, theta = _split(z)
    if abs(r - domain.r) > ENTRY_TOL * max(1.0, r):
        raise ValueError(f"|z| = {r} does not match the space parameter r = {domain.r}")
    A = np.zeros((codomain.dim, domain.dim), dtype=complex)
    for j, i, u, gu in _translate(g, domain, codomain):
        A[i, j] = _theta_power(theta, len(gu) - len(u))
    return BallOperator(domain, codomain, A)


def matrix_coefficient(g: Element, z: complex, domain: BallSpace, codomain: BallSpace | None = None) -> complex:
    """<pi_z(g) delta_e, delta_e>_r computed through the Gram form."""
    codomain = codomain or domain
    r, theta = _split(z)
    if abs(r - codomain.r) > ENTRY_TOL * max(1.0, r):
        raise ValueError(f"|z| = {r} does not match the space parameter r = {codomain.r}")
    e = domain.group.identity
    # only the column of delta_e is needed: pi_z(g) delta_e = theta^l(g) delta_g
    if g not in codomain.ball:
        raise BallOverflow(f"{g} is outside the codomain ball of radius {codomain.ball.radius}")
    image = np.zeros(codomain.dim, dtype=complex)
    image[codomain.ball.position(g)] = _theta_power(theta, len(g))
    return codomain.inner(image, codomain.delta(e))


def _max_entry_gap(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) if a.size else 0.0


@dataclass
class IdentityCheck:
    name: str
    max_error: float
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "max_error": self.max_error, "passed": self.passed}


def verify_cocycle_identities(
    u: Element, g: Element, v: Element, theta: complex, domain: BallSpace, codomain: BallSpace
) -> list[IdentityCheck]:
    """Cocycle and equivariance identities, entrywise to 1e-12.

    The diagonal identities live on ``domain``; equivariance maps it into
    ``codomain`` and so needs ``g * domain`` inside the codomain ball.
    """
    group = domain.group
    checks = []
    c_uu = cocycle_diag(u, u, theta, domain).matrix
    err = _max_entry_gap(c_uu, np.eye(domain.dim))
    checks.append(IdentityCheck("c(u,u) = id", err, err <= ENTRY_TOL))

    lhs = cocycle_diag(u, g, theta, domain).matrix @ cocycle_diag(g, v, theta, domain).matrix
    err = _max_entry_gap(lhs, cocycle_diag(u, v, theta, domain).matrix)
    checks.append(IdentityCheck("c(u,g) c(g,v) = c(u,v)", err, err <= ENTRY_TOL))

    P = pi_r(g, domain, codomain).matrix
    lhs = P @ cocycle_diag(v, u, theta, domain).matrix
    rhs = cocycle_diag(group.multiply(g, v), group.multiply(g, u), theta, codomain).matrix @ P
    err = _max_entry_gap(lhs, rhs)
    checks.append(IdentityCheck("pi(g) c(v,u) = c(gv,gu) pi(g)", err, err <= ENTRY_TOL))
    return checks


def verify_intertwiners(
    g: Element, z: complex, domain: BallSpace, codomain: BallSpace, theta2: complex | None = None
) -> list[IdentityCheck]:
    """Sign character, complex conjugation and multiplicativity in theta."""
    group = domain.group
    A = pi_z(g, z, domain, codomain).matrix
    checks = []
    sign = -1.0 if len(g) % 2 else 1.0
    err = _max_entry_gap(sign * A, pi_z(g, -z, domain, codomain).matrix)
    checks.append(IdentityCheck("(-1)^l(g) pi_z(g) = pi_-z(g)", err, err <= ENTRY_TOL))

    err = _max_entry_gap(np.conj(A), pi_z(g, complex(z).conjugate(), domain, codomain).matrix)
    checks.append(IdentityCheck("conj pi_z(g) conj = pi_conj(z)(g)", err, err <= ENTRY_TOL))

    _, t1 = _split(z)
    t2 = cmath.exp(1j * 0.7) if theta2 is None else _check_theta(theta2)
    e = group.identity
    prod = cocycle_diag(e, g, t1, domain).matrix @ cocycle_diag(e, g, t2, domain).matrix
    err = _max_entry_gap(prod, cocycle_diag(e, g, t1 * t2, domain).matrix)
    checks.append(IdentityCheck("c_t1 c_t2 = c_t1t2", err, err <= ENTRY_TOL))
    return checks


def verify_homomorphism(
    g: Element, h: Element, z: complex, domain: BallSpace, middle: BallSpace, codomain: BallSpace
) -> IdentityCheck:
    """pi_z(g) pi_z(h) = pi_z(gh) from ``domain`` through ``middle`` into ``codomain``."""
    lhs = pi_z(g, z, middle, codomain).matrix @ pi_z(h, z, domain, middle).matrix
    rhs = pi_z(domain.group.multiply(g, h), z, domain, codomain).matrix
    err = _max_entry_gap(lhs, rhs)
    return IdentityCheck("pi_z(g) pi_z(h) = pi_z(gh)", err, err <= ENTRY_TOL)


@dataclass
class NormResult:
    value: float
    condition: float
    flagged: bool


def _inv_sqrt(G: np.ndarray) -> tuple[np.ndarray, float]:
    w, V = np.linalg.eigh(G)
    top = float(w[-1])
    floor = EIG_FLOOR * top
    cond = top / max(float(w[0]), floor)
    w = np.maximum(w, floor)
    return (V / np.sqrt(w)) @ V.conj().T, cond


def restricted_norm(op: BallOperator) -> NormResult:
    """sup ||A f||_cod / ||f||_dom over functions on the domain ball."""
    W, cond = _inv_sqrt(op.domain.gram.entries)
    A = op.matrix
    M = W.conj().T @ (A.conj().T @ op.codomain.gram.entries @ A) @ W
    M = 0.5 * (M + M.conj().T)
    top = float(np.linalg.eigvalsh(M)[-1])
    flagged = cond > CONDITION_LIMIT
    if flagged:
        log.warning("domain Gram matrix is ill-conditioned (condition %.3g)", cond)
    return NormResult(math.sqrt(max(top, 0.0)), cond, flagged)


def theorem_bound(z: complex, kappa: float) -> float:
    """1 + 2 |arg(z^2)| / (kappa |log r|), arg in [-pi, pi)."""
    r, _ = _split(z)
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    a = principal_arg(complex(z) ** 2)
    return 1.0 + 2.0 * abs(a) / (kappa * abs(math.log(r)))


# --- kappa -------------------------------------------------------------------


def family_kernel(sets: Sequence[int], r: float, kappa: float) -> np.ndarray:
    """(U, V) -> r^(kappa min(|U|, |V|) + |U symdiff V|) over bitsets."""
    card = np.array([s.bit_count() for s in sets], dtype=float)
    sym = np.array([[(a ^ b).bit_count() for b in sets] for a in sets], dtype=float)
    return np.power(r, kappa * np.minimum.outer(card, card) + sym)


def _passes(sets, r, kappa) -> bool:
    return psd_check(family_kernel(sets, r, kappa)).passed


def largest_passing_kappa(
    sets: Sequence[int], r: float, resolution: float = KAPPA_RESOLUTION, kappa_max: float = KAPPA_MAX
) -> float:
    """Largest multiple of ``resolution`` in (0, kappa_max] keeping the kernel PSD (0.0 if none)."""
    steps = int(round(kappa_max / resolution))
    coarse = max(1, steps // 16)
    lo = 0
    hi = None
    for k in range(coarse, steps + 1, coarse):
        if _passes(sets, r, k * resolution):
            lo = k
        else:
            hi = k
            break
    if hi is None:
        return lo * resolution
    # invariant: lo passes (or is 0), hi fails
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _passes(sets, r, mid * resolution):
            lo = mid
        else:
            hi = mid
    return lo * resolution


@dataclass
class KappaEstimate:
    g: Element
    r: float
    family_size: int
    kappa_min_grid: float | None
    kappa_lemma: float | None
    psd_margin: float | None
    lemma_psd: bool | None = None
    classes_meeting: int | None = None
    status: str = "ok"

    @property
    def flagged(self) -> bool:
        """Lemma value exceeding the grid value means the two estimates disagree."""
        if self.kappa_lemma is None or self.kappa_min_grid is None:
            return False
        return self.kappa_lemma > self.kappa_min_grid or self.lemma_psd is False

    def to_json(self) -> dict:
        return {
            "g": str(self.g),
            "r": self.r,
            "family_size": self.family_size,
            "kappa_min_grid": self.kappa_min_grid,
            "kappa_lemma": self.kappa_lemma,
            "psd_margin": self.psd_margin,
            "lemma_psd": self.lemma_psd,
            "classes_meeting": self.classes_meeting,
            "flagged": self.flagged,
            "status": self.status,
        }


def kappa_search(
    g: Element,
    r: float,
    ball: Ball,
    group: CoxeterGroup,
    table: ReflectionTable,
    partition: OrbitPartition | None = None,
    resolution: float = KAPPA_RESOLUTION,
) -> KappaEstimate:
    """Largest dyadic kappa making the kernel on N^g (u over ``ball``) positive semidefinite."""
    r = _check_r(r)
    fam = n_g_family(g, ball, table, group)
    if len(fam) > FAMILY_LIMIT:
        log.warning("N^g for %s has %d sets, above the limit %d", g, len(fam), FAMILY_LIMIT)
        return KappaEstimate(g, r, len(fam), None, None, None, status="family-too-large")
    kappa = largest_passing_kappa(fam.sets, r, resolution)
    margin = None
    status = "ok"
    if kappa > 0:
        margin = psd_check(family_kernel(fam.sets, r, kappa)).min_eig
    else:
        status = "no-positive-kappa"
    est = KappaEstimate(g, r, len(fam), kappa if kappa > 0 else None, None, margin, status=status)
    if partition is not None and len(g) > 0:
        ng = n_set(g, table, group)
        classes = {partition.class_of[table.position(t.element)] for t in ng.ordered}
        est.classes_meeting = len(classes)
        cert = mu_prime_search(r, len(classes))
        if cert.found:
            est.kappa_lemma = 2.0 * cert.mu_prime
            est.lemma_psd = _passes(fam.sets, r, est.kappa_lemma)
    return est


def group_kappa(estimates: Iterable[KappaEstimate]) -> float | None:
    """Uniform kappa over the tested elements: the minimum of the per-element values."""
    vals = [e.kappa_min_grid for e in estimates if len(e.g) > 0 and e.kappa_min_grid is not None]
    return min(vals) if vals else None


# --- the uniform bound -------------------------------------------------------


@dataclass
class NormRow:
    g: Element
    z: complex
    norm: float
    bound: float
    kappa_used: float
    condition: float
    passed: bool

    @property
    def ratio(self) -> float:
        return self.norm / self.bound

    def to_json(self) -> dict:
        return {
            "g": str(self.g),
            "z": {"re": self.z.real, "im": self.z.imag},
            "norm": self.norm,
            "bound": self.bound,
            "ratio": self.ratio,
            "kappa_used": self.kappa_used,
            "condition": self.condition,
            "passed": self.passed,
        }


def z_grid(r: float, arg_steps: int) -> list[complex]:
    """r e^{i 2 pi k / arg_steps}, k = 0 .. arg_steps - 1."""
    return [r * cmath.exp(2j * math.pi * k / arg_steps) for k in range(arg_steps)]


def verify_uniform_bound(
    group: CoxeterGroup,
    r: float,
    kappa: float,
    domain_radius: int = 3,
    codomain_radius: int = 6,
    g_max: int = 3,
    arg_steps: int = 16,
    slack: float = 1e-8,
    spaces: tuple[BallSpace, BallSpace] | None = None,
) -> list[NormRow]:
    """restricted_norm(pi_z(g)) <= theorem_bound(z, kappa) (1 + slack) on a (g, z) grid."""
    if codomain_radius < domain_radius + g_max:
        raise ValueError("codomain radius must be at least domain radius + g_max")
    if spaces is None:
        dom = build_gram(group.enumerate_ball(domain_radius), r, group)
        cod = build_gram(group.enumerate_ball(codomain_radius), r, group)
    else:
        dom, cod = spaces
    rows = []
    for g in dom.ball.elements:
        if len(g) > g_max:
            continue
        for z in z_grid(r, arg_steps):
            res = restricted_norm(pi_z(g, z, dom, cod))
            bound = theorem_bound(z, kappa)
            rows.append(NormRow(g, z, res.value, bound, kappa, res.condition, res.value <= bound * (1 + slack)))
    return rows
