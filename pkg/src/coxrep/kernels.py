"""Min-kernel forms, phase multipliers and their bound.

For alpha > 1 the kernel k(s, t) = alpha^min(s, t) gives the forms

    [f, h]   = int int alpha^min(s,t) f(s) conj(h(t)) ds dt      (step functions on R_+)
    [f, h]°  = sum_{k,l} alpha^min(k,l) f_k conj(h_l)            (finitely supported on Z_+)

and multiplication by t -> e^{i t psi} (resp. n -> theta^n) is bounded for
them by C = 1 + 2 |psi| / log(alpha), in the sense [Df, Df] <= C^2 [f, f].
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from coxrep.errors import NotHermitian, NotPositiveSemidefinite, QuadratureError

HERMITIAN_RTOL = 1e-12
BOUND_SLACK = 1e-8


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 1.0:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    return alpha


# --- step functions -------------------------------------------------------


@dataclass(frozen=True)
class StepFunction:
    """Piecewise constant f with value ``values[k]`` on [b_k, b_{k+1})."""

    breakpoints: tuple[float, ...]
    values: tuple[complex, ...]

    def __post_init__(self):
        b = self.breakpoints
        if len(b) != len(self.values) + 1:
            raise ValueError("need exactly one more breakpoint than values")
        if any(x < 0 for x in b):
            raise ValueError("breakpoints must be non-negative")
        if any(b[k + 1] <= b[k] for k in range(len(b) - 1)):
            raise ValueError("breakpoints must be strictly increasing")

    @classmethod
    def make(cls, breakpoints: Sequence[float], values: Sequence[complex]) -> "StepFunction":
        return cls(tuple(float(x) for x in breakpoints), tuple(complex(v) for v in values))

    @classmethod
    def indicator(cls, a: float, b: float) -> "StepFunction":
        return cls.make([a, b], [1.0])

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls.make([0.0, 1.0], [0.0])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        b = np.asarray(self.breakpoints)
        v = np.asarray(self.values + (0j,), dtype=complex)
        idx = np.searchsorted(b, t, side="right") - 1
        idx = np.where((idx < 0) | (idx >= len(self.values)), len(self.values), idx)
        return v[idx]

    def integral(self) -> complex:
        b = self.breakpoints
        return sum(v * (b[k + 1] - b[k]) for k, v in enumerate(self.values))


def _refine(f: StepFunction, h: StepFunction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Common breakpoints and the cell values of f and h on them."""
    grid = np.union1d(np.asarray(f.breakpoints), np.asarray(h.breakpoints))
    mids = 0.5 * (grid[:-1] + grid[1:])
    return grid, f(mids), h(mids)


def _expm1_over(x: np.ndarray) -> np.ndarray:
    # (e^x - 1) / x, stable near 0
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-5
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 + x / 2 + x * x / 6, np.expm1(safe) / safe)


def _expm1_sub_over_sq(x: np.ndarray) -> np.ndarray:
    # (e^x - 1 - x) / x^2, stable near 0
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-3
    safe = np.where(small, 1.0, x)
    return np.where(small, 0.5 + x / 6 + x * x / 24 + x**3 / 120, (np.expm1(safe) - safe) / safe**2)


def min_kernel_cells(grid: np.ndarray, alpha: float) -> np.ndarray:
    """K[a, b] = int_{cell a} int_{cell b} alpha^min(s,t) ds dt, in closed form."""
    lam = math.log(alpha)
    lo, hi = grid[:-1], grid[1:]
    width = hi - lo
    # int_cell alpha^s ds
    mass = np.exp(lam * lo) * width * _expm1_over(lam * width)
    n = len(width)
    K = np.empty((n, n))
    # cell a strictly below cell b: min = s, so the integral factors
    below = np.outer(mass, width)
    iu = np.triu_indices(n, 1)
    K[iu] = below[iu]
    K.T[iu] = below[iu]
    # same cell [a, a + L]: 2 int alpha^s (a + L - s) ds
    K[np.diag_indices(n)] = 2.0 * np.exp(lam * lo) * width**2 * _expm1_sub_over_sq(lam * width)
    return K


# --- phase-twisted step functions -----------------------------------------


@dataclass(frozen=True)
class TwistedStep:
    """t -> e^{i t psi} f(t) for a step function f."""

    base: StepFunction
    psi: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * self.psi * t) * self.base(t)

    def _cell_integrals(self, lo, hi):
        # int_lo^hi e^{i psi t} dt, elementwise
        psi = self.psi
        if psi == 0.0:
            return (hi - lo).astype(complex)
        w = hi - lo
        return np.exp(1j * psi * lo) * w * _phase_expm1_over(1j * psi * w)

    def tail(self, u: np.ndarray) -> np.ndarray:
        """F(u) = int_u^inf e^{i t psi} f(t) dt."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        b = np.asarray(self.base.breakpoints)
        v = np.asarray(self.base.values, dtype=complex)
        lo, hi = b[:-1], b[1:]
        active = u[:, None] < hi[None, :]
        start = np.where(active, np.maximum(u[:, None], lo[None, :]), hi[None, :])
        return np.sum(v[None, :] * self._cell_integrals(start, hi[None, :]), axis=1)

    def integral(self) -> complex:
        return complex(self.tail(np.array([0.0]))[0])


def _phase_expm1_over(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-5
    safe = np.where(small, 1.0, z)
    return np.where(small, 1.0 + z / 2 + z * z / 6, np.expm1(safe) / safe)


def apply_dtheta_cont(f: StepFunction, psi: float) -> TwistedStep:
    """Multiplication by e^{i t psi}."""
    return TwistedStep(f, float(psi))


def _as_twisted(f) -> TwistedStep:
    return f if isinstance(f, TwistedStep) else TwistedStep(f, 0.0)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _tail_form(f: TwistedStep, h: TwistedStep, alpha: float, rtol: float = 1e-9, max_levels: int = 20) -> complex:
    """[f, h] through  F(0) conj(H(0)) + log(alpha) int alpha^u F(u) conj(H(u)) du.

    Composite Gauss-Legendre over every cell, halving panels until two
    successive values agree to ``rtol``.
    """
    lam = math.log(alpha)
    cuts = np.union1d(np.asarray(f.base.breakpoints), np.asarray(h.base.breakpoints))
    cuts = np.union1d([0.0], cuts)
    head = f.integral() * np.conj(h.integral())
    previous = None
    for level in range(max_levels + 1):
        panels = 2**level
        lo, hi = cuts[:-1], cuts[1:]
        frac = np.arange(panels + 1) / panels
        edges = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
        a, b = edges[:, :-1].ravel(), edges[:, 1:].ravel()
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        u = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
        integrand = np.exp(lam * u) * f.tail(u) * np.conj(h.tail(u))
        value = head + lam * np.sum(w * integrand)
        if previous is not None and abs(value - previous) <= rtol * max(abs(value), 1e-300):
            return complex(value)
        if previous is not None and abs(value) == 0.0 and abs(previous) == 0.0:
            return 0j
        previous = value
    raise QuadratureError(f"twisted form did not converge in {max_levels} refinement levels")


def form_continuous(f, h, alpha: float) -> complex:
    """[f, h]_alpha for step functions (exact) or twisted step functions (quadrature)."""
    alpha = _check_alpha(alpha)
    if isinstance(f, StepFunction) and isinstance(h, StepFunction):
        grid, fv, hv = _refine(f, h)
        K = min_kernel_cells(grid, alpha)
        return complex(fv @ K @ np.conj(hv))
    return _tail_form(_as_twisted(f), _as_twisted(h), alpha)


def bound_constant(psi: float, alpha: float) -> float:
    """1 + 2 |psi| / log(alpha)."""
    alpha = _check_alpha(alpha)
    return 1.0 + 2.0 * abs(psi) / math.log(alpha)


def principal_arg(z: complex) -> float:
    """Argument in [-pi, pi)."""
    a = cmath.phase(z)
    return -math.pi if a >= math.pi else a


@dataclass
class BoundReport:
    lhs: float
    rhs: float
    constant: float
    passed: bool
    first_power_passed: bool | None = None

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else (0.0 if self.lhs == 0 else math.inf)

    def to_json(self) -> dict:
        out = {"lhs": self.lhs, "rhs": self.rhs, "C": self.constant, "ratio": self.ratio, "pass": self.passed}
        if self.first_power_passed is not None:
            out["first_power_pass"] = self.first_power_passed
        return out


def verify_continuous_bound(f: StepFunction, psi: float, alpha: float) -> BoundReport:
    """[D f, D f] <= C^2 [f, f] for multiplication by e^{i t psi}."""
    c = bound_constant(psi, alpha)
    lhs = form_continuous(apply_dtheta_cont(f, psi), apply_dtheta_cont(f, psi), alpha).real
    rhs = form_continuous(f, f, alpha).real
    return BoundReport(lhs, rhs, c, lhs <= c * c * rhs * (1 + BOUND_SLACK))


# --- discrete ---------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteFn:
    """Finitely supported f : Z_+ -> C."""

    support: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        if any(int(k) != k or k < 0 for k in self.support):
            raise ValueError("support must consist of non-negative integers")

    @classmethod
    def from_dense(cls, values: Sequence[complex]) -> "DiscreteFn":
        return cls({k: complex(v) for k, v in enumerate(values) if v != 0})

    @classmethod
    def delta(cls, k: int) -> "DiscreteFn":
        return cls({k: 1.0 + 0j})

    def dense(self, size: int | None = None) -> np.ndarray:
        n = (max(self.support) + 1 if self.support else 0) if size is None else size
        out = np.zeros(n, dtype=complex)
        for k, v in self.support.items():
            out[k] = v
        return out


def min_kernel_matrix(n: int, alpha: float) -> np.ndarray:
    k = np.arange(n)
    return alpha ** np.minimum.outer(k, k).astype(float)


def form_discrete(f: DiscreteFn, h: DiscreteFn, alpha: float) -> complex:
    alpha = _check_alpha(alpha)
    n = max([0] + [k + 1 for k in f.support] + [k + 1 for k in h.support])
    if n == 0:
        return 0j
    return complex(f.dense(n) @ min_kernel_matrix(n, alpha) @ np.conj(h.dense(n)))


def _check_unimodular(theta: complex) -> complex:
    theta = complex(theta)
    if abs(abs(theta) - 1.0) > 1e-12:
        raise ValueError(f"theta must have modulus 1, |theta| = {abs(theta)!r}")
    return theta


def apply_dtheta_disc(f: DiscreteFn, theta: complex) -> DiscreteFn:
    theta = _check_unimodular(theta)
    return DiscreteFn({k: theta**k * v for k, v in f.support.items()})


def verify_discrete_bound(f: DiscreteFn, theta: complex, alpha: float) -> BoundReport:
    """[D f, D f]° <= C^2 [f, f]°, and whether the first-power bound C [f, f]° also holds."""
    theta = _check_unimodular(theta)
    c = bound_constant(principal_arg(theta), alpha)
    lhs = form_discrete(apply_dtheta_disc(f, theta), apply_dtheta_disc(f, theta), alpha).real
    rhs = form_discrete(f, f, alpha).real
    return BoundReport(
        lhs, rhs, c, lhs <= c * c * rhs * (1 + BOUND_SLACK), lhs <= c * rhs * (1 + BOUND_SLACK)
    )


# --- Hermitian matrices -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class HermitianKernelMatrix:
    entries: np.ndarray
    labels: tuple | None = None

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotHermitian("kernel matrix must be square")
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        if a.size and np.max(np.abs(a - a.conj().T)) > HERMITIAN_RTOL * scale:
            raise NotHermitian("kernel matrix is not Hermitian")
        if self.labels is not None and len(self.labels) != a.shape[0]:
            raise ValueError("one label per row is required")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass
class PSDResult:
    min_eig: float
    passed: bool
    threshold: float


def psd_check(K, tol: float = 1e-9) -> PSDResult:
    """Positive semidefiniteness: min eigenvalue >= -tol * max(1, trace)."""
    if not isinstance(K, HermitianKernelMatrix):
        K = HermitianKernelMatrix(np.asarray(K))
    a = np.asarray(K.entries)
    h = 0.5 * (a + a.conj().T)
    eig = np.linalg.eigvalsh(h)
    thr = -tol * max(1.0, float(np.real(np.trace(h))))
    lo = float(eig[0])
    return PSDResult(lo, lo >= thr, thr)


def corollary_schur(Lam, theta: complex, alpha: float) -> BoundReport:
    """sum theta^k conj(theta)^l alpha^min(k,l) L_kl <= C^2 sum alpha^min(k,l) L_kl for PSD L."""
    if not isinstance(Lam, HermitianKernelMatrix):
        Lam = HermitianKernelMatrix(np.asarray(Lam, dtype=complex))
    theta = _check_unimodular(theta)
    alpha = _check_alpha(alpha)
    if not psd_check(Lam).passed:
        raise NotPositiveSemidefinite("Lambda must be positive semidefinite")
    L = np.asarray(Lam.entries, dtype=complex)
    n = L.shape[0]
    A = min_kernel_matrix(n, alpha)
    p = np.array([theta**k for k in range(n)])
    twisted = np.sum(np.outer(p, np.conj(p)) * A * L)
    plain = np.sum(A * L)
    if abs(twisted.imag) > 1e-9 * max(abs(twisted), 1.0):
        raise ArithmeticError("twisted sum is not real to tolerance")
    c = bound_constant(principal_arg(theta), alpha)
    lhs, rhs = float(twisted.real), float(plain.real)
    return BoundReport(lhs, rhs, c, lhs <= c * c * rhs * (1 + BOUND_SLACK), lhs <= c * rhs * (1 + BOUND_SLACK))
