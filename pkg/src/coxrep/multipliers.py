"""Fourier coefficients of z -> z^l(g), the multiplier bound, and Fejer smoothing.

The coefficient route evaluates the matrix coefficient of pi_{r e^{it}} on a
trapezoidal grid in t.  All integrands here are trigonometric polynomials of
bounded degree, so a grid of Q points recovers coefficients of degree < Q
exactly up to rounding.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from coxrep.coxeter import CoxeterGroup, Element
from coxrep.gns import BallSpace, build_gram, matrix_coefficient

MIN_QUADRATURE = 64


def _check_quadrature(Q: int, degree: int) -> int:
    if Q < MIN_QUADRATURE or Q & (Q - 1):
        raise ValueError(f"Q must be a power of two >= {MIN_QUADRATURE}, got {Q}")
    if Q < 4 * degree:
        raise ValueError(f"Q = {Q} is too small for degree {degree} (need Q >= {4 * degree})")
    return Q


def _pow2_at_least(n: int) -> int:
    q = MIN_QUADRATURE
    while q < n:
        q *= 2
    return q


def coefficient_curve(g: Element, r: float, ts: np.ndarray, space: BallSpace) -> np.ndarray:
    """phi(t) = <pi_{r e^{it}}(g) delta_e, delta_e>_r at each t."""
    return np.array([matrix_coefficient(g, r * np.exp(1j * t), space) for t in ts])


def chi_coefficient(g: Element, n: int, r: float, space: BallSpace, Q: int | None = None) -> complex:
    """(1/2pi) int phi_{r e^{it}}(g) e^{-int} dt by the Q-point trapezoid rule."""
    if n < 0:
        raise ValueError("n must be non-negative")
    degree = max(n, len(g))
    Q = _check_quadrature(Q if Q is not None else _pow2_at_least(4 * degree), degree)
    t = 2.0 * np.pi * np.arange(Q) / Q
    vals = coefficient_curve(g, r, t, space)
    return complex(np.mean(vals * np.exp(-1j * n * t)))


def char_bound(n: int, kappa: float) -> float:
    """2 pi e (1 + 4 pi n / kappa)."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    return 2.0 * math.pi * math.e * (1.0 + 4.0 * math.pi * n / kappa)


def char_bound_chain(n: int, kappa: float) -> dict:
    """The stages behind :func:`char_bound`, evaluated at r = e^(-1/n).

    ||chi_n|| <= r^-n sup_t ||pi_{r e^{it}}|| <= 2 pi r^-n (1 + 4 pi / (kappa |log r|)).
    """
    if n < 1:
        return {"n": n, "kappa": kappa, "r": None, "final": char_bound(n, kappa)}
    r = math.exp(-1.0 / n)
    r_pow = r ** (-n)
    sup_norm = 1.0 + 4.0 * math.pi / (kappa * abs(math.log(r)))
    staged = 2.0 * math.pi * r_pow * sup_norm
    return {
        "n": n,
        "kappa": kappa,
        "r": r,
        "r_pow_minus_n": r_pow,
        "sup_norm_bound": sup_norm,
        "staged": staged,
        "final": char_bound(n, kappa),
    }


def series_tail_bound(z: complex, n0: int, kappa: float = 1.0) -> float:
    """sum_{n >= n0} char_bound(n, kappa) |z|^n in closed form."""
    x = abs(complex(z))
    if x >= 1.0:
        raise ValueError("|z| must be < 1")
    if n0 < 0:
        raise ValueError("n0 must be non-negative")
    xn = x**n0
    geo = xn / (1.0 - x)
    lin = xn * (n0 * (1.0 - x) + x) / (1.0 - x) ** 2
    return 2.0 * math.pi * math.e * (geo + 4.0 * math.pi / kappa * lin)


# --- Fejer -------------------------------------------------------------------


@dataclass(frozen=True)
class FejerWeights:
    N: int
    weights: np.ndarray  # w[k + N] = 1 - |k| / (N + 1), |k| <= N

    def __getitem__(self, k: int) -> float:
        if abs(k) > self.N:
            return 0.0
        return float(self.weights[k + self.N])


def fejer_weights(N: int) -> FejerWeights:
    if N < 0:
        raise ValueError("N must be non-negative")
    k = np.arange(-N, N + 1)
    return FejerWeights(N, 1.0 - np.abs(k) / (N + 1))


def fejer_eval(N: int, t) -> np.ndarray:
    """F_N(t) = 1 + 2 sum_{k=1}^{N} (1 - k/(N+1)) cos(kt)."""
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    for k in range(1, N + 1):
        out += 2.0 * (1.0 - k / (N + 1)) * np.cos(k * t)
    return out


def fejer_closed_form(N: int, t) -> np.ndarray:
    """(1/(N+1)) (sin((N+1)t/2) / sin(t/2))^2, with value N+1 where sin(t/2) = 0."""
    t = np.asarray(t, dtype=float)
    s = np.sin(t / 2.0)
    small = np.abs(s) < 1e-12
    safe = np.where(small, 1.0, s)
    val = np.sin((N + 1) * t / 2.0) ** 2 / (safe**2 * (N + 1))
    return np.where(small, float(N + 1), val)


def psi_Nr(g: Element, N: int, r: float) -> float:
    """(1 - l(g)/(N+1)) r^l(g) for l(g) <= N, else 0."""
    n = len(g)
    if n > N:
        return 0.0
    return (1.0 - n / (N + 1)) * r**n


def psi_Nr_quadrature(g: Element, N: int, r: float, space: BallSpace, Q: int | None = None) -> float:
    """(1/2pi) int F_N(t) phi_{r e^{it}}(g) dt on a trapezoid grid."""
    degree = N + len(g) + 1
    Q = _check_quadrature(Q if Q is not None else _pow2_at_least(4 * degree), degree)
    t = 2.0 * np.pi * np.arange(Q) / Q
    vals = fejer_eval(N, t) * coefficient_curve(g, r, t, space)
    return float(np.mean(vals).real)


@dataclass
class DemoEntry:
    N: int
    r: float
    sup_dev: float
    at_radius: float
    argmax_length: int

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "sup_dev": self.sup_dev,
            "at_radius": self.at_radius,
            "argmax_length": self.argmax_length,
        }


@dataclass
class DemoReport:
    radius: int
    entries: list[DemoEntry]
    quadrature_gap: float | None

    @property
    def strictly_decreasing(self) -> bool:
        s = [e.sup_dev for e in self.entries]
        return all(a > b for a, b in zip(s, s[1:]))

    @property
    def non_increasing(self) -> bool:
        s = [e.sup_dev for e in self.entries]
        return all(a >= b for a, b in zip(s, s[1:]))

    @property
    def final(self) -> float:
        return self.entries[-1].sup_dev

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "entries": [e.to_json() for e in self.entries],
            "strictly_decreasing": self.strictly_decreasing,
            "quadrature_gap": self.quadrature_gap,
        }


def closed_form_deviation(length: int, N: int, r: float) -> float:
    """|1 - psi_{N,r}| at an element of the given length."""
    if length > N:
        return 1.0
    return abs(1.0 - (1.0 - length / (N + 1)) * r**length)


def parse_schedule(text: str) -> list[tuple[int, float]]:
    """'10:0.9,50:0.98' -> [(10, 0.9), (50, 0.98)]."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        n, r = part.split(":")
        out.append((int(n), float(r)))
    if not out:
        raise ValueError("schedule is empty")
    return out


def approximate_identity_demo(
    group: CoxeterGroup,
    radius: int,
    schedule: Sequence[tuple[int, float]],
    cross_check: bool = True,
) -> DemoReport:
    """sup over l(g) <= radius of |psi_{N,r}(g) - 1| along ``schedule``.

    With ``cross_check`` the closed form is compared against Fejer quadrature
    of the GNS coefficient on every ball element; the largest gap is recorded.
    """
    if not schedule:
        raise ValueError("schedule is empty")
    ball = group.enumerate_ball(radius)
    reach = max(len(g) for g in ball.elements)
    entries = []
    gap = 0.0 if cross_check else None
    for N, r in schedule:
        devs = [abs(psi_Nr(g, N, r) - 1.0) for g in ball.elements]
        k = int(np.argmax(devs))
        entries.append(DemoEntry(N, r, float(devs[k]), closed_form_deviation(reach, N, r), len(ball.elements[k])))
        if cross_check:
            space = build_gram(ball, r, group)
            for g in ball.elements:
                gap = max(gap, abs(psi_Nr_quadrature(g, N, r, space) - psi_Nr(g, N, r)))
    return DemoReport(radius, entries, gap)
