"""Certified positive definiteness of two families of functions on Z and Z^k.

``mu_search`` finds a dyadic mu with m -> q^(m^2 - mu |m|) positive definite
on Z by showing its Fourier series is bounded away from zero on a grid,
after subtracting an explicit truncation tail and a Lipschitz slack.

``mu_prime_search`` finds a dyadic mu' with
(m_1..m_k) -> q^(sum |m_i| - mu' |sum m_i|) positive definite on Z^k: the
deviation from the product of Poisson kernels is dominated, via
|sum m_i| <= sum |m_i|, by a difference of geometric series, which must stay
below the Poisson minimum ((1 - q)/(1 + q))^k.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

TAIL_TOL = 1e-12
MAX_DYADIC_EXPONENT = 40


def _check_q(q: float) -> float:
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    return q


# --- Gaussian family on Z ---------------------------------------------------


def _gauss_coeff(q: float, mu: float, j) -> np.ndarray:
    j = np.asarray(j, dtype=float)
    return q ** (j * j - mu * np.abs(j))


def _gauss_truncation(q: float, mu: float, tail_tol: float = TAIL_TOL) -> tuple[int, float]:
    """Smallest J with sum_{|j| > J} q^(j^2 - mu |j|) below ``tail_tol``, and that bound."""
    J = 1
    while True:
        first = float(_gauss_coeff(q, mu, J + 1))
        ratio = q ** (2 * J + 3 - mu)  # bounds a_{j+1}/a_j for every j > J
        tail = 2.0 * first / (1.0 - ratio)
        if tail < tail_tol:
            return J, tail
        J += 1


def gauss_series(q: float, mu: float, t: np.ndarray, J: int) -> np.ndarray:
    """Truncated Psi_mu(t) = sum_{|j| <= J} q^(j^2 - mu |j|) e^{-ijt} (real by symmetry)."""
    t = np.asarray(t, dtype=float)
    out = np.full(t.shape, float(_gauss_coeff(q, mu, 0)))
    for j in range(1, J + 1):
        out += 2.0 * float(_gauss_coeff(q, mu, j)) * np.cos(j * t)
    return out


@dataclass
class MuCertificate:
    q: float
    mu: float | None
    J: int
    grid: int
    grid_min: float
    tail: float
    slack: float
    margin: float
    psi0_min: float
    found: bool

    def to_json(self) -> dict:
        return asdict(self)


def _gauss_candidate(q: float, mu: float, grid: int) -> MuCertificate:
    J, tail = _gauss_truncation(q, mu)
    t = 2.0 * np.pi * np.arange(grid) / grid
    values = gauss_series(q, mu, t, J)
    lip = 2.0 * sum(j * float(_gauss_coeff(q, mu, j)) for j in range(1, J + 1))
    slack = lip * (np.pi / grid)
    grid_min = float(values.min())
    margin = grid_min - tail - slack
    return MuCertificate(q, mu, J, grid, grid_min, tail, slack, margin, math.nan, margin > 0)


def mu_search(q: float, grid: int = 4096) -> MuCertificate:
    """Largest mu in {2^-j : 0 <= j <= 40} with a certified positive Fourier series."""
    q = _check_q(q)
    J0, _ = _gauss_truncation(q, 0.0)
    psi0_min = float(gauss_series(q, 0.0, 2.0 * np.pi * np.arange(grid) / grid, J0).min())
    last = None
    for j in range(MAX_DYADIC_EXPONENT + 1):
        cert = _gauss_candidate(q, 2.0**-j, grid)
        cert.psi0_min = psi0_min
        if cert.margin > 0:
            return cert
        last = cert
    last.mu, last.found = None, False
    return last


def refine_mu(cert: MuCertificate, factor: int = 16) -> float:
    """Minimum of the certified series minus its tail on a ``factor``-times finer grid."""
    if cert.mu is None:
        raise ValueError("certificate carries no mu")
    n = cert.grid * factor
    values = gauss_series(cert.q, cert.mu, 2.0 * np.pi * np.arange(n) / n, cert.J)
    return float(values.min()) - cert.tail


# --- Poisson family on Z^k --------------------------------------------------


def poisson_kernel(q: float, t) -> np.ndarray:
    """Phi(t) = sum_n q^|n| e^{-int} = (1 - q^2) / (1 - 2 q cos t + q^2)."""
    t = np.asarray(t, dtype=float)
    return (1.0 - q * q) / (1.0 - 2.0 * q * np.cos(t) + q * q)


def dominating_sum(q: float, k: int, mu_prime: float) -> float:
    """Closed-form bound on sum_n q^(sum|n_i|) (q^(-mu'|sum n_i|) - 1) over Z^k."""
    p = q ** (1.0 - mu_prime)
    return ((1.0 + p) / (1.0 - p)) ** k - ((1.0 + q) / (1.0 - q)) ** k


@dataclass
class MuPrimeCertificate:
    q: float
    k: int
    mu_prime: float | None
    dominating_sum: float
    poisson_min: float
    margin: float
    found: bool

    def to_json(self) -> dict:
        return asdict(self)


def mu_prime_search(q: float, k: int) -> MuPrimeCertificate:
    """Largest mu' in {2^-j : 1 <= j <= 40} whose dominating sum stays below ((1-q)/(1+q))^k."""
    q = _check_q(q)
    if k < 1:
        raise ValueError("k must be a positive integer")
    floor = ((1.0 - q) / (1.0 + q)) ** k
    cert = None
    for j in range(1, MAX_DYADIC_EXPONENT + 1):
        mp = 2.0**-j
        dom = dominating_sum(q, k, mp)
        cert = MuPrimeCertificate(q, k, mp, dom, floor, floor - dom, dom < floor)
        if cert.found:
            return cert
    cert.mu_prime = None
    return cert


def _poisson_truncation(q: float, k: int, mu_prime: float, tail_tol: float = TAIL_TOL) -> tuple[int, float]:
    # coefficients are dominated by p^(sum |n_i|), p = q^(1 - mu')
    p = q ** (1.0 - mu_prime)
    full = (1.0 + p) / (1.0 - p)
    J = 1
    while True:
        tail = k * (2.0 * p ** (J + 1) / (1.0 - p)) * full ** (k - 1)
        if tail < tail_tol:
            return J, tail
        J += 1


def poisson_grid_min(q: float, k: int, mu_prime: float, points: int, block: int = 512) -> tuple[float, float]:
    """(min over a ``points``^k grid of the truncated Fourier series, truncation tail), k in {1, 2}."""
    J, tail = _poisson_truncation(q, k, mu_prime)
    n = np.arange(-J, J + 1)
    t = 2.0 * np.pi * np.arange(points) / points
    if k == 1:
        c = q ** (np.abs(n) * (1.0 - mu_prime))
        return float((np.cos(np.outer(t, n)) @ c).min()), tail
    if k != 2:
        raise NotImplementedError("grid cross-check is implemented for k = 1 and k = 2")
    n1, n2 = np.meshgrid(n, n, indexing="ij")
    c = q ** (np.abs(n1) + np.abs(n2) - mu_prime * np.abs(n1 + n2))
    cos_t, sin_t = np.cos(np.outer(t, n)), np.sin(np.outer(t, n))
    right_c, right_s = c @ cos_t.T, c @ sin_t.T
    lo = math.inf
    for start in range(0, points, block):
        rows = slice(start, start + block)
        # sum c cos(n1 t1 + n2 t2) = C1 c C2^T - S1 c S2^T
        vals = cos_t[rows] @ right_c - sin_t[rows] @ right_s
        lo = min(lo, float(vals.min()))
    return lo, tail
