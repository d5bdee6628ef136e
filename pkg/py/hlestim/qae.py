"""Mean-squared-error analysis of amplitude estimation with a general probe.

The probe register holds amplitudes α_k (k = 0 .. 2^q - 1). With the estimator
â = sin²(lπ/2^q) the MSE is a quadratic form α†W(θ)α + C(θ) where W is banded
(first and second off-diagonals) with two corner terms from the wrap-around of
the Fourier sum.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple, TypeVar, Union

import numpy as np

from .config import load_config
from .errors import DomainError, require
from .linalg import min_eigenpair
from .probe import ProbeFamily, ProbeState, explicit_probe, make_probe

log = logging.getLogger(__name__)

MIN_Q = 3
MAX_DISTRIBUTION_Q = 10
OPTIMAL_Q_RANGE = (3, 9)
HALF_PI = math.pi / 2
DEFAULT_THETA_LO = 0.01
DEFAULT_THETA_HI = HALF_PI - 0.01


@dataclass(frozen=True)
class QaeSpec:
    q: int
    theta: float

    def __post_init__(self) -> None:
        require(isinstance(self.q, (int, np.integer)) and self.q >= MIN_Q,
                f"QaeSpec requires q >= {MIN_Q} (got {self.q!r})")
        require(0.0 <= self.theta <= HALF_PI + 1e-15,
                f"QaeSpec requires theta in [0, pi/2] (got {self.theta!r})")

    @property
    def n(self) -> int:
        return 1 << self.q

    @property
    def amplitude(self) -> float:
        """a = sin²θ"""
        return math.sin(self.theta) ** 2


@dataclass(frozen=True)
class QaeDistribution:
    probs: np.ndarray

    @property
    def estimates(self) -> np.ndarray:
        n = self.probs.size
        return np.sin(np.arange(n) * math.pi / n) ** 2


@dataclass(frozen=True)
class MseSweep:
    max: float
    argmax: float
    thetas: np.ndarray
    curve: np.ndarray


@dataclass(frozen=True)
class OptimalProbe:
    state: ProbeState
    mse: float


def _check_length(s: ProbeState, spec: QaeSpec) -> np.ndarray:
    alpha = np.asarray(s.amplitudes, dtype=float)
    if alpha.size != spec.n:
        raise DomainError(f"probe has {alpha.size} amplitudes but q={spec.q} needs {spec.n}")
    return alpha


# -----------------------
# Outcome distribution
# -----------------------

def _branch_probs(alpha: np.ndarray, shift: float) -> np.ndarray:
    """|Σ_k α_k/√n e^{i2π(shift - l/n)k}|² for every l, phases reduced mod 1 first."""
    n = alpha.size
    k = np.arange(n)
    l = np.arange(n)
    turns = np.mod(shift * k, 1.0)[None, :] - np.mod(np.outer(l, k), n) / n
    phases = np.exp(2j * math.pi * np.mod(turns, 1.0))
    amp = phases @ alpha / math.sqrt(n)
    return np.abs(amp) ** 2


def qae_distribution(s: ProbeState, spec: QaeSpec) -> QaeDistribution:
    alpha = _check_length(s, spec)
    require(spec.q <= MAX_DISTRIBUTION_Q, f"qae_distribution supports q <= {MAX_DISTRIBUTION_Q} (got {spec.q})")
    shift = spec.theta / math.pi
    probs = 0.5 * _branch_probs(alpha, -shift) + 0.5 * _branch_probs(alpha, shift)
    return QaeDistribution(probs=probs)


def expected_cosine(s: ProbeState, spec: QaeSpec, order: int) -> float:
    """E[cos(2·order·θ̂)] from adjacent / next-adjacent amplitude products plus wrap terms."""
    alpha = _check_length(s, spec)
    n, theta = spec.n, spec.theta
    if order == 1:
        return float(math.cos(2 * theta) * np.dot(alpha[1:], alpha[:-1])
                     + alpha[0] * alpha[n - 1] * math.cos(2 * (n - 1) * theta))
    if order == 2:
        return float(math.cos(4 * theta) * np.dot(alpha[2:], alpha[:-2])
                     + (alpha[0] * alpha[n - 2] + alpha[1] * alpha[n - 1]) * math.cos(2 * (n - 2) * theta))
    raise DomainError(f"expected_cosine order must be 1 or 2 (got {order!r})")


def mse_from_distribution(s: ProbeState, spec: QaeSpec) -> float:
    dist = qae_distribution(s, spec)
    return float(np.sum(dist.probs * (dist.estimates - spec.amplitude) ** 2))


MseValue = TypeVar("MseValue", float, np.ndarray)


def expectation_mse(amplitude_mse: MseValue) -> MseValue:
    """MSE of ô = 2â - 1 given the MSE of â."""
    return 4.0 * amplitude_mse


# -----------------------
# Quadratic form
# -----------------------

def _coefficients(q: int, theta: Union[float, np.ndarray]) -> Tuple:
    n = 1 << q
    c2, c4 = np.cos(2 * theta), np.cos(4 * theta)
    a = -0.25 * c2 ** 2
    b = c4 / 16.0
    a0 = -0.25 * c2 * np.cos(2 * (n - 1) * theta)
    b1 = np.cos(2 * (n - 2) * theta) / 16.0
    const = 0.25 + c4 / 8.0
    return a, b, a0, b1, const


def w_matrix(spec: QaeSpec) -> Tuple[np.ndarray, float]:
    """(W(θ), C(θ)) with α†Wα + C the MSE of â."""
    n = spec.n
    a, b, a0, b1, const = _coefficients(spec.q, spec.theta)
    w = np.zeros((n, n))
    i = np.arange(n - 1)
    w[i, i + 1] = a
    i = np.arange(n - 2)
    w[i, i + 2] = b
    w[0, n - 1] = a0
    w[0, n - 2] = b1
    w[1, n - 1] = b1
    w = w + w.T
    return w, float(const)


def quadratic_form(s: ProbeState, q: int, thetas) -> np.ndarray:
    """α†W(θ)α + C(θ) for an array of θ, using the band structure of W."""
    alpha = np.asarray(s.amplitudes, dtype=float)
    n = 1 << q
    if alpha.size != n:
        raise DomainError(f"probe has {alpha.size} amplitudes but q={q} needs {n}")
    thetas = np.asarray(thetas, dtype=float)
    a, b, a0, b1, const = _coefficients(q, thetas)
    s1 = float(np.dot(alpha[1:], alpha[:-1]))
    s2 = float(np.dot(alpha[2:], alpha[:-2]))
    wrap1 = alpha[0] * alpha[n - 1]
    wrap2 = alpha[0] * alpha[n - 2] + alpha[1] * alpha[n - 1]
    return 2 * (a * s1 + b * s2 + a0 * wrap1 + b1 * wrap2) + const


def theta_grid(points: int, theta_lo: float = DEFAULT_THETA_LO, theta_hi: float = DEFAULT_THETA_HI) -> np.ndarray:
    require(isinstance(points, (int, np.integer)) and points >= 1, f"grid points must be >= 1 (got {points!r})")
    require(0.0 <= theta_lo < theta_hi <= HALF_PI + 1e-15,
            f"theta range must satisfy 0 <= lo < hi <= pi/2 (got [{theta_lo!r}, {theta_hi!r}])")
    if points == 1:
        return np.array([theta_lo])
    return np.linspace(theta_lo, theta_hi, int(points))


def max_mse(s: ProbeState, q: int, grid_points: int,
            theta_lo: float = DEFAULT_THETA_LO, theta_hi: float = DEFAULT_THETA_HI) -> MseSweep:
    thetas = theta_grid(grid_points, theta_lo, theta_hi)
    curve = quadratic_form(s, q, thetas)
    i = int(np.argmax(curve))
    log.info("[QAE] %s q=%d max mse %.6e at theta=%.6f", s.label, q, curve[i], thetas[i])
    return MseSweep(max=float(curve[i]), argmax=float(thetas[i]), thetas=thetas, curve=curve)


# -----------------------
# Optimal probe
# -----------------------

def optimal_probe(spec: QaeSpec, solver: Optional[str] = None) -> OptimalProbe:
    """Minimum-eigenvalue eigenvector of W(θ) and the MSE it attains."""
    lo, hi = OPTIMAL_Q_RANGE
    require(lo <= spec.q <= hi, f"optimal_probe requires q in [{lo}, {hi}] (got {spec.q})")
    w, const = w_matrix(spec)
    lam, vec = min_eigenpair(w, solver or load_config().eigensolver)
    vec = vec / np.linalg.norm(vec)
    if vec[int(np.argmax(np.abs(vec)))] < 0:
        vec = -vec
    return OptimalProbe(state=explicit_probe(vec), mse=lam + const)


def _optimal_curve(q: int, thetas: np.ndarray, solver: str, workers: int) -> np.ndarray:
    def one(theta: float) -> float:
        w, const = w_matrix(QaeSpec(q, float(theta)))
        if solver == "lapack":
            return float(np.linalg.eigvalsh(w)[0]) + const
        return min_eigenpair(w, solver)[0] + const

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return np.array(list(executor.map(one, thetas)))


def compare_sweep(q: int, points: int, theta_lo: float = DEFAULT_THETA_LO, theta_hi: float = DEFAULT_THETA_HI,
                  solver: Optional[str] = None, workers: Optional[int] = None) -> dict:
    """Sine, uniform and pointwise-optimal MSE on one θ grid.

    Returns:
        dict of equal-length arrays keyed theta, mse_sine, mse_uniform, mse_optimal
    """
    cfg = load_config()
    solver = solver or cfg.eigensolver
    workers = workers or cfg.workers
    thetas = theta_grid(points, theta_lo, theta_hi)
    log.info("[QAE] comparison sweep q=%d over %d points (%s, %d workers)", q, thetas.size, solver, workers)
    return {
        "theta": thetas,
        "mse_sine": quadratic_form(make_probe(ProbeFamily.SINE_QAE, q), q, thetas),
        "mse_uniform": quadratic_form(make_probe(ProbeFamily.UNIFORM, q), q, thetas),
        "mse_optimal": _optimal_curve(q, thetas, solver, workers),
    }


# -----------------------
# Query counts
# -----------------------

def qae_expectation_queries(q: int) -> int:
    """Oracle uses of one q-qubit amplitude estimation: 1 + 2 + Σ 2^q' = 2^q + 1."""
    require(isinstance(q, (int, np.integer)) and q >= 1, f"q must be >= 1 (got {q!r})")
    return (1 << int(q)) + 1


def amplitude_queries_for_precision(eps: float) -> Tuple[int, int]:
    """(q, 2^q + 1) with q = ⌈log₂(π/ε)⌉."""
    require(0.0 < eps < 1.0, f"eps must lie in (0, 1) (got {eps!r})")
    q = math.ceil(math.log2(math.pi / eps))
    return q, qae_expectation_queries(q)
