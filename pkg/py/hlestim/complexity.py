"""Total query-complexity calculators for fermionic k-RDM estimation.

Counts are in uses of the state-preparation oracle (or its inverse) and are
exact Python integers. Five strategies are covered: classical shadows,
per-observable amplitude estimation, the symmetry-aware adaptive gradient
methods I and II, and an adaptive gradient baseline without the symmetry
reduction (wyy).
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .config import load_config
from .errors import DomainError, require
from .hsdeg import hs_degree
from .numerics import exact_binomial, log_binomial
from .qae import amplitude_queries_for_precision
from .sampling import min_samples

log = logging.getLogger(__name__)

# Method constants
P_QUBITS = 3
C_DELTA = 1.0 / (80.0 * (1.0 + math.pi) ** 2)
V_COS1 = 0.16515
DELTA_PRIME = 2.0 ** -10
EPS_HS = 2.0 ** -14
MU_METHOD1 = 0.011 + 1.0 / 12.0
MU_METHOD2 = 0.011
MSE_RATIO = 40.0 / 11.0


class Method(str, Enum):
    SHADOW = "shadow"
    QAE = "qae"
    WYY = "wyy"
    METHOD1 = "method1"
    METHOD2 = "method2"


SYMMETRY_METHODS = (Method.METHOD1, Method.METHOD2)
SWEEP_COLUMNS = tuple(m.value for m in Method)

# Asymptotic scalings, reported for reference only.
SCALINGS = {
    Method.SHADOW: ("O(N^k)/eps^2", "N"),
    Method.QAE: ("O(N^(2k))/eps", "N + log2(1/eps) + o(N)"),
    Method.WYY: ("O~(N^(k+1/2))/eps", "O(N^(2k))"),
    Method.METHOD1: ("O~(N^(k/2))/eps", "O(N^(2k))"),
    Method.METHOD2: ("O~(N^(k/2))/eps", "O(k N^(2k) log(N/eps))"),
}


# -----------------------
# Records
# -----------------------

@dataclass(frozen=True)
class ComplexityParams:
    N: int
    eta: int
    k: int
    eps: float
    method: Method = Method.METHOD1

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "method", Method(self.method))
        except ValueError:
            raise DomainError(f"unknown method {self.method!r}; expected one of {SWEEP_COLUMNS}") from None
        for name in ("N", "eta", "k"):
            value = getattr(self, name)
            require(isinstance(value, int) and not isinstance(value, bool) and value >= 0,
                    f"{name} must be a nonnegative integer (got {value!r})")
        require(1 <= self.k <= self.N, f"k must satisfy 1 <= k <= N (got N={self.N}, k={self.k})")
        require(self.eta <= self.N, f"eta must satisfy eta <= N (got N={self.N}, eta={self.eta})")
        require(0.0 < self.eps < 1.0, f"eps must lie in (0, 1) (got {self.eps!r})")
        if self.method in SYMMETRY_METHODS:
            require(self.k <= self.eta <= self.N - self.k,
                    f"{self.method.value} requires k <= eta <= N - k (got N={self.N}, eta={self.eta}, k={self.k})")

    @property
    def M(self) -> int:
        return exact_binomial(self.N, self.k) ** 2


@dataclass(frozen=True)
class IterationTrace:
    q: int
    delta_q: float
    R_q: int
    sigma: int
    t: float
    Q: int
    L_cum: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SigmaInputs:
    """Inputs of σ = ⌈√(2v‖Σ O_j²‖ ln(2m/δ')) + (4/3) ln(2m/δ')⌉ with m = e^log_dim."""
    norm_bound: float
    log_dim: float
    v: float
    delta_prime: float

    def __post_init__(self) -> None:
        require(self.norm_bound > 0, f"norm_bound must be positive (got {self.norm_bound!r})")
        require(self.log_dim >= 0, f"log_dim must be nonnegative (got {self.log_dim!r})")
        require(self.v > 0, f"probe variance v must be positive (got {self.v!r})")
        require(0.0 < self.delta_prime < 1.0, f"delta_prime must lie in (0, 1) (got {self.delta_prime!r})")

    @property
    def log_term(self) -> float:
        return math.log(2.0) + self.log_dim - math.log(self.delta_prime)

    def sigma(self) -> int:
        lt = self.log_term
        return math.ceil(math.sqrt(2.0 * self.v * self.norm_bound * lt) + 4.0 / 3.0 * lt)


@dataclass(frozen=True)
class WyyParams:
    variance: float = 0.328125
    mu: float = 0.18 + 1.0 / 12.0
    delta_prime: float = DELTA_PRIME

    def __post_init__(self) -> None:
        require(self.variance > 0, f"wyy variance must be positive (got {self.variance!r})")
        require(0.0 < self.mu < 0.5, f"wyy mu must lie in (0, 1/2) (got {self.mu!r})")
        require(0.0 < self.delta_prime < 1.0, f"wyy delta_prime must lie in (0, 1) (got {self.delta_prime!r})")


@dataclass
class SweepRow:
    axis_value: float
    eta: Optional[int]
    counts: Dict[str, Optional[int]] = field(default_factory=dict)


@dataclass
class SweepTable:
    axis: str
    rows: List[SweepRow]

    def column(self, method: str) -> List[Optional[int]]:
        return [row.counts.get(method) for row in self.rows]


# -----------------------
# Shared pieces
# -----------------------

def _check_range(N: int, eta: int, k: int) -> None:
    ComplexityParams(N, eta, k, 0.5, Method.METHOD1)


def _check_basic(N: int, k: int, eps: float) -> None:
    ComplexityParams(N, 0, k, eps, Method.SHADOW)


def sector_norm_bound(N: int, eta: int, k: int) -> int:
    """2·C(η,k)·C(N-η+k,k), the bound on ‖Π_η Σ_j O_j² Π_η‖."""
    return 2 * exact_binomial(eta, k) * exact_binomial(N - eta + k, k)


def q_max_for(eps: float) -> int:
    require(0.0 < eps < 1.0, f"eps must lie in (0, 1) (got {eps!r})")
    return max(0, math.ceil(math.log2(1.0 / (math.sqrt(MSE_RATIO) * eps))))


def delta_schedule(q_max: int) -> List[float]:
    """δ^(q) = c / 8^(q_max - q) for q = 0 .. q_max."""
    return [C_DELTA / 8.0 ** (q_max - q) for q in range(q_max + 1)]


def hubbard_filling(N: int) -> int:
    """η = ⌈7N/8⌉"""
    return (7 * N + 7) // 8


# -----------------------
# Algorithms
# -----------------------

def shadow_queries(N: int, k: int, eps: float) -> int:
    """⌈ε⁻²·C(2N,2k)/C(N,k)⌉, evaluated exactly on the binary value of ε."""
    _check_basic(N, k, eps)
    ratio = Fraction(exact_binomial(2 * N, 2 * k), exact_binomial(N, k))
    return math.ceil(ratio / Fraction(eps) ** 2)


def qae_queries(N: int, k: int, eps: float) -> int:
    """C(N,k)²·(2^q + 1) with q = ⌈log₂(π/ε)⌉."""
    _check_basic(N, k, eps)
    _, per_observable = amplitude_queries_for_precision(eps)
    return exact_binomial(N, k) ** 2 * per_observable


def sigma_method1(N: int, eta: int, k: int, v: float = V_COS1, delta_prime: float = DELTA_PRIME) -> int:
    """σ_Δ = ⌈√(4v C(η,k) C(N-η+k,k) ln(2C(N,η)/δ')) + (4/3) ln(2C(N,η)/δ')⌉"""
    _check_range(N, eta, k)
    return SigmaInputs(sector_norm_bound(N, eta, k), log_binomial(N, eta), v, delta_prime).sigma()


def sigma_method2(N: int, eta: int, k: int, v: float, delta_prime: float, R: int) -> int:
    """σ̃_Δ: sigma_method1 with the variance term multiplied by R."""
    _check_range(N, eta, k)
    require(isinstance(R, int) and R >= 1, f"R must be a positive integer (got {R!r})")
    return SigmaInputs(R * sector_norm_bound(N, eta, k), log_binomial(N, eta), v, delta_prime).sigma()


def method1_queries(N: int, eta: int, k: int, eps: float,
                    v: float = V_COS1, delta_prime: float = DELTA_PRIME) -> Tuple[int, List[IterationTrace]]:
    """Adaptive gradient estimation restricted to the η-particle sector, median of R shots per round."""
    params = ComplexityParams(N, eta, k, eps, Method.METHOD1)
    log_2m = math.log(2 * params.M)
    sigma = sigma_method1(N, eta, k, v, delta_prime)
    q_max = q_max_for(eps)

    total = 0
    trace: List[IterationTrace] = []
    for q, delta in enumerate(delta_schedule(q_max)):
        R = min_samples(MU_METHOD1, math.log(delta) - log_2m)
        t = 2.0 ** (P_QUBITS + q + 1) * sigma
        Q = hs_degree(t, EPS_HS)
        total += 2 * Q * R
        trace.append(IterationTrace(q, delta, R, sigma, t, Q, total))
    log.info("[METHOD1] N=%d eta=%d k=%d eps=%g q_max=%d sigma=%d L=%d", N, eta, k, eps, q_max, sigma, total)
    return total, trace


def method2_queries(N: int, eta: int, k: int, eps: float,
                    v: float = V_COS1) -> Tuple[int, List[IterationTrace]]:
    """Method I with the R repetitions folded into one coherent round per iteration."""
    params = ComplexityParams(N, eta, k, eps, Method.METHOD2)
    log_2m = math.log(2 * params.M)
    q_max = q_max_for(eps)

    total = 0
    trace: List[IterationTrace] = []
    for q, delta in enumerate(delta_schedule(q_max)):
        R = min_samples(MU_METHOD2, math.log(delta) - log_2m)
        sigma = sigma_method2(N, eta, k, v, delta ** 2 / 80.0, R)
        t = 2.0 ** (P_QUBITS + q + 1) * sigma
        Q = hs_degree(t, delta ** 2 / 2.0 ** 6)
        total += 2 * Q
        trace.append(IterationTrace(q, delta, R, sigma, t, Q, total))
    log.info("[METHOD2] N=%d eta=%d k=%d eps=%g q_max=%d L=%d", N, eta, k, eps, q_max, total)
    return total, trace


def sigma_wyy(N: int, k: int, wyy: Optional[WyyParams] = None) -> int:
    """σ = ⌈√(2vM ln(2·2^N/δ')) + (4/3) ln(2·2^N/δ')⌉ with the full-space norm bound M."""
    wyy = wyy or WyyParams()
    M = exact_binomial(N, k) ** 2
    return SigmaInputs(M, N * math.log(2.0), wyy.variance, wyy.delta_prime).sigma()


def wyy_queries(N: int, k: int, eps: float,
                wyy: Optional[WyyParams] = None) -> Tuple[int, List[IterationTrace]]:
    """Adaptive gradient baseline on the full 2^N-dimensional space with a uniform probe."""
    _check_basic(N, k, eps)
    wyy = wyy or WyyParams()
    log_m = math.log(exact_binomial(N, k) ** 2)
    sigma = sigma_wyy(N, k, wyy)
    q_max = q_max_for(eps)

    total = 0
    trace: List[IterationTrace] = []
    for q, delta in enumerate(delta_schedule(q_max)):
        R = min_samples(wyy.mu, math.log(delta) - log_m)
        t = 2.0 ** (P_QUBITS + q + 1) * sigma
        Q = hs_degree(t, EPS_HS)
        total += 2 * Q * R
        trace.append(IterationTrace(q, delta, R, sigma, t, Q, total))
    log.info("[WYY] N=%d k=%d eps=%g q_max=%d sigma=%d L=%d", N, k, eps, q_max, sigma, total)
    return total, trace


def run_method(params: ComplexityParams, wyy: Optional[WyyParams] = None) -> Tuple[int, List[IterationTrace]]:
    """Dispatch on params.method; shadow and qae have no iteration trace."""
    m = params.method
    if m is Method.SHADOW:
        return shadow_queries(params.N, params.k, params.eps), []
    if m is Method.QAE:
        return qae_queries(params.N, params.k, params.eps), []
    if m is Method.WYY:
        return wyy_queries(params.N, params.k, params.eps, wyy)
    if m is Method.METHOD1:
        return method1_queries(params.N, params.eta, params.k, params.eps)
    return method2_queries(params.N, params.eta, params.k, params.eps)


def scaling(method: Method | str) -> Dict[str, str]:
    query, space = SCALINGS[Method(method)]
    return {"query": query, "space": space}


def space_complexity(method: Method | str) -> str:
    return SCALINGS[Method(method)][1]


# -----------------------
# Sweeps
# -----------------------

def _sweep_point(N: int, eta: int, k: int, eps: float, wyy: Optional[WyyParams]) -> Dict[str, Optional[int]]:
    counts: Dict[str, Optional[int]] = {}
    for method in Method:
        try:
            counts[method.value] = run_method(ComplexityParams(N, eta, k, eps, method), wyy)[0]
        except DomainError as e:
            log.warning("[SWEEP] %s left empty at N=%d eta=%d k=%d eps=%g: %s", method.value, N, eta, k, eps, e)
            counts[method.value] = None
    return counts


def complexity_sweep(params: ComplexityParams, axis: str, values: Sequence, hubbard: bool = False,
                     wyy: Optional[WyyParams] = None, workers: Optional[int] = None) -> SweepTable:
    """Every method at every axis value.

    Args:
        params: base point; the swept field is replaced by each value
        axis: "eps" or "N"
        values: non-empty ascending axis values
        hubbard: when sweeping N, fill η = ⌈7N/8⌉ instead of keeping params.eta
        wyy: baseline overrides
        workers: thread-pool width (config default)

    Returns:
        SweepTable with one row per value; cells that violate a precondition are None
    """
    require(axis in ("eps", "N"), f"axis must be 'eps' or 'N' (got {axis!r})")
    values = list(values)
    require(len(values) > 0, "sweep needs at least one axis value")
    require(all(a <= b for a, b in zip(values, values[1:])), "sweep values must be sorted ascending")
    if axis == "N":
        require(all(int(v) == v and v >= 1 for v in values), f"N values must be positive integers (got {values!r})")

    def point(value) -> SweepRow:
        if axis == "eps":
            N, eta, eps = params.N, params.eta, float(value)
        else:
            N = int(value)
            eta = hubbard_filling(N) if hubbard else params.eta
            eps = params.eps
        return SweepRow(axis_value=value, eta=eta, counts=_sweep_point(N, eta, params.k, eps, wyy))

    workers = workers or load_config().workers
    log.info("[SWEEP] %d points along %s on %d workers", len(values), axis, workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(executor.map(point, values))
    return SweepTable(axis=axis, rows=rows)
