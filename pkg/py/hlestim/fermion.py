"""Dense Jordan-Wigner oracle for k-RDM observables on N <= 8 modes.

Mode i is the i-th tensor factor (most significant bit of the basis index);
the creation operator carries a Z string on the modes after it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import List, Sequence, Tuple

import numpy as np

from .complexity import DELTA_PRIME, sector_norm_bound, sigma_method1
from .errors import DomainError, require
from .linalg import spectral_norm
from .probe import ProbeState, make_grid, probe_variance

log = logging.getLogger(__name__)

MAX_MODES = 8
MAX_MONTE_CARLO_MODES = 6
MAX_IDENTITY_MODES = 200


class RdmKind(str, Enum):
    RE = "Re"
    IM = "Im"
    DIAG = "Diag"


def _order_key(modes: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...]]:
    return sum(modes), modes


@dataclass(frozen=True)
class RdmLabel:
    p_vec: Tuple[int, ...]
    q_vec: Tuple[int, ...]
    kind: RdmKind

    def __post_init__(self) -> None:
        p, q = tuple(int(i) for i in self.p_vec), tuple(int(i) for i in self.q_vec)
        object.__setattr__(self, "p_vec", p)
        object.__setattr__(self, "q_vec", q)
        try:
            object.__setattr__(self, "kind", RdmKind(self.kind))
        except ValueError:
            raise DomainError(f"unknown observable kind {self.kind!r}") from None
        require(len(p) >= 1 and len(p) == len(q), f"p_vec and q_vec must share a length k >= 1 (got {p}, {q})")
        for v in (p, q):
            require(all(i >= 0 for i in v) and all(a < b for a, b in zip(v, v[1:])),
                    f"mode tuples must be strictly increasing and nonnegative (got {v})")
        if self.kind is RdmKind.DIAG:
            require(p == q, f"Diag requires p_vec == q_vec (got {p}, {q})")
        else:
            require(_order_key(q) < _order_key(p),
                    f"{self.kind.value} requires (|q|_1, q) < (|p|_1, p) (got p={p}, q={q})")

    @property
    def k(self) -> int:
        return len(self.p_vec)


@dataclass(frozen=True)
class SectorNormReport:
    brute_norm: float
    closed_coefficient: float
    upper_bound: float

    def to_dict(self) -> dict:
        return asdict(self)


def _check_modes(N: int, limit: int = MAX_MODES) -> int:
    require(isinstance(N, (int, np.integer)) and 1 <= N <= limit,
            f"mode count N must be in [1, {limit}] (got {N!r})")
    return int(N)


def _check_sector(N: int, eta: int, k: int) -> None:
    require(isinstance(k, (int, np.integer)) and k >= 1, f"k must be a positive integer (got {k!r})")
    require(isinstance(eta, (int, np.integer)) and k <= eta <= N - k,
            f"sector requires k <= eta <= N - k (got N={N}, eta={eta}, k={k})")


# -----------------------
# Ladder operators
# -----------------------

@lru_cache(maxsize=None)
def ladder_operators(N: int) -> Tuple[Tuple[np.ndarray, ...], Tuple[np.ndarray, ...]]:
    """Dense creation / annihilation matrices for N modes."""
    N = _check_modes(N)
    id2 = np.eye(2)
    z = np.diag([1.0, -1.0])
    u = np.array([[0.0, 0.0], [1.0, 0.0]])
    creation = []
    for i in range(N):
        c = np.ones((1, 1))
        for j in range(N):
            c = np.kron(c, id2 if j < i else (u if j == i else z))
        c.setflags(write=False)
        creation.append(c)
    annihilation = []
    for c in creation:
        a = np.ascontiguousarray(c.T)
        a.setflags(write=False)
        annihilation.append(a)
    return tuple(creation), tuple(annihilation)


@lru_cache(maxsize=4096)
def _creation_string(N: int, modes: Tuple[int, ...]) -> np.ndarray:
    """a†_{m1} a†_{m2} ⋯ a†_{mk}"""
    creation, _ = ladder_operators(N)
    out = np.eye(1 << N)
    for m in modes:
        out = out @ creation[m]
    out.setflags(write=False)
    return out


def transition_operator(N: int, p_vec: Sequence[int], q_vec: Sequence[int]) -> np.ndarray:
    """A^p_q = a†_{p1}⋯a†_{pk} a_{qk}⋯a_{q1}, so that A^p_p is a product of number operators."""
    return _creation_string(N, tuple(p_vec)) @ _creation_string(N, tuple(q_vec)).T


def jw_operator(N: int, label: RdmLabel) -> np.ndarray:
    """Hermitian observable for one label: A+A† (Re), i(A-A†) (Im) or A^p_p (Diag)."""
    N = _check_modes(N)
    require(max(label.p_vec + label.q_vec) < N,
            f"label modes {label.p_vec}, {label.q_vec} exceed N={N}")
    a = transition_operator(N, label.p_vec, label.q_vec)
    if label.kind is RdmKind.DIAG:
        return a.copy()
    if label.kind is RdmKind.RE:
        return a + a.T
    return 1j * (a - a.T)


def rdm_labels(N: int, k: int) -> List[RdmLabel]:
    """All C(N,k)² observables: Diag per k-subset, Re and Im per unordered pair."""
    N = _check_modes(N)
    require(1 <= k <= N, f"k must satisfy 1 <= k <= N (got N={N}, k={k})")
    subsets = sorted(combinations(range(N), k), key=_order_key)
    labels = [RdmLabel(s, s, RdmKind.DIAG) for s in subsets]
    for i, q in enumerate(subsets):
        for p in subsets[i + 1:]:
            labels.append(RdmLabel(p, q, RdmKind.RE))
            labels.append(RdmLabel(p, q, RdmKind.IM))
    return labels


# -----------------------
# Particle-number sectors
# -----------------------

def sector_indices(N: int, eta: int) -> np.ndarray:
    """Basis indices of Hamming weight η, ascending."""
    return np.array([b for b in range(1 << N) if bin(b).count("1") == eta], dtype=int)


def particle_projector(N: int, eta: int) -> np.ndarray:
    N = _check_modes(N)
    require(isinstance(eta, (int, np.integer)) and 0 <= eta <= N,
            f"particle number must satisfy 0 <= eta <= N (got N={N}, eta={eta!r})")
    diag = np.zeros(1 << N)
    diag[sector_indices(N, eta)] = 1.0
    return np.diag(diag)


@lru_cache(maxsize=32)
def square_sum(N: int, k: int) -> np.ndarray:
    """Σ_j O_j² over every k-RDM observable, on the full 2^N space."""
    labels = rdm_labels(N, k)
    total = np.zeros((1 << N, 1 << N), dtype=complex)
    for label in labels:
        op = jw_operator(N, label)
        total += op @ op
    log.debug("[FERMION] square sum N=%d k=%d over %d observables", N, k, len(labels))
    total.setflags(write=False)
    return total


def closed_coefficient(N: int, eta: int, k: int) -> Fraction:
    """Multiple of the η-sector identity taken by the square sum, counted per basis state.

    m is the number of modes shared by p and q; m = k is the diagonal term.
    """
    comb = math.comb
    off_diag = sum(comb(N, k) * comb(N - k, k - m) * comb(k, m) * comb(N - 2 * k + m, eta - k)
                   for m in range(k))
    diag = comb(N, k) * comb(N - k, eta - k)
    return Fraction(diag + 2 * off_diag, comb(N, eta))


def sector_norm_report(N: int, eta: int, k: int, solver: str = "jacobi") -> SectorNormReport:
    """Brute-force ‖Π_η Σ_j O_j² Π_η‖ next to its closed form and the 2·C(η,k)·C(N-η+k,k) bound."""
    N = _check_modes(N)
    _check_sector(N, eta, k)
    idx = sector_indices(N, eta)
    block = square_sum(N, k)[np.ix_(idx, idx)]
    report = SectorNormReport(
        brute_norm=spectral_norm(block, solver),
        closed_coefficient=float(closed_coefficient(N, eta, k)),
        upper_bound=float(sector_norm_bound(N, eta, k)),
    )
    log.info("[FERMION] N=%d eta=%d k=%d brute=%.12g closed=%.12g bound=%g",
             N, eta, k, report.brute_norm, report.closed_coefficient, report.upper_bound)
    return report


def identity_check(N: int, eta: int, k: int) -> Tuple[Fraction, int]:
    """Both sides of Σ_m C(N,k)C(N-k,k-m)C(k,m)C(N-2k+m,η-k) / C(N,η) = C(η,k)C(N-η+k,k), exactly."""
    for name, value in (("N", N), ("eta", eta), ("k", k)):
        require(isinstance(value, (int, np.integer)) and value >= 0, f"{name} must be a nonnegative integer")
    require(N <= MAX_IDENTITY_MODES, f"identity_check supports N <= {MAX_IDENTITY_MODES} (got {N})")
    require(k <= eta and eta + k <= N, f"identity requires k <= eta and eta + k <= N (got N={N}, eta={eta}, k={k})")
    comb = math.comb
    total = sum(comb(N, k) * comb(N - k, k - m) * comb(k, m) * comb(N - 2 * k + m, eta - k)
                for m in range(k + 1))
    return Fraction(total, comb(N, eta)), comb(eta, k) * comb(N - eta + k, k)


# -----------------------
# Monte-Carlo concentration
# -----------------------

def bernstein_threshold(N: int, eta: int, k: int, probe: ProbeState, delta_prime: float = DELTA_PRIME) -> int:
    """σ_Δ for the sector with v taken from the probe's own variance."""
    return sigma_method1(N, eta, k, probe_variance(probe), delta_prime)


def coefficient_norm_samples(N: int, eta: int, k: int, probe: ProbeState, trials: int, seed: int) -> np.ndarray:
    """‖Π_η Σ_j 2X_j O_j Π_η‖ for `trials` draws of X_j ~ Pr[X = x] = c_x².

    Draws come from numpy's PCG64 generator seeded with `seed`, as one
    (trials, M) batch, so a seed fixes every sample.
    """
    N = _check_modes(N, MAX_MONTE_CARLO_MODES)
    _check_sector(N, eta, k)
    require(isinstance(trials, (int, np.integer)) and trials >= 100, f"trials must be >= 100 (got {trials!r})")
    idx = sector_indices(N, eta)
    blocks = np.stack([jw_operator(N, label)[np.ix_(idx, idx)] for label in rdm_labels(N, k)])

    rng = np.random.default_rng(seed)
    points = make_grid(probe.p).points
    x = rng.choice(points, size=(int(trials), blocks.shape[0]), p=probe.probabilities)
    sums = np.einsum("tj,jab->tab", 2.0 * x, blocks)
    return np.max(np.abs(np.linalg.eigvalsh(sums)), axis=1)


def random_coefficient_norm_tail(N: int, eta: int, k: int, probe: ProbeState, trials: int, seed: int,
                                 threshold: float | None = None) -> float:
    """Fraction of trials whose sector norm exceeds the threshold (σ_Δ by default)."""
    if threshold is None:
        threshold = bernstein_threshold(N, eta, k, probe)
    norms = coefficient_norm_samples(N, eta, k, probe, trials, seed)
    rate = float(np.mean(norms > threshold))
    log.info("[FERMION] Monte-Carlo N=%d eta=%d k=%d trials=%d t=%g -> rate %.6f (max norm %.4f)",
             N, eta, k, trials, threshold, rate, float(norms.max()))
    return rate
