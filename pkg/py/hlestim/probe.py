"""The measurement grid G_p and the probe-state families.

Grid-indexed families (uniform, cos1, cos2, kaiser) label amplitude μ by the
grid point x_μ = φ(μ) = (2μ - 2^p + 1) / 2^(p+1). The QAE sine state is
indexed by the computational label k instead and has its own family tag.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, require
from .numerics import bessel_i0

MAX_GRID_QUBITS = 12
NORM_TOL = 1e-12


class ProbeFamily(str, Enum):
    UNIFORM = "uniform"
    COS1 = "cos1"
    COS2 = "cos2"
    KAISER = "kaiser"
    SINE_QAE = "sine_qae"
    EXPLICIT = "explicit"


GRID_FAMILIES = (ProbeFamily.UNIFORM, ProbeFamily.COS1, ProbeFamily.COS2, ProbeFamily.KAISER)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Grid:
    p: int
    points: np.ndarray

    @property
    def size(self) -> int:
        return 1 << self.p


@dataclass(frozen=True)
class ProbeState:
    p: int
    family: ProbeFamily
    amplitudes: np.ndarray
    alpha: Optional[float] = None

    @property
    def dim(self) -> int:
        return 1 << self.p

    @property
    def probabilities(self) -> np.ndarray:
        return self.amplitudes ** 2

    @property
    def label(self) -> str:
        if self.family is ProbeFamily.KAISER:
            return f"kaiser({self.alpha:g})"
        return self.family.value


def make_grid(p: int) -> Grid:
    require(isinstance(p, (int, np.integer)) and 1 <= p <= MAX_GRID_QUBITS,
            f"grid qubit count p must be in [1, {MAX_GRID_QUBITS}] (got {p!r})")
    n = 1 << int(p)
    mu = np.arange(n)
    return Grid(p=int(p), points=_frozen((2 * mu - n + 1) / (2.0 * n)))


def _check_normalized(amplitudes: np.ndarray, what: str) -> None:
    total = float(np.sum(amplitudes ** 2))
    if abs(total - 1.0) > NORM_TOL:
        raise DomainError(f"{what} amplitudes are not normalized (sum of squares {total!r})")


def make_probe(family: ProbeFamily | str, p: int, alpha: Optional[float] = None) -> ProbeState:
    """Build a built-in probe state.

    Args:
        family: uniform, cos1, cos2, kaiser or sine_qae
        p: grid qubit count (for sine_qae this is the QAE register size q)
        alpha: Kaiser shape parameter; required for kaiser and rejected otherwise

    Returns:
        a normalized ProbeState
    """
    try:
        family = ProbeFamily(family)
    except ValueError:
        raise DomainError(f"unknown probe family {family!r}") from None
    if family is ProbeFamily.EXPLICIT:
        raise DomainError("explicit probes are built with explicit_probe(amplitudes)")
    if family is ProbeFamily.KAISER:
        require(alpha is not None, "kaiser probe requires alpha")
        require(math.isfinite(alpha) and alpha >= 0, f"kaiser alpha must be >= 0 (got {alpha!r})")
    else:
        require(alpha is None, f"alpha is only meaningful for the kaiser family (got family {family.value})")

    if family is ProbeFamily.SINE_QAE:
        require(isinstance(p, (int, np.integer)) and 1 <= p <= MAX_GRID_QUBITS,
                f"sine_qae register size q must be in [1, {MAX_GRID_QUBITS}] (got {p!r})")
        n = 1 << int(p)
        k = np.arange(n)
        amps = math.sqrt(2.0 / n) * np.sin(k * math.pi / n)
        _check_normalized(amps, "sine_qae")
        return ProbeState(p=int(p), family=family, amplitudes=_frozen(amps))

    grid = make_grid(p)
    n = grid.size
    phi = grid.points
    if family is ProbeFamily.UNIFORM:
        amps = np.full(n, 1.0 / math.sqrt(n))
    elif family is ProbeFamily.COS1:
        amps = math.sqrt(2.0 / (n + 1)) * np.cos(n * phi * math.pi / (n + 1))
    elif family is ProbeFamily.COS2:
        amps = math.sqrt(2.0 / n) * np.cos(phi * math.pi)
    else:
        # c ∝ I0(πα√(1-(2φ)²)) / I0(πα), normalized numerically
        ref = bessel_i0(math.pi * alpha)
        raw = np.array([bessel_i0(math.pi * alpha * math.sqrt(1.0 - (2.0 * x) ** 2)) for x in phi]) / ref
        amps = raw / math.sqrt(float(np.sum(raw ** 2)))

    _check_normalized(amps, family.value)
    return ProbeState(p=grid.p, family=family, amplitudes=_frozen(amps),
                      alpha=float(alpha) if alpha is not None else None)


def explicit_probe(amplitudes: Sequence[float], family: ProbeFamily | str = ProbeFamily.EXPLICIT) -> ProbeState:
    """Wrap a user-supplied amplitude vector, checking length and normalization."""
    amps = np.asarray(amplitudes, dtype=float)
    n = amps.size
    require(amps.ndim == 1 and n >= 2 and n & (n - 1) == 0,
            f"probe length must be a power of two >= 2 (got {amps.shape})")
    _check_normalized(amps, "explicit")
    return ProbeState(p=n.bit_length() - 1, family=ProbeFamily(family), amplitudes=_frozen(amps))


def probe_families() -> list:
    return [f.value for f in GRID_FAMILIES]


def probe_variance(s: ProbeState) -> float:
    """v = E[(2X)^2] with Pr[X = x_μ] = c_μ^2 over the grid of matching p."""
    require(s.family is not ProbeFamily.SINE_QAE,
            "probe_variance is defined on grid-indexed probes, not the QAE sine state")
    grid = make_grid(s.p)
    return float(np.sum((2.0 * grid.points) ** 2 * s.probabilities))
