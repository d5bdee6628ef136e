"""Single-shot failure probability of phase estimation with a shaped probe.

A measurement fails when the estimate l/2^p lies farther than 1/(2π) from the
true phase θ on the unit circle (distances wrap around, phases live mod 1).
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import load_config
from .errors import require
from .probe import ProbeFamily, ProbeState, make_probe

log = logging.getLogger(__name__)

FAILURE_RADIUS = 1.0 / (2.0 * math.pi)
_CHUNK = 8192


@dataclass(frozen=True)
class FailureCurve:
    thetas: np.ndarray
    probs: np.ndarray


@dataclass(frozen=True)
class FailureSummary:
    max: float
    argmax: float
    curve: FailureCurve


def _outcome_probs(c: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """P(l|θ) for a block of θ values; shape (len(thetas), 2^p).

    The sum over μ of c_μ e^{2πiθμ} e^{-2πi lμ/2^p} is a forward DFT in μ.
    """
    n = c.size
    phases = np.exp(2j * math.pi * np.mod(np.outer(thetas, np.arange(n)), 1.0))
    amp = np.fft.fft(phases * c[None, :], axis=1) / math.sqrt(n)
    return np.abs(amp) ** 2


def _chunk_size(n: int) -> int:
    return max(1, min(_CHUNK, (1 << 22) // n))


def _failure_mask(n: int, thetas: np.ndarray) -> np.ndarray:
    dist = np.abs(np.arange(n)[None, :] / n - thetas[:, None])
    return np.minimum(dist, 1.0 - dist) > FAILURE_RADIUS


def _check_thetas(thetas) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(thetas, dtype=float))
    require(bool(np.all((arr >= 0.0) & (arr < 1.0))), "theta must lie in [0, 1)")
    return arr


def qpe_distribution(s: ProbeState, theta: float) -> np.ndarray:
    """P(l|θ) = |(1/√2^p) Σ_μ c_μ e^{2πi(θ - l/2^p)μ}|² over l = 0 .. 2^p - 1."""
    thetas = _check_thetas(theta)
    require(thetas.size == 1, "qpe_distribution takes a single theta")
    return _outcome_probs(np.asarray(s.amplitudes, dtype=float), thetas)[0]


def failure_probability(s: ProbeState, theta: float) -> float:
    thetas = _check_thetas(theta)
    require(thetas.size == 1, "failure_probability takes a single theta")
    return float(failure_curve(s, thetas)[0])


def failure_curve(s: ProbeState, thetas, workers: Optional[int] = None) -> np.ndarray:
    """Failure probability at every θ, evaluated in blocks on a thread pool."""
    thetas = _check_thetas(thetas)
    c = np.asarray(s.amplitudes, dtype=float)
    n = c.size

    chunk = _chunk_size(n)

    def block(start: int) -> np.ndarray:
        part = thetas[start:start + chunk]
        probs = _outcome_probs(c, part)
        return np.sum(probs * _failure_mask(n, part), axis=1)

    starts = range(0, thetas.size, chunk)
    if len(starts) == 1:
        return np.clip(block(0), 0.0, 1.0)
    with ThreadPoolExecutor(max_workers=workers or load_config().workers) as executor:
        parts = list(executor.map(block, starts))
    return np.clip(np.concatenate(parts), 0.0, 1.0)


def max_failure(s: ProbeState, grid_points: Optional[int] = None, workers: Optional[int] = None) -> FailureSummary:
    """Maximum failure probability over the uniform grid i/G, i = 0 .. G-1.

    The returned curve keeps θ ≤ 1/2 only; mirror-symmetric probes repeat it.
    """
    grid_points = grid_points or load_config().qpe_points
    require(isinstance(grid_points, (int, np.integer)) and grid_points >= 2,
            f"grid_points must be an integer >= 2 (got {grid_points!r})")
    thetas = np.arange(grid_points) / grid_points
    probs = failure_curve(s, thetas, workers)
    i = int(np.argmax(probs))
    half = thetas <= 0.5
    log.info("[QPE] %s p=%d max failure %.6f at theta=%.6f (%d points)",
             s.label, s.p, probs[i], thetas[i], grid_points)
    return FailureSummary(max=float(probs[i]), argmax=float(thetas[i]),
                          curve=FailureCurve(thetas=thetas[half], probs=probs[half]))


def kaiser_scan(p: int, alphas: Sequence[float], grid_points: Optional[int] = None,
                workers: Optional[int] = None) -> List[Tuple[float, float]]:
    """(α, max failure) for each Kaiser shape parameter; no optimum is asserted."""
    require(len(alphas) > 0, "kaiser_scan needs at least one alpha")
    return [(float(a), max_failure(make_probe(ProbeFamily.KAISER, p, float(a)), grid_points, workers).max)
            for a in alphas]
