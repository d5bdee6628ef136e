"""Median-of-R amplification: binomial tails in log space and their inversion.

The median of R i.i.d. estimates misses only if at least ⌊(R+1)/2⌋ of them do,
so its failure probability is the upper binomial tail
Φ(R) = 1 - F(⌊(R+1)/2⌋ - 1; μ, R).
"""
from __future__ import annotations

import logging
import math

import numpy as np
from scipy.special import gammaln

from .errors import require
from .numerics import log_sum_exp

log = logging.getLogger(__name__)


def _check_mu(mu: float, upper: float = 1.0) -> None:
    require(math.isfinite(mu) and 0.0 < mu < upper, f"mu must lie in (0, {upper:g}) (got {mu!r})")


def _check_count(name: str, value: int, minimum: int) -> int:
    require(isinstance(value, (int, np.integer)) and not isinstance(value, bool) and value >= minimum,
            f"{name} must be an integer >= {minimum} (got {value!r})")
    return int(value)


def _log_pmf(m: np.ndarray, n: int, mu: float) -> np.ndarray:
    return (gammaln(n + 1) - gammaln(m + 1) - gammaln(n - m + 1)
            + m * math.log(mu) + (n - m) * math.log1p(-mu))


def binom_cdf_log(k: int, mu: float, n: int) -> float:
    """ln F(k; μ, n) = ln Σ_{m=0}^{k} C(n,m) μ^m (1-μ)^(n-m)."""
    n = _check_count("n", n, 0)
    k = _check_count("k", k, 0)
    require(k <= n, f"binom_cdf_log requires k <= n (got k={k}, n={n})")
    _check_mu(mu)
    return log_sum_exp(_log_pmf(np.arange(k + 1), n, mu))


def median_tail(R: int, mu: float) -> float:
    """ln Φ(R), summed over the upper-tail pmf terms directly."""
    R = _check_count("R", R, 1)
    _check_mu(mu, 0.5)
    first = (R + 1) // 2
    return log_sum_exp(_log_pmf(np.arange(first, R + 1), R, mu))


def hoeffding_samples(mu: float, log_target: float) -> int:
    """⌈log_target / (-2(1/2 - μ)²)⌉, the Hoeffding sample count."""
    _check_mu(mu, 0.5)
    require(log_target < 0, f"log_target must be negative (got {log_target!r})")
    return max(1, math.ceil(log_target / (-2.0 * (0.5 - mu) ** 2)))


def min_samples(mu: float, log_target: float) -> int:
    """Smallest R with median_tail(R, mu) <= log_target.

    Odd R are searched first (doubling, then bisection on R = 2j + 1, where the
    tail is monotone); the even count just below the odd answer is accepted
    when it also meets the bound.
    """
    _check_mu(mu, 0.5)
    require(log_target < 0, f"log_target must be negative (got {log_target!r})")

    def meets(R: int) -> bool:
        return median_tail(R, mu) <= log_target

    if meets(1):
        return 1
    lo, hi = 0, 1
    while not meets(2 * hi + 1):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if meets(2 * mid + 1):
            hi = mid
        else:
            lo = mid
    best = 2 * hi + 1
    if meets(best - 1):
        best -= 1
    log.debug("[SAMPLING] mu=%.6f target=%.4f -> R=%d (hoeffding %d)",
              mu, log_target, best, hoeffding_samples(mu, log_target))
    return best
