"""Scalar special functions and numerically stable combinatorics.

Everything that can overflow in linear space (binomials such as C(152, 113),
binomial tail sums near e^-40) is carried as a natural logarithm.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln, i0, logsumexp

from .errors import DomainError


def _as_count(name: str, value: int) -> int:
    if isinstance(value, bool) or int(value) != value or value < 0:
        raise DomainError(f"{name} must be a nonnegative integer (got {value!r})")
    return int(value)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) via log-gamma."""
    n = _as_count("n", n)
    k = _as_count("k", k)
    if k > n:
        raise DomainError(f"log_binomial requires k <= n (got n={n}, k={k})")
    if k == 0 or k == n:
        return 0.0
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def exact_binomial(n: int, k: int) -> int:
    """C(n, k) as a Python big integer; the oracle for log_binomial."""
    n = _as_count("n", n)
    k = _as_count("k", k)
    if k > n:
        raise DomainError(f"exact_binomial requires k <= n (got n={n}, k={k})")
    return math.comb(n, k)


def bessel_i0(x: float) -> float:
    """Modified Bessel function of the first kind, order 0, for x >= 0."""
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"bessel_i0 requires x >= 0 (got {x!r})")
    return float(i0(x))


def log_sum_exp(terms: Sequence[float] | Iterable[float]) -> float:
    """ln sum(e^t) with the max-shift, never overflowing."""
    values = np.asarray(list(terms), dtype=float)
    if values.size == 0:
        raise DomainError("log_sum_exp requires a non-empty list of terms")
    if np.any(np.isnan(values)):
        raise DomainError("log_sum_exp received NaN")
    if np.all(values == -np.inf):
        return -math.inf
    return float(logsumexp(values))
