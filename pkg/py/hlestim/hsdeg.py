"""Polynomial degree for ε''-precise Hamiltonian simulation.

Q = -1 + min{ l : 4 t^l / (2^l l!) <= ε''/8 }, evaluated in log space so
that t in the 10^5..10^10 range never touches a factorial.

Past l = 2^53 a float can no longer tell neighbouring degrees apart, so the
minimal l is taken from the expansion around l = e t / 2 and rounded exactly.
"""
from __future__ import annotations

import math
from fractions import Fraction

from scipy.special import gammaln

from .errors import require

_LN4 = math.log(4.0)
_LN_2PI = math.log(2.0 * math.pi)

# Stirling with the 1/(12 l) term is exact to double precision from here on
STIRLING_START = 1_000_000
EXACT_DEGREE_LIMIT = 2 ** 53


def log_tail_bound(l: int, t: float) -> float:
    """ln(4 t^l / (2^l l!))"""
    x = t / 2.0
    lf = float(l)
    if l < STIRLING_START:
        return _LN4 + lf * math.log(x) - float(gammaln(lf + 1.0))
    # l ln x - ln l! = -l ln(l / (e x)) - ln(2 pi l)/2 - 1/(12 l)
    ex = math.e * x
    return _LN4 - lf * math.log1p((lf - ex) / ex) - 0.5 * (_LN_2PI + math.log(lf)) - 1.0 / (12.0 * lf)


def _asymptotic_degree(t: float, eps: float) -> int:
    # l = e x + d with d << x turns the bound into d >= ln(32/eps) - ln(2 pi e x)/2
    shift = math.log(32.0 / eps) - 0.5 * (_LN_2PI + 1.0 + math.log(t / 2.0))
    return math.ceil(Fraction(math.e) * Fraction(t) / 2 + Fraction(shift)) - 1


def hs_degree(t: float, eps: float) -> int:
    """Minimal degree Q of the ε''-accurate polynomial approximation of e^{ixt}.

    Args:
        t: simulation time, > 0
        eps: polynomial accuracy ε'' in (0, 1)

    Returns:
        Q >= 0; l = Q + 1 meets the tail bound and l = Q does not
    """
    require(math.isfinite(t) and t > 0, f"hs_degree requires t > 0 (got {t!r})")
    require(0.0 < eps < 1.0, f"hs_degree requires eps in (0, 1) (got {eps!r})")
    if t / 2.0 >= EXACT_DEGREE_LIMIT / math.e:
        return _asymptotic_degree(t, eps)
    bound = math.log(eps / 8.0)

    def meets(l: int) -> bool:
        return log_tail_bound(l, t) <= bound

    # l = 0 never meets the bound (ln 4 > ln(ε''/8)); the satisfying set is an up-set
    lo, hi = 0, 1
    while not meets(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if meets(mid):
            hi = mid
        else:
            lo = mid
    return hi - 1
