"""Dense real-symmetric / complex-Hermitian utilities.

`jacobi_eigen` is the reference eigensolver. Within one sweep the index pairs
are visited in round-robin order, so every round is a set of disjoint
rotations applied together with numpy slicing.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np

from .errors import ConvergenceError, DomainError

log = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 60
SOLVERS = ("jacobi", "lapack")


# -----------------------
# Validation
# -----------------------

def _square(a, name: str) -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DomainError(f"{name} must be a non-empty square matrix (got shape {arr.shape})")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def as_symmetric(a) -> np.ndarray:
    """Validated float copy of a real symmetric matrix."""
    arr = _square(a, "SymMatrix")
    if np.iscomplexobj(arr):
        if np.max(np.abs(arr.imag)) > SYMMETRY_TOL:
            raise DomainError("SymMatrix must be real")
        arr = arr.real
    arr = np.array(arr, dtype=float)
    scale = max(1.0, float(np.max(np.abs(arr))))
    asym = float(np.max(np.abs(arr - arr.T)))
    if asym > SYMMETRY_TOL * scale:
        raise DomainError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    return 0.5 * (arr + arr.T)


def as_hermitian(h) -> np.ndarray:
    arr = np.array(_square(h, "HermMatrix"), dtype=complex)
    scale = max(1.0, float(np.max(np.abs(arr))))
    defect = float(np.max(np.abs(arr - arr.conj().T)))
    if defect > SYMMETRY_TOL * scale:
        raise DomainError(f"matrix is not Hermitian (max defect {defect:.3e})")
    return 0.5 * (arr + arr.conj().T)


# -----------------------
# Jacobi eigensolver
# -----------------------

@lru_cache(maxsize=64)
def _round_robin(n: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """Circle-method schedule: n-1 (or n) rounds of disjoint pairs covering all (p, q)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                pairs.append((min(a, b), max(a, b)))
        if pairs:
            ps, qs = zip(*pairs)
            rounds.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    return float(np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0)))


def jacobi_eigen(a, tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Args:
        a: real symmetric matrix (asymmetry above 1e-12 is rejected)
        tol: stop once the off-diagonal Frobenius mass is <= tol * ||a||_F
        max_sweeps: sweep cap before ConvergenceError

    Returns:
        (eigenvalues ascending, eigenvectors as orthonormal columns)
    """
    a = as_symmetric(a).copy()
    n = a.shape[0]
    v = np.eye(n)
    norm_f = float(np.linalg.norm(a))
    if n == 1 or norm_f == 0.0:
        return np.diag(a).copy(), v

    tiny = 1e-14 * norm_f / n
    rounds = _round_robin(n)
    for sweep in range(max_sweeps):
        off = _off_norm(a)
        if off <= tol * norm_f:
            log.debug("[JACOBI] n=%d converged after %d sweeps (off=%.3e)", n, sweep, off)
            break
        for ps, qs in rounds:
            apq = a[ps, qs]
            active = np.abs(apq) > tiny
            if not active.any():
                continue
            p, q, apq = ps[active], qs[active], apq[active]

            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            col_p, col_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * col_p - s * col_q
            a[:, q] = s * col_p + c * col_q

            row_p, row_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * row_p - s[:, None] * row_q
            a[q, :] = s[:, None] * row_p + c[:, None] * row_q
            a[p, q] = 0.0
            a[q, p] = 0.0

            vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vec_p - s * vec_q
            v[:, q] = s * vec_p + c * vec_q
    else:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (n={n}, off={_off_norm(a):.3e})"
        )

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def symmetric_eigh(a, solver: str = "jacobi") -> Tuple[np.ndarray, np.ndarray]:
    if solver == "jacobi":
        return jacobi_eigen(a)
    if solver == "lapack":
        return np.linalg.eigh(as_symmetric(a))
    raise DomainError(f"unknown eigensolver {solver!r}; expected one of {SOLVERS}")


def min_eigenpair(a, solver: str = "jacobi") -> Tuple[float, np.ndarray]:
    """Smallest eigenvalue and its unit eigenvector."""
    values, vectors = symmetric_eigh(a, solver)
    return float(values[0]), vectors[:, 0].copy()


# -----------------------
# Norms
# -----------------------

def real_embedding(h) -> np.ndarray:
    """[[Re H, -Im H], [Im H, Re H]]; its spectrum is that of H, doubled."""
    h = as_hermitian(h)
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def spectral_norm(h, solver: str = "jacobi") -> float:
    """max |eigenvalue| of a Hermitian matrix."""
    h = as_hermitian(h)
    if solver == "lapack":
        values = np.linalg.eigvalsh(h)
    elif not np.any(h.imag):
        values, _ = symmetric_eigh(h.real, solver)
    else:
        values, _ = symmetric_eigh(real_embedding(h), solver)
    return float(np.max(np.abs(values)))

