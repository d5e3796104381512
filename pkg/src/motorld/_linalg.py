"""Perron eigenvalue helpers: power iteration with a dense-eigensolver fallback."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import NonConvergence

__all__ = ["perron_root", "perron_pair"]


def _power_iteration(mat: np.ndarray, tol: float, maxiter: int):
    """Collatz-Wielandt sandwich on a nonnegative matrix; None if not converged."""
    n = mat.shape[0]
    v = np.full(n, 1.0 / n)
    for _ in range(maxiter):
        y = mat @ v
        total = y.sum()
        if total <= 0.0 or not np.isfinite(total):
            return None
        mask = v > 1e-300
        ratios = y[mask] / v[mask]
        lo, hi = ratios.min(), ratios.max()
        v = y / total
        if hi - lo <= tol * max(1.0, hi):
            return 0.5 * (lo + hi), v
    return None


def _dense(mat: np.ndarray):
    vals, left, right = scipy.linalg.eig(mat, left=True, right=True)
    i = int(np.argmax(vals.real))
    val = float(vals[i].real)
    r = right[:, i].real
    l = left[:, i].real
    if r.sum() < 0:
        r = -r
    if l.sum() < 0:
        l = -l
    return val, r, l


def perron_root(mat: np.ndarray, tol: float = 1e-13, maxiter: int = 1_000_000) -> float:
    """Largest real eigenvalue of a (shifted) nonnegative matrix."""
    if mat.shape[0] == 1:
        return float(mat[0, 0])
    got = _power_iteration(mat, tol, min(maxiter, 200_000))
    if got is not None:
        return float(got[0])
    return _dense(mat)[0]


def perron_pair(
    mat: np.ndarray, tol: float = 1e-13, maxiter: int = 1_000_000
) -> tuple[float, np.ndarray, np.ndarray]:
    """(value, right vector, left vector); vectors are real and sum-positive."""
    n = mat.shape[0]
    if n == 1:
        return float(mat[0, 0]), np.ones(1), np.ones(1)
    right = _power_iteration(mat, tol, min(maxiter, 200_000))
    left = _power_iteration(mat.T, tol, min(maxiter, 200_000))
    if right is None or left is None:
        return _dense(mat)
    val = 0.5 * (right[0] + left[0])
    if abs(right[0] - left[0]) > 1e-8 * max(1.0, abs(val)):
        raise NonConvergence("left/right Perron estimates disagree")
    return float(val), right[1], left[1]
