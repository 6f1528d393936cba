"""Dense linear-algebra kernels used by the transforms and spectrum code."""

from __future__ import annotations

import math

import numpy as np
from scipy import sparse
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError

_TERM_TOL = 1e-16
_MAX_TERMS = 60


def _taylor(x: np.ndarray) -> np.ndarray:
    """exp(x) by truncated series; assumes ``||x|| <= 0.5``."""
    result = np.eye(x.shape[0], dtype=np.result_type(x, complex))
    term = result.copy()
    for k in range(1, _MAX_TERMS):
        term = term @ x / k
        result += term
        if np.abs(term).max() < _TERM_TOL * np.abs(result).max():
            return result
    raise ConvergenceError(
        f"Taylor series did not converge in {_MAX_TERMS} terms "
        f"(scaled 1-norm {np.abs(x).sum(axis=0).max():.3g})"
    )


def squaring_count(norm1: float, target: float = 0.5) -> int:
    """Smallest ``s`` with ``norm1 / 2**s <= target``."""
    if norm1 <= target:
        return 0
    return int(math.ceil(math.log2(norm1 / target)))


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring.

    The matrix is scaled by ``2**-s`` until its 1-norm is at most 0.5, the
    series is summed until the next term is below ``1e-16`` of the partial sum,
    and the result is squared ``s`` times.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expm needs a square matrix, got shape {a.shape}")
    norm1 = float(np.abs(a).sum(axis=0).max()) if a.size else 0.0
    if not math.isfinite(norm1):
        raise ConvergenceError("matrix has non-finite entries")
    s = squaring_count(norm1)
    try:
        result = _taylor(a / 2.0**s)
    except ConvergenceError as exc:
        raise ConvergenceError(f"{exc}; 1-norm {norm1:.3g}, squarings {s}") from exc
    for _ in range(s):
        result = result @ result
    return result


def expm_apply(a, v: np.ndarray, target: float = 0.5) -> np.ndarray:
    """``exp(a) @ v`` without forming the exponential.

    ``a`` may be dense or scipy-sparse. The action is split into ``2**s`` steps
    of norm at most ``target``, each summed as a Taylor series.
    """
    if sparse.issparse(a):
        norm1 = float(abs(a).sum(axis=0).max()) if a.nnz else 0.0
    else:
        norm1 = float(np.abs(a).sum(axis=0).max())
    steps = max(1, int(math.ceil(norm1 / target)))
    w = np.array(v, dtype=complex)
    for _ in range(steps):
        term = w.copy()
        acc = w.copy()
        for k in range(1, _MAX_TERMS):
            term = (a @ term) / (k * steps)
            acc += term
            if np.abs(term).max() < _TERM_TOL * np.abs(acc).max():
                break
        else:
            raise ConvergenceError(f"expm_apply series stalled (1-norm {norm1:.3g})")
        w = acc
    return w


def eigvalsh_tridiagonal(diag: np.ndarray, offdiag: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric tridiagonal matrix."""
    try:
        return eigh_tridiagonal(diag, offdiag, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"tridiagonal eigensolver failed (size {len(diag)}): {exc}"
        ) from exc


def max_abs(m) -> float:
    m = np.asarray(m)
    return float(np.abs(m).max()) if m.size else 0.0
