"""Dense complex linear algebra with one shared notion of numerical rank.

Everything here is a pure function of its inputs. Other modules delegate
their numerically delicate decisions (rank tolerance, least-squares method,
eigenvalue extraction) to this module so there is a single place to audit.
"""
from __future__ import annotations

import numpy as np

from .errors import NotHermitianError, RankDeficientError

__all__ = [
    "as_matrix",
    "as_vector",
    "condition_number",
    "gram",
    "hermitian_eigen_extremes",
    "numerical_rank",
    "rank_tolerance",
    "solve_least_squares",
]

HERMITIAN_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("matrix must have at least one row and one column")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def as_vector(y) -> np.ndarray:
    """Coerce to a 1-D complex128 array, rejecting non-finite entries."""
    vec = np.asarray(y, dtype=np.complex128)
    if vec.ndim != 1 or vec.shape[0] == 0:
        raise ValueError("expected a non-empty 1-D vector")
    if not np.all(np.isfinite(vec)):
        raise ValueError("vector entries must be finite")
    return vec


def rank_tolerance(shape, sigma_max: float) -> float:
    """Cutoff below which singular values count as zero: max(m,n)*smax*eps."""
    return max(shape) * sigma_max * np.finfo(np.float64).eps


def gram(a) -> np.ndarray:
    """Gram matrix A^H A, symmetrized so the result is exactly Hermitian."""
    arr = as_matrix(a)
    g = arr.conj().T @ arr
    return (g + g.conj().T) / 2.0


def numerical_rank(a) -> int:
    """Number of singular values above the shared rank tolerance."""
    arr = as_matrix(a)
    s = np.linalg.svd(arr, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rank_tolerance(arr.shape, float(s[0]))))


def solve_least_squares(a, y) -> np.ndarray:
    """Minimum-residual solution of ``a @ x = y`` for a tall full-rank system.

    Solved through an SVD-backed least-squares routine rather than by forming
    and inverting the normal equations, which keeps well-conditioned systems
    accurate to near machine precision.

    Raises
    ------
    RankDeficientError
        If the numerical rank of ``a`` is below its column count.
    """
    arr = as_matrix(a)
    vec = as_vector(y)
    rows, cols = arr.shape
    if rows < cols:
        raise ValueError(f"system must be square or overdetermined, got {rows}x{cols}")
    if vec.shape[0] != rows:
        raise ValueError(f"right-hand side has length {vec.shape[0]}, expected {rows}")
    x, _, rank, _ = np.linalg.lstsq(arr, vec, rcond=None)
    if rank < cols:
        raise RankDeficientError(f"matrix has numerical rank {rank} < {cols} columns")
    return x


def condition_number(a) -> float:
    """Ratio of the largest to the smallest singular value."""
    arr = as_matrix(a)
    s = np.linalg.svd(arr, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= rank_tolerance(arr.shape, float(s[0])):
        raise RankDeficientError(
            "condition number undefined: smallest singular value below rank tolerance"
        )
    return float(s[0] / s[-1])


def hermitian_eigen_extremes(g) -> tuple[float, float]:
    """(smallest, largest) eigenvalue of a Hermitian matrix."""
    arr = as_matrix(g)
    if arr.shape[0] != arr.shape[1]:
        raise NotHermitianError(f"matrix is not square: {arr.shape}")
    if float(np.max(np.abs(arr - arr.conj().T))) > HERMITIAN_TOL:
        raise NotHermitianError("matrix is not Hermitian within 1e-10")
    w = np.linalg.eigvalsh(arr)
    return float(w[0]), float(w[-1])
