"""Sparse recovery chain.

Forward measurement, back-projection of measurements onto the matrix
columns (the position-detection estimate), least-squares refit on a known
support, greedy matching pursuit, the exhaustive minimal-support search
used as desk-scale ground truth, and the worst-case detection-margin
arithmetic that links coherence to a usable sparsity level.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import matrices, numerics
from .errors import DimensionMismatchError, InfeasibleScanError
from .serialization import complex_to_pairs, pairs_to_complex

ZERO_VALUE_TOL = 1e-14
DEFAULT_RELATIVE_EPSILON = 1e-10
DEFAULT_MAX_SUBSETS = 100_000


@dataclass(eq=False)
class SparseSignal:
    """Length-n vector with k >= 1 nonzero entries at an explicit support."""

    n: int
    support: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        self.n = int(self.n)
        if self.n < 1:
            raise ValueError("signal length must be positive")
        support = tuple(int(i) for i in self.support)
        if len(support) < 1:
            raise ValueError("support must contain at least one index")
        if len(support) > self.n:
            raise ValueError("support larger than the signal length")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise ValueError("support indices must be strictly increasing")
        if support[0] < 0 or support[-1] >= self.n:
            raise ValueError(f"support indices must lie in [0, {self.n})")
        vals = numerics.as_vector(self.values)
        if vals.shape[0] != len(support):
            raise ValueError("need exactly one value per support index")
        if float(np.min(np.abs(vals))) <= ZERO_VALUE_TOL:
            raise ValueError("nonzero entries must have magnitude above 1e-14")
        self.support = support
        self.values = vals

    @property
    def k(self) -> int:
        return len(self.support)

    def dense(self) -> np.ndarray:
        """Expand to a full length-n vector."""
        out = np.zeros(self.n, dtype=np.complex128)
        out[list(self.support)] = self.values
        return out


@dataclass(eq=False)
class InitialEstimate:
    """Back-projected estimate plus one additive component per source element.

    Column i of components is the contribution of the i-th nonzero element
    (a Gram column scaled by that element's value); the columns sum to x0.
    """

    x0: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        x0 = numerics.as_vector(self.x0)
        comps = numerics.as_matrix(self.components)
        if comps.shape[0] != x0.shape[0]:
            raise ValueError("components need one row per signal index")
        if float(np.max(np.abs(comps.sum(axis=1) - x0))) > 1e-12:
            raise ValueError("component columns must sum to the estimate")
        self.x0 = x0
        self.components = comps


@dataclass(eq=False)
class RecoveryResult:
    """Outcome of a matching-pursuit run.

    support is kept in selection order; residual_trace holds the residual
    norm after each least-squares refit and is strictly decreasing.
    """

    support: tuple[int, ...]
    values: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    residual_trace: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "support": list(self.support),
            "values": complex_to_pairs(self.values),
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            "converged": self.converged,
            "residual_trace": list(self.residual_trace),
        }


@dataclass
class MarginReport:
    """Worst-case detection margins at sparsity k for coherence mu.

    signal_floor = 1 - (k-1)*mu is a nonzero element's magnitude after the
    other k-1 elements erode it as much as possible; disturbance_ceiling =
    k*mu is the largest pile-up all k elements can produce at an empty
    position. Detection is guaranteed when the floor clears the ceiling.
    """

    k: int
    mu: float
    signal_floor: float
    disturbance_ceiling: float
    detectable: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "mu": self.mu,
            "signal_floor": self.signal_floor,
            "disturbance_ceiling": self.disturbance_ceiling,
            "detectable": self.detectable,
        }


class L0Solution(NamedTuple):
    """One consistent sparse explanation found by the exhaustive search."""

    support: tuple[int, ...]
    values: np.ndarray
    residual: float


def measure(a: matrices.MeasurementMatrix, x: SparseSignal) -> np.ndarray:
    """y = A X for the dense expansion of the sparse signal."""
    if x.n != a.n:
        raise DimensionMismatchError(f"signal length {x.n} != matrix column count {a.n}")
    return a.data @ x.dense()


def back_project(a: matrices.MeasurementMatrix, y) -> np.ndarray:
    """Initial position estimate A^H y (length n)."""
    vec = numerics.as_vector(y)
    if vec.shape[0] != a.m:
        raise DimensionMismatchError(f"measurement length {vec.shape[0]} != row count {a.m}")
    return a.data.conj().T @ vec


def decompose_initial_estimate(a: matrices.MeasurementMatrix, x: SparseSignal) -> InitialEstimate:
    """Back-projected estimate split into per-source additive components.

    Component i equals the Gram column at support index i scaled by the
    i-th value, so the stacked components reproduce A^H A x exactly. This
    is the data behind stacked component bar plots of the estimate.
    """
    if x.n != a.n:
        raise DimensionMismatchError(f"signal length {x.n} != matrix column count {a.n}")
    g = numerics.gram(a.data)
    components = g[:, list(x.support)] * x.values[None, :]
    return InitialEstimate(components.sum(axis=1), components)


def ls_recover_known_support(a: matrices.MeasurementMatrix, support, y) -> SparseSignal:
    """Least-squares fit restricted to the given support columns.

    Fitted entries with magnitude at or below 1e-14 are dropped from the
    returned support, so a consistent system with extra candidate indices
    comes back with exact zeros pruned.

    Raises
    ------
    RankDeficientError
        If the selected columns are linearly dependent; for this support
        the measurements cannot pin down a unique coefficient vector.
    """
    sub = matrices.restrict_columns(a, support)
    if sub.shape[1] > a.m:
        raise ValueError(f"support size {sub.shape[1]} exceeds measurement count {a.m}")
    vec = numerics.as_vector(y)
    if vec.shape[0] != a.m:
        raise DimensionMismatchError(f"measurement length {vec.shape[0]} != row count {a.m}")
    vals = numerics.solve_least_squares(sub, vec)
    keep = np.abs(vals) > ZERO_VALUE_TOL
    if not bool(np.any(keep)):
        raise ValueError("every fitted value is numerically zero; nothing to return")
    kept = tuple(idx for idx, flag in zip((int(i) for i in support), keep) if flag)
    return SparseSignal(a.n, kept, vals[keep])


def matching_pursuit(
    a: matrices.MeasurementMatrix,
    y,
    epsilon: float | None = None,
    max_iter: int | None = None,
    relative: bool = False,
) -> RecoveryResult:
    """Greedy sparse reconstruction.

    Repeats until the residual norm drops to epsilon: pick the column with
    the largest back-projected residual magnitude (lowest index wins exact
    ties), add it to the selected set, least-squares refit on all selected
    columns, and recompute the residual.

    Parameters
    ----------
    a : MeasurementMatrix
    y : array-like
        Measurement vector of length a.m.
    epsilon : float, optional
        Stopping threshold on the residual l2 norm, absolute by default.
        With relative=True it is scaled by ||y||. When omitted, the
        threshold defaults to 1e-10 * ||y||.
    max_iter : int, optional
        Iteration cap; defaults to a.m (further columns cannot be
        independent).
    relative : bool
        Interpret epsilon relative to ||y||.

    Returns
    -------
    RecoveryResult
        converged=False means the cap was hit first; the best-effort
        result is still returned.

    Raises
    ------
    RankDeficientError
        If the selected columns become linearly dependent mid-run. The run
        aborts rather than skipping the offending index.
    """
    vec = numerics.as_vector(y)
    if vec.shape[0] != a.m:
        raise DimensionMismatchError(f"measurement length {vec.shape[0]} != row count {a.m}")
    y_norm = float(np.linalg.norm(vec))
    if epsilon is None:
        threshold = DEFAULT_RELATIVE_EPSILON * y_norm
    else:
        epsilon = float(epsilon)
        if epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        threshold = epsilon * y_norm if relative else epsilon
    if max_iter is None:
        max_iter = a.m
    max_iter = int(max_iter)
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")

    selected: list[int] = []
    values = np.zeros(0, dtype=np.complex128)
    residual = vec.copy()
    residual_norm = y_norm
    trace: list[float] = []
    while residual_norm > threshold and len(selected) < max_iter:
        pick = int(np.argmax(np.abs(a.data.conj().T @ residual)))
        if pick in selected:
            break  # residual is orthogonal to every useful column; no progress possible
        selected.append(pick)
        sub = a.data[:, selected]
        values = numerics.solve_least_squares(sub, vec)
        residual = vec - sub @ values
        residual_norm = float(np.linalg.norm(residual))
        trace.append(residual_norm)
    return RecoveryResult(
        support=tuple(selected),
        values=values,
        residual_norm=residual_norm,
        iterations=len(selected),
        converged=residual_norm <= threshold,
        residual_trace=tuple(trace),
    )


def exhaustive_l0_search(
    a: matrices.MeasurementMatrix,
    y,
    k_max: int,
    epsilon: float,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    strict: bool = False,
) -> list[L0Solution]:
    """Enumerate every support of size 1..k_max and keep the consistent ones.

    A support qualifies when its full-rank least-squares fit leaves a
    residual of at most epsilon * ||y|| and every fitted value is nonzero
    (supports that fit only by zeroing entries belong to a smaller k).
    Results are ordered by (size, lexicographic), so the minimal-size
    explanations come first and non-uniqueness shows up as several entries
    of the same size. Computationally infeasible beyond desk scale, which
    is exactly what the budget guard documents.
    """
    vec = numerics.as_vector(y)
    if vec.shape[0] != a.m:
        raise DimensionMismatchError(f"measurement length {vec.shape[0]} != row count {a.m}")
    k_max = int(k_max)
    if not 1 <= k_max <= a.m:
        raise ValueError(f"need 1 <= k_max <= m, got k_max={k_max}, m={a.m}")
    epsilon = float(epsilon)
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    total = sum(math.comb(a.n, k) for k in range(1, k_max + 1))
    if strict and total > max_subsets:
        raise InfeasibleScanError(f"{total} candidate supports exceed the budget of {max_subsets}")
    threshold = epsilon * float(np.linalg.norm(vec))
    solutions: list[L0Solution] = []
    scanned = 0
    for k in range(1, k_max + 1):
        for subset in itertools.combinations(range(a.n), k):
            if scanned >= max_subsets:
                return solutions
            scanned += 1
            sub = a.data[:, subset]
            if numerics.numerical_rank(sub) < k:
                continue
            vals = numerics.solve_least_squares(sub, vec)
            residual = float(np.linalg.norm(vec - sub @ vals))
            if residual <= threshold and float(np.min(np.abs(vals))) > ZERO_VALUE_TOL:
                solutions.append(L0Solution(subset, vals, residual))
    return solutions


def worst_case_margin(mu: float, k: int) -> MarginReport:
    """Margin arithmetic behind the sparsity bound; see MarginReport."""
    mu = float(mu)
    k = int(k)
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"coherence must lie in [0, 1], got {mu}")
    if k < 1:
        raise ValueError("sparsity k must be >= 1")
    floor = 1.0 - (k - 1) * mu
    ceiling = k * mu
    return MarginReport(
        k=k,
        mu=mu,
        signal_floor=floor,
        disturbance_ceiling=ceiling,
        detectable=floor > ceiling,
    )


def signal_to_dict(x: SparseSignal) -> dict:
    return {"n": x.n, "support": list(x.support), "values": complex_to_pairs(x.values)}


def signal_from_dict(d: dict) -> SparseSignal:
    return SparseSignal(int(d["n"]), tuple(int(i) for i in d["support"]), pairs_to_complex(d["values"]))


def measurement_to_dict(y) -> dict:
    vec = numerics.as_vector(y)
    return {"m": int(vec.shape[0]), "data": complex_to_pairs(vec)}


def measurement_from_dict(d: dict) -> np.ndarray:
    vec = pairs_to_complex(d["data"])
    if vec.shape[0] != int(d["m"]):
        raise ValueError(f'data holds {vec.shape[0]} entries, expected m = {int(d["m"])}')
    return vec


def save_signal(x: SparseSignal, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(signal_to_dict(x), fh)
        fh.write("\n")


def load_signal(path) -> SparseSignal:
    with open(path, encoding="utf-8") as fh:
        return signal_from_dict(json.load(fh))


def save_measurement(y, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(measurement_to_dict(y), fh)
        fh.write("\n")


def load_measurement(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return measurement_from_dict(json.load(fh))
