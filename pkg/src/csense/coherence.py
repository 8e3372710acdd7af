"""Uniqueness analytics for measurement matrices.

Coherence index and the sparsity level it certifies, Welch-bound
comparisons, condition numbers of support sub-matrices, combinatorial
full-rank scans over 2K-column subsets, and brute-force restricted-isometry
constants. The scans exist precisely to demonstrate the combinatorial cost
that makes coherence the practical certificate.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import matrices, numerics
from .errors import InfeasibleScanError

ETF_SPREAD_TOL = 1e-6
DEFAULT_MAX_SUBSETS = 100_000


@dataclass
class CoherenceReport:
    """Coherence index mu plus everything the sparsity bound derives from it.

    k_max and bound_value are None when mu == 0 (orthonormal columns): no
    sparsity level is excluded in that case.
    """

    mu: float
    welch: float
    k_max: int | None
    bound_value: float | None
    is_etf: bool
    gram_offdiag_max: float
    gram_offdiag_min: float

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "welch": self.welch,
            "k_max": self.k_max,
            "bound_value": self.bound_value,
            "is_etf": self.is_etf,
            "gram_offdiag_max": self.gram_offdiag_max,
            "gram_offdiag_min": self.gram_offdiag_min,
        }


@dataclass
class UniquenessReport:
    """Result of the rank scan over 2k-column subsets (lexicographic order)."""

    k: int
    total_subsets: int
    scanned: int
    all_full_rank: bool
    witness: tuple[int, ...] | None
    min_cond: float
    max_cond: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "total_subsets": self.total_subsets,
            "scanned": self.scanned,
            "all_full_rank": self.all_full_rank,
            "witness": None if self.witness is None else list(self.witness),
            "min_cond": self.min_cond,
            "max_cond": self.max_cond,
        }


@dataclass
class RipReport:
    """Worst eigenvalue deviation of k-column Grams from the identity."""

    k: int
    delta: float
    subsets_scanned: int

    def to_dict(self) -> dict:
        return {"k": self.k, "delta": self.delta, "subsets_scanned": self.subsets_scanned}


def welch_bound(m: int, n: int) -> float:
    """sqrt((n-m)/(m(n-1))), the coherence floor for m-by-n unit-norm frames."""
    m = int(m)
    n = int(n)
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    if m == n:
        return 0.0
    return math.sqrt((n - m) / (m * (n - 1)))


def sparsity_bound(mu: float) -> float | None:
    """The strict upper bound (1 + 1/mu)/2 on sparsity; None when mu == 0."""
    mu = float(mu)
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"coherence must lie in [0, 1], got {mu}")
    if mu == 0.0:
        return None
    return 0.5 * (1.0 + 1.0 / mu)


def max_sparsity(mu: float) -> int | None:
    """Largest integer K strictly below (1 + 1/mu)/2; None means unbounded."""
    bound = sparsity_bound(mu)
    if bound is None:
        return None
    return max(0, math.ceil(bound) - 1)


def coherence_index(a: matrices.MeasurementMatrix) -> CoherenceReport:
    """Maximum off-diagonal Gram magnitude of a column-normalized matrix.

    Off-diagonal mass below the numerical noise floor n*eps counts as zero,
    so orthonormal columns report mu = 0 (unbounded sparsity) instead of
    rounding dust.
    """
    g = numerics.gram(a.data)
    if a.n == 1:
        off_max = off_min = 0.0
    else:
        off = np.abs(g[~np.eye(a.n, dtype=bool)])
        off_max = float(np.max(off))
        off_min = float(np.min(off))
    if off_max <= a.n * np.finfo(np.float64).eps:
        mu = 0.0
    else:
        mu = min(off_max, 1.0)  # rounding can push |g_kl| a hair past 1
    return CoherenceReport(
        mu=mu,
        welch=welch_bound(a.m, a.n),
        k_max=max_sparsity(mu),
        bound_value=sparsity_bound(mu),
        is_etf=(off_max - off_min) <= ETF_SPREAD_TOL,
        gram_offdiag_max=off_max,
        gram_offdiag_min=off_min,
    )


def gram_submatrix_condition(a: matrices.MeasurementMatrix, support) -> float:
    """Condition number of the column sub-matrix selected by support."""
    if len(tuple(support)) > a.m:
        raise ValueError("support larger than the measurement count")
    return numerics.condition_number(matrices.restrict_columns(a, support))


def uniqueness_rank_scan(
    a: matrices.MeasurementMatrix,
    k: int,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    strict: bool = False,
) -> UniquenessReport:
    """Check that every 2k-column sub-matrix has full rank 2k.

    Full rank for all subsets rules out two distinct k-sparse vectors
    explaining the same measurements. Subsets are visited in lexicographic
    order and the witness is the first failure. Only the first max_subsets
    subsets are scanned; with strict=True an over-budget enumeration raises
    InfeasibleScanError instead of truncating.
    """
    k = int(k)
    if k < 1:
        raise ValueError("sparsity k must be >= 1")
    if 2 * k > a.m:
        raise ValueError(f"need 2k <= m, got k={k}, m={a.m}")
    total = math.comb(a.n, 2 * k)
    if strict and total > max_subsets:
        raise InfeasibleScanError(f"{total} subsets of size {2 * k} exceed the budget of {max_subsets}")
    witness = None
    all_full_rank = True
    min_cond = math.inf
    max_cond = 0.0
    scanned = 0
    for subset in itertools.combinations(range(a.n), 2 * k):
        if scanned >= max_subsets:
            break
        scanned += 1
        s = np.linalg.svd(a.data[:, subset], compute_uv=False)
        if s[0] == 0.0 or s[-1] <= numerics.rank_tolerance((a.m, 2 * k), float(s[0])):
            all_full_rank = False
            if witness is None:
                witness = subset
        else:
            cond = float(s[0] / s[-1])
            min_cond = min(min_cond, cond)
            max_cond = max(max_cond, cond)
    if max_cond == 0.0:  # no full-rank subset seen
        min_cond = max_cond = math.inf
    return UniquenessReport(k, total, scanned, all_full_rank, witness, float(min_cond), float(max_cond))


def rip_constant(
    a: matrices.MeasurementMatrix,
    k: int,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    strict: bool = False,
) -> RipReport:
    """Brute-force isometry constant over k-column subsets.

    delta = max over scanned subsets S of max(lambda_max(G_S) - 1,
    1 - lambda_min(G_S)). The enumeration cost is the point: this
    certificate is combinatorial, hence the budget guard.
    """
    k = int(k)
    if not 1 <= k <= a.m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={a.m}")
    total = math.comb(a.n, k)
    if strict and total > max_subsets:
        raise InfeasibleScanError(f"{total} subsets of size {k} exceed the budget of {max_subsets}")
    delta = 0.0
    scanned = 0
    for subset in itertools.combinations(range(a.n), k):
        if scanned >= max_subsets:
            break
        scanned += 1
        lo, hi = numerics.hermitian_eigen_extremes(numerics.gram(a.data[:, subset]))
        delta = max(delta, hi - 1.0, 1.0 - lo)
    return RipReport(k, float(delta), scanned)
