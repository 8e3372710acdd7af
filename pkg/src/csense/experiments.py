"""Monte Carlo harness for recovery rates versus sparsity.

Quantifies how conservative the coherence certificate is in practice:
inside the certified regime every single trial must recover exactly, while
beyond it the observed rates show how much slack typical (non worst-case)
signals enjoy. Each trial draws its generator from (seed, k, trial), so
reports are pure functions of the config regardless of execution order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import coherence, matrices, recovery
from .errors import RankDeficientError

AMPLITUDE_UNIT_EQUAL = "unit_equal"
AMPLITUDE_RANDOM = "random_magnitude_phase"
AMPLITUDE_MODELS = (AMPLITUDE_UNIT_EQUAL, AMPLITUDE_RANDOM)

VALUE_MATCH_RTOL = 1e-6


@dataclass
class ExperimentConfig:
    """Declarative description of one recovery-rate sweep.

    matrix holds keyword arguments for matrices.from_spec. k_range is an
    inclusive (low, high) pair. epsilon is the pursuit stopping threshold,
    relative to ||y|| so trials with different amplitudes are comparable.
    Random amplitudes are log-uniform magnitudes in [a_min, a_max] with
    uniform phases.
    """

    matrix: dict
    k_range: tuple[int, int]
    trials: int
    amplitude_model: str = AMPLITUDE_UNIT_EQUAL
    seed: int = 0
    epsilon: float = 1e-10
    a_min: float = 0.5
    a_max: float = 2.0

    def __post_init__(self):
        self.matrix = dict(self.matrix)
        lo, hi = (int(v) for v in self.k_range)
        if lo < 1 or hi < lo:
            raise ValueError(f"k_range must satisfy 1 <= low <= high, got ({lo}, {hi})")
        self.k_range = (lo, hi)
        self.trials = int(self.trials)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.amplitude_model not in AMPLITUDE_MODELS:
            raise ValueError(f"unknown amplitude model {self.amplitude_model!r}")
        self.seed = int(self.seed)
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        self.epsilon = float(self.epsilon)
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        self.a_min = float(self.a_min)
        self.a_max = float(self.a_max)
        if not 0.0 < self.a_min <= self.a_max:
            raise ValueError("need 0 < a_min <= a_max")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(
            matrix=dict(d["matrix"]),
            k_range=tuple(d["k_range"]),
            trials=d["trials"],
            amplitude_model=d.get("amplitude_model", AMPLITUDE_UNIT_EQUAL),
            seed=d.get("seed", 0),
            epsilon=d.get("epsilon", 1e-10),
            a_min=d.get("a_min", 0.5),
            a_max=d.get("a_max", 2.0),
        )

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix,
            "k_range": list(self.k_range),
            "trials": self.trials,
            "amplitude_model": self.amplitude_model,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "a_min": self.a_min,
            "a_max": self.a_max,
        }


@dataclass
class ExperimentRow:
    """Aggregate recovery statistics at one sparsity level."""

    k: int
    trials: int
    first_pick_correct_rate: float
    exact_recovery_rate: float
    mean_iterations: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "trials": self.trials,
            "first_pick_correct_rate": self.first_pick_correct_rate,
            "exact_recovery_rate": self.exact_recovery_rate,
            "mean_iterations": self.mean_iterations,
        }


@dataclass
class ExperimentReport:
    CSV_HEADER = "k,trials,first_pick_rate,exact_rate,mean_iters"

    rows: list[ExperimentRow] = field(default_factory=list)
    matrix_mu: float = 0.0
    k_max_theory: int | None = None

    def to_dict(self) -> dict:
        return {
            "matrix_mu": self.matrix_mu,
            "k_max_theory": self.k_max_theory,
            "rows": [row.to_dict() for row in self.rows],
        }

    def csv_lines(self) -> list[str]:
        lines = [self.CSV_HEADER]
        for row in self.rows:
            lines.append(
                f"{row.k},{row.trials},{row.first_pick_correct_rate!r},"
                f"{row.exact_recovery_rate!r},{row.mean_iterations!r}"
            )
        return lines


def _draw_values(rng: np.random.Generator, k: int, cfg: ExperimentConfig) -> np.ndarray:
    if cfg.amplitude_model == AMPLITUDE_UNIT_EQUAL:
        return np.ones(k, dtype=np.complex128)
    mags = np.exp(rng.uniform(math.log(cfg.a_min), math.log(cfg.a_max), size=k))
    phases = rng.uniform(0.0, 2.0 * math.pi, size=k)
    return mags * np.exp(1j * phases)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Per-k recovery rates over independent random trials.

    A trial counts as an exact recovery when the pursuit returns the true
    support as a set and the value error is at most 1e-6 * ||values||.
    The first pick is the argmax of |A^H y|, identical to the pursuit's
    first selection. A mid-run rank-deficiency counts as a failed trial at
    the iteration cap.
    """
    mat = matrices.from_spec(**cfg.matrix)
    lo, hi = cfg.k_range
    if hi > mat.m:
        raise ValueError(f"k_range high {hi} exceeds measurement count {mat.m}")
    base = coherence.coherence_index(mat)
    rows = []
    for k in range(lo, hi + 1):
        first_hits = 0
        exact_hits = 0
        iteration_sum = 0
        for trial in range(cfg.trials):
            rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, k, trial)))
            support = matrices.draw_without_replacement(rng, mat.n, k)
            values = _draw_values(rng, k, cfg)
            x = recovery.SparseSignal(mat.n, support, values)
            y = recovery.measure(mat, x)
            first_pick = int(np.argmax(np.abs(mat.data.conj().T @ y)))
            first_hits += first_pick in support
            try:
                result = recovery.matching_pursuit(mat, y, epsilon=cfg.epsilon, relative=True)
            except RankDeficientError:
                iteration_sum += mat.m
                continue
            iteration_sum += result.iterations
            if tuple(sorted(result.support)) == support:
                order = np.argsort(result.support)
                err = float(np.linalg.norm(result.values[order] - values))
                if err <= VALUE_MATCH_RTOL * float(np.linalg.norm(values)):
                    exact_hits += 1
        rows.append(
            ExperimentRow(
                k=k,
                trials=cfg.trials,
                first_pick_correct_rate=first_hits / cfg.trials,
                exact_recovery_rate=exact_hits / cfg.trials,
                mean_iterations=iteration_sum / cfg.trials,
            )
        )
    return ExperimentReport(rows=rows, matrix_mu=base.mu, k_max_theory=base.k_max)


@dataclass
class SubsetScore:
    """Coherence of one candidate partial-DFT row subset."""

    rows: tuple[int, ...]
    mu: float
    k_max: int | None

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "mu": self.mu, "k_max": self.k_max}


def sweep_partial_dft_subsets(n: int, m: int, subsets: int, seed: int) -> list[SubsetScore]:
    """Draw row subsets, score each by coherence, return them sorted by mu.

    Duplicate draws are collapsed, so for m == n the single possible subset
    appears once. Used to hunt for row sets whose coherence certifies a
    target sparsity.
    """
    n = int(n)
    m = int(m)
    subsets = int(subsets)
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    if subsets < 1:
        raise ValueError("subsets must be >= 1")
    rng = np.random.default_rng(int(seed))
    seen: dict[tuple[int, ...], SubsetScore] = {}
    for _ in range(subsets):
        rows = matrices.draw_without_replacement(rng, n, m)
        if rows in seen:
            continue
        mat = matrices.build_partial_dft(n, matrices.RowIndexSet(n, rows))
        rep = coherence.coherence_index(mat)
        seen[rows] = SubsetScore(rows=rows, mu=rep.mu, k_max=rep.k_max)
    return sorted(seen.values(), key=lambda score: score.mu)
