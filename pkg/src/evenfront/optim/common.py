"""Shared machinery for the optimizers: seeded RNG, variation operators,
nondominated sorting, crowding distance, and survival selection."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..core import EvaluationTrace, ObjectiveVector, Solution

__all__ = [
    "OptimizerConfig", "RunResult", "make_rng", "TraceRecorder",
    "fast_nondominated_sort", "crowding_distance", "rank_and_crowding",
    "nsga2_survival", "scd_truncate", "binary_tournament",
    "sbx_pair", "polynomial_mutation",
]


@dataclass(frozen=True)
class OptimizerConfig:
    """Run configuration; ``params`` overrides per-algorithm defaults."""

    algorithm: str
    mu: int
    budget: int
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mu < 2:
            raise ValueError("population size must be >= 2")
        if self.budget < self.mu:
            raise ValueError("budget must cover at least the initial population")


@dataclass(frozen=True)
class RunResult:
    trace: EvaluationTrace
    final_population: tuple[Solution, ...]
    wall_time: float


def make_rng(seed: int) -> np.random.Generator:
    # PCG64: seedable, portable, and stable across platforms.
    return np.random.Generator(np.random.PCG64(seed))


class TraceRecorder:
    """Accumulates every evaluation in order and builds the final trace."""

    def __init__(self, problem_id: str, seed: int, budget: int):
        self.problem_id = problem_id
        self.seed = seed
        self.budget = budget
        self._xs: list[np.ndarray] = []
        self._fs: list[np.ndarray] = []

    def __len__(self) -> int:
        return len(self._xs)

    @property
    def remaining(self) -> int:
        return self.budget - len(self._xs)

    def record(self, X: np.ndarray, F: np.ndarray) -> np.ndarray:
        """Append a batch; returns the eval indices assigned to the rows."""
        if len(X) > self.remaining:
            raise ValueError("evaluation budget exceeded")
        start = len(self._xs)
        self._xs.extend(np.asarray(X, dtype=float))
        self._fs.extend(np.asarray(F, dtype=float))
        return np.arange(start, start + len(X))

    def build(self, final_indices: np.ndarray, started: float) -> RunResult:
        solutions = tuple(
            Solution(x=tuple(x), f=ObjectiveVector(f), eval_index=i)
            for i, (x, f) in enumerate(zip(self._xs, self._fs))
        )
        trace = EvaluationTrace(problem_id=self.problem_id,
                                run_seed=self.seed, solutions=solutions)
        final = tuple(solutions[i] for i in final_indices)
        return RunResult(trace=trace, final_population=final,
                         wall_time=time.perf_counter() - started)


def fast_nondominated_sort(F: np.ndarray) -> list[np.ndarray]:
    """Partition rows of ``F`` into fronts F1, F2, ... (lists of row indices).

    F1 is the nondominated subset; each later front is nondominated once the
    earlier ones are removed.  Indices within a front stay ascending.
    """
    F = np.asarray(F, dtype=float)
    n = len(F)
    if n == 0:
        return []
    le = np.all(F[:, None, :] <= F[None, :, :], axis=-1)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=-1)
    dom = le & lt  # dom[i, j]: i dominates j
    count = dom.sum(axis=0).astype(int)
    fronts = []
    current = np.flatnonzero(count == 0)
    assigned = np.zeros(n, dtype=bool)
    while len(current) > 0:
        fronts.append(current)
        assigned[current] = True
        count = count - dom[current].sum(axis=0)
        current = np.flatnonzero((count == 0) & ~assigned)
    return fronts


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """NSGA-II crowding distance within one front: per-objective extremes get
    +inf, interior points the normalized cuboid-side sum."""
    F = np.asarray(F, dtype=float)
    n = len(F)
    if n <= 2:
        return np.full(n, np.inf)
    dist = np.zeros(n)
    for j in range(F.shape[1]):
        order = np.argsort(F[:, j], kind="stable")
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = F[order[-1], j] - F[order[0], j]
        if span == 0.0:
            continue
        dist[order[1:-1]] += (F[order[2:], j] - F[order[:-2], j]) / span
    return dist


def rank_and_crowding(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Front rank (0-based) and within-front crowding distance per row."""
    fronts = fast_nondominated_sort(F)
    rank = np.empty(len(F), dtype=int)
    crowd = np.empty(len(F))
    for r, front in enumerate(fronts):
        rank[front] = r
        crowd[front] = crowding_distance(F[front])
    return rank, crowd


def nsga2_survival(F: np.ndarray, mu: int) -> np.ndarray:
    """Standard one-shot (mu + mu) truncation: whole fronts, then the best
    crowding distances of the partially kept front."""
    fronts = fast_nondominated_sort(F)
    chosen: list[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= mu:
            chosen.extend(front)
            continue
        need = mu - len(chosen)
        if need > 0:
            cd = crowding_distance(F[front])
            order = np.argsort(-cd, kind="stable")
            chosen.extend(front[order[:need]])
        break
    return np.array(sorted(chosen), dtype=int)


def scd_truncate(F: np.ndarray, mu: int) -> np.ndarray:
    """Sequential crowding truncation: within the partially kept front, drop
    the worst-crowding member one at a time, recomputing after each removal."""
    F = np.asarray(F, dtype=float)
    if len(F) < mu:
        raise ValueError(f"cannot truncate {len(F)} points to {mu}")
    if len(F) == mu:
        return np.arange(mu)
    fronts = fast_nondominated_sort(F)
    chosen: list[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= mu:
            chosen.extend(front)
            continue
        members = list(front)
        while len(chosen) + len(members) > mu:
            cd = crowding_distance(F[members])
            members.pop(int(np.argmin(cd)))
        chosen.extend(members)
        break
    return np.array(sorted(chosen), dtype=int)


def binary_tournament(rng: np.random.Generator, rank: np.ndarray,
                      crowd: np.ndarray) -> int:
    """Pick two at random; lower rank wins, then larger crowding, then the
    first pick."""
    i = int(rng.integers(len(rank)))
    j = int(rng.integers(len(rank)))
    if rank[j] < rank[i]:
        return j
    if rank[i] < rank[j]:
        return i
    if crowd[j] > crowd[i]:
        return j
    return i


_EPS = 1e-14


def sbx_pair(rng: np.random.Generator, p1: np.ndarray, p2: np.ndarray,
             lower: np.ndarray, upper: np.ndarray,
             prob: float, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover (bounded) on one parent pair."""
    c1, c2 = p1.copy(), p2.copy()
    if rng.random() > prob:
        return c1, c2
    exp = 1.0 / (eta + 1.0)
    for j in range(len(p1)):
        if rng.random() > 0.5:
            continue
        y1, y2 = p1[j], p2[j]
        if abs(y1 - y2) <= _EPS:
            continue
        lo, hi = (y1, y2) if y1 < y2 else (y2, y1)
        yl, yu = lower[j], upper[j]
        u = rng.random()

        beta = 1.0 + 2.0 * (lo - yl) / (hi - lo)
        alpha = 2.0 - beta ** -(eta + 1.0)
        bq = (u * alpha) ** exp if u <= 1.0 / alpha \
            else (1.0 / (2.0 - u * alpha)) ** exp
        v1 = 0.5 * ((lo + hi) - bq * (hi - lo))

        beta = 1.0 + 2.0 * (yu - hi) / (hi - lo)
        alpha = 2.0 - beta ** -(eta + 1.0)
        bq = (u * alpha) ** exp if u <= 1.0 / alpha \
            else (1.0 / (2.0 - u * alpha)) ** exp
        v2 = 0.5 * ((lo + hi) + bq * (hi - lo))

        v1 = min(max(v1, yl), yu)
        v2 = min(max(v2, yl), yu)
        if rng.random() <= 0.5:
            v1, v2 = v2, v1
        c1[j], c2[j] = v1, v2
    return c1, c2


def polynomial_mutation(rng: np.random.Generator, x: np.ndarray,
                        lower: np.ndarray, upper: np.ndarray,
                        prob: float, eta: float) -> np.ndarray:
    """Bounded polynomial mutation, one variable at a time."""
    y = x.copy()
    exp = 1.0 / (eta + 1.0)
    for j in range(len(x)):
        if rng.random() > prob:
            continue
        yl, yu = lower[j], upper[j]
        span = yu - yl
        d1 = (y[j] - yl) / span
        d2 = (yu - y[j]) / span
        u = rng.random()
        if u <= 0.5:
            val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)
            dq = val ** exp - 1.0
        else:
            val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)
            dq = 1.0 - val ** exp
        y[j] = min(max(y[j] + dq * span, yl), yu)
    return y
