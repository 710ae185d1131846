"""Objective-space primitives shared by every other module.

Minimization is assumed throughout: a vector is better when its components
are smaller.  Dominance comparisons are exact floating point comparisons;
no epsilon is applied anywhere.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "ObjectiveVector",
    "Solution",
    "EvaluationTrace",
    "dominates",
    "weakly_dominates",
    "nondominated_indices",
    "nondominated_filter",
    "as_objective_array",
    "read_trace_csv",
    "write_trace_csv",
    "write_solutions_csv",
]


@dataclass(frozen=True)
class ObjectiveVector:
    """An immutable point in objective space with at least two finite components."""

    values: tuple[float, ...]

    def __init__(self, values: Iterable[float]):
        vals = tuple(float(v) for v in values)
        if len(vals) < 2:
            raise ValueError("an objective vector needs at least two components")
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"objective vector has non-finite components: {vals}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.values, dtype=dtype or float)


@dataclass(frozen=True)
class Solution:
    """A decision vector together with its objective values and the global
    0-based index of the evaluation that produced it."""

    x: tuple[float, ...]
    f: ObjectiveVector
    eval_index: int

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if not all(np.isfinite(v) for v in self.x):
            raise ValueError("decision vector has non-finite components")
        if self.eval_index < 0:
            raise ValueError("eval_index must be >= 0")


@dataclass(frozen=True)
class EvaluationTrace:
    """Every evaluated solution of one optimizer run, in evaluation order.

    ``eval_index`` values are contiguous from 0; the initial population is
    part of the trace.  ``run_seed`` is the seed the run was started with
    (kept in the per-run metadata, not in the CSV itself).
    """

    problem_id: str
    run_seed: int
    solutions: tuple[Solution, ...]

    def __post_init__(self):
        object.__setattr__(self, "solutions", tuple(self.solutions))
        for i, sol in enumerate(self.solutions):
            if sol.eval_index != i:
                raise ValueError(
                    f"trace indices must be contiguous from 0; "
                    f"position {i} holds eval_index {sol.eval_index}"
                )

    def __len__(self) -> int:
        return len(self.solutions)

    def objectives(self) -> np.ndarray:
        return np.array([s.f.values for s in self.solutions], dtype=float)

    def decisions(self) -> np.ndarray:
        return np.array([s.x for s in self.solutions], dtype=float)


def _as_vector(u) -> np.ndarray:
    arr = np.asarray(u, dtype=float)
    if arr.ndim != 1:
        raise ValueError("expected a single objective vector")
    return arr


def dominates(u, v) -> bool:
    """True iff ``u`` Pareto-dominates ``v``: u_j <= v_j in every component
    and u_i < v_i in at least one.  Exact comparisons, minimization."""
    a, b = _as_vector(u), _as_vector(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def weakly_dominates(u, v) -> bool:
    """True iff u_j <= v_j in every component (reflexive)."""
    a, b = _as_vector(u), _as_vector(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b))


def as_objective_array(points) -> np.ndarray:
    """Coerce a collection of objective vectors into a finite (N, M) float
    array with M >= 2.  Accepts ndarrays, sequences of sequences, and
    sequences of :class:`ObjectiveVector`."""
    if isinstance(points, np.ndarray) and points.dtype == float and points.ndim == 2:
        arr = points
    else:
        arr = np.array([np.asarray(p, dtype=float) for p in points], dtype=float)
    if arr.ndim != 2:
        raise ValueError("expected a two-dimensional collection of objective vectors")
    if arr.shape[0] == 0:
        raise ValueError("empty set of objective vectors")
    if arr.shape[1] < 2:
        raise ValueError("objective vectors need at least two components")
    if not np.all(np.isfinite(arr)):
        raise ValueError("objective vectors must be finite")
    return arr


def nondominated_indices(F) -> np.ndarray:
    """Indices (in input order) of the nondominated subset of ``F``.

    Dominated rows are dropped; exact duplicates collapse to the first
    occurrence.  The two-objective case runs as a sort-and-sweep in
    O(n log n); higher dimensions fall back to pairwise comparison.
    """
    if len(F) == 0:
        return np.empty(0, dtype=int)
    F = as_objective_array(F)
    n, m = F.shape
    if m == 2:
        # Sort by (f1, f2, index); a point survives iff its f2 strictly
        # improves on everything sorted before it.
        order = np.lexsort((np.arange(n), F[:, 1], F[:, 0]))
        keep = []
        best = np.inf
        for i in order:
            if F[i, 1] < best:
                keep.append(i)
                best = F[i, 1]
        return np.array(sorted(keep), dtype=int)

    le = np.all(F[:, None, :] <= F[None, :, :], axis=-1)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=-1)
    dom = le & lt  # dom[i, j]: row i dominates row j
    dominated = dom.any(axis=0)
    eq = le & le.T  # exact duplicates
    np.fill_diagonal(eq, False)
    earlier_dup = np.triu(eq).any(axis=0)  # a duplicate appears earlier
    return np.flatnonzero(~dominated & ~earlier_dup)


def nondominated_filter(points) -> np.ndarray:
    """The nondominated rows of ``points`` (input order, duplicates collapsed)."""
    if len(points) == 0:
        return np.empty((0, 2))
    F = as_objective_array(points)
    return F[nondominated_indices(F)]


def _fmt(v: float) -> str:
    # Shortest representation that round-trips to the exact same double.
    return repr(float(v))


def write_solutions_csv(solutions, path, extra: dict[str, list] | None = None) -> None:
    """Write solutions as ``eval_index,x_0..x_{n-1},f_0..f_{M-1}`` (UTF-8, LF).

    ``extra`` appends named columns (each one value per solution)."""
    path = Path(path)
    solutions = tuple(solutions)
    n = len(solutions[0].x) if solutions else 0
    m = len(solutions[0].f) if solutions else 2
    extra = extra or {}
    header = (
        ["eval_index"]
        + [f"x_{j}" for j in range(n)]
        + [f"f_{j}" for j in range(m)]
        + list(extra)
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i, sol in enumerate(solutions):
            writer.writerow(
                [sol.eval_index]
                + [_fmt(v) for v in sol.x]
                + [_fmt(v) for v in sol.f.values]
                + [extra[k][i] for k in extra]
            )


def write_trace_csv(trace: EvaluationTrace, path) -> None:
    """Write a trace as ``eval_index,x_0..x_{n-1},f_0..f_{M-1}`` (UTF-8, LF)."""
    write_solutions_csv(trace.solutions, path)


def read_trace_csv(path, problem_id: str = "unknown", run_seed: int = 0,
                   problem=None) -> EvaluationTrace:
    """Read a trace CSV back into an :class:`EvaluationTrace`.

    When ``problem`` is given, every row is re-evaluated and must reproduce
    the stored objectives exactly; a mismatch raises ``ValueError``.
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        x_cols = [i for i, h in enumerate(header) if h.startswith("x_")]
        f_cols = [i for i, h in enumerate(header) if h.startswith("f_")]
        if header[0] != "eval_index" or not x_cols or not f_cols:
            raise ValueError(f"{path}: not a trace CSV (header {header})")
        solutions = []
        for row in reader:
            if not row:
                continue
            solutions.append(
                Solution(
                    x=tuple(float(row[i]) for i in x_cols),
                    f=ObjectiveVector(float(row[i]) for i in f_cols),
                    eval_index=int(row[0]),
                )
            )
    trace = EvaluationTrace(problem_id=problem_id, run_seed=run_seed,
                            solutions=tuple(solutions))
    if problem is not None:
        X = trace.decisions()
        F = problem.evaluate_batch(X)
        stored = trace.objectives()
        if not np.array_equal(F, stored):
            bad = int(np.flatnonzero(~np.all(F == stored, axis=1))[0])
            raise ValueError(
                f"{path}: objectives of eval {bad} do not match re-evaluation"
            )
    return trace
