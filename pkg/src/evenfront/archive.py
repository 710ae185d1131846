"""Bounded archive updated by the naive averaged-Hausdorff removal rule.

A candidate enters only if no member weakly dominates it; on acceptance it
evicts every member it strictly dominates.  Whenever the archive exceeds its
capacity N_R = |R|, the member whose removal minimizes Delta_p(A \\ {a}, R)
is dropped, ties broken by the smallest GD_p(A \\ {a}, R), then by earliest
insertion.  ``postprocess`` drives a whole evaluation trace through the
archive in forward (evaluation) or backward (reversed) order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.spatial.distance import cdist

from .core import EvaluationTrace, Solution, as_objective_array
from .indicators import delta_p, gd_p
from .reffront import ReferenceFront

__all__ = ["ArchiveStats", "BoundedArchive", "Direction",
           "archive_insert", "delta1_removal_oracle", "postprocess"]


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass
class ArchiveStats:
    insertions_attempted: int = 0
    dominance_rejections: int = 0
    prunes: int = 0

    def as_dict(self) -> dict:
        return {
            "insertions_attempted": self.insertions_attempted,
            "dominance_rejections": self.dominance_rejections,
            "prunes": self.prunes,
        }


class BoundedArchive:
    """Single-owner mutable archive; all pruning logic reads objective space.

    ``members`` keeps full solutions in insertion order, which is also the
    tie-break order of the removal rule.
    """

    def __init__(self, reference, p: float, capacity: int | None = None):
        if isinstance(reference, ReferenceFront):
            ref = np.asarray(reference.points, dtype=float)
        else:
            ref = as_objective_array(reference)
        if not p > 0:
            raise ValueError(f"p must be positive, got {p}")
        self.reference = ref
        self.p = float(p)
        self.capacity = int(capacity) if capacity is not None else len(ref)
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.members: list[Solution] = []
        self._F = np.empty((0, ref.shape[1]))
        self.stats = ArchiveStats()

    def objectives(self) -> np.ndarray:
        return self._F.copy()

    def insert(self, solution: Solution) -> bool:
        """Offer one solution; returns True iff it was accepted (it may still
        be pruned away again by the capacity rule within this call)."""
        fx = np.asarray(solution.f, dtype=float)
        if fx.shape != (self.reference.shape[1],):
            raise ValueError(
                f"objective dimension {fx.shape} does not match reference "
                f"dimension {self.reference.shape[1]}"
            )
        self.stats.insertions_attempted += 1
        if len(self.members) > 0:
            if bool(np.any(np.all(self._F <= fx, axis=1))):
                self.stats.dominance_rejections += 1
                return False
            dominated = np.all(fx <= self._F, axis=1) & np.any(fx < self._F, axis=1)
            if np.any(dominated):
                keep = ~dominated
                self.members = [s for s, k in zip(self.members, keep) if k]
                self._F = self._F[keep]
        self.members.append(solution)
        self._F = np.vstack([self._F, fx[None, :]])
        while len(self.members) > self.capacity:
            self._prune()
        return True

    def _prune(self) -> None:
        """Remove the member whose deletion minimizes Delta_p against the
        reference.

        The pairwise distance matrix is computed once and shared across the
        per-candidate evaluations.  Every derived quantity is obtained by
        selections and by sums over the same value sequences an independent
        per-candidate recomputation would produce, so the decision is
        bit-for-bit identical to exhaustive single-removal evaluation.
        """
        A, R, p = self._F, self.reference, self.p
        n, nr = len(A), len(R)
        D = cdist(A, R)
        row_min_p = D.min(axis=1) ** p
        order = np.argsort(D, axis=0, kind="stable")
        first_row = order[0]
        col_min1 = D[first_row, np.arange(nr)]
        col_min2 = D[order[1], np.arange(nr)]
        h = np.empty(n)
        gd = np.empty(n)
        for i in range(n):
            gd_i = (np.sum(np.delete(row_min_p, i)) / (n - 1)) ** (1.0 / p)
            col_min = np.where(first_row == i, col_min2, col_min1)
            igd_i = (np.sum(col_min ** p) / nr) ** (1.0 / p)
            gd[i] = gd_i
            h[i] = max(gd_i, igd_i)
        tie = np.flatnonzero(h == h.min())
        if len(tie) > 1:
            tie = tie[gd[tie] == gd[tie].min()]
        victim = int(tie[0])
        del self.members[victim]
        self._F = np.delete(self._F, victim, axis=0)
        self.stats.prunes += 1


def archive_insert(archive: BoundedArchive, solution: Solution) -> BoundedArchive:
    """Functional-style alias for :meth:`BoundedArchive.insert`."""
    archive.insert(solution)
    return archive


def delta1_removal_oracle(A, R, p: float) -> int:
    """Index of the member the removal rule drops, found by exhaustively
    materializing every single-removal subset.  Test oracle; O(|A|^2 |R|)."""
    A = as_objective_array(A)
    if isinstance(R, ReferenceFront):
        R = R.points
    R = as_objective_array(R)
    if len(A) < 2:
        raise ValueError("the removal rule needs at least two members")
    values = np.empty(len(A))
    gds = np.empty(len(A))
    for i in range(len(A)):
        reduced = np.delete(A, i, axis=0)
        res = delta_p(reduced, R, p)
        values[i] = res.value
        gds[i] = res.gd
    tie = np.flatnonzero(values == values.min())
    if len(tie) > 1:
        tie = tie[gds[tie] == gds[tie].min()]
    return int(tie[0])


def postprocess(trace: EvaluationTrace, reference, direction, p: float,
                capacity: int | None = None) -> BoundedArchive:
    """Feed every traced solution through the archive in the given direction.

    FORWARD presents solutions in evaluation order; BACKWARD reverses the
    stream, so the most converged solutions arrive first and most of the rest
    fail the dominance gate.
    """
    if len(trace) == 0:
        raise ValueError("cannot postprocess an empty trace")
    direction = Direction(direction)
    archive = BoundedArchive(reference, p=p, capacity=capacity)
    stream = trace.solutions if direction is Direction.FORWARD \
        else tuple(reversed(trace.solutions))
    for sol in stream:
        archive.insert(sol)
    return archive
