"""Set-quality indicators: the averaged Hausdorff family and 2-D hypervolume.

``gd_p``/``igd_p`` are the power-mean generational distance variants; their
maximum is the averaged Hausdorff distance ``delta_p``.  Distances are
Euclidean.  All functions accept anything :func:`~evenfront.core.as_objective_array`
accepts.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from .core import as_objective_array, nondominated_indices

__all__ = ["gd_p", "igd_p", "delta_p", "DeltaP", "hypervolume_2d",
           "hv_contributions_2d"]


def _check_pair(A, B, p: float):
    A = as_objective_array(A)
    B = as_objective_array(B)
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    return A, B


def gd_p(A, B, p: float) -> float:
    """Generational distance GD_p(A, B) = ((1/|A|) sum_a d(a, B)^p)^(1/p),
    where d(a, B) is the Euclidean distance from a to its nearest member of B."""
    A, B = _check_pair(A, B, p)
    d = cdist(A, B).min(axis=1)
    return float((np.sum(d ** p) / len(A)) ** (1.0 / p))


def igd_p(A, B, p: float) -> float:
    """Inverted generational distance: GD_p with the roles of A and B exchanged."""
    A, B = _check_pair(A, B, p)
    d = cdist(B, A).min(axis=1)
    return float((np.sum(d ** p) / len(B)) ** (1.0 / p))


class DeltaP(NamedTuple):
    value: float
    gd: float
    igd: float


def delta_p(A, B, p: float) -> DeltaP:
    """Averaged Hausdorff distance max(GD_p, IGD_p), with both components."""
    gd = gd_p(A, B, p)
    igd = igd_p(A, B, p)
    return DeltaP(value=max(gd, igd), gd=gd, igd=igd)


def hypervolume_2d(points, ref) -> float:
    """Area, in objective space, dominated by ``points`` and bounded by the
    reference point ``ref``.

    Points not strictly below ``ref`` in both coordinates are discarded, as
    are dominated points; an empty remainder yields 0.0.
    """
    ref = np.asarray(ref, dtype=float)
    if ref.shape != (2,):
        raise ValueError("hypervolume_2d needs a two-dimensional reference point")
    F = as_objective_array(points)
    if F.shape[1] != 2:
        raise ValueError("hypervolume_2d is defined for two objectives only")
    F = F[np.all(F < ref, axis=1)]
    if len(F) == 0:
        return 0.0
    F = F[nondominated_indices(F)]
    order = np.argsort(F[:, 0], kind="stable")
    xs, ys = F[order, 0], F[order, 1]
    # Vertical slabs between consecutive x values; ys is strictly decreasing.
    right = np.append(xs[1:], ref[0])
    return float(np.sum((right - xs) * (ref[1] - ys)))


def hv_contributions_2d(points, ref) -> np.ndarray:
    """Exclusive 2-D hypervolume contribution of every row of ``points``.

    Dominated rows, rows not strictly below ``ref``, and duplicated rows
    contribute exactly 0; for the remaining rows the value equals the
    hypervolume lost by deleting that row from the nondominated subset.
    Selection schemes apply this within a single front, where every row is
    live and the delete-one reading holds for the whole input.
    """
    ref = np.asarray(ref, dtype=float)
    F = as_objective_array(points)
    if F.shape[1] != 2 or ref.shape != (2,):
        raise ValueError("hv_contributions_2d is defined for two objectives only")
    n = len(F)
    contrib = np.zeros(n)
    in_box = np.flatnonzero(np.all(F < ref, axis=1))
    if len(in_box) == 0:
        return contrib
    sub = F[in_box]
    kept = nondominated_indices(sub)
    # A duplicated point has zero exclusive contribution even when it is
    # the surviving representative: its twin still covers the same area.
    order = np.lexsort((sub[:, 1], sub[:, 0]))
    dup = np.zeros(len(sub), dtype=bool)
    same = np.all(sub[order[1:]] == sub[order[:-1]], axis=1)
    dup[order[1:][same]] = True
    dup[order[:-1][same]] = True

    live = np.array([i for i in kept if not dup[i]], dtype=int)
    if len(live) == 0:
        return contrib
    pts = sub[live]
    srt = np.argsort(pts[:, 0], kind="stable")
    xs, ys = pts[srt, 0], pts[srt, 1]
    right = np.append(xs[1:], ref[0])
    upper = np.concatenate(([ref[1]], ys[:-1]))
    vals = (right - xs) * (upper - ys)
    contrib[in_box[live[srt]]] = vals
    return contrib
