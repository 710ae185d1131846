"""Construction of discrete reference fronts from approximation sets.

Two routes are provided: arc-length-uniform placement on the polygonal line
through a nondominated set (two objectives only), and part-and-select (PSA)
subset extraction, which works in any dimension and only ever returns input
points.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .core import as_objective_array, nondominated_indices

__all__ = ["Origin", "Polyline", "ReferenceFront", "build_polyline",
           "place_uniform", "psa_reference", "write_reference_csv",
           "read_reference_csv"]


class Origin(str, Enum):
    LINEAR_INTERP = "LINEAR_INTERP"
    PSA = "PSA"
    TRUE_FRONT = "TRUE_FRONT"


@dataclass(frozen=True)
class Polyline:
    """A polygonal line through mutually nondominated 2-D points, ordered by
    ascending first objective, with cumulative arc length per vertex."""

    vertices: np.ndarray
    cum_length: np.ndarray

    @property
    def total_length(self) -> float:
        return float(self.cum_length[-1])


@dataclass(frozen=True)
class ReferenceFront:
    """A discrete reference front plus a record of how it was built.

    ``degenerate`` marks PSA outputs that had to fall back to returning the
    whole nondominated input because it was smaller than requested.
    """

    points: np.ndarray
    origin: Origin
    degenerate: bool = False

    def __len__(self) -> int:
        return len(self.points)


def build_polyline(approx) -> Polyline:
    """Filter ``approx`` to its nondominated subset and connect it, sorted by
    ascending f1, into a polygonal line.  Fewer than two surviving points is
    an error: no line can be interpolated."""
    F = as_objective_array(approx)
    if F.shape[1] != 2:
        raise ValueError("polyline interpolation is defined for two objectives")
    nd = F[nondominated_indices(F)]
    if len(nd) < 2:
        raise ValueError(
            f"need at least two nondominated points to interpolate, got {len(nd)}"
        )
    order = np.argsort(nd[:, 0], kind="stable")
    verts = nd[order]
    seg = np.hypot(np.diff(verts[:, 0]), np.diff(verts[:, 1]))
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    verts = verts.copy()
    verts.setflags(write=False)
    cum.setflags(write=False)
    return Polyline(vertices=verts, cum_length=cum)


def place_uniform(line: Polyline, m: int) -> ReferenceFront:
    """Place ``m`` points on ``line`` at arc lengths (i + 1/2) * L / m.

    Consecutive points are exactly L/m apart along the line and the extremes
    sit L/(2m) inside either end.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    L = line.total_length
    s = (np.arange(m) + 0.5) * (L / m)
    xs = np.interp(s, line.cum_length, line.vertices[:, 0])
    ys = np.interp(s, line.cum_length, line.vertices[:, 1])
    pts = np.column_stack([xs, ys])
    pts.setflags(write=False)
    return ReferenceFront(points=pts, origin=Origin.LINEAR_INTERP)


def _part_measure(pts: np.ndarray) -> tuple[float, int]:
    """Largest coordinate range of a part and the coordinate attaining it
    (lowest index on ties)."""
    ranges = pts.max(axis=0) - pts.min(axis=0)
    dim = int(np.argmax(ranges))
    return float(ranges[dim]), dim


def psa_reference(approx, m: int) -> ReferenceFront:
    """Select ``m`` well-spread members of the nondominated subset of
    ``approx`` by recursive part splitting.

    The part with the greatest measure (largest coordinate range) is split at
    the midpoint of that coordinate until ``m`` parts exist; each part is then
    represented by its member closest to the part's hyperbox center.  Ties in
    part selection fall to the oldest part, ties in the split coordinate to
    the lowest index.  If fewer than ``m`` nondominated points exist they are
    all returned and the result is flagged degenerate.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    F = as_objective_array(approx)
    nd_idx = nondominated_indices(F)
    nd = F[nd_idx]
    if len(nd) <= m:
        pts = nd.copy()
        pts.setflags(write=False)
        return ReferenceFront(points=pts, origin=Origin.PSA,
                              degenerate=len(nd) < m)

    # Parts are index arrays into nd; list order is creation order.  Each
    # part's measure is computed once, on creation.
    parts: list[np.ndarray] = [np.arange(len(nd))]
    m0, d0 = _part_measure(nd)
    measures, dims = [m0], [d0]
    while len(parts) < m:
        best_i = int(np.argmax(measures))
        part = parts.pop(best_i)
        best_dim = dims.pop(best_i)
        measures.pop(best_i)
        coords = nd[part, best_dim]
        mid = (coords.min() + coords.max()) / 2.0
        for child in (part[coords <= mid], part[coords > mid]):
            parts.append(child)
            cm, cd = _part_measure(nd[child])
            measures.append(cm)
            dims.append(cd)

    selected = []
    for part in parts:
        pts = nd[part]
        center = (pts.min(axis=0) + pts.max(axis=0)) / 2.0
        d = np.linalg.norm(pts - center, axis=1)
        selected.append(part[int(np.argmin(d))])
    chosen = nd[np.sort(np.asarray(selected))]
    chosen.setflags(write=False)
    return ReferenceFront(points=chosen, origin=Origin.PSA)


def write_reference_csv(front: ReferenceFront, path) -> None:
    """Serialize as ``f_0,f_1[,..],origin`` (UTF-8, LF)."""
    path = Path(path)
    m = front.points.shape[1]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"f_{j}" for j in range(m)] + ["origin"])
        for row in front.points:
            writer.writerow([repr(float(v)) for v in row] + [front.origin.value])


def read_reference_csv(path) -> ReferenceFront:
    """Read either the annotated schema written by :func:`write_reference_csv`
    or a bare ``f_0,f_1`` file (treated as a true front)."""
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        f_cols = [i for i, h in enumerate(header) if h.startswith("f_")]
        has_origin = "origin" in header
        o_col = header.index("origin") if has_origin else -1
        if not f_cols:
            raise ValueError(f"{path}: no objective columns in header {header}")
        rows, origin = [], Origin.TRUE_FRONT
        for row in reader:
            if not row:
                continue
            rows.append([float(row[i]) for i in f_cols])
            if has_origin:
                origin = Origin(row[o_col])
    pts = np.asarray(rows, dtype=float)
    pts.setflags(write=False)
    return ReferenceFront(points=pts, origin=origin)
