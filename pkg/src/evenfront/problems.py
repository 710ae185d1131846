"""Bi-objective benchmark problems and their uniformly spaced true fronts.

Four problems, all minimization with M = 2:

* ``SPHERE`` — n=2, f1 = ||x||^2, f2 = ||x - (1,1)|| ^2, connected convex front.
* ``DENT`` — n=2, the dented front with lambda = 0.85.
* ``ZDT3`` — n=20 decision variables (this suite deliberately uses 20 where
  the original formulation has 30), disconnected front with five segments.
* ``WFG1`` — 2 position + 4 distance parameters, convex/mixed front geometry.

``true_front_points`` places k points uniformly by arc length along the
analytic front (rectification of the parametric form); for WFG1, where no
usable closed form exists, the front is recovered by a fine grid sweep over
the position parameters followed by nondominated filtering and PSA selection.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .core import nondominated_indices
from .reffront import psa_reference

__all__ = ["ProblemSpec", "PROBLEM_IDS", "get_problem", "true_front_points",
           "load_true_front", "default_output_root"]

# Environment variable naming the default output root for persisted artifacts.
OUTPUT_ROOT_ENV = "EVENFRONT_OUT"


def default_output_root() -> Path:
    return Path(os.environ.get(OUTPUT_ROOT_ENV, "results"))


@dataclass(frozen=True)
class ProblemSpec:
    """Immutable description of one benchmark problem."""

    id: str
    n: int
    m: int
    lower: np.ndarray
    upper: np.ndarray
    hv_ref: tuple[float, float]
    _batch: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    front_param: Callable[[np.ndarray], np.ndarray] | None = field(
        default=None, repr=False)

    def __post_init__(self):
        self.lower.setflags(write=False)
        self.upper.setflags(write=False)
        if not np.all(self.lower < self.upper):
            raise ValueError(f"{self.id}: bounds must satisfy lower < upper")

    def evaluate(self, x) -> np.ndarray:
        """Objectives of a single decision vector (pure, deterministic)."""
        arr = np.asarray(x, dtype=float)
        if arr.shape != (self.n,):
            raise ValueError(
                f"{self.id} expects {self.n} decision variables, got {arr.shape}"
            )
        return self._batch(arr[None, :])[0]

    def evaluate_batch(self, X) -> np.ndarray:
        """Objectives for each row of ``X``; single code path with evaluate."""
        arr = np.asarray(X, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != self.n:
            raise ValueError(
                f"{self.id} expects shape (N, {self.n}), got {arr.shape}"
            )
        return self._batch(arr)

    def clip(self, X) -> np.ndarray:
        return np.clip(X, self.lower, self.upper)


# --------------------------------------------------------------------------
# SPHERE

def _sphere_batch(X: np.ndarray) -> np.ndarray:
    f1 = np.sum(X ** 2, axis=1)
    f2 = np.sum((X - 1.0) ** 2, axis=1)
    return np.column_stack([f1, f2])


def _sphere_front(t: np.ndarray) -> np.ndarray:
    # Pareto set is the segment x = t*(1,1), t in [0,1].
    t = np.asarray(t, dtype=float)
    return np.column_stack([2.0 * t ** 2, 2.0 * (1.0 - t) ** 2])


# --------------------------------------------------------------------------
# DENT

_DENT_LAMBDA = 0.85


def _dent_objectives(s: np.ndarray, u: np.ndarray) -> np.ndarray:
    # s = x1 + x2, u = x1 - x2.
    a = np.sqrt(1.0 + s ** 2)
    b = np.sqrt(1.0 + u ** 2)
    d = _DENT_LAMBDA * np.exp(-(u ** 2))
    f1 = 0.5 * (a + b + u) + d
    f2 = 0.5 * (a + b - u) + d
    return np.column_stack([f1, f2])


def _dent_batch(X: np.ndarray) -> np.ndarray:
    return _dent_objectives(X[:, 0] + X[:, 1], X[:, 0] - X[:, 1])


def _dent_front(t: np.ndarray) -> np.ndarray:
    # Pareto set is the anti-diagonal x2 = -x1; u = x1 - x2 spans [-4, 4].
    t = np.asarray(t, dtype=float)
    u = -4.0 + 8.0 * t
    return _dent_objectives(np.zeros_like(u), u)


# --------------------------------------------------------------------------
# ZDT3

_ZDT3_N = 20


def _zdt3_batch(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    g = 1.0 + 9.0 * np.sum(X[:, 1:], axis=1) / (X.shape[1] - 1)
    h = 1.0 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10.0 * np.pi * f1)
    return np.column_stack([f1, g * h])


def _zdt3_curve_f2(f1: np.ndarray) -> np.ndarray:
    """Height of the g=1 curve; the front is its nondominated subset."""
    return 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)


_ZDT3_SAMPLES = 1_000_000
_zdt3_cache: dict = {}


def _zdt3_segments():
    """Nondominated segments of the ZDT3 curve, found by dense sampling.

    The 10^6 f1 samples are square-warped toward 0 so the sqrt singularity
    at the left end is resolved with near-uniform arc-length increments.
    Returns a list of (f1 values, cumulative chord length) pairs plus the
    cumulative global offsets and total length.
    """
    if "segments" in _zdt3_cache:
        return _zdt3_cache["segments"]
    u = np.linspace(0.0, 1.0, _ZDT3_SAMPLES)
    f1 = u ** 2
    f2 = _zdt3_curve_f2(f1)
    prior_min = np.concatenate(([np.inf], np.minimum.accumulate(f2)[:-1]))
    keep = f2 < prior_min
    # Contiguous kept runs are the front's segments.
    idx = np.flatnonzero(keep)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [len(idx) - 1]))
    segments = []
    offsets = [0.0]
    for s, e in zip(starts, ends):
        sel = idx[s:e + 1]
        sf1, sf2 = f1[sel], f2[sel]
        chord = np.hypot(np.diff(sf1), np.diff(sf2))
        cum = np.concatenate(([0.0], np.cumsum(chord)))
        segments.append((sf1, cum))
        offsets.append(offsets[-1] + cum[-1])
    result = (segments, np.asarray(offsets), offsets[-1])
    _zdt3_cache["segments"] = result
    return result


def _zdt3_points_at_arc(s: np.ndarray) -> np.ndarray:
    """Points on the ZDT3 front at the given arc-length positions, measured
    along the concatenation of the nondominated segments (gaps excluded)."""
    segments, offsets, total = _zdt3_segments()
    s = np.asarray(s, dtype=float)
    seg_idx = np.clip(np.searchsorted(offsets, s, side="right") - 1,
                      0, len(segments) - 1)
    f1 = np.empty_like(s)
    for j, (sf1, cum) in enumerate(segments):
        mask = seg_idx == j
        if np.any(mask):
            f1[mask] = np.interp(s[mask] - offsets[j], cum, sf1)
    return np.column_stack([f1, _zdt3_curve_f2(f1)])


def _zdt3_front(t: np.ndarray) -> np.ndarray:
    _, _, total = _zdt3_segments()
    return _zdt3_points_at_arc(np.asarray(t, dtype=float) * total)


# --------------------------------------------------------------------------
# WFG1 (2 position + 4 distance parameters, M = 2)

_WFG1_K = 2
_WFG1_N = 6
_WFG1_UPPER = 2.0 * np.arange(1, _WFG1_N + 1)


def _correct_to_01(y: np.ndarray, eps: float = 1e-10) -> np.ndarray:
    y = np.where((y < 0) & (y >= -eps), 0.0, y)
    y = np.where((y > 1) & (y <= 1 + eps), 1.0, y)
    return y


def _shift_linear(y: np.ndarray, a: float = 0.35) -> np.ndarray:
    return _correct_to_01(np.fabs(y - a) / np.fabs(np.floor(a - y) + a))


def _bias_flat(y: np.ndarray, a: float, b: float, c: float) -> np.ndarray:
    ret = (a
           + np.minimum(0, np.floor(y - b)) * (a * (b - y) / b)
           - np.minimum(0, np.floor(c - y)) * ((1.0 - a) * (y - c) / (1.0 - c)))
    return _correct_to_01(ret)


def _bias_poly(y: np.ndarray, alpha: float) -> np.ndarray:
    return _correct_to_01(y ** alpha)


def _weighted_sum(y: np.ndarray, w: np.ndarray) -> np.ndarray:
    # Row-local reduction; a matmul here is batch-shape-sensitive at the
    # ulp level, which would break single/batch evaluation equality.
    return _correct_to_01((y * w).sum(axis=1) / w.sum())


def _wfg1_transform(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = _WFG1_K
    y = X / _WFG1_UPPER
    y[:, k:] = _shift_linear(y[:, k:], 0.35)
    y[:, k:] = _bias_flat(y[:, k:], 0.8, 0.75, 0.85)
    y = _bias_poly(y, 0.02)
    w = 2.0 * np.arange(1, _WFG1_N + 1)
    t_pos = _weighted_sum(y[:, :k], w[:k])
    t_dist = _weighted_sum(y[:, k:], w[k:])
    return t_pos, t_dist


def _wfg1_shape(t_pos: np.ndarray, t_dist: np.ndarray) -> np.ndarray:
    x1 = np.maximum(t_dist, 1.0) * (t_pos - 0.5) + 0.5
    h1 = 1.0 - np.cos(0.5 * np.pi * x1)
    h2 = 1.0 - x1 - np.cos(10.0 * np.pi * x1 + 0.5 * np.pi) / (10.0 * np.pi)
    f1 = t_dist + 2.0 * h1
    f2 = t_dist + 4.0 * h2
    return np.column_stack([f1, f2])


def _wfg1_batch(X: np.ndarray) -> np.ndarray:
    return _wfg1_shape(*_wfg1_transform(X))


_WFG1_GRID_PER_DIM = 1000
_wfg1_cache: dict = {}


def _wfg1_front_points(k: int) -> np.ndarray:
    """Grid sweep over the position parameters with the distance block held
    at its optimum, nondominated filter, then PSA selection of k points.

    The per-dimension grid blends uniform and logarithmic spacing: the
    polynomial bias flattens the position mapping so severely that a purely
    uniform grid covers only a sliver of the front.

    The distance block is fixed at its optimum in transformed space
    (t_dist = 0) rather than in decision space.  The optimal decision value
    0.35 * upper[j] is not exactly representable as a double for two of the
    four distance parameters (no double x satisfies x / 6.0 == 0.35 or
    x / 12.0 == 0.35), and the 0.02-power bias amplifies that one-ulp
    normalisation residual into an offset of roughly 0.47 per affected
    parameter, which would displace the whole front by a constant ~0.14 in
    both objectives.  t_dist = 0 is the exact limit those residuals approach.
    """
    if k in _wfg1_cache:
        return _wfg1_cache[k]
    axes = []
    for j in range(_WFG1_K):
        ub = _WFG1_UPPER[j]
        half = _WFG1_GRID_PER_DIM // 2
        axes.append(np.unique(np.concatenate([
            np.linspace(0.0, ub, half + 1),
            ub * np.power(10.0, np.linspace(-300.0, 0.0, half)),
        ])))
    g1, g2 = np.meshgrid(axes[0], axes[1], indexing="ij")
    pos = np.column_stack([g1.ravel(), g2.ravel()])
    X = np.zeros((len(pos), _WFG1_N))
    X[:, :_WFG1_K] = pos
    F = np.empty((len(X), 2))
    step = 250_000
    for start in range(0, len(X), step):
        t_pos, _ = _wfg1_transform(X[start:start + step])
        F[start:start + step] = _wfg1_shape(t_pos, np.zeros_like(t_pos))
    nd = F[nondominated_indices(F)]
    pts = psa_reference(nd, k).points
    _wfg1_cache[k] = pts
    return pts


# --------------------------------------------------------------------------
# Registry and front construction

def _make_problems() -> dict[str, ProblemSpec]:
    two = np.full(2, 2.0)
    return {
        "SPHERE": ProblemSpec(
            id="SPHERE", n=2, m=2, lower=-two.copy(), upper=two.copy(),
            hv_ref=(4.0, 4.0), _batch=_sphere_batch, front_param=_sphere_front),
        "DENT": ProblemSpec(
            id="DENT", n=2, m=2, lower=-two.copy(), upper=two.copy(),
            hv_ref=(5.0, 5.0), _batch=_dent_batch, front_param=_dent_front),
        "ZDT3": ProblemSpec(
            id="ZDT3", n=_ZDT3_N, m=2,
            lower=np.zeros(_ZDT3_N), upper=np.ones(_ZDT3_N),
            hv_ref=(1.0, 7.0), _batch=_zdt3_batch, front_param=_zdt3_front),
        "WFG1": ProblemSpec(
            id="WFG1", n=_WFG1_N, m=2,
            lower=np.zeros(_WFG1_N), upper=_WFG1_UPPER.copy(),
            hv_ref=(3.0, 5.0), _batch=_wfg1_batch, front_param=None),
    }


_PROBLEMS = _make_problems()
PROBLEM_IDS = tuple(_PROBLEMS)


def get_problem(problem_id: str) -> ProblemSpec:
    try:
        return _PROBLEMS[problem_id]
    except KeyError:
        raise ValueError(
            f"unknown problem {problem_id!r}; known: {', '.join(PROBLEM_IDS)}"
        ) from None


_RECT_SAMPLES = 200_001


def _rectified_points(param, k: int) -> np.ndarray:
    """Place k points at arc lengths (i + 1/2) * L / k on a parametric curve.

    A dense chord table approximates the arc length; target positions are
    inverted through the table and the curve is re-evaluated at the resulting
    parameters, so every output point lies exactly on the curve.
    """
    t = np.linspace(0.0, 1.0, _RECT_SAMPLES)
    P = param(t)
    cum = np.concatenate(([0.0], np.cumsum(np.hypot(np.diff(P[:, 0]),
                                                    np.diff(P[:, 1])))))
    L = cum[-1]
    targets = (np.arange(k) + 0.5) * (L / k)
    return param(np.interp(targets, cum, t))


def true_front_points(spec: ProblemSpec, k: int) -> np.ndarray:
    """k points uniformly spaced by arc length along the Pareto front."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if spec.id in ("SPHERE", "DENT"):
        return _rectified_points(spec.front_param, k)
    if spec.id == "ZDT3":
        _, _, total = _zdt3_segments()
        targets = (np.arange(k) + 0.5) * (total / k)
        return _zdt3_points_at_arc(targets)
    if spec.id == "WFG1":
        return _wfg1_front_points(k)
    raise ValueError(f"no front construction for problem {spec.id!r}")


def load_true_front(spec: ProblemSpec, k: int = 1000,
                    cache_dir=None) -> np.ndarray:
    """Return the k-point true front, persisting it as a two-column CSV under
    a deterministic per-problem path and regenerating it if absent."""
    root = Path(cache_dir) if cache_dir is not None \
        else default_output_root() / "reference_fronts"
    root.mkdir(parents=True, exist_ok=True)
    path = root / f"{spec.id}_k{k}.csv"
    if path.exists():
        pts = _read_front_csv(path)
        if pts.shape == (k, 2):
            return pts
    pts = true_front_points(spec, k)
    _write_front_csv(pts, path)
    return pts


def _write_front_csv(points: np.ndarray, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["f_0", "f_1"])
        for row in points:
            writer.writerow([repr(float(v)) for v in row])


def _read_front_csv(path: Path) -> np.ndarray:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        return np.array([[float(v) for v in row] for row in reader if row])
