"""Naive mixture-based iterated density estimation (univariate Gaussians).

Each generation keeps the best floor(tau * mu) individuals by domination
count (boundary-group ties resolved by a diversity-preserving farthest-point
rule in normalized objective space), partitions them with the leader
clustering algorithm, fits one univariate Gaussian per decision variable per
cluster, and refills the population with offspring sampled from clusters
picked proportionally to their size.  Replacement is elitist: the selected
individuals survive unchanged.
"""

from __future__ import annotations

import math
import time

import numpy as np

from ..problems import ProblemSpec
from .common import OptimizerConfig, RunResult, TraceRecorder, make_rng

__all__ = ["run_naive_midea", "midea_select", "leader_cluster"]

DEFAULTS = {
    "tau": 0.3,
    "diversity_percentile": 15,  # recorded; the farthest-point rule needs no percentile
    "kappa": 2,                  # recorded; unused, the naive model factorizes fully
    "leader_threshold": 0.1,
    "variance_floor": 1e-10,     # times (upper - lower)^2, per variable
}


def _normalize(F: np.ndarray) -> np.ndarray:
    lo = F.min(axis=0)
    span = F.max(axis=0) - lo
    span[span == 0.0] = 1.0
    return (F - lo) / span


def _domination_counts(F: np.ndarray) -> np.ndarray:
    le = np.all(F[:, None, :] <= F[None, :, :], axis=-1)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=-1)
    return (le & lt).sum(axis=0).astype(int)


def midea_select(F: np.ndarray, count: int) -> np.ndarray:
    """Truncation selection of ``count`` rows by ascending domination count.

    Whole count-groups are taken while they fit; the boundary group is
    filled greedily by farthest-point selection in normalized objective
    space, which preserves diversity among equally ranked individuals.
    """
    if count < 1 or count > len(F):
        raise ValueError(f"cannot select {count} of {len(F)}")
    counts = _domination_counts(F)
    N = _normalize(F)
    selected: list[int] = []
    for c in np.unique(counts):
        group = list(np.flatnonzero(counts == c))
        if len(selected) + len(group) <= count:
            selected.extend(group)
            if len(selected) == count:
                break
            continue
        while len(selected) < count:
            if not selected:
                pick = group[0]
            else:
                sel = N[selected]
                dmin = np.array([
                    float(np.min(np.linalg.norm(sel - N[g], axis=1)))
                    for g in group
                ])
                pick = group[int(np.argmax(dmin))]
            selected.append(pick)
            group.remove(pick)
        break
    return np.array(selected, dtype=int)


def leader_cluster(points: np.ndarray, threshold: float,
                   max_clusters: int) -> list[np.ndarray]:
    """Leader algorithm: scan points in order; join the first cluster whose
    leader lies within ``threshold``, else found a new cluster — or, at the
    cluster cap, join the nearest leader."""
    leaders: list[np.ndarray] = []
    members: list[list[int]] = []
    for i, pt in enumerate(points):
        placed = False
        dists = [float(np.linalg.norm(pt - l)) for l in leaders]
        for j, d in enumerate(dists):
            if d <= threshold:
                members[j].append(i)
                placed = True
                break
        if placed:
            continue
        if len(leaders) < max_clusters:
            leaders.append(pt)
            members.append([i])
        else:
            members[int(np.argmin(dists))].append(i)
    return [np.array(m, dtype=int) for m in members]


def run_naive_midea(spec: ProblemSpec, cfg: OptimizerConfig) -> RunResult:
    started = time.perf_counter()
    params = {**DEFAULTS, **cfg.params}
    tau = params["tau"]
    threshold = params["leader_threshold"]
    floor_scale = params["variance_floor"]

    n_sel = max(1, math.floor(tau * cfg.mu))
    max_clusters = math.ceil(0.5 * n_sel)
    std_floor = np.sqrt(floor_scale * (spec.upper - spec.lower) ** 2)

    rng = make_rng(cfg.seed)
    rec = TraceRecorder(spec.id, cfg.seed, cfg.budget)

    X = rng.uniform(spec.lower, spec.upper, size=(cfg.mu, spec.n))
    F = spec.evaluate_batch(X)
    idx = rec.record(X, F)

    while rec.remaining > 0:
        sel = midea_select(F, n_sel)
        clusters = leader_cluster(_normalize(F[sel]), threshold, max_clusters)
        means = [X[sel[c]].mean(axis=0) for c in clusters]
        stds = [np.maximum(X[sel[c]].std(axis=0), std_floor) for c in clusters]
        sizes = np.array([len(c) for c in clusters], dtype=float)

        r = min(cfg.mu - n_sel, rec.remaining)
        children = np.empty((r, spec.n))
        for i in range(r):
            c = int(rng.choice(len(clusters), p=sizes / sizes.sum()))
            children[i] = rng.normal(means[c], stds[c])
        children = spec.clip(children)
        FC = spec.evaluate_batch(children)
        new_idx = rec.record(children, FC)

        # offspring replace non-selected members; a budget-truncated last
        # generation replaces only the first r of them
        keep = np.setdiff1d(np.arange(len(X)), sel)[r:]
        X = np.vstack([X[sel], children, X[keep]])
        F = np.vstack([F[sel], FC, F[keep]])
        idx = np.concatenate([idx[sel], new_idx, idx[keep]])

    return rec.build(idx, started)
