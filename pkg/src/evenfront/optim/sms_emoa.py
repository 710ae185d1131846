"""Steady-state (mu + 1) selection by exclusive hypervolume contribution."""

from __future__ import annotations

import time

import numpy as np

from ..indicators import hv_contributions_2d
from ..problems import ProblemSpec
from .common import (OptimizerConfig, RunResult, TraceRecorder,
                     fast_nondominated_sort, make_rng, polynomial_mutation,
                     sbx_pair)

__all__ = ["run_sms_emoa", "sms_survival"]

DEFAULTS = {
    "crossover_prob": 0.9,
    "crossover_eta": 20.0,
    "mutation_eta": 20.0,
}


def sms_survival(F: np.ndarray, hv_ref) -> int:
    """Index of the member to drop: from the worst front, the one with the
    least exclusive 2-D hypervolume contribution (first index on ties)."""
    fronts = fast_nondominated_sort(F)
    worst = fronts[-1]
    if len(worst) == 1:
        return int(worst[0])
    contrib = hv_contributions_2d(F[worst], hv_ref)
    return int(worst[int(np.argmin(contrib))])


def run_sms_emoa(spec: ProblemSpec, cfg: OptimizerConfig) -> RunResult:
    started = time.perf_counter()
    params = {**DEFAULTS, **cfg.params}
    p_m = params.get("mutation_prob", 1.0 / spec.n)
    hv_ref = np.asarray(spec.hv_ref, dtype=float)

    rng = make_rng(cfg.seed)
    rec = TraceRecorder(spec.id, cfg.seed, cfg.budget)

    X = rng.uniform(spec.lower, spec.upper, size=(cfg.mu, spec.n))
    F = spec.evaluate_batch(X)
    idx = rec.record(X, F)

    while rec.remaining > 0:
        a = int(rng.integers(cfg.mu))
        b = int(rng.integers(cfg.mu - 1))
        if b >= a:
            b += 1
        c1, _ = sbx_pair(rng, X[a], X[b], spec.lower, spec.upper,
                         params["crossover_prob"], params["crossover_eta"])
        child = polynomial_mutation(rng, c1, spec.lower, spec.upper,
                                    p_m, params["mutation_eta"])
        fc = spec.evaluate_batch(child[None, :])
        new_idx = rec.record(child[None, :], fc)

        Xc = np.vstack([X, child[None, :]])
        Fc = np.vstack([F, fc])
        idxc = np.concatenate([idx, new_idx])
        drop = sms_survival(Fc, hv_ref)
        keep = np.arange(cfg.mu + 1) != drop
        X, F, idx = Xc[keep], Fc[keep], idxc[keep]

    return rec.build(idx, started)
