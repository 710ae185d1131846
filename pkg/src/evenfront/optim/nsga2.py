"""NSGA-II and its sequential-crowding variant.

Both run the standard generational loop — binary tournament on
(rank, crowding), SBX crossover, polynomial mutation, (mu + mu) survival —
and differ only in how the partially kept front is truncated: one-shot
crowding sort versus one-at-a-time removal with recomputation.
"""

from __future__ import annotations

import time

import numpy as np

from ..problems import ProblemSpec
from .common import (OptimizerConfig, RunResult, TraceRecorder,
                     binary_tournament, make_rng, nsga2_survival,
                     polynomial_mutation, rank_and_crowding, sbx_pair,
                     scd_truncate)

__all__ = ["run_nsga2", "run_scd_nsga2"]

DEFAULTS = {
    "crossover_prob": 0.9,
    "crossover_eta": 20.0,
    "mutation_eta": 20.0,
    # mutation_prob defaults to 1/n at run time
}


def _generational_loop(spec: ProblemSpec, cfg: OptimizerConfig,
                       survival) -> RunResult:
    started = time.perf_counter()
    params = {**DEFAULTS, **cfg.params}
    p_x = params["crossover_prob"]
    eta_x = params["crossover_eta"]
    eta_m = params["mutation_eta"]
    p_m = params.get("mutation_prob", 1.0 / spec.n)

    rng = make_rng(cfg.seed)
    rec = TraceRecorder(spec.id, cfg.seed, cfg.budget)

    X = rng.uniform(spec.lower, spec.upper, size=(cfg.mu, spec.n))
    F = spec.evaluate_batch(X)
    idx = rec.record(X, F)

    while rec.remaining > 0:
        r = min(cfg.mu, rec.remaining)
        rank, crowd = rank_and_crowding(F)
        children: list[np.ndarray] = []
        while len(children) < r:
            a = binary_tournament(rng, rank, crowd)
            b = binary_tournament(rng, rank, crowd)
            c1, c2 = sbx_pair(rng, X[a], X[b], spec.lower, spec.upper,
                              p_x, eta_x)
            children.append(polynomial_mutation(rng, c1, spec.lower,
                                                spec.upper, p_m, eta_m))
            if len(children) < r:
                children.append(polynomial_mutation(rng, c2, spec.lower,
                                                    spec.upper, p_m, eta_m))
        O = np.asarray(children)
        FO = spec.evaluate_batch(O)
        new_idx = rec.record(O, FO)

        Xc = np.vstack([X, O])
        Fc = np.vstack([F, FO])
        idxc = np.concatenate([idx, new_idx])
        keep = survival(Fc, cfg.mu)
        X, F, idx = Xc[keep], Fc[keep], idxc[keep]

    return rec.build(idx, started)


def run_nsga2(spec: ProblemSpec, cfg: OptimizerConfig) -> RunResult:
    return _generational_loop(spec, cfg, nsga2_survival)


def run_scd_nsga2(spec: ProblemSpec, cfg: OptimizerConfig) -> RunResult:
    return _generational_loop(spec, cfg, scd_truncate)
