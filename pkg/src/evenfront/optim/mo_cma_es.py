"""Multiobjective CMA-ES: mu independent (1+1) strategies under joint
rank-based selection.

Every parent carries its own step size, smoothed success probability,
evolution path, and covariance matrix.  Each generation every parent
samples one offspring; an offspring counts as successful when it beats its
own parent in the combined (2 mu)-member ranking by nondomination front,
ties broken by exclusive hypervolume contribution.  Both the parent and the
offspring adapt their step size from that outcome; a successful offspring
additionally updates its path and covariance with the realized step.
Environmental selection keeps the best mu of the combined set.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ..indicators import hv_contributions_2d
from ..problems import ProblemSpec
from .common import OptimizerConfig, RunResult, TraceRecorder, make_rng
from .common import fast_nondominated_sort

__all__ = [
    "run_mo_cma_es",
    "updated_success_prob",
    "updated_sigma",
    "update_path_and_cov",
]

logger = logging.getLogger(__name__)

P_TARGET = 0.181
P_THRESH = 0.44


def default_rates(n: int) -> dict[str, float]:
    """Standard (1+1)-CMA adaptation constants for dimension ``n``."""
    return {
        "d": 1.0 + n / 2.0,
        "p_target": P_TARGET,
        "c_p": P_TARGET / (2.0 + P_TARGET),
        "c_c": 2.0 / (n + 2.0),
        "c_cov": 2.0 / (n * n + 6.0),
        "p_thresh": P_THRESH,
    }


def updated_success_prob(p_succ: float, success: bool, c_p: float) -> float:
    return (1.0 - c_p) * p_succ + c_p * (1.0 if success else 0.0)


def updated_sigma(sigma: float, p_succ: float, d: float,
                  p_target: float) -> float:
    return sigma * np.exp((p_succ - p_target) / (d * (1.0 - p_target)))


def update_path_and_cov(p_c: np.ndarray, C: np.ndarray, x_step: np.ndarray,
                        p_succ: float, c_c: float, c_cov: float,
                        p_thresh: float) -> tuple[np.ndarray, np.ndarray]:
    """Evolution-path and rank-one covariance update after a success.

    When the smoothed success rate is at or above ``p_thresh`` the
    displacement term is left out of the path and its variance is
    compensated inside the covariance update.
    """
    if p_succ < p_thresh:
        p_c = (1.0 - c_c) * p_c + np.sqrt(c_c * (2.0 - c_c)) * x_step
        C = (1.0 - c_cov) * C + c_cov * np.outer(p_c, p_c)
    else:
        p_c = (1.0 - c_c) * p_c
        C = (1.0 - c_cov) * C + c_cov * (
            np.outer(p_c, p_c) + c_c * (2.0 - c_c) * C
        )
    return p_c, C


@dataclass
class _Strategy:
    sigma: float
    p_succ: float
    p_c: np.ndarray
    C: np.ndarray
    chol: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self._refresh()

    def _refresh(self) -> None:
        try:
            self.chol = np.linalg.cholesky(self.C)
        except np.linalg.LinAlgError:
            logger.warning("covariance lost positive definiteness; reset to identity")
            self.C = np.eye(len(self.p_c))
            self.chol = np.linalg.cholesky(self.C)

    def sample(self, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return x + self.sigma * (self.chol @ rng.standard_normal(len(x)))


def _ranking_keys(F: np.ndarray, hv_ref: np.ndarray) -> list[tuple[int, float, int]]:
    """Sort keys (front rank, -hv contribution, index) for a combined set."""
    fronts = fast_nondominated_sort(F)
    rank = np.empty(len(F), dtype=int)
    for r, members in enumerate(fronts):
        rank[members] = r
    contrib = np.empty(len(F))
    for r in range(len(fronts)):
        mask = rank == r
        contrib[mask] = hv_contributions_2d(F[mask], hv_ref)
    return [(int(rank[i]), -float(contrib[i]), i) for i in range(len(F))]


def run_mo_cma_es(spec: ProblemSpec, cfg: OptimizerConfig) -> RunResult:
    started = time.perf_counter()
    rates = default_rates(spec.n)
    rates.update({k: v for k, v in cfg.params.items() if k in rates})
    sigma0 = cfg.params.get("sigma0", 1.0)

    rng = make_rng(cfg.seed)
    rec = TraceRecorder(spec.id, cfg.seed, cfg.budget)

    X = rng.uniform(spec.lower, spec.upper, size=(cfg.mu, spec.n))
    F = spec.evaluate_batch(X)
    idx = rec.record(X, F)
    strategies = [
        _Strategy(sigma0, rates["p_target"], np.zeros(spec.n), np.eye(spec.n))
        for _ in range(cfg.mu)
    ]

    while rec.remaining > 0:
        r = min(cfg.mu, rec.remaining)
        parents = list(range(r))
        XO = np.empty((r, spec.n))
        for i in parents:
            XO[i] = strategies[i].sample(X[i], rng)
        XO = spec.clip(XO)
        FO = spec.evaluate_batch(XO)
        off_idx = rec.record(XO, FO)

        comb_X = np.vstack([X, XO])
        comb_F = np.vstack([F, FO])
        comb_idx = np.concatenate([idx, off_idx])
        keys = _ranking_keys(comb_F, spec.hv_ref)

        off_strats: dict[int, _Strategy] = {}
        for i in parents:
            success = keys[cfg.mu + i][:2] < keys[i][:2]
            st = strategies[i]
            sigma_used = st.sigma
            child = _Strategy(st.sigma, st.p_succ, st.p_c.copy(), st.C.copy())
            for s in (st, child):
                s.p_succ = updated_success_prob(s.p_succ, success, rates["c_p"])
                s.sigma = updated_sigma(s.sigma, s.p_succ, rates["d"],
                                        rates["p_target"])
            if success:
                x_step = (XO[i] - X[i]) / sigma_used
                child.p_c, child.C = update_path_and_cov(
                    child.p_c, child.C, x_step, child.p_succ,
                    rates["c_c"], rates["c_cov"], rates["p_thresh"])
                child._refresh()
            off_strats[i] = child

        order = sorted(range(len(comb_F)), key=lambda i: keys[i])
        keep = sorted(order[:cfg.mu])
        X = comb_X[keep]
        F = comb_F[keep]
        idx = comb_idx[keep]
        strategies = [
            strategies[k] if k < cfg.mu else off_strats[k - cfg.mu]
            for k in keep
        ]

    return rec.build(idx, started)
