"""Trace-producing multiobjective optimizers.

Five optimizers are implemented; three further identifiers are reserved in
the registry (stable integer ids for seed derivation and result schemas)
but have no implementation here.
"""

from __future__ import annotations

from collections.abc import Callable

from ..problems import ProblemSpec
from .common import (
    OptimizerConfig,
    RunResult,
    TraceRecorder,
    binary_tournament,
    crowding_distance,
    fast_nondominated_sort,
    make_rng,
    nsga2_survival,
    polynomial_mutation,
    rank_and_crowding,
    sbx_pair,
    scd_truncate,
)
from .midea import run_naive_midea
from .mo_cma_es import run_mo_cma_es
from .nsga2 import run_nsga2, run_scd_nsga2
from .sms_emoa import run_sms_emoa, sms_survival

__all__ = [
    "ALGORITHM_IDS",
    "RESERVED_ALGORITHMS",
    "OptimizerConfig",
    "RunResult",
    "TraceRecorder",
    "run",
    "run_nsga2",
    "run_scd_nsga2",
    "run_sms_emoa",
    "run_naive_midea",
    "run_mo_cma_es",
    "fast_nondominated_sort",
    "crowding_distance",
    "rank_and_crowding",
    "nsga2_survival",
    "scd_truncate",
    "binary_tournament",
    "sbx_pair",
    "polynomial_mutation",
    "sms_survival",
    "make_rng",
]

_RUNNERS: dict[str, Callable[[ProblemSpec, OptimizerConfig], RunResult]] = {
    "NSGA2": run_nsga2,
    "SCD-NSGA2": run_scd_nsga2,
    "SMS-EMOA": run_sms_emoa,
    "NAIVE-MIDEA": run_naive_midea,
    "MO-CMA-ES": run_mo_cma_es,
}

# Stable integer ids, used for per-run seed derivation and result schemas.
# The last three are reserved names without an implementation.
ALGORITHM_IDS: dict[str, int] = {
    "NSGA2": 1,
    "SCD-NSGA2": 2,
    "SMS-EMOA": 3,
    "NAIVE-MIDEA": 4,
    "MO-CMA-ES": 5,
    "MONEDA": 6,
    "MARTEDA": 7,
    "PSEMOA": 8,
}

RESERVED_ALGORITHMS = frozenset({"MONEDA", "MARTEDA", "PSEMOA"})

IMPLEMENTED_ALGORITHMS = tuple(_RUNNERS)


def run(algorithm: str, spec: ProblemSpec, cfg: OptimizerConfig) -> RunResult:
    """Dispatch to the named optimizer."""
    if algorithm in RESERVED_ALGORITHMS:
        raise NotImplementedError(
            f"{algorithm} is a reserved identifier without an implementation")
    try:
        runner = _RUNNERS[algorithm]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {algorithm!r}; expected one of "
            f"{sorted(ALGORITHM_IDS)}") from None
    if cfg.algorithm != algorithm:
        cfg = OptimizerConfig(algorithm=algorithm, mu=cfg.mu,
                              budget=cfg.budget, seed=cfg.seed,
                              params=cfg.params)
    return runner(spec, cfg)
