"""Evenly spaced reference fronts and bounded averaged-Hausdorff archives.

A toolkit for a three-stage pipeline over two-objective minimization
problems:

1. run a population-based multiobjective optimizer while tracing every
   evaluated solution,
2. postprocess the stored trace with a bounded archive that prunes by the
   averaged Hausdorff distance to an evenly spaced reference front (built
   by arc-length interpolation or by part-and-select), streaming the trace
   forward or backward,
3. compare outcomes with distance and hypervolume indicators plus
   rank-sum statistics.
"""

from .archive import ArchiveStats, BoundedArchive, Direction, archive_insert, postprocess
from .core import (
    EvaluationTrace,
    ObjectiveVector,
    Solution,
    dominates,
    nondominated_filter,
    nondominated_indices,
    read_trace_csv,
    weakly_dominates,
    write_trace_csv,
)
from .harness import ComparisonReport, ExperimentPlan, derive_run_seed, run_experiment
from .indicators import delta_p, gd_p, hv_contributions_2d, hypervolume_2d, igd_p
from .optim import ALGORITHM_IDS, OptimizerConfig, RunResult, run
from .problems import PROBLEM_IDS, ProblemSpec, get_problem, load_true_front, true_front_points
from .reffront import (
    Origin,
    Polyline,
    ReferenceFront,
    build_polyline,
    place_uniform,
    psa_reference,
)
from .report import summarize, write_report
from .stats import wilcoxon_rank_sum

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ObjectiveVector",
    "Solution",
    "EvaluationTrace",
    "dominates",
    "weakly_dominates",
    "nondominated_indices",
    "nondominated_filter",
    "read_trace_csv",
    "write_trace_csv",
    "gd_p",
    "igd_p",
    "delta_p",
    "hypervolume_2d",
    "hv_contributions_2d",
    "ProblemSpec",
    "PROBLEM_IDS",
    "get_problem",
    "true_front_points",
    "load_true_front",
    "Origin",
    "Polyline",
    "ReferenceFront",
    "build_polyline",
    "place_uniform",
    "psa_reference",
    "ArchiveStats",
    "BoundedArchive",
    "Direction",
    "archive_insert",
    "postprocess",
    "OptimizerConfig",
    "RunResult",
    "ALGORITHM_IDS",
    "run",
    "wilcoxon_rank_sum",
    "ExperimentPlan",
    "ComparisonReport",
    "derive_run_seed",
    "run_experiment",
    "summarize",
    "write_report",
]
