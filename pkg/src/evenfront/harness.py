"""Experiment orchestration.

Runs the problem × algorithm × population-size grid with repetitions,
feeds every stored trace through the bounded-archive postprocessing
strategies, scores the results against 1000-point true fronts, and
aggregates everything into a comparison report with pairwise rank-sum
tests.

Artifact layout under the output root::

    runs/{problem}/{algorithm}/mu{mu}/rep{rr}/
        trace.csv                      every evaluation, in order
        final_population.csv           same schema, final survivors
        meta.json                      algorithm, seed, wall time
        archive_{strategy}_p{p}.csv    postprocessed archive members
        archive_{strategy}_p{p}_stats.json
    indicators.csv                     long-form indicator rows
    errors.csv                         one row per failed run stage

Run seeds derive deterministically from the plan's base seed and the cell
coordinates, so any cell can be reproduced in isolation.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import optim
from .archive import Direction, postprocess
from .core import nondominated_filter, write_solutions_csv, write_trace_csv
from .indicators import delta_p, hypervolume_2d
from .optim import ALGORITHM_IDS, IMPLEMENTED_ALGORITHMS, OptimizerConfig
from .problems import PROBLEM_IDS, default_output_root, get_problem, load_true_front
from .reffront import ReferenceFront, build_polyline, place_uniform, psa_reference
from .stats import wilcoxon_rank_sum

__all__ = [
    "ExperimentPlan",
    "ComparisonReport",
    "CellComparison",
    "IndicatorValue",
    "STRATEGIES",
    "derive_run_seed",
    "run_experiment",
    "load_indicator_rows",
]

STRATEGIES = ("NONE", "fDP", "bDP", "fPSA", "bPSA")
ALLOWED_MUS = (10, 20, 100)
ALLOWED_PS = (1, 2)
TRUE_FRONT_SIZE = 1000
SIGNIFICANCE = 0.05

_PROBLEM_INT_IDS = {"SPHERE": 1, "DENT": 2, "ZDT3": 3, "WFG1": 4}


class IndicatorValue(NamedTuple):
    problem: str
    algorithm: str
    strategy: str
    mu: int
    p: int
    run: int
    indicator: str
    value: float


@dataclass(frozen=True)
class ExperimentPlan:
    problems: tuple[str, ...]
    algorithms: tuple[str, ...]
    mus: tuple[int, ...]
    budget: int
    repetitions: int
    ps: tuple[int, ...]
    strategies: tuple[str, ...]
    base_seed: int

    def __post_init__(self):
        object.__setattr__(self, "problems", tuple(self.problems))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "mus", tuple(int(m) for m in self.mus))
        object.__setattr__(self, "ps", tuple(int(p) for p in self.ps))
        object.__setattr__(self, "strategies", tuple(self.strategies))
        bad = set(self.problems) - set(PROBLEM_IDS)
        if bad:
            raise ValueError(f"unknown problems: {sorted(bad)}")
        bad = set(self.algorithms) - set(IMPLEMENTED_ALGORITHMS)
        if bad:
            raise ValueError(f"unknown or unimplemented algorithms: {sorted(bad)}")
        bad = set(self.mus) - set(ALLOWED_MUS)
        if bad:
            raise ValueError(f"mus must be within {ALLOWED_MUS}, got {sorted(bad)}")
        bad = set(self.ps) - set(ALLOWED_PS)
        if bad:
            raise ValueError(f"ps must be within {ALLOWED_PS}, got {sorted(bad)}")
        bad = set(self.strategies) - set(STRATEGIES)
        if bad:
            raise ValueError(f"unknown strategies: {sorted(bad)}")
        for name in ("problems", "algorithms", "mus", "ps", "strategies"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.budget < max(self.mus):
            raise ValueError("budget must cover at least one population")

    @classmethod
    def from_json(cls, path) -> "ExperimentPlan":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        extra = set(raw) - known
        if extra:
            raise ValueError(f"unknown plan fields: {sorted(extra)}")
        missing = known - set(raw)
        if missing:
            raise ValueError(f"missing plan fields: {sorted(missing)}")
        return cls(**raw)

    def to_json(self, path) -> None:
        doc = {
            "problems": list(self.problems),
            "algorithms": list(self.algorithms),
            "mus": list(self.mus),
            "budget": self.budget,
            "repetitions": self.repetitions,
            "ps": list(self.ps),
            "strategies": list(self.strategies),
            "base_seed": self.base_seed,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")

    def cells(self):
        for problem in self.problems:
            for algorithm in self.algorithms:
                for mu in self.mus:
                    yield problem, algorithm, mu


def derive_run_seed(base_seed: int, problem: str, algorithm: str,
                    mu: int, rep: int) -> int:
    """Deterministic per-run seed from the plan seed and cell coordinates."""
    entropy = (
        base_seed,
        _PROBLEM_INT_IDS[problem],
        ALGORITHM_IDS[algorithm],
        mu,
        rep,
    )
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def strategy_parts(strategy: str) -> tuple[Direction, str]:
    """Split a strategy tag into (direction, reference method)."""
    if strategy == "NONE" or strategy not in STRATEGIES:
        raise ValueError(f"not an archiving strategy: {strategy!r}")
    direction = Direction.FORWARD if strategy[0] == "f" else Direction.BACKWARD
    return direction, strategy[1:]


def _reference_from_trace(F_nd: np.ndarray, method: str, mu: int) -> ReferenceFront:
    if method == "PSA":
        return psa_reference(F_nd, mu)
    return place_uniform(build_polyline(F_nd), mu)


@dataclass(frozen=True)
class CellComparison:
    problem: str
    algorithm: str
    mu: int
    p: int
    distributions: dict[str, tuple[float, ...]]
    pairwise_p: dict[tuple[str, str], float]
    significant: dict[tuple[str, str], bool]


@dataclass(frozen=True)
class ComparisonReport:
    cells: tuple[CellComparison, ...]
    rows: tuple[IndicatorValue, ...]
    errors: tuple[dict, ...] = field(default_factory=tuple)


def _run_one(plan: ExperimentPlan, problem: str, algorithm: str, mu: int,
             rep: int, out_dir: str) -> tuple[list[IndicatorValue], list[dict]]:
    """Execute one run and all its postprocessing; returns (rows, errors)."""
    rows: list[IndicatorValue] = []
    errors: list[dict] = []

    def fail(stage: str, exc: Exception) -> None:
        errors.append({
            "problem": problem, "algorithm": algorithm, "mu": mu, "run": rep,
            "stage": stage, "message": f"{type(exc).__name__}: {exc}",
        })

    spec = get_problem(problem)
    seed = derive_run_seed(plan.base_seed, problem, algorithm, mu, rep)
    run_dir = Path(out_dir) / "runs" / problem / algorithm / f"mu{mu}" / f"rep{rep:02d}"
    run_dir.mkdir(parents=True, exist_ok=True)

    try:
        cfg = OptimizerConfig(algorithm=algorithm, mu=mu, budget=plan.budget,
                              seed=seed)
        result = optim.run(algorithm, spec, cfg)
    except Exception as exc:
        fail("optimize", exc)
        return rows, errors

    write_trace_csv(result.trace, run_dir / "trace.csv")
    write_solutions_csv(result.final_population, run_dir / "final_population.csv")
    meta = {
        "problem": problem, "algorithm": algorithm, "mu": mu,
        "budget": plan.budget, "repetition": rep, "seed": seed,
        "params": dict(cfg.params), "wall_time": result.wall_time,
    }
    with open(run_dir / "meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")

    true_front = load_true_front(spec, TRUE_FRONT_SIZE)
    final_F = np.array([tuple(s.f) for s in result.final_population])

    for p in sorted(plan.ps):
        for strategy in (s for s in STRATEGIES if s in plan.strategies):
            if strategy == "NONE":
                value = delta_p(final_F, true_front, p).value
                rows.append(IndicatorValue(problem, algorithm, strategy, mu,
                                           p, rep, f"delta_{p}", value))
                continue
            try:
                direction, method = strategy_parts(strategy)
                nd = nondominated_filter(result.trace.objectives())
                reference = _reference_from_trace(nd, method, mu)
                archive = postprocess(result.trace, reference, direction, p)
            except Exception as exc:
                fail(f"{strategy}_p{p}", exc)
                continue
            tag = run_dir / f"archive_{strategy}_p{p}"
            write_solutions_csv(archive.members, f"{tag}.csv")
            with open(f"{tag}_stats.json", "w", encoding="utf-8") as fh:
                json.dump(archive.stats.as_dict(), fh, indent=2, sort_keys=True)
                fh.write("\n")
            value = delta_p(archive.objectives(), true_front, p).value
            rows.append(IndicatorValue(problem, algorithm, strategy, mu,
                                       p, rep, f"delta_{p}", value))

    hv = hypervolume_2d(final_F, spec.hv_ref)
    rows.append(IndicatorValue(problem, algorithm, "NONE", mu, 0, rep, "HV", hv))
    return rows, errors


def _run_one_star(args):
    return _run_one(*args)


def _write_indicator_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(IndicatorValue._fields)
        for row in rows:
            writer.writerow([*row[:-1], repr(float(row.value))])


def load_indicator_rows(path) -> tuple[IndicatorValue, ...]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != list(IndicatorValue._fields):
            raise ValueError(f"{path}: unexpected header {header}")
        for rec in reader:
            if not rec:
                continue
            rows.append(IndicatorValue(rec[0], rec[1], rec[2], int(rec[3]),
                                       int(rec[4]), int(rec[5]), rec[6],
                                       float(rec[7])))
    return tuple(rows)


def _write_errors_csv(errors, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["problem", "algorithm", "mu", "run", "stage", "message"])
        for err in errors:
            writer.writerow([err["problem"], err["algorithm"], err["mu"],
                             err["run"], err["stage"], err["message"]])


def build_report(rows, errors=()) -> ComparisonReport:
    """Aggregate indicator rows into per-cell distributions and rank-sum tests."""
    cells: list[CellComparison] = []
    keys = []
    for row in rows:
        if not row.indicator.startswith("delta_"):
            continue
        key = (row.problem, row.algorithm, row.mu, row.p)
        if key not in keys:
            keys.append(key)
    for problem, algorithm, mu, p in keys:
        dists: dict[str, list[float]] = {}
        for row in rows:
            if (row.problem, row.algorithm, row.mu, row.p) == (problem, algorithm, mu, p) \
                    and row.indicator.startswith("delta_"):
                dists.setdefault(row.strategy, []).append(row.value)
        ordered = {s: tuple(dists[s]) for s in STRATEGIES if s in dists}
        pairwise: dict[tuple[str, str], float] = {}
        flags: dict[tuple[str, str], bool] = {}
        for a, b in combinations(ordered, 2):
            pv = wilcoxon_rank_sum(ordered[a], ordered[b])
            pairwise[(a, b)] = pv
            flags[(a, b)] = pv <= SIGNIFICANCE
        cells.append(CellComparison(problem, algorithm, mu, p, ordered,
                                    pairwise, flags))
    return ComparisonReport(tuple(cells), tuple(rows), tuple(errors))


def run_experiment(plan: ExperimentPlan, out_dir=None,
                   workers: int = 1) -> ComparisonReport:
    """Execute every run in the plan and aggregate the comparison report."""
    out_dir = Path(out_dir) if out_dir is not None else default_output_root()
    out_dir.mkdir(parents=True, exist_ok=True)

    # Materialize true fronts up front so parallel workers only ever read them.
    for problem in plan.problems:
        load_true_front(get_problem(problem), TRUE_FRONT_SIZE)

    tasks = [
        (plan, problem, algorithm, mu, rep, str(out_dir))
        for problem, algorithm, mu in plan.cells()
        for rep in range(plan.repetitions)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_one_star, tasks))
    else:
        outcomes = [_run_one_star(t) for t in tasks]

    rows: list[IndicatorValue] = []
    errors: list[dict] = []
    for run_rows, run_errors in outcomes:
        rows.extend(run_rows)
        errors.extend(run_errors)

    _write_indicator_csv(rows, out_dir / "indicators.csv")
    if errors:
        _write_errors_csv(errors, out_dir / "errors.csv")
    return build_report(rows, errors)
