"""Command-line entry points.

Subcommands:

* ``run`` executes an experiment plan (JSON) and writes all artifacts.
* ``postprocess`` feeds a stored trace CSV through the bounded archive.
* ``indicators`` scores an approximation CSV against a reference CSV.
* ``reffront`` writes a problem's evenly spaced true front to CSV.
* ``report`` turns an experiment's indicators.csv into tables and figures.

Default output root: ``--out`` where accepted, else the EVENFRONT_OUT
environment variable, else ``./results``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .archive import Direction, postprocess
from .core import read_trace_csv, write_solutions_csv
from .harness import ExperimentPlan, build_report, load_indicator_rows, run_experiment
from .indicators import delta_p, hypervolume_2d
from .problems import PROBLEM_IDS, default_output_root, get_problem, true_front_points
from .reffront import Origin, ReferenceFront, read_reference_csv, write_reference_csv
from .report import write_report

__all__ = ["main"]


def _cmd_run(args) -> int:
    plan = ExperimentPlan.from_json(args.plan)
    out = Path(args.out) if args.out else default_output_root()
    report = run_experiment(plan, out, workers=args.workers)
    n_err = len(report.errors)
    print(json.dumps({
        "out": str(out),
        "runs": len({(r.problem, r.algorithm, r.mu, r.run) for r in report.rows}),
        "indicator_rows": len(report.rows),
        "cells": len(report.cells),
        "errors": n_err,
    }, indent=2))
    return 0 if n_err == 0 else 1


def _cmd_postprocess(args) -> int:
    trace = read_trace_csv(args.trace)
    reference = read_reference_csv(args.reference)
    archive = postprocess(trace, reference, Direction(args.direction), args.p)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    kept = {s.eval_index for s in archive.members}
    write_solutions_csv(
        trace.solutions, out,
        extra={"in_archive": [1 if s.eval_index in kept else 0
                              for s in trace.solutions]})
    print(json.dumps(archive.stats.as_dict(), sort_keys=True))
    return 0


def _read_points_csv(path) -> np.ndarray:
    front = read_reference_csv(path)
    return front.points


def _cmd_indicators(args) -> int:
    A = _read_points_csv(args.approx)
    R = _read_points_csv(args.reference)
    res = delta_p(A, R, args.p)
    doc = {"p": args.p, "gd_p": res.gd, "igd_p": res.igd, "delta_p": res.value}
    if args.hv_ref is not None:
        ref = np.array(args.hv_ref, dtype=float)
        doc["hv"] = hypervolume_2d(A, ref)
        doc["hv_ref"] = list(map(float, ref))
    print(json.dumps(doc, sort_keys=True))
    return 0


def _cmd_reffront(args) -> int:
    spec = get_problem(args.problem)
    points = true_front_points(spec, args.k)
    front = ReferenceFront(points=points, origin=Origin.TRUE_FRONT)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_reference_csv(front, out)
    print(json.dumps({"problem": args.problem, "k": args.k, "out": str(out)}))
    return 0


def _cmd_report(args) -> int:
    rows = load_indicator_rows(Path(args.indir) / "indicators.csv")
    report = build_report(rows)
    written = write_report(report, args.out)
    print(json.dumps({
        "tables": [str(p) for p in written["tables"]],
        "figures": [str(p) for p in written["figures"]],
    }, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evenfront",
        description="Multiobjective optimizer traces, bounded averaged-"
                    "Hausdorff archives, and indicator reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment plan")
    p_run.add_argument("--plan", required=True, help="plan JSON file")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--workers", type=int, default=1)
    p_run.set_defaults(func=_cmd_run)

    p_post = sub.add_parser("postprocess",
                            help="run a trace through the bounded archive")
    p_post.add_argument("--trace", required=True)
    p_post.add_argument("--reference", required=True)
    p_post.add_argument("--direction", required=True,
                        choices=[d.value for d in Direction])
    p_post.add_argument("--p", required=True, type=float)
    p_post.add_argument("--out", required=True,
                        help="trace schema plus in_archive marker column")
    p_post.set_defaults(func=_cmd_postprocess)

    p_ind = sub.add_parser("indicators",
                           help="score an approximation against a reference")
    p_ind.add_argument("--approx", required=True)
    p_ind.add_argument("--reference", required=True)
    p_ind.add_argument("--p", required=True, type=float)
    p_ind.add_argument("--hv-ref", type=float, nargs=2, default=None,
                       metavar=("F0", "F1"))
    p_ind.set_defaults(func=_cmd_indicators)

    p_ref = sub.add_parser("reffront",
                           help="write a problem's true front as CSV")
    p_ref.add_argument("--problem", required=True, choices=list(PROBLEM_IDS))
    p_ref.add_argument("--k", required=True, type=int)
    p_ref.add_argument("--out", required=True)
    p_ref.set_defaults(func=_cmd_reffront)

    p_rep = sub.add_parser("report", help="summary tables and figures")
    p_rep.add_argument("--in", dest="indir", required=True,
                       help="experiment output directory (with indicators.csv)")
    p_rep.add_argument("--out", required=True)
    p_rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
