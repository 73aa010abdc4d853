"""Command-line entry point.

    chandisc TASK --input FILE [--priors a,b] [--shots N] [--seed S] [--tol T]
                  [--restarts R] [--format json|text] [--hull-csv PATH]

Exit codes: 0 success, 2 parse error, 3 validation error, 4 unsupported task.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .errors import ChanDiscError, ParseError, UnsupportedTask, ValidationError
from .problem import parse_problem, validate_problem
from .report import TASKS, run_task, write_hull_csv

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_UNSUPPORTED = 0, 2, 3, 4


def _priors(text: str):
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers") from exc
    return a, b


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="chandisc", description="Single-shot discrimination of two quantum channels."
    )
    ap.add_argument("task", choices=TASKS)
    ap.add_argument("--input", required=True, help="problem file (JSON); '-' reads stdin")
    ap.add_argument("--priors", type=_priors, help="override priors, e.g. 0.7,0.3")
    ap.add_argument("--shots", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--restarts", type=int)
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--hull-csv", metavar="PATH")
    ap.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        problem = parse_problem(sys.stdin if args.input == "-" else args.input)
        problem = problem.with_overrides(priors=args.priors, shots=args.shots,
                                         seed=args.seed, tol=args.tol)
        if args.restarts is not None:
            problem = replace(problem, optimizer=replace(problem.optimizer, restarts=args.restarts))
        problem = validate_problem(problem)
        report = run_task(problem, args.task)
        if args.hull_csv:
            write_hull_csv(problem, args.hull_csv)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedTask as exc:
        print(f"unsupported task: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ValidationError, ChanDiscError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    text = report.to_json() if args.format == "json" else report.to_text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
