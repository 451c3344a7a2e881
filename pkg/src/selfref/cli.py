"""Command-line entry point: ``selfref check|trace|table|repro-paper``.

Exit codes: 0 when a consistency certificate is issued (or every repro check
matches), 2 when conflicts (or repro mismatches) are found, 1 on error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import SelfRefError
from .evaluator import evaluate_instance, render_evaluation
from .report import EXIT_ERROR, build_report, write_report
from .repro import run_repro
from .scenario import load_scenario, parse_instance_spec


def _emit(data: bytes) -> None:
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def cmd_check(args) -> int:
    report = build_report(load_scenario(args.file), include_vacuous=args.include_vacuous)
    _emit(write_report(report, args.format))
    return report.exit_code


def cmd_table(args) -> int:
    report = build_report(load_scenario(args.file))
    for row in report.table.rows:
        flag = " (vacuous)" if row.verdict.vacuous else ""
        print(f"{row.instance}\t{'csi' if row.is_csi else '-'}\t{row.verdict.value}{flag}")
    return 0


def run_trace(scenario, spec_text: str) -> str:
    model = scenario.model()
    inst = parse_instance_spec(spec_text).bind(scenario.template(), model.schemas)
    verdict, trace = evaluate_instance(model, inst)
    return render_evaluation(inst, verdict, trace)


def cmd_trace(args) -> int:
    print(run_trace(load_scenario(args.file), args.instance))
    return 0


def cmd_repro(args) -> int:
    result = run_repro()
    _emit(result.render(args.format))
    return result.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfref", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="analyze a scenario and report conflicts or a certificate")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--include-vacuous", action="store_true", help="let vacuously true verdicts witness conflicts")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trace", help="derivation trace for one instance, e.g. \"CSI('d')\"")
    p.add_argument("file")
    p.add_argument("instance")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("table", help="print the verdict table of a scenario")
    p.add_argument("file")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("repro-paper", help="run the built-in scenarios and diff against their expectations")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SelfRefError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
