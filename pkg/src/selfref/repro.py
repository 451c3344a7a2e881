"""Built-in reproduction run: every stock scenario plus the deictic demo.

Each scenario file carries its own ``expect`` lines; the run diffs them
against what the analysis actually produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Any, Sequence

from . import __version__
from .errors import SelfRefError
from .evaluator import OPEN, DeicticValue, evaluate_deictic, evaluate_instance
from .report import EXIT_CONFLICT, EXIT_OK, Report, build_report, dumps_json, render_text
from .scenario import (
    CertificateExpectation,
    ConflictExpectation,
    InstanceSpec,
    PolicyExpectation,
    Scenario,
    VerdictExpectation,
    parse_scenario,
)
from .syntax import Atomic, Quote, render_term

__all__ = [
    "BUILTIN_SCENARIOS",
    "DEICTIC_EXPECTATIONS",
    "builtin_scenarios",
    "check_expectations",
    "run_repro",
    "ReproResult",
]

BUILTIN_SCENARIOS = (
    "lagadonian_agreement.scn",
    "lagadonian_csi.scn",
    "lagadonian_all.scn",
    "laputan_csi.scn",
    "laputan_all.scn",
)

# (label, subject or OPEN, expected value)
DEICTIC_EXPECTATIONS = (
    ("(3)", Atomic("d"), DeicticValue.TRUE),
    ("(4)", Quote(Atomic("d")), DeicticValue.FALSE),
    ("(#)", OPEN, DeicticValue.INDETERMINATE),
)


def builtin_scenarios() -> list[Scenario]:
    pkg = resources.files("selfref") / "scenarios"
    return [parse_scenario((pkg / fname).read_text(encoding="utf-8")) for fname in BUILTIN_SCENARIOS]


@dataclass(frozen=True)
class Check:
    scenario: str
    what: str
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def as_dict(self) -> dict[str, Any]:
        return {"scenario": self.scenario, "check": self.what, "expected": self.expected,
                "actual": self.actual, "ok": self.ok}


def _verdict_word(report: Report, spec: InstanceSpec) -> str:
    inst = spec.bind(report.table.schema, report.model.schemas)
    row = report.table.row_for(inst)
    if row is None:
        verdict, _ = evaluate_instance(report.model, inst)
    else:
        verdict = row.verdict
    if verdict.vacuous:
        return "vacuous"
    return "true" if verdict.value else "false"


def _conflict_key(kind: str, pos: InstanceSpec, neg: InstanceSpec) -> str:
    return f"{kind} {pos} / {neg}"


def check_expectations(report: Report) -> list[Check]:
    name = report.scenario.name
    checks = []
    expected_conflicts = []
    conflict_claims = False
    for e in report.scenario.expectations:
        if isinstance(e, VerdictExpectation):
            label = f"{e.label} " if e.label else ""
            checks.append(Check(name, f"verdict {label}{e.spec}", e.value, _verdict_word(report, e.spec)))
        elif isinstance(e, ConflictExpectation):
            conflict_claims = True
            expected_conflicts.append(_conflict_key(e.kind.value, e.positive, e.negative))
        elif isinstance(e, CertificateExpectation):
            conflict_claims = True
        elif isinstance(e, PolicyExpectation):
            match = [p for p in report.policies if p.policy == e.policy]
            actual = "missing" if not match else ("pass" if match[0].passed else "fail")
            checks.append(Check(name, f"policy {e.policy.slug}", "pass" if e.passed else "fail", actual))
    if conflict_claims:
        actual_conflicts = [
            _conflict_key(c.kind.value, InstanceSpec.of(c.positive.source), InstanceSpec.of(c.negative.source))
            for c in report.conflicts
            if c.canonical
        ]
        checks.append(Check(name, "canonical conflicts",
                            "; ".join(sorted(expected_conflicts)) or "none",
                            "; ".join(sorted(actual_conflicts)) or "none"))
        expects_cert = any(isinstance(e, CertificateExpectation) for e in report.scenario.expectations)
        checks.append(Check(name, "certificate", "yes" if expects_cert else "no",
                            "yes" if report.certificate is not None else "no"))
    return checks


@dataclass
class ReproResult:
    reports: list[Report]
    checks: list[Check]

    @property
    def mismatches(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    @property
    def exit_code(self) -> int:
        return EXIT_OK if not self.mismatches else EXIT_CONFLICT

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": __version__,
            "scenarios": [r.to_dict() for r in self.reports],
            "checks": [c.as_dict() for c in self.checks],
            "mismatches": [c.as_dict() for c in self.mismatches],
        }

    def render(self, fmt: str = "text") -> bytes:
        if fmt == "json":
            return dumps_json(self.to_dict())
        out = []
        for r in self.reports:
            out.append(render_text(r))
        out.append("checks:")
        for c in self.checks:
            status = "ok  " if c.ok else "DIFF"
            line = f"  {status} [{c.scenario}] {c.what}: expected {c.expected}"
            if not c.ok:
                line += f", got {c.actual}"
            out.append(line)
        n_bad = len(self.mismatches)
        out.append(f"{len(self.checks) - n_bad}/{len(self.checks)} checks match")
        return ("\n".join(out) + "\n").encode("utf-8")


def run_repro(
    scenarios: Sequence[Scenario] | None = None,
    deictic: Sequence[tuple[str, Any, DeicticValue]] = DEICTIC_EXPECTATIONS,
) -> ReproResult:
    """Run the stock scenarios (or *scenarios*) and diff against their expectations."""
    scenarios = builtin_scenarios() if scenarios is None else list(scenarios)
    reports, checks = [], []
    for sc in scenarios:
        try:
            report = build_report(sc)
        except SelfRefError as exc:
            checks.append(Check(sc.name, "run", "ok", f"error: {exc}"))
            continue
        reports.append(report)
        checks.extend(check_expectations(report))
    for label, subject, expected in deictic:
        actual = evaluate_deictic(subject)
        shown = "open" if subject is OPEN else render_term(subject)
        checks.append(Check("deictic", f"{label} {shown}", expected.value, actual.value))
    return ReproResult(reports, checks)
