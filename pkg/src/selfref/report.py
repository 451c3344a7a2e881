"""Run a scenario end to end and serialize the result.

The JSON form has the top-level keys ``scenario``, ``table``, ``conflicts``,
``certificate``, ``policies``, ``traces`` and ``version``; keys are sorted and
lists keep analysis order, so equal inputs give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from . import __version__
from .analyzer import Certificate, ConflictReport, VerdictTable, find_conflicts, verdict_table
from .evaluator import AttributedVerdict
from .naming import Model, Opaque, PolicyReport, Referent, TermRef, check_policy
from .scenario import Scenario, dump_scenario
from .syntax import render_instance, render_term

__all__ = ["Report", "build_report", "write_report", "referent_json", "EXIT_OK", "EXIT_ERROR", "EXIT_CONFLICT"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFLICT = 2


@dataclass(frozen=True)
class Report:
    scenario: Scenario
    model: Model
    table: VerdictTable
    conflicts: tuple[ConflictReport, ...]
    certificate: Certificate | None
    policies: tuple[PolicyReport, ...]
    include_vacuous: bool = False

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.certificate is not None else EXIT_CONFLICT

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": __version__,
            "scenario": scenario_json(self.scenario),
            "table": [
                {
                    "instance": str(row.instance),
                    "sentence": render_instance(row.instance),
                    "csi": row.is_csi,
                    "subject": render_term(row.subject),
                    "object": referent_json(row.subject_object),
                    "verdict": row.verdict.value,
                    "vacuous": row.verdict.vacuous,
                    "trace": row.trace_id,
                }
                for row in self.table.rows
            ],
            "conflicts": [conflict_json(c) for c in self.conflicts],
            "certificate": certificate_json(self.certificate),
            "policies": [policy_json(p) for p in self.policies],
            "traces": {row.trace_id: row.trace.lines() for row in self.table.rows},
        }


def referent_json(r: Referent) -> dict[str, str]:
    if isinstance(r, TermRef):
        return {"term": render_term(r.term)}
    return {"object": r.object_id}


def scenario_json(s: Scenario) -> dict[str, Any]:
    return {
        "name": s.name,
        "schema": s.template().id,
        "mode": s.mode.value,
        "universe": list(s.names),
        "depth": s.depth,
        "stipulations": [{"name": n, **referent_json(r)} for n, r in s.stipulations],
        "policies": [p.slug for p in s.policies],
        "source": dump_scenario(s),
    }


def _witness_json(av: AttributedVerdict) -> dict[str, Any]:
    return {
        "instance": str(av.source),
        "sentence": render_instance(av.source),
        "subject": render_term(av.source.x),
        "verdict": av.verdict.value,
        "vacuous": av.verdict.vacuous,
        "route": av.route,
        "trace": av.trace.lines(),
    }


def conflict_json(c: ConflictReport) -> dict[str, Any]:
    ident = c.positive.identity
    return {
        "kind": c.kind.value,
        "canonical": c.canonical,
        "object": referent_json(c.subject_object),
        "positive": _witness_json(c.positive),
        "negative": _witness_json(c.negative),
        "identity": None if ident is None else {"identity": str(ident), "justification": ident.justification.value},
        "includes_vacuous": c.includes_vacuous,
    }


def certificate_json(cert: Certificate | None) -> dict[str, Any] | None:
    if cert is None:
        return None
    return {
        "schema": cert.schema,
        "mode": cert.mode.value,
        "names": list(cert.names),
        "depth": cert.depth,
        "instances_checked": cert.instances_checked,
        "include_vacuous": cert.include_vacuous,
        "statement": cert.statement,
    }


def policy_json(p: PolicyReport) -> dict[str, Any]:
    return {
        "policy": p.policy.slug,
        "passed": p.passed,
        "violations": [{"policy": m.slug, "names": list(names)} for m, names in p.violations],
    }


def build_report(scenario: Scenario, include_vacuous: bool = False) -> Report:
    model = scenario.model()
    table = verdict_table(model, scenario.template(), scenario.mode, scenario.names, scenario.depth)
    conflicts = tuple(find_conflicts(table, model, include_vacuous))
    cert = None
    if not conflicts:
        cert = Certificate(
            table.schema.id, scenario.mode, tuple(scenario.names), scenario.depth, len(table.rows), include_vacuous
        )
    policies = tuple(check_policy(model, p) for p in scenario.policies)
    return Report(scenario, model, table, conflicts, cert, policies, include_vacuous)


def dumps_json(data: Any) -> bytes:
    return (json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _obj_text(r: Referent) -> str:
    return f"object {r.object_id}" if isinstance(r, Opaque) else f"expression {render_term(r.term)}"


def render_text(report: Report) -> str:
    s, t = report.scenario, report.table
    out = [
        f"scenario: {s.name}",
        f"schema {t.schema.id} {t.schema.display_label}; {t.bound}",
        "stipulations:",
    ]
    out += [f"  {n} names {_obj_text(r)}" for n, r in s.stipulations]
    out.append(f"verdicts ({len(t.rows)} instances):")
    width = max((len(str(r.instance)) for r in t.rows), default=0)
    for row in t.rows:
        flag = " (vacuous)" if row.verdict.vacuous else ""
        out.append(f"  {str(row.instance):<{width}}  {str(row.verdict.value):<5}{flag}  {render_instance(row.instance)}")
    out.append(f"conflicts: {len(report.conflicts)}")
    for i, c in enumerate(report.conflicts, 1):
        tag = "canonical" if c.canonical else "extended"
        out.append(f"  {i}. {c.kind.value} on {_obj_text(c.subject_object)} [{tag}]")
        pos = c.positive
        via = f", carried to {render_term(pos.subject)} via {pos.identity}" if pos.identity else ""
        out.append(f"     + {render_term(pos.source.x)} is {t.schema.predicate} by {pos.source}{via}")
        out.append(f"     - {render_term(c.negative.subject)} is not {t.schema.predicate} by {c.negative.source}")
    if report.certificate is not None:
        out.append(f"certificate: {report.certificate.statement}")
    else:
        out.append("certificate: none")
    if report.policies:
        out.append("policies:")
        for p in report.policies:
            multi = len(p.policy.members) > 1
            detail = "; ".join((f"{m.slug}: " if multi else "") + ", ".join(names) for m, names in p.violations)
            out.append(f"  {p.policy.slug}: {'pass' if p.passed else 'FAIL'}{' (' + detail + ')' if detail else ''}")
    return "\n".join(out) + "\n"


def write_report(report: Report, fmt: str = "text") -> bytes:
    if fmt == "json":
        return dumps_json(report.to_dict())
    if fmt == "text":
        return render_text(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")
