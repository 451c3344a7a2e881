"""Line-oriented scenario files.

Example::

    # d names itself
    name lagadonian-csi
    stipulate d -> term d
    schema lagadonian
    mode csi
    depth 2
    policy no-self-reference
    expect CSI(d) true as (7)
    expect conflict leibniz CSI(d) CSI('d')

Recognised lines: ``name``, ``stipulate <n> -> term <t> | obj <id>``,
``define <ID> <Predicate> xslot | const <term>``, ``schema``, ``mode csi|all``,
``universe <n>...`` (defaults to the stipulated names), ``depth``, ``policy``,
and ``expect`` lines (verdict, ``conflict``, ``certificate``, ``policy``).
``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .analyzer import ConflictKind, Mode
from .errors import DuplicateStipulation, ParseError, SelfRefError
from .naming import Model, Opaque, Policy, Referent, TermRef, build_model
from .syntax import (
    BUILTIN_SCHEMAS,
    ConstTerm,
    Instance,
    Quote,
    SchemaTemplate,
    Term,
    XSlot,
    get_schema,
    make_instance,
    parse_term,
    render_term,
    validate_identifier,
)

__all__ = [
    "InstanceSpec",
    "parse_instance_spec",
    "VerdictExpectation",
    "ConflictExpectation",
    "CertificateExpectation",
    "PolicyExpectation",
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "dump_scenario",
]

_TERM = r"[^\s(),]+"
_SPEC = rf"(?:CSI\(\s*{_TERM}\s*\)|Phi\(\s*{_TERM}\s*,\s*{_TERM}\s*\))"
_SPEC_RE = re.compile(rf"\s*(?:CSI\(\s*(?P<csi>{_TERM})\s*\)|Phi\(\s*(?P<x>{_TERM})\s*,\s*(?P<y>{_TERM})\s*\))\s*")
_EXPECT_VERDICT = re.compile(rf"(?P<spec>{_SPEC})\s+(?P<value>true|false|vacuous)(?:\s+as\s+(?P<label>.+))?", re.I)
_EXPECT_CONFLICT = re.compile(
    rf"conflict\s+(?P<kind>direct|leibniz)\s+(?P<pos>{_SPEC})\s+(?P<neg>{_SPEC})(?:\s+as\s+(?P<label>.+))?", re.I
)
_EXPECT_POLICY = re.compile(r"policy\s+(?P<policy>\S+)\s+(?P<outcome>pass|fail)", re.I)


@dataclass(frozen=True)
class InstanceSpec:
    """Slot terms of an instance, independent of the schema."""

    x: Term
    y: Term

    def bind(self, schema: SchemaTemplate, registry=None) -> Instance:
        return make_instance(schema, self.x, self.y, registry)

    def __str__(self) -> str:
        if self.y == Quote(self.x):
            return f"CSI({render_term(self.x)})"
        return f"Phi({render_term(self.x)}, {render_term(self.y)})"

    @classmethod
    def of(cls, inst: Instance) -> "InstanceSpec":
        return cls(inst.x, inst.y)


def parse_instance_spec(text: str) -> InstanceSpec:
    """``CSI(<term>)`` or ``Phi(<term>, <term>)``."""
    m = _SPEC_RE.fullmatch(text)
    if not m:
        raise ParseError(f"bad instance spec {text!r}; expected CSI(<term>) or Phi(<term>, <term>)")
    if m["csi"] is not None:
        x = parse_term(m["csi"])
        return InstanceSpec(x, Quote(x))
    return InstanceSpec(parse_term(m["x"]), parse_term(m["y"]))


@dataclass(frozen=True)
class VerdictExpectation:
    spec: InstanceSpec
    value: str  # "true", "false" or "vacuous"
    label: str = ""


@dataclass(frozen=True)
class ConflictExpectation:
    kind: ConflictKind
    positive: InstanceSpec
    negative: InstanceSpec
    label: str = ""


@dataclass(frozen=True)
class CertificateExpectation:
    pass


@dataclass(frozen=True)
class PolicyExpectation:
    policy: Policy
    passed: bool


Expectation = Union[VerdictExpectation, ConflictExpectation, CertificateExpectation, PolicyExpectation]


@dataclass(frozen=True)
class Scenario:
    name: str
    stipulations: tuple[tuple[str, Referent], ...]
    schema: str
    mode: Mode = Mode.CSI_ONLY
    depth: int = 2
    universe: tuple[str, ...] | None = None
    policies: tuple[Policy, ...] = ()
    definitions: tuple[SchemaTemplate, ...] = ()
    expectations: tuple[Expectation, ...] = field(default=())

    @property
    def names(self) -> tuple[str, ...]:
        if self.universe is not None:
            return self.universe
        return tuple(n for n, _ in self.stipulations)

    def model(self) -> Model:
        return build_model(self.stipulations, self.definitions)

    def template(self) -> SchemaTemplate:
        return get_schema(self.schema, self.model().schemas)


def _parse_referent(kind: str, value: str) -> Referent:
    if kind == "term":
        return TermRef(parse_term(value))
    if kind == "obj":
        return Opaque(validate_identifier(value))
    raise ParseError(f"referent must be 'term <t>' or 'obj <id>', got {kind!r}")


def parse_scenario(text: str) -> Scenario:
    fields: dict = {"stipulations": [], "policies": [], "definitions": [], "expectations": []}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if keyword == "name":
                fields["name"] = rest
            elif keyword == "stipulate":
                m = re.fullmatch(r"(\S+)\s*->\s*(\S+)\s+(\S+)", rest)
                if not m:
                    raise ParseError("expected 'stipulate <name> -> term <t>|obj <id>'")
                name = validate_identifier(m[1])
                if name in seen:
                    raise DuplicateStipulation(f"name {name!r} is stipulated twice")
                seen.add(name)
                fields["stipulations"].append((name, _parse_referent(m[2], m[3])))
            elif keyword == "define":
                parts = rest.split()
                if len(parts) == 3 and parts[2] == "xslot":
                    subject = XSlot()
                elif len(parts) == 4 and parts[2] == "const":
                    subject = ConstTerm(parse_term(parts[3]))
                else:
                    raise ParseError("expected 'define <ID> <Predicate> xslot|const <term>'")
                fields["definitions"].append(SchemaTemplate(validate_identifier(parts[0]), parts[1], subject))
            elif keyword == "schema":
                fields["schema"] = rest
            elif keyword == "mode":
                fields["mode"] = {"csi": Mode.CSI_ONLY, "all": Mode.ALL_INSTANCES}[rest.lower()]
            elif keyword == "universe":
                fields["universe"] = tuple(validate_identifier(n) for n in rest.split())
            elif keyword == "depth":
                fields["depth"] = int(rest)
                if fields["depth"] < 0:
                    raise ParseError("depth must be >= 0")
            elif keyword == "policy":
                fields["policies"].append(Policy.from_slug(rest))
            elif keyword == "expect":
                fields["expectations"].append(_parse_expectation(rest))
            else:
                raise ParseError(f"unknown keyword {keyword!r}")
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        except SelfRefError as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
        except (KeyError, ValueError):
            raise ParseError(f"bad value in {line!r}", lineno) from None
    for required in ("name", "schema"):
        if required not in fields:
            raise ParseError(f"missing '{required}' line")
    scenario = Scenario(
        name=fields["name"],
        stipulations=tuple(fields["stipulations"]),
        schema=fields["schema"],
        mode=fields.get("mode", Mode.CSI_ONLY),
        depth=fields.get("depth", 2),
        universe=fields.get("universe"),
        policies=tuple(fields["policies"]),
        definitions=tuple(fields["definitions"]),
        expectations=tuple(fields["expectations"]),
    )
    registry = dict(BUILTIN_SCHEMAS)
    registry.update((d.id, d) for d in scenario.definitions)
    get_schema(scenario.schema, registry)  # raises UnknownSchema
    return scenario


def _parse_expectation(rest: str) -> Expectation:
    if rest.lower() == "certificate":
        return CertificateExpectation()
    if m := _EXPECT_CONFLICT.fullmatch(rest):
        return ConflictExpectation(
            ConflictKind(m["kind"].lower()),
            parse_instance_spec(m["pos"]),
            parse_instance_spec(m["neg"]),
            (m["label"] or "").strip(),
        )
    if m := _EXPECT_POLICY.fullmatch(rest):
        return PolicyExpectation(Policy.from_slug(m["policy"]), m["outcome"].lower() == "pass")
    if m := _EXPECT_VERDICT.fullmatch(rest):
        return VerdictExpectation(parse_instance_spec(m["spec"]), m["value"].lower(), (m["label"] or "").strip())
    raise ParseError(f"unrecognised expectation {rest!r}")


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def _dump_referent(r: Referent) -> str:
    if isinstance(r, TermRef):
        return f"term {render_term(r.term)}"
    return f"obj {r.object_id}"


def dump_scenario(s: Scenario) -> str:
    """Serialize back to the line format; ``parse_scenario(dump_scenario(s)) == s``."""
    out = [f"name {s.name}"]
    out += [f"stipulate {n} -> {_dump_referent(r)}" for n, r in s.stipulations]
    for d in s.definitions:
        sel = "xslot" if isinstance(d.subject, XSlot) else f"const {render_term(d.subject.term)}"
        out.append(f"define {d.id} {d.predicate} {sel}")
    out.append(f"schema {s.schema}")
    out.append(f"mode {s.mode.value}")
    if s.universe is not None:
        out.append(f"universe {' '.join(s.universe)}")
    out.append(f"depth {s.depth}")
    out += [f"policy {p.slug}" for p in s.policies]
    for e in s.expectations:
        if isinstance(e, CertificateExpectation):
            line = "expect certificate"
        elif isinstance(e, PolicyExpectation):
            line = f"expect policy {e.policy.slug} {'pass' if e.passed else 'fail'}"
        elif isinstance(e, ConflictExpectation):
            line = f"expect conflict {e.kind.value} {e.positive} {e.negative}"
        else:
            line = f"expect {e.spec} {e.value}"
        label = getattr(e, "label", "")
        out.append(f"{line} as {label}" if label else line)
    return "\n".join(out) + "\n"
