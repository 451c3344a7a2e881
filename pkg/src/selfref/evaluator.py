"""Evaluate schema instances to verdicts, with step-by-step derivation traces.

The embedded description "the CSI of (Σ) in which y is the first term" is
resolved referentially: the y-slot term denotes some expression e, and the
resolvent is the unique CSI whose first term is e.  If the y-slot denotes a
non-linguistic object there is no resolvent and the embedded conditional
holds vacuously.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Union

from .errors import NotCoreferent
from .naming import (
    IdentityFact,
    Justification,
    Model,
    Opaque,
    Referent,
    TermRef,
    build_model,
    denote,
    identity_between,
    render_referent,
)
from .syntax import (
    Atomic,
    DeicticInstance,
    Instance,
    SchemaTemplate,
    Term,
    consequent_subject,
    first_term,
    get_schema,
    instance_spec,
    make_csi,
    render_instance,
    render_term,
)

__all__ = [
    "Verdict",
    "Trace",
    "YSlotDenotation",
    "DescriptionResolved",
    "DescriptionEmpty",
    "ConsequentSubject",
    "FirstTermComparison",
    "VacuityApplied",
    "DQApplied",
    "LeibnizApplied",
    "AttributedVerdict",
    "DeicticValue",
    "OPEN",
    "resolve_description",
    "evaluate_instance",
    "replay_trace",
    "attribute",
    "leibniz_transfer",
    "evaluate_deictic",
    "demo_model",
]


@dataclass(frozen=True, slots=True)
class Verdict:
    value: bool
    vacuous: bool = False

    def __post_init__(self):
        if self.vacuous and not self.value:
            raise ValueError("a vacuous verdict is always True")

    def __str__(self) -> str:
        return f"{self.value} (vacuous)" if self.vacuous else str(self.value)


# -- trace steps --------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class YSlotDenotation:
    term: Term
    referent: Referent

    def describe(self) -> str:
        return f"[denotation] y-slot {render_term(self.term)} denotes {render_referent(self.referent)}"


@dataclass(frozen=True, slots=True)
class DescriptionResolved:
    resolvent: Instance

    def describe(self) -> str:
        r = self.resolvent
        return (
            f"[description] S = the CSI of {r.schema.display_label} whose first term is "
            f"{render_term(first_term(r))}, namely {instance_spec(r)}"
        )


@dataclass(frozen=True, slots=True)
class DescriptionEmpty:
    def describe(self) -> str:
        return "[description] no sentence has a non-expression as its first term; S has no value"


@dataclass(frozen=True, slots=True)
class VacuityApplied:
    def describe(self) -> str:
        return "[vacuity] the embedded conditional holds vacuously"


@dataclass(frozen=True, slots=True)
class ConsequentSubject:
    term: Term
    referent: Referent

    def describe(self) -> str:
        return f"[consequent] subject {render_term(self.term)} denotes {render_referent(self.referent)}"


@dataclass(frozen=True, slots=True)
class FirstTermComparison:
    expected: Referent
    actual: Term
    outcome: bool

    def describe(self) -> str:
        if isinstance(self.expected, TermRef):
            exp = render_term(self.expected.term)
        else:
            exp = f"object {self.expected.object_id}"
        return f"[first-term] expected {exp}, found {render_term(self.actual)}: {'match' if self.outcome else 'mismatch'}"


@dataclass(frozen=True, slots=True)
class DQApplied:
    identity: IdentityFact

    def describe(self) -> str:
        return f"[DQ] {self.identity} by disquotation"


@dataclass(frozen=True, slots=True)
class LeibnizApplied:
    source: Term
    target: Term

    def describe(self) -> str:
        return (
            f"[Leibniz] indiscernibility of identicals carries the verdict from "
            f"{render_term(self.source)} to {render_term(self.target)}"
        )


Step = Union[
    YSlotDenotation,
    DescriptionResolved,
    DescriptionEmpty,
    VacuityApplied,
    ConsequentSubject,
    FirstTermComparison,
    DQApplied,
    LeibnizApplied,
]


@dataclass(frozen=True, slots=True)
class Trace:
    steps: tuple[Step, ...]

    def lines(self) -> list[str]:
        return [f"{i}. {s.describe()}" for i, s in enumerate(self.steps, 1)]

    def render(self) -> str:
        return "\n".join(self.lines())

    def extend(self, *steps: Step) -> "Trace":
        return Trace(self.steps + steps)


# -- evaluation ---------------------------------------------------------------


def resolve_description(model: Model, schema: SchemaTemplate | str, y: Term) -> Instance | None:
    schema = get_schema(schema, model.schemas)
    r = denote(model, y)
    if isinstance(r, Opaque):
        return None
    return make_csi(schema, r.term, model.schemas)


def evaluate_instance(model: Model, inst: Instance) -> tuple[Verdict, Trace]:
    """Evaluate ``x is P iff: σ is the first term in S, if S is the CSI ... y ...``.

    σ is the x-slot term or the template's fixed term.  True iff the object σ
    denotes is (type-identically) the expression standing first in the
    resolvent.
    """
    get_schema(inst.schema, model.schemas)
    y_ref = denote(model, inst.y)
    steps: list[Step] = [YSlotDenotation(inst.y, y_ref)]
    resolvent = resolve_description(model, inst.schema, inst.y)
    if resolvent is None:
        steps += [DescriptionEmpty(), VacuityApplied()]
        return Verdict(True, vacuous=True), Trace(tuple(steps))
    steps.append(DescriptionResolved(resolvent))
    sigma = consequent_subject(inst)
    s_ref = denote(model, sigma)
    steps.append(ConsequentSubject(sigma, s_ref))
    first = first_term(resolvent)
    outcome = s_ref == TermRef(first)
    steps.append(FirstTermComparison(s_ref, first, outcome))
    return Verdict(outcome), Trace(tuple(steps))


def replay_trace(model: Model, inst: Instance, trace: Trace) -> Verdict:
    """Re-check every step of *trace* against *model* and return the verdict it supports.

    Raises ValueError if any step is not borne out by the model.
    """
    steps = list(trace.steps)

    def expect(cond: bool, what: str):
        if not cond:
            raise ValueError(f"trace step does not replay: {what}")

    expect(bool(steps) and isinstance(steps[0], YSlotDenotation), "missing y-slot denotation")
    s0 = steps.pop(0)
    expect(s0.term == inst.y and denote(model, inst.y) == s0.referent, "y-slot denotation")
    nxt = steps.pop(0)
    if isinstance(nxt, DescriptionEmpty):
        expect(isinstance(s0.referent, Opaque), "empty description with term-valued y")
        expect(len(steps) == 1 and isinstance(steps[0], VacuityApplied), "vacuity step")
        value = Verdict(True, vacuous=True)
    else:
        expect(isinstance(nxt, DescriptionResolved), "description step")
        expect(isinstance(s0.referent, TermRef), "resolvent for an opaque y")
        expect(nxt.resolvent == make_csi(inst.schema, s0.referent.term, model.schemas), "resolvent")
        cs, cmp = steps.pop(0), steps.pop(0)
        expect(isinstance(cs, ConsequentSubject) and cs.term == consequent_subject(inst), "consequent subject")
        expect(denote(model, cs.term) == cs.referent, "consequent denotation")
        expect(isinstance(cmp, FirstTermComparison), "comparison step")
        expect(cmp.expected == cs.referent and cmp.actual == first_term(nxt.resolvent), "comparison operands")
        expect(cmp.outcome == (cmp.expected == TermRef(cmp.actual)), "comparison outcome")
        value = Verdict(cmp.outcome)
    for step in steps:
        if isinstance(step, DQApplied):
            ident = step.identity
            expect(denote(model, ident.left) == denote(model, ident.right), "DQ identity")
        elif isinstance(step, LeibnizApplied):
            expect(denote(model, step.source) == denote(model, step.target), "Leibniz transfer")
    return value


# -- attribution --------------------------------------------------------------


@dataclass(frozen=True)
class AttributedVerdict:
    """A verdict that *subject* is (or is not) P, with where it came from.

    ``identity`` is None for a plain evaluation of ``source`` and holds the
    identity used when the verdict was carried over by indiscernibility.
    """

    subject: Term
    subject_object: Referent
    verdict: Verdict
    source: Instance
    trace: Trace = field(compare=False)
    identity: IdentityFact | None = None

    @property
    def route(self) -> str:
        return "plain" if self.identity is None else "leibniz"

    def sentence(self) -> str:
        neg = "" if self.verdict.value else "not "
        return f"{render_term(self.subject)} is {neg}{self.source.schema.predicate}"


def attribute(model: Model, inst: Instance) -> AttributedVerdict:
    verdict, trace = evaluate_instance(model, inst)
    return AttributedVerdict(inst.x, denote(model, inst.x), verdict, inst, trace)


def leibniz_transfer(model: Model, av: AttributedVerdict, to: Term) -> AttributedVerdict:
    ident = identity_between(model, av.subject, to)
    if ident is None:
        raise NotCoreferent(f"{render_term(av.subject)} and {render_term(to)} differ in denotation")
    extra: tuple[Step, ...] = ()
    if ident.justification is Justification.DQ:
        extra = (DQApplied(ident),)
    trace = av.trace.extend(*extra, LeibnizApplied(av.subject, to))
    return replace(av, subject=to, trace=trace, identity=ident)


# -- the deictic formula (#) --------------------------------------------------


class DeicticValue(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    INDETERMINATE = "indeterminate"


class _Open:
    """Placeholder for a variable that has an assignment but no replacement."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OPEN"


OPEN = _Open()


def demo_model() -> Model:
    return build_model([("d", TermRef(Atomic("d")))])


def evaluate_deictic(subject: Term | _Open, model: Model | None = None) -> DeicticValue:
    """``subject is the first term of this very substitution instance of (#)``.

    With an actual term in place, the instance's first term is that term, so
    the sentence is true iff the term denotes itself.  With only an assignment
    (``OPEN``) there is no instance yet and hence no fact of the matter.
    """
    if subject is OPEN:
        return DeicticValue.INDETERMINATE
    model = demo_model() if model is None else model
    inst = DeicticInstance(subject)
    if denote(model, subject) == TermRef(first_term(inst)):
        return DeicticValue.TRUE
    return DeicticValue.FALSE


def render_evaluation(inst: Instance, verdict: Verdict, trace: Trace) -> str:
    out = [render_instance(inst)]
    out += ["  " + line for line in trace.lines()]
    out.append(f"verdict: {verdict}")
    return "\n".join(out)
