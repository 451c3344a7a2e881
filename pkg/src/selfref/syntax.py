"""Terms, schema templates and substitution instances of the object language.

Everything here is purely syntactic.  A term is an atomic name or the
quotation of a term; two terms are equal exactly when they are the same
expression type.  Instances are structured (schema + two slot terms) and
rendering them to English is a projection used for display only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import InvalidIdentifier, NotAQuotation, ParseError, UnknownSchema

__all__ = [
    "Atomic",
    "Quote",
    "Term",
    "XSlot",
    "ConstTerm",
    "SchemaTemplate",
    "Instance",
    "DeicticInstance",
    "LAGADONIAN",
    "LAPUTAN",
    "BUILTIN_SCHEMAS",
    "depth",
    "quote_term",
    "unquote_term",
    "parse_term",
    "render_term",
    "validate_identifier",
    "get_schema",
    "make_instance",
    "make_csi",
    "is_csi",
    "first_term",
    "term_universe",
    "render_instance",
    "render_deictic",
]

IDENTIFIER_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


@dataclass(frozen=True, slots=True)
class Atomic:
    name: str

    def __post_init__(self):
        validate_identifier(self.name)

    def __str__(self) -> str:
        return render_term(self)


@dataclass(frozen=True, slots=True)
class Quote:
    inner: "Term"

    def __str__(self) -> str:
        return render_term(self)


Term = Union[Atomic, Quote]


def validate_identifier(name: str) -> str:
    if not isinstance(name, str) or not IDENTIFIER_RE.fullmatch(name):
        raise InvalidIdentifier(f"invalid identifier: {name!r}")
    return name


def depth(t: Term) -> int:
    """Number of quotation marks wrapped around the underlying name."""
    k = 0
    while isinstance(t, Quote):
        t = t.inner
        k += 1
    return k


def _base(t: Term) -> Atomic:
    while isinstance(t, Quote):
        t = t.inner
    return t


def quote_term(t: Term) -> Quote:
    return Quote(t)


def unquote_term(t: Term) -> Term:
    if not isinstance(t, Quote):
        raise NotAQuotation(f"{render_term(t)} is not a quotation")
    return t.inner


def render_term(t: Term) -> str:
    k = depth(t)
    marks = "'" * k
    return f"{marks}{_base(t).name}{marks}"


def parse_term(text: str) -> Term:
    """Parse nested-apostrophe syntax: ``d``, ``'d'``, ``''d''``, ...

    Leading and trailing apostrophe runs must have equal length.
    """
    if not isinstance(text, str) or not text:
        raise ParseError("empty term")
    lead = len(text) - len(text.lstrip("'"))
    trail = len(text) - len(text.rstrip("'"))
    if lead == len(text):
        raise ParseError(f"term has no name: {text!r}")
    if lead != trail:
        raise ParseError(f"unbalanced quotation marks in {text!r}")
    name = text[lead:len(text) - trail]
    if not IDENTIFIER_RE.fullmatch(name):
        raise ParseError(f"illegal identifier {name!r} in {text!r}")
    t: Term = Atomic(name)
    for _ in range(lead):
        t = Quote(t)
    return t


# -- schema templates ---------------------------------------------------------


@dataclass(frozen=True, slots=True)
class XSlot:
    """The consequent subject is whatever term fills the x-slot."""


@dataclass(frozen=True, slots=True)
class ConstTerm:
    """The consequent subject is a fixed term of the template."""

    term: Term


SubjectSelector = Union[XSlot, ConstTerm]


@dataclass(frozen=True, slots=True)
class SchemaTemplate:
    id: str
    predicate: str
    subject: SubjectSelector
    label: str = ""

    @property
    def display_label(self) -> str:
        return self.label or f"({self.id})"


LAGADONIAN = SchemaTemplate("LAGADONIAN", "Lagadonian", XSlot(), "(*)")
LAPUTAN = SchemaTemplate("LAPUTAN", "Laputan", ConstTerm(Quote(Atomic("a"))), "(†)")

BUILTIN_SCHEMAS: Mapping[str, SchemaTemplate] = {
    LAGADONIAN.id: LAGADONIAN,
    LAPUTAN.id: LAPUTAN,
}


def get_schema(
    schema: SchemaTemplate | str,
    registry: Mapping[str, SchemaTemplate] | None = None,
) -> SchemaTemplate:
    """Look a schema up by id (case-insensitive) or check a template is registered."""
    registry = BUILTIN_SCHEMAS if registry is None else registry
    if isinstance(schema, SchemaTemplate):
        if registry.get(schema.id) != schema:
            raise UnknownSchema(f"schema {schema.id!r} is not registered")
        return schema
    key = str(schema).upper()
    for sid, template in registry.items():
        if sid.upper() == key:
            return template
    raise UnknownSchema(f"unknown schema {schema!r}")


# -- instances ----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Instance:
    schema: SchemaTemplate
    x: Term
    y: Term

    def __str__(self) -> str:
        return instance_spec(self)


@dataclass(frozen=True, slots=True)
class DeicticInstance:
    """``<subject> is the first term of this very substitution instance of (#)``.

    The embedded description always denotes the containing instance, so the
    instance's first term is just its subject.
    """

    subject: Term


def make_instance(
    schema: SchemaTemplate | str,
    x: Term,
    y: Term,
    registry: Mapping[str, SchemaTemplate] | None = None,
) -> Instance:
    return Instance(get_schema(schema, registry), x, y)


def make_csi(
    schema: SchemaTemplate | str,
    alpha: Term,
    registry: Mapping[str, SchemaTemplate] | None = None,
) -> Instance:
    return make_instance(schema, alpha, Quote(alpha), registry)


def is_csi(inst: Instance) -> bool:
    return inst.y == Quote(inst.x)


def first_term(inst: Instance | DeicticInstance) -> Term:
    if isinstance(inst, DeicticInstance):
        return inst.subject
    return inst.x


def consequent_subject(inst: Instance) -> Term:
    selector = inst.schema.subject
    if isinstance(selector, ConstTerm):
        return selector.term
    return inst.x


def term_universe(names: Iterable[str], max_depth: int) -> list[Term]:
    """All ``Quote^k(Atomic(n))`` for ``n`` in *names*, ``0 <= k <= max_depth``.

    Ordered by name (as given), then by depth.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    out: list[Term] = []
    for n in names:
        t: Term = Atomic(validate_identifier(n))
        out.append(t)
        for _ in range(max_depth):
            t = Quote(t)
            out.append(t)
    return out


def instance_spec(inst: Instance) -> str:
    """Compact form accepted back by the instance-spec parser."""
    if is_csi(inst):
        return f"CSI({render_term(inst.x)})"
    return f"Phi({render_term(inst.x)}, {render_term(inst.y)})"


def render_instance(inst: Instance) -> str:
    schema = inst.schema
    x = render_term(inst.x)
    subj = render_term(consequent_subject(inst))
    y = render_term(inst.y)
    if schema == LAGADONIAN:
        description = f"the coordinated substitution instance of {schema.display_label}"
    else:
        description = f"the CSI of {schema.display_label}"
    return (
        f"{x} is {schema.predicate} iff: {subj} is the first term in S, "
        f"if S is {description} in which {y} is the first term."
    )


def render_deictic(inst: DeicticInstance) -> str:
    return f"{render_term(inst.subject)} is the first term of this very substitution instance of (#)."
