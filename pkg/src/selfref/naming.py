"""Naming stipulations, denotation, disquotation and restriction policies."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Union

from .errors import DuplicateStipulation, UnstipulatedName
from .syntax import (
    BUILTIN_SCHEMAS,
    Atomic,
    Quote,
    SchemaTemplate,
    Term,
    render_term,
    validate_identifier,
)

__all__ = [
    "TermRef",
    "Opaque",
    "Referent",
    "Model",
    "IdentityFact",
    "Justification",
    "Policy",
    "PolicyReport",
    "build_model",
    "denote",
    "is_self_referring",
    "coreferent",
    "identity_between",
    "dq_identities",
    "detect_cycles",
    "check_policy",
    "render_referent",
]


@dataclass(frozen=True, slots=True)
class TermRef:
    """The referent is a linguistic expression (a term type)."""

    term: Term


@dataclass(frozen=True, slots=True)
class Opaque:
    """A non-linguistic object, known only by its id."""

    object_id: str

    def __post_init__(self):
        validate_identifier(self.object_id)


Referent = Union[TermRef, Opaque]


def render_referent(r: Referent) -> str:
    if isinstance(r, TermRef):
        return f"the expression {render_term(r.term)}"
    return f"the object {r.object_id}"


@dataclass(frozen=True)
class Model:
    stipulations: tuple[tuple[str, Referent], ...]
    schemas: Mapping[str, SchemaTemplate] = field(
        default_factory=lambda: MappingProxyType(dict(BUILTIN_SCHEMAS))
    )
    _lookup: Mapping[str, Referent] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lookup = {}
        for name, ref in self.stipulations:
            validate_identifier(name)
            if name in lookup:
                raise DuplicateStipulation(f"name {name!r} is stipulated twice")
            lookup[name] = ref
        object.__setattr__(self, "_lookup", MappingProxyType(lookup))
        object.__setattr__(self, "schemas", MappingProxyType(dict(self.schemas)))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.stipulations)

    def referent_of(self, name: str) -> Referent:
        try:
            return self._lookup[name]
        except KeyError:
            raise UnstipulatedName(f"name {name!r} has no stipulation") from None

    def __contains__(self, name: str) -> bool:
        return name in self._lookup


def build_model(
    stipulations: Iterable[tuple[str, Referent]],
    schemas: Iterable[SchemaTemplate] = (),
) -> Model:
    """Build an immutable model; ``[("d", TermRef(Atomic("d")))]`` makes d name itself."""
    registry = dict(BUILTIN_SCHEMAS)
    for s in schemas:
        registry[s.id] = s
    return Model(tuple(stipulations), registry)


def denote(model: Model, t: Term) -> Referent:
    # a quote-name denotes the quoted expression, whatever the model says
    if isinstance(t, Quote):
        return TermRef(t.inner)
    return model.referent_of(t.name)


def is_self_referring(model: Model, name: str) -> bool:
    return model.referent_of(name) == TermRef(Atomic(name))


def coreferent(model: Model, t1: Term, t2: Term) -> bool:
    return denote(model, t1) == denote(model, t2)


class Justification(str, enum.Enum):
    DQ = "DQ"
    STIPULATED = "stipulated"


@dataclass(frozen=True, slots=True)
class IdentityFact:
    left: Term
    right: Term
    justification: Justification

    def __str__(self) -> str:
        return f"{render_term(self.left)} = {render_term(self.right)}"


def dq_identities(model: Model) -> list[IdentityFact]:
    """Disquote every term-valued stipulation.

    ``n names u`` is the stipulation written "'n' names 'u'", whose disquoted
    form is the identity ``n = 'u'``; for a self-referring d that is d = 'd'.
    Opaque stipulations yield nothing.
    """
    return [
        IdentityFact(Atomic(name), Quote(ref.term), Justification.DQ)
        for name, ref in model.stipulations
        if isinstance(ref, TermRef)
    ]


def identity_between(model: Model, t1: Term, t2: Term) -> IdentityFact | None:
    """The identity licensing substitution of t2 for t1, or None if they differ in denotation."""
    r = denote(model, t1)
    if r != denote(model, t2):
        return None
    just = Justification.DQ if isinstance(r, TermRef) else Justification.STIPULATED
    return IdentityFact(t1, t2, just)


def _naming_graph(model: Model) -> dict[str, str]:
    return {
        n: r.term.name
        for n, r in model.stipulations
        if isinstance(r, TermRef) and isinstance(r.term, Atomic)
    }


def detect_cycles(model: Model) -> list[list[str]]:
    """Cycles of the graph n -> m for stipulations ``n names m`` (m atomic).

    Each cycle is rotated to start at its smallest name; the list is sorted.
    """
    succ = _naming_graph(model)
    cycles: list[list[str]] = []
    state: dict[str, int] = {}  # 1 = on current path, 2 = done
    for start in succ:
        path: list[str] = []
        node = start
        while node in succ and node not in state:
            state[node] = 1
            path.append(node)
            node = succ[node]
        if node in state and state[node] == 1:
            cyc = path[path.index(node):]
            i = cyc.index(min(cyc))
            cycles.append(cyc[i:] + cyc[:i])
        for n in path:
            state[n] = 2
    return sorted(cycles)


class Policy(enum.Flag):
    NO_SELF_REFERENCE = enum.auto()
    NO_NAMING_CYCLES = enum.auto()
    INJECTIVE_NAMING = enum.auto()
    NO_TERM_VALUED_NAMES = enum.auto()

    @property
    def members(self) -> list["Policy"]:
        return [m for m in type(self) if m in self]

    @property
    def slug(self) -> str:
        return "+".join(m.name.lower().replace("_", "-") for m in self.members)

    @classmethod
    def from_slug(cls, text: str) -> "Policy":
        out = cls(0)
        for part in text.split("+"):
            key = part.strip().upper().replace("-", "_")
            try:
                out |= cls[key]
            except KeyError:
                raise ValueError(f"unknown policy {part!r}") from None
        return out


@dataclass(frozen=True)
class PolicyReport:
    policy: Policy
    violations: tuple[tuple[Policy, tuple[str, ...]], ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def check_policy(model: Model, policy: Policy) -> PolicyReport:
    """Check a (possibly conjoined) policy; each violation names the offending names."""
    violations: list[tuple[Policy, tuple[str, ...]]] = []
    for member in policy.members:
        if member is Policy.NO_SELF_REFERENCE:
            found = [(n,) for n in model.names if is_self_referring(model, n)]
        elif member is Policy.NO_NAMING_CYCLES:
            found = [tuple(c) for c in detect_cycles(model)]
        elif member is Policy.INJECTIVE_NAMING:
            groups: dict[Referent, list[str]] = defaultdict(list)
            for n, r in model.stipulations:
                groups[r].append(n)
            found = [tuple(g) for g in groups.values() if len(g) > 1]
        else:
            found = [(n,) for n, r in model.stipulations if isinstance(r, TermRef)]
        violations.extend((member, v) for v in found)
    return PolicyReport(policy, tuple(violations))
