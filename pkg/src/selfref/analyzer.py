"""Verdict tables over bounded term universes, conflict detection and certificates."""

from __future__ import annotations

import enum
import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

from .evaluator import AttributedVerdict, Trace, Verdict, attribute, leibniz_transfer
from .naming import Model, Referent, TermRef, denote, is_self_referring
from .syntax import (
    Atomic,
    ConstTerm,
    Instance,
    SchemaTemplate,
    Term,
    get_schema,
    is_csi,
    make_csi,
    make_instance,
    term_universe,
)

__all__ = [
    "Mode",
    "Row",
    "VerdictTable",
    "ConflictKind",
    "ConflictReport",
    "Certificate",
    "verdict_table",
    "find_conflicts",
    "consistency_certificate",
    "characterize_exceptions",
]


class Mode(enum.Enum):
    """Which substitution instances count as laying down a condition."""

    CSI_ONLY = "csi"
    ALL_INSTANCES = "all"


@dataclass(frozen=True)
class Row:
    index: int
    instance: Instance
    subject: Term
    subject_object: Referent
    verdict: Verdict
    trace: Trace

    @property
    def is_csi(self) -> bool:
        return is_csi(self.instance)

    @property
    def trace_id(self) -> str:
        return f"t{self.index:04d}"

    def attributed(self) -> AttributedVerdict:
        return AttributedVerdict(self.subject, self.subject_object, self.verdict, self.instance, self.trace)


@dataclass(frozen=True)
class VerdictTable:
    schema: SchemaTemplate
    mode: Mode
    names: tuple[str, ...]
    depth: int
    rows: tuple[Row, ...]

    def by_referent(self) -> dict[Referent, list[Row]]:
        out: dict[Referent, list[Row]] = defaultdict(list)
        for row in self.rows:
            out[row.subject_object].append(row)
        return dict(out)

    def row_for(self, inst: Instance) -> Row | None:
        for row in self.rows:
            if row.instance == inst:
                return row
        return None

    @property
    def bound(self) -> str:
        return f"names [{', '.join(self.names)}], quotation depth <= {self.depth}, mode {self.mode.value}"


def _instances(schema: SchemaTemplate, mode: Mode, names: Sequence[str], depth: int, registry):
    xs = term_universe(names, depth)
    if mode is Mode.CSI_ONLY:
        return [make_csi(schema, a, registry) for a in xs]
    # y ranges one level deeper so every CSI over the universe is included
    ys = term_universe(names, depth + 1)
    return [make_instance(schema, x, y, registry) for x in xs for y in ys]


def verdict_table(
    model: Model,
    schema: SchemaTemplate | str,
    mode: Mode,
    names: Sequence[str],
    depth: int,
) -> VerdictTable:
    """Evaluate every admissible instance over ``term_universe(names, depth)``.

    In CSI_ONLY mode there is one row per term α (the CSI ``Φ(α, 'α')``); in
    ALL_INSTANCES mode one row per pair with x in the universe and y in the
    universe one quotation level deeper.
    """
    schema = get_schema(schema, model.schemas)
    rows = []
    for i, inst in enumerate(_instances(schema, mode, names, depth, model.schemas)):
        av = attribute(model, inst)
        rows.append(Row(i, inst, av.subject, av.subject_object, av.verdict, av.trace))
    return VerdictTable(schema, mode, tuple(names), depth, tuple(rows))


class ConflictKind(enum.Enum):
    DIRECT = "direct"
    LEIBNIZ = "leibniz"


@dataclass(frozen=True)
class ConflictReport:
    """Opposite verdicts on one object.

    ``canonical`` marks conflicts whose negative witness is a CSI and whose
    positive witness is either a CSI or a true CSI with its x-slot swapped for
    a type-distinct coreferent term.  Everything else the enumeration turns up
    (only possible in ALL_INSTANCES mode) is non-canonical.
    """

    kind: ConflictKind
    subject_object: Referent
    positive: AttributedVerdict
    negative: AttributedVerdict
    canonical: bool

    @property
    def includes_vacuous(self) -> bool:
        return self.positive.verdict.vacuous


def _coreferent_variants(table: VerdictTable, model: Model) -> set[Instance]:
    true_csis = [r for r in table.rows if r.is_csi and r.verdict.value and not r.verdict.vacuous]
    out = set()
    for row in table.rows:
        if row.is_csi:
            continue
        for c in true_csis:
            if row.instance.y == c.instance.y and row.subject != c.subject and row.subject_object == c.subject_object:
                out.add(row.instance)
    return out


def find_conflicts(table: VerdictTable, model: Model, include_vacuous: bool = False) -> list[ConflictReport]:
    """Report each pair of subject terms on one object that get opposite verdicts.

    Same subject term gives a DIRECT conflict; type-distinct coreferent
    subject terms give a LEIBNIZ conflict, whose positive witness is carried
    over to the negative subject through the identity between them.  For each
    (positive term, negative term) pair the preferred witnesses are reported:
    CSIs first, then coreferent variants of true CSIs, non-vacuous before
    vacuous, then table order.
    """
    variants = _coreferent_variants(table, model)

    def rank(row: Row) -> tuple[int, bool, int]:
        if row.is_csi:
            return (0, row.verdict.vacuous, row.index)
        if row.instance in variants:
            return (1, row.verdict.vacuous, row.index)
        return (2, row.verdict.vacuous, row.index)

    positives: dict[Term, list[Row]] = defaultdict(list)
    negatives: dict[Term, list[Row]] = defaultdict(list)
    for row in table.rows:
        if not row.verdict.value:
            negatives[row.subject].append(row)
        elif include_vacuous or not row.verdict.vacuous:
            positives[row.subject].append(row)

    order = {}
    for row in table.rows:
        order.setdefault(row.subject, row.index)

    keyed = []
    for pos_term, neg_term in itertools.product(sorted(positives, key=order.get), sorted(negatives, key=order.get)):
        pos_rows, neg_rows = positives[pos_term], negatives[neg_term]
        if pos_rows[0].subject_object != neg_rows[0].subject_object:
            continue
        pos = min(pos_rows, key=rank)
        neg = min(neg_rows, key=rank)
        positive = pos.attributed()
        if pos_term == neg_term:
            kind = ConflictKind.DIRECT
        else:
            kind = ConflictKind.LEIBNIZ
            positive = leibniz_transfer(model, positive, neg_term)
        canonical = neg.is_csi and rank(pos)[0] <= 1
        report = ConflictReport(kind, pos.subject_object, positive, neg.attributed(), canonical)
        keyed.append(((not canonical, kind is not ConflictKind.LEIBNIZ, order[pos_term], order[neg_term]), report))
    keyed.sort(key=lambda kr: kr[0])
    return [r for _, r in keyed]


@dataclass(frozen=True)
class Certificate:
    schema: str
    mode: Mode
    names: tuple[str, ...]
    depth: int
    instances_checked: int
    include_vacuous: bool

    @property
    def statement(self) -> str:
        return (
            f"no conflicts among {self.instances_checked} instances of {self.schema} over "
            f"names [{', '.join(self.names)}] up to quotation depth {self.depth} "
            f"(mode {self.mode.value}{', vacuous verdicts included' if self.include_vacuous else ''})"
        )


def consistency_certificate(
    model: Model,
    schema: SchemaTemplate | str,
    mode: Mode,
    names: Sequence[str],
    depth: int,
    include_vacuous: bool = False,
) -> Certificate | list[ConflictReport]:
    """A certificate if the bounded table is conflict-free, else the conflicts.

    The certificate only speaks for the stated bound.
    """
    table = verdict_table(model, schema, mode, names, depth)
    conflicts = find_conflicts(table, model, include_vacuous)
    if conflicts:
        return conflicts
    return Certificate(table.schema.id, mode, tuple(names), depth, len(table.rows), include_vacuous)


def characterize_exceptions(
    model: Model,
    schema: SchemaTemplate | str,
    names: Sequence[str],
    depth: int,
) -> list[Term]:
    """Terms α in the universe whose CSI comes out non-vacuously true."""
    table = verdict_table(model, schema, Mode.CSI_ONLY, names, depth)
    return [r.subject for r in table.rows if r.verdict.value and not r.verdict.vacuous]


def expected_exceptions(model: Model, schema: SchemaTemplate | str, names: Sequence[str], depth: int) -> list[Term]:
    """Closed-form counterpart of :func:`characterize_exceptions`.

    XSlot schemas: exactly the self-referring names.  ConstTerm schemas whose
    fixed term is ``'n'``: just ``n``, when n is in the universe.
    """
    schema = get_schema(schema, model.schemas)
    universe = term_universe(names, depth)
    sel = schema.subject
    if isinstance(sel, ConstTerm):
        target = denote(model, sel.term)
        return [t for t in universe if target == TermRef(t)]
    return [t for t in universe if isinstance(t, Atomic) and is_self_referring(model, t.name)]
