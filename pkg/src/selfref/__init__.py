"""Mechanized self-reference paradoxes over a quotational object language."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DuplicateStipulation,
    InvalidIdentifier,
    NotAQuotation,
    NotCoreferent,
    ParseError,
    SelfRefError,
    UnknownSchema,
    UnstipulatedName,
)
from .syntax import (  # noqa: E402
    LAGADONIAN,
    LAPUTAN,
    Atomic,
    ConstTerm,
    Instance,
    Quote,
    SchemaTemplate,
    XSlot,
    first_term,
    is_csi,
    make_csi,
    make_instance,
    parse_term,
    quote_term,
    render_instance,
    render_term,
    term_universe,
    unquote_term,
)
from .naming import (  # noqa: E402
    Opaque,
    Policy,
    TermRef,
    build_model,
    check_policy,
    coreferent,
    denote,
    detect_cycles,
    dq_identities,
    is_self_referring,
)
from .evaluator import (  # noqa: E402
    OPEN,
    DeicticValue,
    Verdict,
    evaluate_deictic,
    evaluate_instance,
    leibniz_transfer,
    resolve_description,
)
from .analyzer import (  # noqa: E402
    ConflictKind,
    Mode,
    characterize_exceptions,
    consistency_certificate,
    find_conflicts,
    verdict_table,
)
