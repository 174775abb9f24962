"""Scattered context grammar workbench."""

from .grammar import (
    GrammarError,
    GrammarMetrics,
    GrammarSyntaxError,
    ScatteredContextGrammar,
    ScatteredProduction,
    compute_metrics,
    parse_grammar,
    render_grammar,
    word_from_text,
    word_to_text,
)
from .engine import (
    BoundedLanguage,
    DerivationStep,
    DerivationTrace,
    EnumerationBounds,
    InvalidStepError,
    Member,
    NotMemberExhaustive,
    Unknown,
    apply_step,
    decide_membership,
    enumerate_language,
    find_applications,
    parse_trace,
    render_trace,
    replay,
    successors,
)
from .geffert import (
    AppendTerminal,
    Bilateral,
    Erase,
    GeffertGrammar,
    GeffertTrace,
    enumerate_geffert,
    find_geffert_trace,
    geffert_successors,
    parse_geffert,
    render_geffert,
    replay_geffert,
    validate_geffert,
)
from .transform import (
    CountingState,
    SimulationError,
    TransformOutput,
    check_counting,
    encode,
    simulate,
    sweep_counting,
    transform,
)
from .showcase import (
    ShowcaseParams,
    tower,
    tower_expected_lengths,
    triples,
)

__all__ = [name for name in dir() if not name.startswith("_")]
