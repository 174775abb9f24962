"""Compaction of a Geffert-normal-form grammar into a three-nonterminal SCG.

The five Geffert nonterminals are folded into {S, A, B} by encoding each of
A, B, C, D as a three-symbol string over {A, B} and each terminal a as the
four-symbol block A a B B.  The output grammar rewrites at most nine
nonterminals per step, independent of the source grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .engine import (
    CompiledGrammar,
    DerivationStep,
    DerivationTrace,
    EnumerationBounds,
    explore,
    replay,
)
from .geffert import (
    ApplyCF,
    AppendTerminal,
    Bilateral,
    Erase,
    EraseAB,
    EraseCD,
    GeffertGrammar,
    GeffertTrace,
    replay_geffert,
    validate_geffert,
)
from .grammar import (
    Form,
    GrammarError,
    ScatteredContextGrammar,
    ScatteredProduction,
    word_to_text,
)

#: Images of the four source nonterminals; terminals a map to (A, a, B, B).
NONTERMINAL_CODES: dict[str, tuple[str, ...]] = {
    "A": ("A", "B", "B"),
    "B": ("B", "B", "A"),
    "C": ("B", "A", "B"),
    "D": ("B", "A", "B"),
}


def encode(symbols: Iterable[str]) -> Form:
    """Homomorphic encoding into {A, B} plus terminals."""
    out: list[str] = []
    for sym in symbols:
        if sym == "S'":
            raise GrammarError("S' is outside the encoding domain")
        code = NONTERMINAL_CODES.get(sym)
        if code is not None:
            out.extend(code)
        else:
            out.extend(("A", sym, "B", "B"))
    return tuple(out)


class SimulationError(ValueError):
    """Source trace cannot be simulated in the compacted grammar."""


@dataclass(frozen=True)
class TransformOutput:
    """Compacted grammar plus a provenance tag per production.

    Provenance tags: `init`, `cf-a(<rule>)`, `cf-v(<rule>)`, `erase-ab`,
    `erase-cd`, `unpack-keep`, `unpack-drop`, `final`.
    """

    grammar: ScatteredContextGrammar
    provenance: tuple[str, ...]
    init_index: int
    cf_index: dict[int, int]  # source rule index -> production index
    erase_ab_index: int
    erase_cd_index: int
    unpack_keep_index: int
    unpack_drop_index: int
    final_index: int


def transform(g: GeffertGrammar) -> TransformOutput:
    """Build the three-nonterminal grammar simulating `g`.

    Production order: the initial marker layout, one production per
    append-terminal rule, one per bilateral rule, the two pair-erasure
    simulators, the two unpacking productions, and the final cleanup.
    """
    report = validate_geffert(g)
    if not report.ok:
        raise GrammarError("invalid source grammar: " + "; ".join(report.errors))

    S, A, B = "S", "A", "B"
    three_s = (S, S, S)
    lam = ()
    productions: list[ScatteredProduction] = []
    provenance: list[str] = []

    def emit(lhs, rhs, tag) -> int:
        productions.append(ScatteredProduction(tuple(lhs), tuple(rhs)))
        provenance.append(tag)
        return len(productions) - 1

    init_index = emit(
        (S,), ((S, B, B, A, S, A, B, B, S, A),), "init"
    )
    cf_index: dict[int, int] = {}
    for ri, rule in enumerate(g.rules):
        if isinstance(rule, AppendTerminal):
            middle = encode(rule.u) + (S,) + encode((rule.a,))
            cf_index[ri] = emit(three_s, ((S,), middle, (S,)), f"cf-a({ri})")
    for ri, rule in enumerate(g.rules):
        if isinstance(rule, Bilateral):
            middle = encode(rule.u) + (S,) + encode(rule.v)
            cf_index[ri] = emit(three_s, ((S,), middle, (S,)), f"cf-v({ri})")

    erase_ab_index = emit(
        (S, A, B, B, S, B, B, A, S),
        (lam, lam, lam, (S,), (S,), (S,), lam, lam, lam),
        "erase-ab",
    )
    erase_cd_index = emit(
        (S, B, A, B, S, B, A, B, S),
        (lam, lam, lam, (S,), (S,), (S,), lam, lam, lam),
        "erase-cd",
    )
    unpack_keep_index = emit(
        (S, B, B, A, S, A, B, B, S),
        (lam, lam, lam, (S, B, B, A), (S,), (S,), lam, lam, lam),
        "unpack-keep",
    )
    unpack_drop_index = emit(
        (S, B, B, A, S, A, B, B, S),
        (lam, lam, lam, (S,), (S,), (S,), lam, lam, lam),
        "unpack-drop",
    )
    final_index = emit((S, S, S, A), (lam, lam, lam, lam), "final")

    grammar = ScatteredContextGrammar(
        nonterminals=frozenset({S, A, B}),
        terminals=g.terminals,
        start=S,
        productions=tuple(productions),
    )
    return TransformOutput(
        grammar=grammar,
        provenance=tuple(provenance),
        init_index=init_index,
        cf_index=cf_index,
        erase_ab_index=erase_ab_index,
        erase_cd_index=erase_cd_index,
        unpack_keep_index=unpack_keep_index,
        unpack_drop_index=unpack_drop_index,
        final_index=final_index,
    )


def render_provenance(out: TransformOutput) -> str:
    return "\n".join(f"{i}: {tag}" for i, tag in enumerate(out.provenance)) + "\n"


def detect_transform_output(g: ScatteredContextGrammar) -> TransformOutput:
    """Recover the provenance structure of a compacted grammar from its shape.

    Used when only the grammar file is available (e.g. the CLI invariant
    checker); raises GrammarError if the grammar does not have the expected
    fixed productions.
    """
    S, A, B = "S", "A", "B"
    if g.nonterminals != frozenset({S, A, B}) or g.start != S:
        raise GrammarError("grammar does not use nonterminals {S, A, B} with start S")

    def find(lhs, rhs) -> int:
        target = ScatteredProduction(lhs, rhs)
        for i, p in enumerate(g.productions):
            if p == target:
                return i
        raise GrammarError(f"missing fixed production ({', '.join(lhs)}) -> ...")

    lam = ()
    three = ((S,) * 3)
    init_index = find((S,), ((S, B, B, A, S, A, B, B, S, A),))
    erase_ab_index = find(
        (S, A, B, B, S, B, B, A, S),
        (lam, lam, lam, (S,), (S,), (S,), lam, lam, lam),
    )
    erase_cd_index = find(
        (S, B, A, B, S, B, A, B, S),
        (lam, lam, lam, (S,), (S,), (S,), lam, lam, lam),
    )
    unpack_keep_index = find(
        (S, B, B, A, S, A, B, B, S),
        (lam, lam, lam, (S, B, B, A), (S,), (S,), lam, lam, lam),
    )
    unpack_drop_index = find(
        (S, B, B, A, S, A, B, B, S),
        (lam, lam, lam, (S,), (S,), (S,), lam, lam, lam),
    )
    final_index = find((S, S, S, A), (lam, lam, lam, lam))
    fixed = {
        init_index: "init",
        erase_ab_index: "erase-ab",
        erase_cd_index: "erase-cd",
        unpack_keep_index: "unpack-keep",
        unpack_drop_index: "unpack-drop",
        final_index: "final",
    }
    provenance = []
    for i, p in enumerate(g.productions):
        if i in fixed:
            provenance.append(fixed[i])
        elif p.lhs == three:
            provenance.append(f"cf({i})")
        else:
            raise GrammarError(f"production {i} does not match any expected shape")
    return TransformOutput(
        grammar=g,
        provenance=tuple(provenance),
        init_index=init_index,
        cf_index={},
        erase_ab_index=erase_ab_index,
        erase_cd_index=erase_cd_index,
        unpack_keep_index=unpack_keep_index,
        unpack_drop_index=unpack_drop_index,
        final_index=final_index,
    )


@dataclass(frozen=True)
class CountingState:
    """Application counts of the init and final productions along a trace."""

    init_count: int
    final_count: int


def check_counting(form: Form, state: CountingState) -> bool:
    """Symbol-count equations every reachable form must satisfy.

    With 2k occurrences of B, the form must hold exactly k + i - j symbols A
    and 1 + 2i - 3j symbols S, where i and j are the init/final application
    counts.  An odd number of B's is itself a violation.
    """
    b = form.count("B")
    if b % 2:
        return False
    k = b // 2
    i, j = state.init_count, state.final_count
    return (
        form.count("A") == k + i - j
        and form.count("S") == 1 + 2 * i - 3 * j
    )


@dataclass
class CountingSweepResult:
    visited_forms: int
    pruned_forms: int
    completed: bool
    violations: list[tuple[Form, CountingState]]
    words: list[Form]


def sweep_counting(
    out: TransformOutput,
    bounds: EnumerationBounds,
    max_violations: int = 10,
) -> CountingSweepResult:
    """Explore the compacted grammar, checking the counting equations.

    Each discovered form inherits its (init, final) application counts from
    the step that first reached it; terminal words encountered on the way are
    collected, canonically sorted.
    """
    g = out.grammar
    cg = CompiledGrammar(g)
    ca, cb, cs = cg.to_char["A"], cg.to_char["B"], cg.to_char["S"]
    counts: dict[str, tuple[int, int]] = {}
    violations: list[tuple[Form, CountingState]] = []
    words: list[str] = []

    def on_visit(form, step, parent):
        if parent is None:
            i = j = 0
        else:
            i, j = counts[parent]
            pi = step[0]
            if pi == out.init_index:
                i += 1
            elif pi == out.final_index:
                j += 1
        counts[form] = (i, j)
        b = form.count(cb)
        ok = (
            b % 2 == 0
            and form.count(ca) == b // 2 + i - j
            and form.count(cs) == 1 + 2 * i - 3 * j
        )
        if not ok:
            violations.append((cg.decode(form), CountingState(i, j)))
            if len(violations) >= max_violations:
                return True
        if cg.is_terminal_form(form):
            words.append(form)
        return None

    res = explore(cg.start, cg.successors, bounds, on_visit)
    decoded = sorted((cg.decode(w) for w in words), key=lambda w: (len(w), w))
    return CountingSweepResult(
        visited_forms=res.visited_forms,
        pruned_forms=res.pruned_forms,
        completed=res.completed,
        violations=violations,
        words=decoded,
    )


# Units making up the region right of the middle S during a simulation:
# a still-encoded source symbol (3 wide), an encoded terminal block (4 wide),
# or the end marker laid down by the init production (3 wide).
_END = ("end",)


def _unit_width(unit) -> int:
    return 4 if unit[0] == "block" else 3


def simulate(g: GeffertGrammar, trace: GeffertTrace) -> DerivationTrace:
    """Replay a source derivation of a terminal word in the compacted grammar.

    The produced trace applies the init production once, one production per
    source context-free step in source order, the unpacking productions
    right-to-left over the encoded terminals, one pair-erasure simulator per
    source erasure in reverse source order, and the final cleanup once.
    """
    word = replay_geffert(g, trace)
    if any(s not in g.terminals for s in word):
        raise SimulationError(
            f"trace ends in {word_to_text(word)!r}, not a terminal word"
        )
    out = transform(g)

    cf_steps = [s for s in trace.steps if isinstance(s, ApplyCF)]
    erasures = [s for s in trace.steps if not isinstance(s, ApplyCF)]

    steps: list[DerivationStep] = [DerivationStep(out.init_index, (1,))]
    u_units: list[str] = []  # encoded source symbols left of the middle S
    v_units: list[tuple] = [_END]  # units right of the middle S, left to right
    w: list[str] = []  # unpacked terminals

    def v_width() -> int:
        return sum(_unit_width(u) for u in v_units)

    # Context-free phase: the marker is present, the three S's are matched.
    for s in cf_steps:
        rule = g.rules[s.rule_index]
        if isinstance(rule, Erase):
            continue
        s_mid = 4 + 3 * len(u_units) + 1
        s3 = s_mid + v_width() + 1
        steps.append(DerivationStep(out.cf_index[s.rule_index], (1, s_mid, s3)))
        u_units.extend(rule.u)
        if isinstance(rule, AppendTerminal):
            v_units.insert(0, ("block", rule.a))
        else:
            v_units[:0] = [("code", sym) for sym in rule.v]

    # Unpacking phase: consume the trailing blocks and the end marker
    # right-to-left; the last application also drops the marker.
    n_codes = sum(1 for u in v_units if u[0] == "code")
    if any(u[0] == "code" for u in v_units[n_codes:]):
        raise SimulationError(
            "source trace interleaves terminal and context insertions; "
            "no such derivation reaches a terminal word"
        )
    n_unpack = len(v_units) - n_codes
    for t in range(n_unpack):
        unit = v_units[-1]
        prod = (
            out.unpack_drop_index if t == n_unpack - 1 else out.unpack_keep_index
        )
        s_mid = 4 + 3 * len(u_units) + 1
        vw = v_width()
        s3 = s_mid + vw + 1
        a_pos = s_mid + vw - _unit_width(unit) + 1
        if unit[0] == "end":
            triple = (a_pos, a_pos + 1, a_pos + 2)
        else:
            triple = (a_pos, a_pos + 2, a_pos + 3)  # skip the terminal
        steps.append(DerivationStep(prod, (1, 2, 3, 4, s_mid) + triple + (s3,)))
        v_units.pop()
        if unit[0] == "block":
            w.insert(0, unit[1])

    # Erasure phase, reverse source order: each application consumes the
    # leading encoded symbol and the trailing one.
    for e in reversed(erasures):
        if isinstance(e, EraseAB):
            prod, want_u, want_v = out.erase_ab_index, "A", "B"
        else:
            prod, want_u, want_v = out.erase_cd_index, "C", "D"
        if (
            not u_units
            or u_units[0] != want_u
            or not v_units
            or v_units[-1] != ("code", want_v)
        ):
            raise SimulationError("erasure sequence does not match the encoded form")
        s_mid = 1 + 3 * len(u_units) + 1
        vw = v_width()
        q = s_mid + vw - 2
        steps.append(
            DerivationStep(prod, (1, 2, 3, 4, s_mid, q, q + 1, q + 2, s_mid + vw + 1))
        )
        u_units.pop(0)
        v_units.pop()

    if u_units or v_units:
        raise SimulationError("encoded symbols left over after the erasure phase")

    steps.append(DerivationStep(out.final_index, (1, 2, 3, 3 + len(w) + 1)))

    result = DerivationTrace(("S",), tuple(steps))
    final = replay(out.grammar, result)
    if final != word:
        raise SimulationError(
            f"simulated trace replays to {word_to_text(final)!r}, "
            f"expected {word_to_text(word)!r}"
        )
    return result
