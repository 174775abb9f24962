"""Scattered-context derivation steps, bounded enumeration, and trace replay."""

from __future__ import annotations

import re
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .grammar import (
    Form,
    GrammarError,
    ScatteredContextGrammar,
    ScatteredProduction,
    word_from_text,
    word_to_text,
)


class InvalidStepError(ValueError):
    """Derivation step does not apply at its position in a trace."""


@dataclass(frozen=True)
class DerivationStep:
    """One production application: which production, at which positions.

    Positions are 1-based indices into the sentential form, strictly
    increasing, one per left-hand component of the production.
    """

    production_index: int
    positions: tuple[int, ...]


@dataclass(frozen=True)
class DerivationTrace:
    start: Form
    steps: tuple[DerivationStep, ...]


@dataclass(frozen=True)
class EnumerationBounds:
    """Limits for bounded exploration of the derivation relation.

    Forms longer than `max_form_length` are pruned; `max_forms` caps the
    number of distinct forms visited; `max_depth` counts derivation steps and
    defaults to 4 * max_form_length.
    """

    max_form_length: int = 24
    max_depth: int | None = None
    max_forms: int = 1_000_000

    def __post_init__(self):
        if self.max_form_length < 0 or self.max_forms < 1:
            raise ValueError("bounds must be nonnegative, max_forms >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")

    @property
    def effective_max_depth(self) -> int:
        if self.max_depth is not None:
            return self.max_depth
        return 4 * self.max_form_length


@dataclass(frozen=True)
class BoundedLanguage:
    """Terminal words found by bounded enumeration, canonically sorted."""

    words: tuple[Form, ...]
    exhaustive: bool
    visited_forms: int
    pruned_forms: int


@dataclass(frozen=True)
class Member:
    trace: DerivationTrace


@dataclass(frozen=True)
class NotMemberExhaustive:
    pass


@dataclass(frozen=True)
class Unknown:
    pass


MembershipVerdict = Member | NotMemberExhaustive | Unknown


def find_applications(
    form: Form, production: ScatteredProduction, production_index: int = 0
) -> list[DerivationStep]:
    """All strictly increasing position tuples matching the production's lhs.

    Returned in lexicographic position order; empty when there is no match.
    """
    lhs = production.lhs
    n = len(lhs)
    m = len(form)
    if n > m:
        return []
    occ: dict[str, list[int]] = {}
    for sym in set(lhs):
        occ[sym] = [i for i, s in enumerate(form) if s == sym]
        if not occ[sym]:
            return []
    out: list[DerivationStep] = []
    acc = [0] * n

    def rec(i: int, lo: int) -> None:
        if i == n:
            out.append(
                DerivationStep(production_index, tuple(p + 1 for p in acc))
            )
            return
        positions = occ[lhs[i]]
        for k in range(bisect_left(positions, lo), len(positions)):
            p = positions[k]
            if p + (n - i) > m:
                break
            acc[i] = p
            rec(i + 1, p + 1)

    rec(0, 0)
    return out


def apply_step(
    form: Form, production: ScatteredProduction, step: DerivationStep
) -> Form:
    """Rewrite `form` at the step's positions; raises InvalidStepError."""
    pos = step.positions
    if len(pos) != production.width:
        raise InvalidStepError(
            f"step has {len(pos)} positions, production width is "
            f"{production.width}"
        )
    prev = 0
    out: list[str] = []
    for i, p in enumerate(pos):
        if p <= prev:
            raise InvalidStepError(f"positions not strictly increasing at {p}")
        if p > len(form):
            raise InvalidStepError(f"position {p} out of range (form length {len(form)})")
        if form[p - 1] != production.lhs[i]:
            raise InvalidStepError(
                f"position {p} holds {form[p - 1]!r}, production expects "
                f"{production.lhs[i]!r}"
            )
        out.extend(form[prev : p - 1])
        out.extend(production.rhs[i])
        prev = p
    out.extend(form[prev:])
    return tuple(out)


def successors(
    g: ScatteredContextGrammar, form: Form
) -> list[tuple[DerivationStep, Form]]:
    """All one-step derivatives, deduplicated by resulting form.

    Canonical order: (production index, positions lexicographic); the first
    step producing a given form is the one retained.
    """
    seen: set[Form] = set()
    out: list[tuple[DerivationStep, Form]] = []
    for i, p in enumerate(g.productions):
        for step in find_applications(form, p, i):
            nxt = apply_step(form, p, step)
            if nxt not in seen:
                seen.add(nxt)
                out.append((step, nxt))
    return out


class CompiledGrammar:
    """Single-character encoding of a grammar for fast exploration.

    Each symbol maps to one character, so sentential forms become plain
    strings: hashing, deduplication, and subsequence matching then run at
    C speed.  Successor order matches `successors` (production index, then
    positions lexicographic); steps are (production_index, positions) pairs.
    """

    def __init__(self, g: ScatteredContextGrammar):
        self.grammar = g
        symbols = sorted(g.nonterminals | g.terminals)
        self.to_char = {s: chr(0x100 + i) for i, s in enumerate(symbols)}
        self.from_char = {c: s for s, c in self.to_char.items()}
        self.terminal_chars = frozenset(self.to_char[t] for t in g.terminals)
        self.productions = [
            (
                "".join(self.to_char[s] for s in p.lhs),
                ["".join(self.to_char[s] for s in x) for x in p.rhs],
            )
            for p in g.productions
        ]
        self.start = self.to_char[g.start]

    def encode(self, form: Form) -> str:
        return "".join(self.to_char[s] for s in form)

    def decode(self, s: str) -> Form:
        return tuple(self.from_char[c] for c in s)

    def is_terminal_form(self, s: str) -> bool:
        return all(c in self.terminal_chars for c in s)

    def successors(self, s: str) -> list[tuple[tuple[int, tuple[int, ...]], str]]:
        seen: set[str] = set()
        out: list[tuple[tuple[int, tuple[int, ...]], str]] = []
        m = len(s)
        find = s.find
        for pi, (lhs, rhs) in enumerate(self.productions):
            n = len(lhs)
            if n > m:
                continue
            acc: list[int] = []

            def rec(i: int, lo: int) -> None:
                if i == n:
                    parts: list[str] = []
                    prev = 0
                    for k in range(n):
                        p = acc[k]
                        parts.append(s[prev:p])
                        parts.append(rhs[k])
                        prev = p + 1
                    parts.append(s[prev:])
                    nxt = "".join(parts)
                    if nxt not in seen:
                        seen.add(nxt)
                        out.append(
                            ((pi, tuple(q + 1 for q in acc)), nxt)
                        )
                    return
                c = lhs[i]
                limit = m - (n - i)
                p = find(c, lo)
                while 0 <= p <= limit:
                    acc.append(p)
                    rec(i + 1, p + 1)
                    acc.pop()
                    p = find(c, p + 1)

            rec(0, 0)
        return out


@dataclass
class ExplorationResult:
    visited_forms: int = 0
    pruned_forms: int = 0
    completed: bool = False
    stopped_early: bool = False


Successors = Callable[[Form], Iterable[tuple[object, Form]]]
Visitor = Callable[[Form, Optional[object], Optional[Form]], Optional[bool]]


def explore(
    start: Form,
    succ: Successors,
    bounds: EnumerationBounds,
    on_visit: Visitor | None = None,
    parents: dict[Form, tuple[Form, object]] | None = None,
) -> ExplorationResult:
    """Deterministic bounded breadth-first search over a rewrite relation.

    `on_visit(form, step, parent)` is called once per newly discovered form
    (with step and parent None for the start form); returning a truthy value
    stops the search.  `parents`, if supplied, is filled with
    form -> (parent form, step) for trace reconstruction.

    `completed` in the result means the frontier was fully expanded within the
    depth and form budgets; length-pruned forms are still counted in
    `pruned_forms`.
    """
    res = ExplorationResult()
    max_len = bounds.max_form_length
    max_depth = bounds.effective_max_depth
    max_forms = bounds.max_forms

    if len(start) > max_len:
        res.pruned_forms = 1
        res.completed = True
        return res

    visited: set[Form] = {start}
    res.visited_forms = 1
    if on_visit is not None and on_visit(start, None, None):
        res.stopped_early = True
        return res

    queue: deque[tuple[Form, int]] = deque([(start, 0)])
    budget_hit = False
    depth_hit = False
    while queue:
        form, depth = queue.popleft()
        if depth >= max_depth:
            depth_hit = True
            continue
        for step, nxt in succ(form):
            if nxt in visited:
                continue
            if len(nxt) > max_len:
                res.pruned_forms += 1
                continue
            if len(visited) >= max_forms:
                budget_hit = True
                break
            visited.add(nxt)
            if parents is not None:
                parents[nxt] = (form, step)
            if on_visit is not None and on_visit(nxt, step, form):
                res.visited_forms = len(visited)
                res.stopped_early = True
                return res
            queue.append((nxt, depth + 1))
        if budget_hit:
            break

    res.visited_forms = len(visited)
    res.completed = not budget_hit and not depth_hit
    return res


def _is_terminal_form(g: ScatteredContextGrammar, form: Form) -> bool:
    return all(s in g.terminals for s in form)


def _exhaustive(g: ScatteredContextGrammar, res: ExplorationResult) -> bool:
    # For nonerasing grammars every successor is at least as long as its
    # parent, so length-pruned branches cannot re-enter the bounded window.
    return res.completed and (res.pruned_forms == 0 or not g.is_erasing)


def enumerate_language(
    g: ScatteredContextGrammar, bounds: EnumerationBounds
) -> BoundedLanguage:
    """Breadth-first enumeration of terminal words from the start symbol."""
    cg = CompiledGrammar(g)
    words: list[str] = []

    def on_visit(form, step, parent):
        if cg.is_terminal_form(form):
            words.append(form)

    res = explore(cg.start, cg.successors, bounds, on_visit)
    decoded = sorted((cg.decode(w) for w in words), key=lambda w: (len(w), w))
    return BoundedLanguage(
        words=tuple(decoded),
        exhaustive=_exhaustive(g, res),
        visited_forms=res.visited_forms,
        pruned_forms=res.pruned_forms,
    )


def decide_membership(
    g: ScatteredContextGrammar, word: Iterable[str], bounds: EnumerationBounds
) -> MembershipVerdict:
    """Search for a derivation of `word`; verdict carries a replayable trace."""
    word = tuple(word)
    for sym in word:
        if sym not in g.terminals:
            raise GrammarError(f"word symbol {sym!r} is not a declared terminal")

    cg = CompiledGrammar(g)
    target = cg.encode(word)
    parents: dict[str, tuple[str, tuple[int, tuple[int, ...]]]] = {}
    found = False

    def on_visit(form, step, parent):
        nonlocal found
        if form == target:
            found = True
            return True
        return None

    res = explore(cg.start, cg.successors, bounds, on_visit, parents)
    if found:
        steps: list[DerivationStep] = []
        cur = target
        while cur != cg.start:
            parent, (pi, positions) = parents[cur]
            steps.append(DerivationStep(pi, positions))
            cur = parent
        steps.reverse()
        return Member(DerivationTrace((g.start,), tuple(steps)))
    if _exhaustive(g, res) and bounds.max_form_length >= len(word):
        return NotMemberExhaustive()
    return Unknown()


def replay(g: ScatteredContextGrammar, trace: DerivationTrace) -> Form:
    """Re-run a trace, validating every step; returns the final form."""
    form = trace.start
    for i, step in enumerate(trace.steps, start=1):
        if not 0 <= step.production_index < len(g.productions):
            raise InvalidStepError(
                f"step {i}: production index {step.production_index} out of range"
            )
        try:
            form = apply_step(form, g.productions[step.production_index], step)
        except InvalidStepError as e:
            raise InvalidStepError(f"step {i}: {e}") from None
    return form


_STEP_RE = re.compile(r"step\s+(\d+)\s*@((?:\s+\d+)+)\s*$")


def render_trace(trace: DerivationTrace) -> str:
    lines = ["start: " + word_to_text(trace.start)]
    for s in trace.steps:
        lines.append(
            f"step {s.production_index} @ " + " ".join(str(p) for p in s.positions)
        )
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> DerivationTrace:
    start: Form | None = None
    steps: list[DerivationStep] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("start:"):
            if start is not None:
                raise GrammarError(f"line {no}: duplicate start line")
            start = word_from_text(line[len("start:"):])
        else:
            m = _STEP_RE.fullmatch(line)
            if not m:
                raise GrammarError(f"line {no}: malformed trace line: {line!r}")
            positions = tuple(int(p) for p in m.group(2).split())
            steps.append(DerivationStep(int(m.group(1)), positions))
    if start is None:
        raise GrammarError("trace is missing its start line")
    return DerivationTrace(start, tuple(steps))
