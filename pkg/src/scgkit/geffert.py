"""Geffert-normal-form grammars and their adjacency-aware derivation stepper.

These grammars use the fixed nonterminals S', A, B, C, D.  Their context-free
rules rewrite S' only; the two implicit rules AB -> lambda and CD -> lambda
erase *adjacent* pairs, which scattered matching cannot express, so this
module owns its own successor relation instead of reusing the SCG engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .engine import EnumerationBounds, BoundedLanguage, ExplorationResult, explore
from .grammar import Form, GrammarError, GrammarSyntaxError, is_token, word_to_text

START = "S'"
FIXED_NONTERMINALS = frozenset({START, "A", "B", "C", "D"})


@dataclass(frozen=True)
class AppendTerminal:
    """Rule S' -> u S' a with u over {A,C} and a a terminal."""

    u: tuple[str, ...]
    a: str

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))

    def replacement(self) -> Form:
        return self.u + (START, self.a)


@dataclass(frozen=True)
class Bilateral:
    """Rule S' -> u S' v with u over {A,C} and v over {B,D}."""

    u: tuple[str, ...]
    v: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))

    def replacement(self) -> Form:
        return self.u + (START,) + self.v


@dataclass(frozen=True)
class Erase:
    """Rule S' -> lambda."""

    def replacement(self) -> Form:
        return ()


GeffertRule = Union[AppendTerminal, Bilateral, Erase]


@dataclass(frozen=True)
class GeffertGrammar:
    """Terminal alphabet plus tagged context-free rules.

    The erasure rules AB -> lambda and CD -> lambda are always present and not
    listed.  Construction is permissive; use validate_geffert for a report.
    """

    terminals: frozenset[str]
    rules: tuple[GeffertRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "rules", tuple(self.rules))


@dataclass(frozen=True)
class ApplyCF:
    rule_index: int
    pos: int  # 1-based position of the rewritten S'


@dataclass(frozen=True)
class EraseAB:
    pos: int  # 1-based position of the A in the adjacent AB pair


@dataclass(frozen=True)
class EraseCD:
    pos: int


GeffertStep = Union[ApplyCF, EraseAB, EraseCD]


@dataclass(frozen=True)
class GeffertTrace:
    start: Form
    steps: tuple[GeffertStep, ...]


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_geffert(g: GeffertGrammar) -> ValidationReport:
    """Check every rule against its tagged shape; never raises."""
    errors: list[str] = []
    warnings: list[str] = []
    for t in sorted(g.terminals):
        if not is_token(t):
            errors.append(f"not a valid terminal token: {t!r}")
        elif t in FIXED_NONTERMINALS or t in {"S"}:
            # S is reserved too: it is the start symbol of the compacted
            # three-nonterminal grammar built from this one.
            errors.append(f"terminal {t!r} clashes with a reserved nonterminal")
    for i, rule in enumerate(g.rules):
        if isinstance(rule, AppendTerminal):
            bad = [s for s in rule.u if s not in ("A", "C")]
            if bad:
                errors.append(f"rule {i}: left context {bad} not over {{A,C}}")
            if rule.a not in g.terminals:
                errors.append(f"rule {i}: {rule.a!r} is not a declared terminal")
        elif isinstance(rule, Bilateral):
            bad = [s for s in rule.u if s not in ("A", "C")]
            if bad:
                errors.append(f"rule {i}: left context {bad} not over {{A,C}}")
            bad = [s for s in rule.v if s not in ("B", "D")]
            if bad:
                errors.append(f"rule {i}: right context {bad} not over {{B,D}}")
        elif not isinstance(rule, Erase):
            errors.append(f"rule {i}: unknown rule kind {type(rule).__name__}")
    if not any(isinstance(r, Erase) for r in g.rules):
        warnings.append(
            "no S' -> @ rule: derivations cannot terminate (S' is never removed)"
        )
    return ValidationReport(tuple(errors), tuple(warnings))


def geffert_successors(
    g: GeffertGrammar, form: Form
) -> list[tuple[GeffertStep, Form]]:
    """All one-step derivatives, deduplicated by resulting form.

    Canonical order: context-free rules by (rule index, position), then
    AB-erasures by position, then CD-erasures by position.
    """
    seen: set[Form] = set()
    out: list[tuple[GeffertStep, Form]] = []

    def add(step: GeffertStep, nxt: Form) -> None:
        if nxt not in seen:
            seen.add(nxt)
            out.append((step, nxt))

    sprime = [i for i, s in enumerate(form) if s == START]
    for ri, rule in enumerate(g.rules):
        repl = rule.replacement()
        for i in sprime:
            add(ApplyCF(ri, i + 1), form[:i] + repl + form[i + 1 :])
    for i in range(len(form) - 1):
        if form[i] == "A" and form[i + 1] == "B":
            add(EraseAB(i + 1), form[:i] + form[i + 2 :])
    for i in range(len(form) - 1):
        if form[i] == "C" and form[i + 1] == "D":
            add(EraseCD(i + 1), form[:i] + form[i + 2 :])
    return out


def _is_terminal_form(g: GeffertGrammar, form: Form) -> bool:
    return all(s in g.terminals for s in form)


def enumerate_geffert(
    g: GeffertGrammar, bounds: EnumerationBounds
) -> BoundedLanguage:
    """Bounded breadth-first enumeration of the generated terminal words."""
    words: list[Form] = []

    def on_visit(form, step, parent):
        if _is_terminal_form(g, form):
            words.append(form)

    res = explore((START,), lambda f: geffert_successors(g, f), bounds, on_visit)
    words.sort(key=lambda w: (len(w), w))
    # Erasure rules make every Geffert grammar erasing, so any pruning
    # forfeits the exhaustiveness claim.
    exhaustive = res.completed and res.pruned_forms == 0
    return BoundedLanguage(
        tuple(words), exhaustive, res.visited_forms, res.pruned_forms
    )


def find_geffert_trace(
    g: GeffertGrammar, word: Iterable[str], bounds: EnumerationBounds
) -> Optional[GeffertTrace]:
    """First derivation of `word` in canonical search order, or None."""
    word = tuple(word)
    for sym in word:
        if sym not in g.terminals:
            raise GrammarError(f"word symbol {sym!r} is not a declared terminal")
    start = (START,)
    parents: dict[Form, tuple[Form, GeffertStep]] = {}
    found = False

    def on_visit(form, step, parent):
        nonlocal found
        if form == word:
            found = True
            return True
        return None

    explore(start, lambda f: geffert_successors(g, f), bounds, on_visit, parents)
    if not found:
        return None
    steps: list[GeffertStep] = []
    cur = word
    while cur != start:
        parent, step = parents[cur]
        steps.append(step)
        cur = parent
    steps.reverse()
    return GeffertTrace(start, tuple(steps))


class InvalidGeffertStepError(ValueError):
    pass


def apply_geffert_step(g: GeffertGrammar, form: Form, step: GeffertStep) -> Form:
    if isinstance(step, ApplyCF):
        if not 0 <= step.rule_index < len(g.rules):
            raise InvalidGeffertStepError(
                f"rule index {step.rule_index} out of range"
            )
        i = step.pos - 1
        if not (0 <= i < len(form)) or form[i] != START:
            raise InvalidGeffertStepError(f"no S' at position {step.pos}")
        return form[:i] + g.rules[step.rule_index].replacement() + form[i + 1 :]
    pair = ("A", "B") if isinstance(step, EraseAB) else ("C", "D")
    i = step.pos - 1
    if not (0 <= i < len(form) - 1) or form[i : i + 2] != pair:
        raise InvalidGeffertStepError(
            f"no adjacent {''.join(pair)} at position {step.pos}"
        )
    return form[:i] + form[i + 2 :]


def replay_geffert(g: GeffertGrammar, trace: GeffertTrace) -> Form:
    form = trace.start
    for i, step in enumerate(trace.steps, start=1):
        try:
            form = apply_geffert_step(g, form, step)
        except InvalidGeffertStepError as e:
            raise InvalidGeffertStepError(f"step {i}: {e}") from None
    return form


def shape_violation(form: Form, terminals: frozenset[str]) -> Optional[str]:
    """Check that the nonterminal projection matches {A,C}* (S'|) {B,D}*."""
    projection = [s for s in form if s not in terminals]
    sprime = [i for i, s in enumerate(projection) if s == START]
    if len(sprime) > 1:
        return "more than one S'"
    if sprime:
        cut = sprime[0]
        left, right = projection[:cut], projection[cut + 1 :]
    else:
        first_bd = next(
            (i for i, s in enumerate(projection) if s in ("B", "D")),
            len(projection),
        )
        left, right = projection[:first_bd], projection[first_bd:]
    if any(s not in ("A", "C") for s in left):
        return "symbol outside {A,C} left of S'"
    if any(s not in ("B", "D") for s in right):
        return "symbol outside {B,D} right of S'"
    return None


@dataclass
class ShapeSweepResult:
    visited_forms: int
    violations: list[tuple[Form, str]]


def sweep_shape(
    g: GeffertGrammar, bounds: EnumerationBounds, max_violations: int = 10
) -> ShapeSweepResult:
    """Assert the nonterminal-projection shape on every reachable form."""
    violations: list[tuple[Form, str]] = []

    def on_visit(form, step, parent):
        msg = shape_violation(form, g.terminals)
        if msg is not None:
            violations.append((form, msg))
            if len(violations) >= max_violations:
                return True
        return None

    res = explore((START,), lambda f: geffert_successors(g, f), bounds, on_visit)
    return ShapeSweepResult(res.visited_forms, violations)


_RULE_RE = re.compile(r"prod\s+S'\s*->\s*(.*)$")


def parse_geffert(text: str) -> GeffertGrammar:
    """Parse the `geffert` file format.

    First meaningful line is the tag `geffert`, then `terminals:`, then one
    `prod S' -> ...` line per context-free rule; `@` is the empty right-hand
    side.  The nonterminals S', A, B, C, D are implicit.
    """
    lines = [
        (no, raw.split("#", 1)[0].strip())
        for no, raw in enumerate(text.splitlines(), start=1)
    ]
    lines = [(no, line) for no, line in lines if line]
    if not lines or lines[0][1] != "geffert":
        no = lines[0][0] if lines else 1
        raise GrammarSyntaxError(no, "expected format tag 'geffert' on the first line")

    terminals: frozenset[str] | None = None
    rules: list[GeffertRule] = []
    for no, line in lines[1:]:
        if line.startswith("terminals:"):
            toks = line[len("terminals:"):].split()
            for tok in toks:
                if not is_token(tok):
                    raise GrammarSyntaxError(no, f"not a valid terminal token: {tok!r}")
            terminals = frozenset(toks)
        elif line.startswith("prod"):
            m = _RULE_RE.fullmatch(line)
            if not m:
                raise GrammarSyntaxError(no, "malformed rule line")
            if terminals is None:
                raise GrammarSyntaxError(no, "terminals must be declared before rules")
            rules.append(_classify_rule(no, m.group(1).split(), terminals))
        else:
            raise GrammarSyntaxError(no, f"unrecognized line: {line!r}")

    if terminals is None:
        raise GrammarSyntaxError(lines[-1][0], "missing 'terminals:' declaration")
    g = GeffertGrammar(terminals, tuple(rules))
    report = validate_geffert(g)
    if not report.ok:
        raise GrammarError("; ".join(report.errors))
    return g


def _classify_rule(
    no: int, toks: list[str], terminals: frozenset[str]
) -> GeffertRule:
    if toks == ["@"]:
        return Erase()
    sprime = [i for i, t in enumerate(toks) if t == START]
    if len(sprime) != 1:
        raise GrammarSyntaxError(no, "rule body must contain exactly one S' (or be @)")
    cut = sprime[0]
    u = tuple(toks[:cut])
    tail = toks[cut + 1 :]
    if len(tail) == 1 and tail[0] in terminals:
        return AppendTerminal(u, tail[0])
    if all(t in ("B", "D") for t in tail):
        return Bilateral(u, tuple(tail))
    raise GrammarSyntaxError(
        no, "rule tail must be a single terminal or a string over {B,D}"
    )


def render_geffert(g: GeffertGrammar) -> str:
    lines = ["geffert", "terminals: " + " ".join(sorted(g.terminals))]
    for rule in g.rules:
        body = rule.replacement()
        lines.append("prod S' -> " + word_to_text(body))
    return "\n".join(lines) + "\n"
