"""Scattered context grammars: productions, metrics, and the grammar file format.

A symbol is a plain token string (first character alphabetic, the rest
alphanumeric, underscore, or apostrophe).  A grammar declares which tokens are
nonterminals and which are terminals; the two alphabets must be disjoint, so a
token's kind is determined by the grammar it belongs to.  Sentential forms and
words are tuples of tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

TOKEN_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*")

#: Tuple-of-tokens representation of sentential forms and words.
Form = tuple[str, ...]


class GrammarError(ValueError):
    """Invalid grammar, production, or word."""


class GrammarSyntaxError(GrammarError):
    """Grammar file does not follow the format; carries the offending line."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def is_token(name: str) -> bool:
    return TOKEN_RE.fullmatch(name) is not None


def word_to_text(word: Iterable[str]) -> str:
    """Render a word or sentential form; `@` stands for the empty word."""
    word = tuple(word)
    return " ".join(word) if word else "@"


def word_from_text(text: str) -> Form:
    text = text.strip()
    if text == "@" or text == "":
        return ()
    word = tuple(text.split())
    for tok in word:
        if not is_token(tok):
            raise GrammarError(f"not a valid symbol token: {tok!r}")
    return word


@dataclass(frozen=True)
class ScatteredProduction:
    """Simultaneous rewrite of an ordered tuple of nonterminals.

    `lhs` is a tuple of nonterminal tokens (A1, ..., An); `rhs` holds one
    replacement string per lhs entry, each a tuple of tokens (possibly empty).
    """

    lhs: tuple[str, ...]
    rhs: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(tuple(x) for x in self.rhs))
        if not self.lhs:
            raise GrammarError("production must rewrite at least one nonterminal")
        if len(self.lhs) != len(self.rhs):
            raise GrammarError(
                f"production has {len(self.lhs)} left components "
                f"but {len(self.rhs)} right components"
            )

    @property
    def width(self) -> int:
        return len(self.lhs)

    @property
    def is_erasing(self) -> bool:
        return any(not x for x in self.rhs)

    @property
    def is_context_free(self) -> bool:
        return len(self.lhs) == 1

    def symbols(self) -> set[str]:
        out = set(self.lhs)
        for x in self.rhs:
            out.update(x)
        return out


@dataclass(frozen=True)
class ScatteredContextGrammar:
    nonterminals: frozenset[str]
    terminals: frozenset[str]
    start: str
    productions: tuple[ScatteredProduction, ...]

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "productions", tuple(self.productions))
        for name in self.nonterminals | self.terminals:
            if not is_token(name):
                raise GrammarError(f"not a valid symbol token: {name!r}")
        clash = self.nonterminals & self.terminals
        if clash:
            raise GrammarError(
                f"nonterminals and terminals overlap: {sorted(clash)}"
            )
        if self.start not in self.nonterminals:
            raise GrammarError(
                f"start symbol {self.start!r} is not a declared nonterminal"
            )
        declared = self.nonterminals | self.terminals
        for i, p in enumerate(self.productions):
            for sym in p.lhs:
                if sym not in self.nonterminals:
                    raise GrammarError(
                        f"production {i}: left-hand symbol {sym!r} "
                        "is not a declared nonterminal"
                    )
            for sym in p.symbols() - declared:
                raise GrammarError(
                    f"production {i}: undeclared symbol {sym!r}"
                )

    def kind_of(self, name: str) -> str:
        if name in self.nonterminals:
            return "nonterminal"
        if name in self.terminals:
            return "terminal"
        raise GrammarError(f"undeclared symbol {name!r}")

    @property
    def is_erasing(self) -> bool:
        return any(p.is_erasing for p in self.productions)

    def warnings(self) -> list[str]:
        """Non-fatal findings; currently duplicate productions."""
        seen: dict[ScatteredProduction, int] = {}
        out = []
        for i, p in enumerate(self.productions):
            if p in seen:
                out.append(f"production {i} duplicates production {seen[p]}")
            else:
                seen[p] = i
        return out


@dataclass(frozen=True)
class GrammarMetrics:
    nonterminal_count: int
    terminal_count: int
    production_count: int
    non_cf_production_count: int
    width: int
    is_erasing: bool


def compute_metrics(g: ScatteredContextGrammar) -> GrammarMetrics:
    return GrammarMetrics(
        nonterminal_count=len(g.nonterminals),
        terminal_count=len(g.terminals),
        production_count=len(g.productions),
        non_cf_production_count=sum(1 for p in g.productions if p.width >= 2),
        width=max((p.width for p in g.productions), default=0),
        is_erasing=g.is_erasing,
    )


def _meaningful_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _parse_tokens(no: int, body: str) -> tuple[str, ...]:
    toks = tuple(body.split())
    for tok in toks:
        if not is_token(tok):
            raise GrammarSyntaxError(no, f"not a valid symbol token: {tok!r}")
    return toks


_PROD_RE = re.compile(r"prod\s*\((.*)\)\s*->\s*\((.*)\)\s*$")


def parse_grammar(text: str) -> ScatteredContextGrammar:
    """Parse the `scg` grammar file format.

    Line-oriented, `#` starts a comment.  The first meaningful line is the
    format tag `scg`, followed by `nonterminals:`, `terminals:` and `start:`
    declarations and one `prod (...) -> (...)` line per production.  `@`
    denotes an empty right-hand component.
    """
    lines = list(_meaningful_lines(text))
    if not lines or lines[0][1] != "scg":
        no = lines[0][0] if lines else 1
        raise GrammarSyntaxError(no, "expected format tag 'scg' on the first line")

    nonterminals: tuple[str, ...] | None = None
    terminals: tuple[str, ...] | None = None
    start: str | None = None
    prods: list[tuple[int, ScatteredProduction]] = []

    for no, line in lines[1:]:
        if line.startswith("nonterminals:"):
            nonterminals = _parse_tokens(no, line[len("nonterminals:"):])
        elif line.startswith("terminals:"):
            terminals = _parse_tokens(no, line[len("terminals:"):])
        elif line.startswith("start:"):
            toks = _parse_tokens(no, line[len("start:"):])
            if len(toks) != 1:
                raise GrammarSyntaxError(no, "start: expects exactly one symbol")
            start = toks[0]
        elif line.startswith("prod"):
            m = _PROD_RE.fullmatch(line)
            if not m:
                raise GrammarSyntaxError(no, "malformed production line")
            lhs = []
            for comp in m.group(1).split(","):
                toks = comp.split()
                if not toks or toks == ["@"]:
                    raise GrammarSyntaxError(no, "empty left-hand component")
                if len(toks) != 1:
                    raise GrammarSyntaxError(
                        no, "left-hand components hold exactly one nonterminal"
                    )
                if not is_token(toks[0]):
                    raise GrammarSyntaxError(
                        no, f"not a valid symbol token: {toks[0]!r}"
                    )
                lhs.append(toks[0])
            rhs = []
            for comp in m.group(2).split(","):
                toks = comp.split()
                if toks == ["@"]:
                    rhs.append(())
                else:
                    for tok in toks:
                        if not is_token(tok):
                            raise GrammarSyntaxError(
                                no, f"not a valid symbol token: {tok!r}"
                            )
                    rhs.append(tuple(toks))
            if len(lhs) != len(rhs):
                raise GrammarSyntaxError(
                    no,
                    f"production has {len(lhs)} left components "
                    f"but {len(rhs)} right components",
                )
            prods.append((no, ScatteredProduction(tuple(lhs), tuple(rhs))))
        else:
            raise GrammarSyntaxError(no, f"unrecognized line: {line!r}")

    last = lines[-1][0]
    if nonterminals is None:
        raise GrammarSyntaxError(last, "missing 'nonterminals:' declaration")
    if terminals is None:
        raise GrammarSyntaxError(last, "missing 'terminals:' declaration")
    if start is None:
        raise GrammarSyntaxError(last, "missing 'start:' declaration")

    nt = frozenset(nonterminals)
    t = frozenset(terminals)
    declared = nt | t
    for no, p in prods:
        for sym in p.lhs:
            if sym not in nt:
                raise GrammarSyntaxError(
                    no, f"left-hand symbol {sym!r} is not a declared nonterminal"
                )
        for sym in p.symbols() - declared:
            raise GrammarSyntaxError(no, f"undeclared symbol {sym!r}")

    return ScatteredContextGrammar(
        nonterminals=nt,
        terminals=t,
        start=start,
        productions=tuple(p for _, p in prods),
    )


def render_grammar(g: ScatteredContextGrammar) -> str:
    """Inverse of parse_grammar: parse(render(g)) == g, production order kept."""
    lines = [
        "scg",
        "nonterminals: " + " ".join(sorted(g.nonterminals)),
        "terminals: " + " ".join(sorted(g.terminals)),
        "start: " + g.start,
    ]
    for p in g.productions:
        left = ", ".join(p.lhs)
        right = ", ".join(" ".join(x) if x else "@" for x in p.rhs)
        lines.append(f"prod ({left}) -> ({right})")
    return "\n".join(lines) + "\n"
