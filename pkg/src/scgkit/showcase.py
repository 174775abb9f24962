"""Concrete nonerasing grammars with closed-form language oracles.

`triples` generates {a^n b^n c^n : n >= 1} with three productions.
`tower` generates {a^(l^(k^n)) : n >= 0} for parameters k, l >= 2 with a
fixed set of twelve nonterminals and fourteen productions, independent of the
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import CompiledGrammar, EnumerationBounds, explore
from .grammar import Form, ScatteredContextGrammar, ScatteredProduction

#: Largest materialized right-hand side a^(l^(k*k)); keeps grammars in memory.
MAX_MATERIALIZED = 4096


def triples() -> ScatteredContextGrammar:
    """Triple-counting grammar for {a^n b^n c^n : n >= 1}; nonerasing."""
    return ScatteredContextGrammar(
        nonterminals={"S", "A", "B", "C"},
        terminals={"a", "b", "c"},
        start="S",
        productions=(
            ScatteredProduction(("S",), (("A", "B", "C"),)),
            ScatteredProduction(
                ("A", "B", "C"), (("a", "A"), ("b", "B"), ("c", "C"))
            ),
            ScatteredProduction(("A", "B", "C"), (("a",), ("b",), ("c",))),
        ),
    )


@dataclass(frozen=True)
class ShowcaseParams:
    k: int
    l: int

    def __post_init__(self):
        if self.k < 2 or self.l < 2:
            raise ValueError("parameters k and l must be at least 2")
        if self.l ** (self.k**2) > MAX_MATERIALIZED:
            raise ValueError(
                f"l**(k*k) = {self.l ** (self.k ** 2)} exceeds the "
                f"materialization cap {MAX_MATERIALIZED}"
            )


def _rep(sym: str, n: int) -> tuple[str, ...]:
    return (sym,) * n


def tower(p: ShowcaseParams) -> ScatteredContextGrammar:
    """Nonerasing grammar for {a^(l^(k^n)) : n >= 0}.

    The first three productions emit the n = 0, 1, 2 words directly.  The
    fourth opens a two-stage counter: the first stage (X/Y active) builds up
    k^n tally symbols, the second (X3 active) inflates them into a's.
    """
    k, l = p.k, p.l
    a = "a"
    prods = (
        # direct words for small n
        ScatteredProduction(("S",), (_rep(a, l),)),
        ScatteredProduction(("S",), (_rep(a, l**k),)),
        ScatteredProduction(("S",), (_rep(a, l ** (k**2)),)),
        # open the counter
        ScatteredProduction(
            ("S",),
            (
                ("A''",)
                + _rep("A", l - 1)
                + ("X2",)
                + _rep("B", k**2 - 3)
                + ("A'",)
                + _rep("C", k**2 - 1)
                + ("X", "Y"),
            ),
        ),
        # first stage: exponentiate the tally
        ScatteredProduction(
            ("A'", "C", "X", "Y"),
            (_rep("B", k - 1), ("A'",), ("X",), _rep("C", k) + ("Y",)),
        ),
        ScatteredProduction(
            ("A'", "X", "Y"),
            (_rep("B", k - 1), ("A'",), _rep("C", k - 1) + ("X", "Y")),
        ),
        ScatteredProduction(("A'", "X", "Y"), (("Z",), ("Z",), ("Y",))),
        ScatteredProduction(
            ("Z", "C", "Z", "Y"), (("Z",), _rep("B", k - 1), ("Z",), ("Y",))
        ),
        ScatteredProduction(
            ("Z", "Z", "Y"), (("B",), _rep("B", k - 1), ("X3",))
        ),
        # second stage: inflate tallies into a's
        ScatteredProduction(
            ("A''", "A", "X2", "X3"),
            (_rep(a, l - 1), ("A''",), ("X2",) + _rep("A", l), ("X3",)),
        ),
        ScatteredProduction(
            ("A''", "X2", "B", "X3"),
            (_rep(a, l - 1), ("A''",), _rep("A", l - 1) + ("X2",), ("X3",)),
        ),
        ScatteredProduction(("A''", "X2", "X3"), (("Z'",), ("Z'",), ("X3",))),
        ScatteredProduction(
            ("Z'", "A", "Z'", "X3"),
            (("Z'",), _rep(a, l - 1), ("Z'",), ("X3",)),
        ),
        ScatteredProduction(
            ("Z'", "Z'", "X3"), ((a,), _rep(a, l - 1), _rep(a, l - 1))
        ),
    )
    return ScatteredContextGrammar(
        nonterminals={
            "S", "A", "A'", "A''", "B", "C", "X", "X2", "X3", "Y", "Z", "Z'",
        },
        terminals={a},
        start="S",
        productions=prods,
    )


def tower_expected_lengths(p: ShowcaseParams, max_len: int) -> set[int]:
    """Exact word lengths l^(k^n) up to max_len; the enumeration oracle."""
    out: set[int] = set()
    exp = 1  # k^n
    while True:
        length = p.l**exp
        if length > max_len:
            break
        out.add(length)
        exp *= p.k
    return out


def marker_violation(form: Form) -> str | None:
    """Stage markers must be exclusive: at most one of Y/X3, at most one X2."""
    if form.count("Y") + form.count("X3") > 1:
        return "more than one stage marker (Y/X3)"
    if form.count("X2") > 1:
        return "more than one X2"
    return None


def sweep_markers(
    g: ScatteredContextGrammar,
    bounds: EnumerationBounds,
    max_violations: int = 10,
) -> tuple[int, list[tuple[Form, str]]]:
    """Check marker exclusivity on every reachable form; returns (visited, violations)."""
    cg = CompiledGrammar(g)
    cy, cx3, cx2 = cg.to_char["Y"], cg.to_char["X3"], cg.to_char["X2"]
    violations: list[tuple[Form, str]] = []

    def on_visit(form, step, parent):
        if form.count(cy) + form.count(cx3) > 1:
            msg = "more than one stage marker (Y/X3)"
        elif form.count(cx2) > 1:
            msg = "more than one X2"
        else:
            return None
        violations.append((cg.decode(form), msg))
        if len(violations) >= max_violations:
            return True
        return None

    res = explore(cg.start, cg.successors, bounds, on_visit)
    return res.visited_forms, violations
