"""Shared grammar texts and builders for the test suite."""

import pytest

from scgkit import parse_geffert
from scgkit.engine import apply_step, find_applications

TRIPLES_TEXT = """\
scg
nonterminals: S A B C
terminals: a b c
start: S
prod (S) -> (A B C)
prod (A, B, C) -> (a A, b B, c C)
prod (A, B, C) -> (a, b, c)
"""

# Geffert-normal-form grammars used throughout: the empty-word grammar, a
# unary star, and two that must run the pair-erasure rules to terminate.
GEFFERT_TRIVIAL = "geffert\nterminals: a\nprod S' -> @\n"
GEFFERT_ASTAR = """\
geffert
terminals: a
prod S' -> S' a
prod S' -> @
"""
GEFFERT_AB = """\
geffert
terminals: a
prod S' -> A S' a
prod S' -> S' B
prod S' -> @
"""
GEFFERT_CD = """\
geffert
terminals: a
prod S' -> C S' a
prod S' -> S' D
prod S' -> @
"""
# Larger state spaces for the shape sweeps.
GEFFERT_RICH = """\
geffert
terminals: a b
prod S' -> A S' a
prod S' -> C S' b
prod S' -> S' B
prod S' -> S' D
prod S' -> @
"""
GEFFERT_RICH2 = """\
geffert
terminals: a
prod S' -> A C S' a
prod S' -> A S' B
prod S' -> S' D B
prod S' -> @
"""

GEFFERT_TEXTS = {
    "trivial": GEFFERT_TRIVIAL,
    "astar": GEFFERT_ASTAR,
    "ab": GEFFERT_AB,
    "cd": GEFFERT_CD,
}


@pytest.fixture
def geffert_grammars():
    return {name: parse_geffert(text) for name, text in GEFFERT_TEXTS.items()}


def drive_tower_witness(g):
    """Steer a complete derivation of the counter branch of a tower grammar.

    Productions are applied in the intended control order: open the counter,
    close the first stage immediately (zero extra doubling passes), convert
    the tallies, then run the inflation loop to exhaustion.  Returns the
    final form, the step list, and the forms at each inflation-loop boundary.
    """
    P = g.productions
    form = ("S",)
    steps = []

    def app(pi):
        nonlocal form
        apps = find_applications(form, P[pi], pi)
        if not apps:
            return False
        steps.append(apps[0])
        form = apply_step(form, P[pi], apps[0])
        return True

    def exhaust(pi):
        while app(pi):
            pass

    app(3)
    app(6)
    exhaust(7)
    app(8)
    boundaries = [form]
    while find_applications(form, P[10], 10):
        exhaust(9)
        app(10)
        boundaries.append(form)
    app(11)
    exhaust(12)
    app(13)
    return form, steps, boundaries
