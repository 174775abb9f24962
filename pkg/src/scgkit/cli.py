"""Command-line front end: metrics, enumeration, membership, transformation,
differential comparison, bundled showcase grammars, and invariant sweeps.

Exit codes: 0 success (or `equal`), 1 semantic mismatch or invariant
violation, 2 usage, parse, or validation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import engine, geffert as gf, showcase
from .transform import (
    detect_transform_output,
    render_provenance,
    sweep_counting,
    transform,
)
from .grammar import (
    GrammarError,
    ScatteredContextGrammar,
    compute_metrics,
    parse_grammar,
    render_grammar,
    word_from_text,
    word_to_text,
)


def _load(path: str) -> ScatteredContextGrammar | gf.GeffertGrammar:
    """Load a grammar file, dispatching on its format tag."""
    text = Path(path).read_text(encoding="utf-8")
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "geffert":
            return gf.parse_geffert(text)
        return parse_grammar(text)
    raise GrammarError(f"{path}: empty grammar file")


def _bounds(args) -> engine.EnumerationBounds:
    return engine.EnumerationBounds(
        max_form_length=args.max_len,
        max_depth=args.max_depth,
        max_forms=args.max_forms,
    )


def _print_bounds(b: engine.EnumerationBounds) -> None:
    print(
        f"bounds: max-len={b.max_form_length} "
        f"max-depth={b.effective_max_depth} max-forms={b.max_forms}"
    )


def _add_bounds_args(sub) -> None:
    sub.add_argument("--max-len", type=int, default=24, metavar="N")
    sub.add_argument("--max-depth", type=int, default=None, metavar="N")
    sub.add_argument("--max-forms", type=int, default=1_000_000, metavar="N")


def cmd_metrics(args) -> int:
    g = _load(args.file)
    if isinstance(g, gf.GeffertGrammar):
        print(f"format: geffert")
        print(f"nonterminals: {len(gf.FIXED_NONTERMINALS)}")
        print(f"terminals: {len(g.terminals)}")
        print(f"rules: {len(g.rules)} (+2 implicit erasure rules)")
        for w in gf.validate_geffert(g).warnings:
            print(f"warning: {w}")
        return 0
    m = compute_metrics(g)
    print(f"format: scg")
    print(f"nonterminals: {m.nonterminal_count}")
    print(f"terminals: {m.terminal_count}")
    print(f"productions: {m.production_count}")
    print(f"non-context-free: {m.non_cf_production_count}")
    print(f"width: {m.width}")
    print(f"erasing: {'yes' if m.is_erasing else 'no'}")
    for w in g.warnings():
        print(f"warning: {w}")
    return 0


def _enumerate(g, bounds) -> engine.BoundedLanguage:
    if isinstance(g, gf.GeffertGrammar):
        return gf.enumerate_geffert(g, bounds)
    return engine.enumerate_language(g, bounds)


def cmd_enumerate(args) -> int:
    g = _load(args.file)
    bounds = _bounds(args)
    _print_bounds(bounds)
    lang = _enumerate(g, bounds)
    for word in lang.words:
        print(word_to_text(word))
    print(f"exhaustive: {'true' if lang.exhaustive else 'false'}")
    print(f"visited: {lang.visited_forms}")
    print(f"pruned: {lang.pruned_forms}")
    return 0


def cmd_member(args) -> int:
    g = _load(args.file)
    bounds = _bounds(args)
    _print_bounds(bounds)
    word = ()
    for tok in args.word:
        word += word_from_text(tok)
    if isinstance(g, gf.GeffertGrammar):
        trace = gf.find_geffert_trace(g, word, bounds)
        if trace is not None:
            print("member")
            for step in trace.steps:
                print(f"  {step}")
            return 0
        print("unknown")
        return 1
    verdict = engine.decide_membership(g, word, bounds)
    if isinstance(verdict, engine.Member):
        print("member")
        print(engine.render_trace(verdict.trace), end="")
        return 0
    if isinstance(verdict, engine.NotMemberExhaustive):
        print("not-member")
        return 1
    print("unknown")
    return 1


def cmd_transform(args) -> int:
    g = _load(args.file)
    if not isinstance(g, gf.GeffertGrammar):
        raise GrammarError(f"{args.file}: transform expects a geffert file")
    out = transform(g)
    grammar_text = render_grammar(out.grammar)
    sidecar_text = render_provenance(out)
    if args.output:
        Path(args.output).write_text(grammar_text, encoding="utf-8")
        Path(args.output + ".provenance").write_text(sidecar_text, encoding="utf-8")
        print(f"wrote {args.output} and {args.output}.provenance")
    else:
        print(grammar_text, end="")
        print(sidecar_text, end="")
    return 0


def cmd_diff(args) -> int:
    g1 = _load(args.file1)
    g2 = _load(args.file2)
    bounds = _bounds(args)
    _print_bounds(bounds)
    l1 = _enumerate(g1, bounds)
    l2 = _enumerate(g2, bounds)
    print(f"exhaustive: {'true' if l1.exhaustive else 'false'} "
          f"{'true' if l2.exhaustive else 'false'}")
    s1, s2 = set(l1.words), set(l2.words)
    if s1 == s2:
        print("equal")
        return 0
    witness = min(s1 ^ s2, key=lambda w: (len(w), w))
    side = args.file1 if witness in s1 else args.file2
    print(f"unequal: {word_to_text(witness)} (only in {side})")
    return 1


def cmd_showcase(args) -> int:
    if args.name == "triples":
        g = showcase.triples()
    else:
        g = showcase.tower(showcase.ShowcaseParams(k=args.k, l=args.l))
    text = render_grammar(g)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return 0


def cmd_check(args) -> int:
    g = _load(args.file)
    bounds = _bounds(args)
    _print_bounds(bounds)
    if args.family == "geffert":
        if not isinstance(g, gf.GeffertGrammar):
            raise GrammarError("family 'geffert' expects a geffert file")
        res = gf.sweep_shape(g, bounds)
        visited, violations = res.visited_forms, res.violations
    elif args.family == "compact":
        if isinstance(g, gf.GeffertGrammar):
            raise GrammarError("family 'compact' expects an scg file")
        out = detect_transform_output(g)
        sweep = sweep_counting(out, bounds)
        visited = sweep.visited_forms
        violations = [(form, str(state)) for form, state in sweep.violations]
    elif args.family == "tower":
        if isinstance(g, gf.GeffertGrammar):
            raise GrammarError("family 'tower' expects an scg file")
        visited, violations = showcase.sweep_markers(g, bounds)
    else:  # argparse choices prevent this
        raise GrammarError(f"unknown family {args.family!r}")
    print(f"visited: {visited}")
    print(f"violations: {len(violations)}")
    for form, detail in violations:
        print(f"  {word_to_text(form)}  [{detail}]")
    return 0 if not violations else 1


def cmd_replay(args) -> int:
    g = _load(args.grammar)
    if isinstance(g, gf.GeffertGrammar):
        raise GrammarError("replay expects an scg grammar file")
    trace = engine.parse_trace(Path(args.trace).read_text(encoding="utf-8"))
    try:
        form = engine.replay(g, trace)
    except engine.InvalidStepError as e:
        print(f"invalid trace: {e}", file=sys.stderr)
        return 1
    print(word_to_text(form))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scgkit",
        description="Scattered context grammar workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="grammar size report")
    p.add_argument("file")
    p.set_defaults(fn=cmd_metrics)

    p = sub.add_parser("enumerate", help="bounded language enumeration")
    p.add_argument("file")
    _add_bounds_args(p)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("member", help="bounded membership test")
    p.add_argument("file")
    p.add_argument("word", nargs="+", help="word tokens (@ for the empty word)")
    _add_bounds_args(p)
    p.set_defaults(fn=cmd_member)

    p = sub.add_parser("transform", help="compact a geffert grammar to 3 nonterminals")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="output scg file (+ .provenance sidecar)")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("diff", help="compare two bounded languages")
    p.add_argument("file1")
    p.add_argument("file2")
    _add_bounds_args(p)
    p.set_defaults(fn=cmd_diff)

    p = sub.add_parser("showcase", help="emit a bundled grammar")
    p.add_argument("name", choices=["triples", "tower"])
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--l", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_showcase)

    p = sub.add_parser("check", help="invariant sweep over reachable forms")
    p.add_argument("file")
    p.add_argument(
        "--family", required=True, choices=["compact", "tower", "geffert"]
    )
    _add_bounds_args(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("replay", help="validate and replay a derivation trace")
    p.add_argument("grammar")
    p.add_argument("trace")
    p.set_defaults(fn=cmd_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (GrammarError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
