"""Three-nonterminal compaction: construction, counting, and simulation."""

import pytest
from hypothesis import given, strategies as st

from scgkit import (
    CountingState,
    EnumerationBounds,
    GrammarError,
    ScatteredProduction,
    SimulationError,
    check_counting,
    compute_metrics,
    encode,
    find_geffert_trace,
    parse_geffert,
    parse_grammar,
    render_grammar,
    replay,
    simulate,
    sweep_counting,
    transform,
)
from scgkit.geffert import ApplyCF, GeffertTrace
from scgkit.grammar import ScatteredContextGrammar
from scgkit.transform import detect_transform_output, render_provenance

from conftest import GEFFERT_TEXTS


def test_encode_examples():
    assert encode(()) == ()
    assert encode(("A",)) == ("A", "B", "B")
    assert encode(("B",)) == ("B", "B", "A")
    assert encode(("C",)) == ("B", "A", "B")
    assert encode(("D",)) == ("B", "A", "B")
    assert encode(("a",)) == ("A", "a", "B", "B")
    assert encode(("C", "a", "D")) == (
        "B", "A", "B", "A", "a", "B", "B", "B", "A", "B"
    )
    with pytest.raises(GrammarError, match="outside the encoding domain"):
        encode(("S'",))


@given(
    st.lists(st.sampled_from(["A", "B", "C", "D", "a", "b"]), max_size=6),
    st.lists(st.sampled_from(["A", "B", "C", "D", "a", "b"]), max_size=6),
)
def test_encode_is_a_homomorphism(x, y):
    assert encode(tuple(x) + tuple(y)) == encode(tuple(x)) + encode(tuple(y))


def test_transform_trivial_grammar():
    out = transform(parse_geffert(GEFFERT_TEXTS["trivial"]))
    assert out.provenance == (
        "init", "erase-ab", "erase-cd", "unpack-keep", "unpack-drop", "final"
    )
    m = compute_metrics(out.grammar)
    assert m.nonterminal_count == 3
    assert m.production_count == 6
    assert m.width == 9
    assert sum(1 for p in out.grammar.productions if p.is_context_free) == 1
    assert out.grammar.nonterminals == {"S", "A", "B"}
    assert out.grammar.start == "S"


def test_transform_fixed_productions():
    out = transform(parse_geffert(GEFFERT_TEXTS["trivial"]))
    g = out.grammar
    assert g.productions[out.init_index] == ScatteredProduction(
        ("S",), (("S", "B", "B", "A", "S", "A", "B", "B", "S", "A"),)
    )
    assert g.productions[out.erase_ab_index].lhs == (
        "S", "A", "B", "B", "S", "B", "B", "A", "S"
    )
    assert g.productions[out.erase_cd_index].lhs == (
        "S", "B", "A", "B", "S", "B", "A", "B", "S"
    )
    keep = g.productions[out.unpack_keep_index]
    drop = g.productions[out.unpack_drop_index]
    assert keep.lhs == drop.lhs == ("S", "B", "B", "A", "S", "A", "B", "B", "S")
    assert keep.rhs[3] == ("S", "B", "B", "A")
    assert drop.rhs[3] == ("S",)
    assert g.productions[out.final_index] == ScatteredProduction(
        ("S", "S", "S", "A"), ((), (), (), ())
    )


def test_transform_cf_productions():
    g = parse_geffert(GEFFERT_TEXTS["ab"])
    out = transform(g)
    m = compute_metrics(out.grammar)
    # 6 fixed productions plus one per non-erase source rule
    assert m.production_count == 6 + 2
    append = out.grammar.productions[out.cf_index[0]]
    assert append.lhs == ("S", "S", "S")
    assert append.rhs == (
        ("S",),
        ("A", "B", "B", "S", "A", "a", "B", "B"),
        ("S",),
    )
    bilateral = out.grammar.productions[out.cf_index[1]]
    assert bilateral.rhs == (("S",), ("S", "B", "B", "A"), ("S",))
    assert out.provenance[out.cf_index[0]] == "cf-a(0)"
    assert out.provenance[out.cf_index[1]] == "cf-v(1)"


def test_transform_widths():
    out = transform(parse_geffert(GEFFERT_TEXTS["cd"]))
    widths = {
        out.init_index: 1,
        out.cf_index[0]: 3,
        out.cf_index[1]: 3,
        out.erase_ab_index: 9,
        out.erase_cd_index: 9,
        out.unpack_keep_index: 9,
        out.unpack_drop_index: 9,
        out.final_index: 4,
    }
    for i, w in widths.items():
        assert out.grammar.productions[i].width == w


def test_transform_rejects_invalid_source():
    from scgkit.geffert import Bilateral, GeffertGrammar

    with pytest.raises(GrammarError, match="invalid source grammar"):
        transform(GeffertGrammar({"a"}, (Bilateral(("B",), ()),)))


def test_detect_transform_output_round_trip():
    out = transform(parse_geffert(GEFFERT_TEXTS["ab"]))
    reparsed = parse_grammar(render_grammar(out.grammar))
    detected = detect_transform_output(reparsed)
    assert detected.init_index == out.init_index
    assert detected.final_index == out.final_index
    assert detected.unpack_keep_index == out.unpack_keep_index
    assert detected.unpack_drop_index == out.unpack_drop_index
    with pytest.raises(GrammarError, match="nonterminals"):
        detect_transform_output(
            parse_grammar("scg\nnonterminals: S\nterminals: a\nstart: S\n")
        )


def test_render_provenance():
    out = transform(parse_geffert(GEFFERT_TEXTS["trivial"]))
    text = render_provenance(out)
    assert text.splitlines()[0] == "0: init"
    assert text.splitlines()[-1] == "5: final"


def test_check_counting_examples():
    initial = tuple("SBBASABBSA")
    assert check_counting(initial, CountingState(1, 0))
    assert not check_counting(initial, CountingState(0, 0))
    assert check_counting(("S", "S", "S", "a", "A"), CountingState(1, 0))
    assert check_counting(("a", "a"), CountingState(1, 1))
    # an odd number of B's is always a violation
    assert not check_counting(("S", "B"), CountingState(0, 0))


def test_counting_sweep_clean_and_words():
    out = transform(parse_geffert(GEFFERT_TEXTS["trivial"]))
    res = sweep_counting(out, EnumerationBounds(max_form_length=12))
    assert res.violations == []
    assert () in res.words


def test_counting_sweep_flags_mutated_grammar():
    out = transform(parse_geffert(GEFFERT_TEXTS["ab"]))
    g = out.grammar
    # corrupt the append-terminal production with an extra A
    bad = list(g.productions)
    p = bad[out.cf_index[0]]
    bad[out.cf_index[0]] = ScatteredProduction(
        p.lhs, (p.rhs[0], p.rhs[1] + ("A",), p.rhs[2])
    )
    mutated = ScatteredContextGrammar(
        g.nonterminals, g.terminals, g.start, tuple(bad)
    )
    detected = detect_transform_output(mutated)
    res = sweep_counting(detected, EnumerationBounds(max_form_length=24))
    assert res.violations != []
    form, state = res.violations[0]
    assert not check_counting(form, state)


def _simulate_word(name, word):
    g = parse_geffert(GEFFERT_TEXTS[name])
    trace = find_geffert_trace(
        g, word, EnumerationBounds(max_form_length=16, max_forms=300_000)
    )
    assert trace is not None
    out = transform(g)
    sim = simulate(g, trace)
    assert replay(out.grammar, sim) == word
    return out, sim


def test_simulate_empty_word():
    out, sim = _simulate_word("trivial", ())
    assert [s.production_index for s in sim.steps] == [
        out.init_index, out.unpack_drop_index, out.final_index
    ]


def test_simulate_unary_word():
    out, sim = _simulate_word("astar", ("a",))
    assert [s.production_index for s in sim.steps] == [
        out.init_index,
        out.cf_index[0],
        out.unpack_keep_index,
        out.unpack_drop_index,
        out.final_index,
    ]


def test_simulate_with_erasures():
    for name in ("ab", "cd"):
        out, sim = _simulate_word(name, ("a", "a"))
        indices = [s.production_index for s in sim.steps]
        eraser = out.erase_ab_index if name == "ab" else out.erase_cd_index
        assert indices.count(eraser) == 2
        assert indices[0] == out.init_index
        assert indices[-1] == out.final_index


def test_simulate_rejects_nonterminal_result():
    g = parse_geffert(GEFFERT_TEXTS["ab"])
    partial = GeffertTrace(("S'",), (ApplyCF(0, 1),))
    with pytest.raises(SimulationError, match="not a terminal word"):
        simulate(g, partial)


def test_simulated_steps_stay_within_width_nine():
    out, sim = _simulate_word("ab", ("a", "a", "a"))
    assert max(len(s.positions) for s in sim.steps) == 9
