"""Command-line interface: subcommands, file handling, and exit codes."""

import pytest

from scgkit.cli import main

from conftest import GEFFERT_AB, GEFFERT_TRIVIAL, TRIPLES_TEXT


@pytest.fixture
def triples_file(tmp_path):
    path = tmp_path / "triples.scg"
    path.write_text(TRIPLES_TEXT)
    return str(path)


@pytest.fixture
def geffert_file(tmp_path):
    path = tmp_path / "ab.geffert"
    path.write_text(GEFFERT_AB)
    return str(path)


def test_metrics_scg(triples_file, capsys):
    assert main(["metrics", triples_file]) == 0
    out = capsys.readouterr().out
    assert "format: scg" in out
    assert "nonterminals: 4" in out
    assert "productions: 3" in out
    assert "non-context-free: 2" in out
    assert "width: 3" in out
    assert "erasing: no" in out


def test_metrics_geffert(geffert_file, capsys):
    assert main(["metrics", geffert_file]) == 0
    out = capsys.readouterr().out
    assert "format: geffert" in out
    assert "rules: 3" in out


def test_metrics_missing_file(capsys):
    assert main(["metrics", "/no/such/file.scg"]) == 2
    assert "error:" in capsys.readouterr().err


def test_metrics_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.scg"
    path.write_text("scg\nnonterminals: S\nterminals: a\nstart: S\nprod (S) -> (x)\n")
    assert main(["metrics", str(path)]) == 2
    assert "line 5" in capsys.readouterr().err


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_enumerate(triples_file, capsys):
    assert main(["enumerate", triples_file, "--max-len", "9"]) == 0
    out = capsys.readouterr().out
    assert "bounds: max-len=9 max-depth=36 max-forms=1000000" in out
    assert "a b c\n" in out
    assert "a a b b c c\n" in out
    assert "a a a b b b c c c\n" in out
    assert "exhaustive: true" in out


def test_enumerate_geffert_file(geffert_file, capsys):
    assert main(["enumerate", geffert_file, "--max-len", "10"]) == 0
    out = capsys.readouterr().out
    assert "@\n" in out
    assert "a\n" in out
    assert "exhaustive: false" in out


def test_member(triples_file, capsys):
    assert main(["member", triples_file, "a", "b", "c", "--max-len", "6"]) == 0
    out = capsys.readouterr().out
    assert "member" in out
    assert "start: S" in out

    assert main(["member", triples_file, "a", "a", "b", "c", "--max-len", "4"]) == 1
    assert "not-member" in capsys.readouterr().out


def test_member_empty_word(geffert_file, capsys):
    assert main(["member", geffert_file, "@", "--max-len", "8"]) == 0
    assert "member" in capsys.readouterr().out


def test_transform_writes_sidecar(geffert_file, tmp_path, capsys):
    out_path = tmp_path / "compact.scg"
    assert main(["transform", geffert_file, "-o", str(out_path)]) == 0
    assert out_path.exists()
    sidecar = tmp_path / "compact.scg.provenance"
    assert sidecar.exists()
    assert "init" in sidecar.read_text()
    # the output is a loadable scg file
    capsys.readouterr()
    assert main(["metrics", str(out_path)]) == 0
    out = capsys.readouterr().out
    assert "nonterminals: 3" in out
    assert "width: 9" in out


def test_transform_rejects_scg_input(triples_file, capsys):
    assert main(["transform", triples_file]) == 2
    assert "expects a geffert file" in capsys.readouterr().err


def test_diff_equal_self(triples_file, capsys):
    assert main(["diff", triples_file, triples_file, "--max-len", "9"]) == 0
    assert "equal" in capsys.readouterr().out


def test_diff_unequal(triples_file, tmp_path, capsys):
    other = tmp_path / "no-stop.scg"
    # drop the terminating production: no terminal words remain
    other.write_text(
        "scg\nnonterminals: S A B C\nterminals: a b c\nstart: S\n"
        "prod (S) -> (A B C)\nprod (A, B, C) -> (a A, b B, c C)\n"
    )
    assert main(["diff", triples_file, str(other), "--max-len", "9"]) == 1
    out = capsys.readouterr().out
    assert "unequal: a b c" in out
    assert triples_file in out


def test_diff_geffert_against_transform(tmp_path, capsys):
    src = tmp_path / "trivial.geffert"
    src.write_text(GEFFERT_TRIVIAL)
    compact = tmp_path / "compact.scg"
    assert main(["transform", str(src), "-o", str(compact)]) == 0
    capsys.readouterr()
    assert main(["diff", str(src), str(compact), "--max-len", "12"]) == 0
    assert "equal" in capsys.readouterr().out


def test_showcase_output(tmp_path, capsys):
    assert main(["showcase", "triples"]) == 0
    assert "prod (S) -> (A B C)" in capsys.readouterr().out

    path = tmp_path / "tower.scg"
    assert main(["showcase", "tower", "--k", "2", "--l", "3", "-o", str(path)]) == 0
    capsys.readouterr()
    assert main(["metrics", str(path)]) == 0
    out = capsys.readouterr().out
    assert "nonterminals: 12" in out
    assert "productions: 14" in out


def test_showcase_invalid_params(capsys):
    assert main(["showcase", "tower", "--k", "3", "--l", "3"]) == 2
    assert "error:" in capsys.readouterr().err


def test_check_geffert(geffert_file, capsys):
    assert main(["check", geffert_file, "--family", "geffert", "--max-len", "12"]) == 0
    out = capsys.readouterr().out
    assert "violations: 0" in out


def test_check_tower(tmp_path, capsys):
    path = tmp_path / "tower.scg"
    assert main(["showcase", "tower", "-o", str(path)]) == 0
    capsys.readouterr()
    assert main(["check", str(path), "--family", "tower", "--max-len", "14"]) == 0
    assert "violations: 0" in capsys.readouterr().out


def test_check_compact_clean(tmp_path, capsys):
    src = tmp_path / "trivial.geffert"
    src.write_text(GEFFERT_TRIVIAL)
    compact = tmp_path / "compact.scg"
    assert main(["transform", str(src), "-o", str(compact)]) == 0
    capsys.readouterr()
    assert main(["check", str(compact), "--family", "compact", "--max-len", "12"]) == 0
    assert "violations: 0" in capsys.readouterr().out


def test_check_compact_flags_mutation(geffert_file, tmp_path, capsys):
    compact = tmp_path / "compact.scg"
    assert main(["transform", geffert_file, "-o", str(compact)]) == 0
    # corrupt the append-terminal production with an extra A
    text = compact.read_text()
    needle = "prod (S, S, S) -> (S, A B B S A a B B, S)"
    assert needle in text
    compact.write_text(
        text.replace(needle, "prod (S, S, S) -> (S, A B B S A a B B A, S)")
    )
    capsys.readouterr()
    assert main(["check", str(compact), "--family", "compact", "--max-len", "24"]) == 1
    out = capsys.readouterr().out
    assert "violations:" in out
    assert "violations: 0" not in out


def test_check_family_mismatch(triples_file, geffert_file, capsys):
    assert main(["check", triples_file, "--family", "geffert"]) == 2
    assert main(["check", geffert_file, "--family", "compact"]) == 2
    capsys.readouterr()


def test_replay_round_trip(triples_file, tmp_path, capsys):
    trace = tmp_path / "trace.txt"
    trace.write_text("start: S\nstep 0 @ 1\nstep 2 @ 1 2 3\n")
    assert main(["replay", triples_file, str(trace)]) == 0
    assert capsys.readouterr().out.strip().endswith("a b c")

    trace.write_text("start: S\nstep 0 @ 5\n")
    assert main(["replay", triples_file, str(trace)]) == 1
    assert "invalid trace" in capsys.readouterr().err
