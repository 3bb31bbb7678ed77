import json
import shutil

import pytest

from deccsp import cli
from deccsp import core as c

CORPUS = cli.corpus_dir()


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, text, name="m.dec"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_traces_skip_and_yield(capsys):
    assert run(capsys, "traces", str(CORPUS / "skip.dec"))[:2] == (0, "✓ DONE\n")
    assert run(capsys, "traces", str(CORPUS / "yield.dec"))[:2] == (0, "? YIELDED\n✓ DONE\n")


def test_traces_json(capsys):
    code, out, _ = run(capsys, "traces", "--json", str(CORPUS / "yield.dec"))
    assert code == 0
    assert json.loads(out) == [{"labels": ["?"], "marker": "YIELDED"},
                               {"labels": ["✓"], "marker": "DONE"}]


def test_parse_error_exit_code(capsys, tmp_path):
    code, out, err = run(capsys, "traces", write(tmp_path, "init a ||| b\n"))
    assert code == 1 and out == "" and "1:10" in err


def test_missing_file(capsys):
    assert run(capsys, "parse", "/nonexistent/model.dec")[0] == 1


def test_semantic_error_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "traces", write(tmp_path, "init a ; X\n"))
    assert code == 2 and "X" in err and "after: a tau" in err


def test_default_skip_flag(capsys, tmp_path):
    path = write(tmp_path, "init a ; X\n")
    code, out, _ = run(capsys, "traces", "--default-skip-vars", "--elide-tau", path)
    assert (code, out) == (0, "a ✓ DONE\n")


def test_mode_flag(capsys):
    path = str(CORPUS / "rollback.dec")
    _, out, _ = run(capsys, "traces", "--elide-tau", "--mode", "contain", path)
    assert out == "a b c c1 b1 a1 ✓ DONE\n"


def test_parse_prints_canonical_model(capsys):
    code, out, _ = run(capsys, "parse", "--interruptible-atoms", str(CORPUS / "interrupt.dec"))
    assert code == 0
    assert "interruptible_atoms = on" in out
    assert "init P || Q || THROW" in out


def test_lts_text_json_and_dot(capsys, tmp_path):
    path = write(tmp_path, "init a [] b\n")
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "lts", "--dot", str(dot), path)
    assert code == 0 and out.count("state ") == 3
    assert dot.read_text().startswith("digraph")
    _, out, _ = run(capsys, "lts", "--json", path)
    assert len(json.loads(out)["transitions"]) == 3


def test_deadlocks(capsys, tmp_path):
    _, out, _ = run(capsys, "deadlocks", write(tmp_path, "init (a -> SKIP) ||{a, b} (b -> SKIP)\n"))
    assert out.startswith("s0: ")
    _, out, _ = run(capsys, "deadlocks", str(CORPUS / "skip.dec"))
    assert out == "no deadlocks\n"


def test_compensations(capsys):
    code, out, _ = run(capsys, "compensations", str(CORPUS / "rollback.dec"))
    assert (code, out) == (0, "c1 b1 a1\n")
    code, _, err = run(capsys, "compensations", "--require", "zzz", str(CORPUS / "rollback.dec"))
    assert code == 2 and "no transaction-block fault" in err


def test_run_is_seeded(capsys, tmp_path):
    path = write(tmp_path, "init (a [] b) ; (c |~| d)\n")
    first = run(capsys, "run", "--seed", "5", path)
    assert first == run(capsys, "run", "--seed", "5", path)
    assert first[1].endswith("final: STOP | {} | {}\n")


def test_step_menu_single_fault(capsys, tmp_path):
    code, out, _ = run(capsys, "step", "--choices", "q", write(tmp_path, "init [ THROWW ]\n"))
    assert code == 0
    menu = [line for line in out.splitlines() if line.startswith("  ")]
    assert menu == ["  0: ! [block.fault]"]


def test_step_menu_matches_step_output(capsys, tmp_path):
    path = write(tmp_path, "init a [] b\n")
    _, out, _ = run(capsys, "step", "--choices", "1 u 0", path)
    assert "  0: a [ext.left]\n  1: b [ext.right]\n" in out
    assert "> b [ext.right]" in out and "> a [ext.left]" in out
    assert out.endswith("  0: ✓ [skip]\n")


def test_step_replay_is_reproducible(capsys, tmp_path):
    path = write(tmp_path, "init (a || b) ; (c |~| d)\n")
    first = run(capsys, "step", "--seed", "2", "--choices", "r3 u 0 q", path)
    assert first == run(capsys, "step", "--seed", "2", "--choices", "r3 u 0 q", path)


def test_step_requires_terminal(capsys, tmp_path, monkeypatch):
    class Pipe:
        def isatty(self):
            return False
    monkeypatch.setattr("sys.stdin", Pipe())
    code, _, err = run(capsys, "step", write(tmp_path, "init SKIP\n"))
    assert code == 3 and "interactive" in err


def small_corpus(tmp_path):
    root = tmp_path / "corpus"
    shutil.copytree(CORPUS / "rules", root / "rules")
    (root / "golden").mkdir()
    for name in ("skip.dec", "yield.dec", "rollback.dec"):
        shutil.copy(CORPUS / name, root / name)
    for name in ("skip-traces", "yield-traces", "rollback-traces", "rollback-compensations"):
        shutil.copy(CORPUS / "golden" / f"{name}.golden", root / "golden")
    return root


def test_check_small_corpus_passes(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "--corpus", str(small_corpus(tmp_path)))
    assert code == 0 and out.endswith("all corpus checks passed\n")


def test_check_detects_corrupted_terminal_table(capsys, tmp_path, monkeypatch):
    monkeypatch.setitem(c.TERMINAL_TABLE, (c.FAULT, c.DONE), c.DONE)
    code, out, _ = run(capsys, "check", "--corpus", str(small_corpus(tmp_path)))
    assert code == 4
    failed = out.splitlines()[-1]
    assert "par.terminal" in failed


def test_check_detects_changed_golden(capsys, tmp_path):
    root = small_corpus(tmp_path)
    g = root / "golden" / "skip-traces.golden"
    g.write_text(g.read_text().replace("✓ DONE", "! FAULT"))
    code, out, _ = run(capsys, "check", "--corpus", str(root))
    assert code == 4 and "-! FAULT" in out and "+✓ DONE" in out


def test_check_without_golden_files(capsys, tmp_path):
    code, _, err = run(capsys, "check", "--corpus", str(tmp_path))
    assert code == 1 and "golden files not found" in err


@pytest.mark.slow
def test_check_pristine_corpus(capsys):
    code, out, _ = run(capsys, "check")
    assert code == 0, out
