import io
import json
from pathlib import Path

from cl16.cli import PlaySession, main, play_step
from cl16.semantics import check_legal, resolution_of
from cl16.syntax import parse

GOLDEN = Path(__file__).parent / "data" / "example_5_1.json"
MIRROR = "(~p +[1] ~q) | (p *[2] q)"


def run(*argv, stdin=None):
    out = io.StringIO()
    if stdin is None:
        code = main(list(argv), out)
    else:
        from cl16 import cli

        args = cli.build_parser().parse_args(list(argv))
        code = cli.cmd_play(args, out, io.StringIO(stdin))
    return code, out.getvalue()


def test_fmt_rank_negate():
    assert run("fmt", "p & (q +[1] r)") == (0, "p & q +[1] r\n")
    assert run("rank", "p | q") == (0, "3125\n")
    assert run("negate", "p *[1] q") == (0, "~p +[1] ~q\n")


def test_json_output():
    code, text = run("rank", "p & q", "--json")
    assert code == 0 and json.loads(text) == {"rank": "25"}


def test_usage_and_resource_errors(capsys):
    assert run("fmt", "p &")[0] == 2
    assert run("rank", "p | q | r")[0] == 2
    assert run("bogus")[0] == 2
    assert run("eval", "p", "--run", "T x1.0")[0] == 2
    assert "error:" in capsys.readouterr().err


def test_eval():
    assert run("eval", "p *[1] q", "--run", "", "--interp", "p=0,q=0") == (0, "legal; winner: T\n")
    assert run("eval", "p +[1] q", "--run", "T d1.1", "--interp", "p=0,q=1") == (0, "legal; winner: T\n")
    code, text = run("eval", "p +[1] q", "--run", "B d1.0", "--interp", "p=1,q=1")
    assert code == 0 and text.startswith("illegal") and text.endswith("winner: T\n")


def test_oracle():
    code, text = run("oracle", MIRROR, "--strategy")
    assert code == 0
    assert text.splitlines()[0] == "VALID"
    assert "state {d1=?,c2=0} -> d1.0" in text
    code, text = run("oracle", "p +[1] ~p", "--witness", "--json")
    assert code == 1 and json.loads(text)["refutation"]["state"] == "{d1=?}"


def test_prove_then_check(tmp_path):
    out = tmp_path / "proof.json"
    code, text = run("prove", "p & (q +[1] r) -> (p&q) +[2] (p&r)", "--out", str(out))
    assert code == 0 and text.startswith("VALID")
    code, text = run("check", str(out))
    assert code == 0 and text.startswith("OK ")
    assert run("prove", "p +[1] ~p")[0] == 1


def test_check_golden_and_corrupted(tmp_path):
    code, text = run("check", str(GOLDEN))
    assert code == 0
    assert parse(text[3:].strip()) == parse("(~p | (~q *[1] ~r)) | ((p&q) +[2] (p&r))")
    lines = json.loads(GOLDEN.read_text())
    lines[6]["path"] = "1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(lines))
    code, text = run("check", str(bad), "--json")
    assert code == 1
    assert json.loads(text)["line"] == 7 and json.loads(text)["kind"] == "mismatch"
    assert run("check", str(tmp_path / "missing.json"))[0] == 2


def test_purify():
    assert run("purify", "F | p") == (0, "p\n")
    code, text = run("purify", "F | p", "--trace")
    assert text.splitlines() == ["commutativity(a) @  : F | p => p | F", "identity(a) @  : p | F => p", "p"]


def test_xcheck_and_gen():
    code, text = run("xcheck", "--max-nodes", "2", "--letters", "2", "--clusters", "2")
    assert code == 0 and "agreement: 100%" in text
    code, text = run("xcheck", "--random", "50", "--max-nodes", "5", "--letters", "3", "--clusters", "3")
    assert code == 0
    code, text = run("gen", "--max-nodes", "1", "--letters", "1", "--clusters", "0")
    assert len(text.splitlines()) == 4 + 2 * 16
    assert run("gen", "--max-nodes", "4", "--letters", "2", "--clusters", "2", "--count")[1] == "28290966\n"


def test_play_mirror():
    session, banner = PlaySession.start(parse(MIRROR))
    assert "no winning strategy" not in " ".join(banner)
    assert play_step(session, "c2=0") == ["machine: d1.0"]
    assert play_step(session, "d1=0")[0].startswith("illegal move")
    assert play_step(session, "c2=1")[0].startswith("illegal move")
    assert check_legal(session.transcript) is None
    assert resolution_of(session.transcript) == session.resolution
    assert play_step(session, "end")[-1] == "T wins under all interpretations"


def test_play_end_at_start():
    session, banner = PlaySession.start(parse("p *[1] q"))
    assert play_step(session, "end")[-1] == "T wins under all interpretations"


def test_play_invalid_banner_and_greedy():
    session, banner = PlaySession.start(parse("p +[1] ~p"))
    assert any("no winning strategy exists" in b for b in banner)
    assert session.resolution  # greedy resolves d1 to win half the interpretations
    assert play_step(session, "nonsense")[0].startswith("unknown command")
    assert play_step(session, "state")[0].startswith("state {d1=0}")


def test_play_repl():
    code, text = run("play", MIRROR, stdin="c2=1\nend\n")
    assert code == 0
    assert "machine: d1.1" in text
    assert text.rstrip().endswith("T wins under all interpretations")
