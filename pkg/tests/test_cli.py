import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from syzforge.cli import main
from syzforge.corpus import generate_corpus
from syzforge.report import run_text

SESSIONS = Path(__file__).resolve().parent.parent / "sessions"

GOOD = """\
ring QQ[x,y,z]
ideal m = x, y, z
ideal I = x, y
module K = cyclic m
module M = cyclic I
task betti K
task grade I
task embed M x=x D=5
task check-oic K
"""

REJECTING = """\
ring QQ[x,y]
module G = coker [[0]] twists [0]
task embed G x=x
task betti G
"""


def _run(tmp_path, text, *flags):
    p = tmp_path / "s.txt"
    p.write_text(text)
    return CliRunner().invoke(main, ["run", str(p), *flags])


def test_exit_ok_and_json_schema(tmp_path):
    out = tmp_path / "r.json"
    r = _run(tmp_path, GOOD, "--json", str(out))
    assert r.exit_code == 0, r.output
    data = json.loads(out.read_text())
    assert data["schema"] == 1
    assert [t["status"] for t in data["tasks"]] == ["ok"] * 4
    assert data["tasks"][0]["result"]["betti"]


def test_exit_on_rejection(tmp_path):
    r = _run(tmp_path, REJECTING)
    assert r.exit_code == 1
    assert "REJECTED_GRADE_ZERO" in r.output


def test_exit_on_parse_error(tmp_path):
    r = _run(tmp_path, "ring QQ[x]\nideal I = x + x^2\n")
    assert r.exit_code == 2
    assert "line 2" in r.output


def test_missing_file(tmp_path):
    r = CliRunner().invoke(main, ["run", str(tmp_path / "nope.txt")])
    assert r.exit_code == 2


def test_fail_fast_stops_early(tmp_path):
    out = tmp_path / "r.json"
    r = _run(tmp_path, REJECTING, "--fail-fast", "--json", str(out))
    assert r.exit_code == 1
    assert len(json.loads(out.read_text())["tasks"]) == 1


def test_parallel_matches_sequential():
    text = (SESSIONS / "acceptance.txt").read_text()
    a = run_text(text, seed=5).dumps()
    b = run_text(text, seed=5, parallel=True).dumps()
    assert a == b


def test_invariant_exit_code(monkeypatch):
    import syzforge.report as rep

    def boom(session, task, seed):
        raise RuntimeError("broken invariant")

    monkeypatch.setitem(rep.HANDLERS, "betti", boom)
    r = run_text(GOOD)
    assert r.exit_code == 3
    assert r.tasks[0]["status"] == "invariant"


@pytest.mark.parametrize("seed", [42])
def test_corpus_is_deterministic(R, seed):
    a = [m.to_json() for m in generate_corpus(R, seed, 3)]
    b = [m.to_json() for m in generate_corpus(R, seed, 3)]
    assert a == b
    assert a != [m.to_json() for m in generate_corpus(R, seed + 1, 3)]
    with pytest.raises(ValueError):
        generate_corpus(R, seed, 0)
