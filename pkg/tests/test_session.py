import pytest

from syzforge.session import SessionError, parse_session

BASIC = """\
ring QQ[x,y,z]
ideal I = x, y
module M = cyclic I
module N = coker [[x, y, 0], [0, z, x]] twists [0, 0]   # a comment
task betti M
task embed M x=x D=5
"""


def test_parse_basic():
    s = parse_session(BASIC)
    assert s.ring.variables == ("x", "y", "z")
    assert [b.name for b in s.bindings.values()] == ["I", "M", "N"]
    assert [t.kind for t in s.tasks] == ["betti", "embed"]
    assert s.tasks[1].args["D"] == 5
    assert s.tasks[1].line == 6
    assert s.bindings["N"].value.relations.source.twists == (1, 1, 1)


def test_round_trip():
    s = parse_session(BASIC)
    again = parse_session(s.serialize())
    assert again == s
    assert again.serialize() == s.serialize()


def test_finite_field_ring():
    s = parse_session("ring GF(7)[a,b] grevlex\nideal I = a^2 + 8*b^2\n")
    g = s.bindings["I"].value.generators[0]
    assert str(g) == "a^2 + b^2"


@pytest.mark.parametrize("text, line, column, fragment", [
    ("ring QQ[x,y]\nideal I = x + y^2\n", 2, 11, "inhomogeneous"),
    ("ring QQ[x,y]\nmodule M = cyclic J\n", 2, 19, "unknown ideal"),
    ("ring QQ[x,y]\ntask betti Q\n", 2, 12, "unknown name"),
    ("ring QQ[x,y] lex2\n", 1, 14, "unknown monomial order"),
    ("ideal I = x\n", 1, 1, "ring"),
    ("ring QQ[x,y]\ntask frobnicate I\n", 2, 6, "unknown task kind"),
    ("ring QQ[x,y]\nideal I = x\ntask embed I x=x\n", 3, 12, "needs a module"),
    ("ring QQ[x,y]\nideal I = x\nmodule M = cyclic I\ntask embed M\n", 4, 1, "requires x"),
    ("ring QQ[x,y]\nmodule M = coker [[x, y^2], [y, x]] twists [0, 0]\n", 2, None, "inhomogeneous"),
    ("ring QQ[x,y]\nideal I = x\nideal I = y\n", 3, 7, "already bound"),
])
def test_located_errors(text, line, column, fragment):
    with pytest.raises(SessionError) as info:
        parse_session(text)
    err = info.value
    assert err.line == line
    if column is not None:
        assert err.column == column
    assert fragment in err.message


def test_empty_session():
    with pytest.raises(SessionError):
        parse_session("# nothing here\n")
