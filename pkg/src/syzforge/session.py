"""Line-oriented session files.

::

    ring QQ[x,y,z] grevlex
    ideal I = x, y
    module M = coker [[x, y]] twists [0]
    module N = cyclic I mod z
    task grade I
    task embed M x=x D=6

``#`` starts a comment.  Task arguments are ``key=value`` words; quote a value
containing spaces.  Sequences are comma separated.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field

from .groebner import ModuleMap
from .modules import Ideal, Presentation, QuotientRingContext
from .ring import GF, ORDERS, QQ, ParseError, PolyRing, StructuralError

TASK_KINDS = ("resolve", "betti", "grade", "embed", "shamash", "check-oic", "nzd-check", "tor-seq", "corpus")

# allowed keys per task kind, with the expected value type
TASK_ARGS = {
    "resolve": {"max_len": int, "D": int},
    "betti": {"max_len": int},
    "grade": {},
    "embed": {"x": "seq", "D": int},
    "shamash": {"x": "poly", "length": int, "D": int},
    "check-oic": {"max_i": int, "probes": int, "seed": int},
    "nzd-check": {},
    "tor-seq": {"seed": int, "search": int, "max_j": int},
    "corpus": {"seed": int, "count": int, "gens": "ints", "rels": "ints", "check": str},
}
REQUIRED = {"embed": ("x",), "shamash": ("x",)}
IDEAL_TASKS = ("nzd-check",)
MODULE_TASKS = ("resolve", "betti", "embed", "shamash", "check-oic", "tor-seq")


class SessionError(ValueError):
    """Parse or validation failure at ``line``/``column`` (both 1-based)."""

    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Binding:
    name: str
    kind: str                # "ideal" or "module"
    value: object            # Ideal or Presentation
    source: str              # canonical text after the '='
    line: int = 0

    def canonical(self):
        return (self.name, self.kind, self.source)


@dataclass
class Task:
    kind: str
    target: str
    args: dict = field(default_factory=dict)
    line: int = 0

    def canonical(self):
        return (self.kind, self.target, tuple(sorted((k, str(v)) for k, v in self.args.items())))

    def text(self):
        parts = ["task", self.kind, self.target]
        for k, v in self.args.items():
            parts.append(f"{k}={shlex.quote(_fmt_arg(v))}")
        return " ".join(parts)


def _fmt_arg(v):
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


@dataclass
class Session:
    ring: PolyRing
    bindings: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    source: str = None

    def __eq__(self, other):
        if not isinstance(other, Session):
            return NotImplemented
        return (self.ring == other.ring
                and [b.canonical() for b in self.bindings.values()]
                == [b.canonical() for b in other.bindings.values()]
                and [t.canonical() for t in self.tasks] == [t.canonical() for t in other.tasks])

    def serialize(self):
        lines = ["ring " + self.ring.describe()]
        for b in self.bindings.values():
            lines.append(f"{b.kind} {b.name} = {b.source}")
        lines.extend(t.text() for t in self.tasks)
        return "\n".join(lines) + "\n"


# --- low-level scanning -----------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_RING = re.compile(r"ring\s+(?P<field>QQ|Q|GF\((?P<p>\d+)\))\s*\[(?P<vars>[^\]]*)\]\s*(?P<order>\S+)?\s*$")


def _strip_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def _split_commas(text, start):
    """Split on top-level commas; yields ``(piece, column_offset)``."""
    out = []
    depth = 0
    cur = 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append((text[cur:i], start + cur))
            cur = i + 1
    out.append((text[cur:], start + cur))
    return [(p.strip(), off + len(p) - len(p.lstrip())) for p, off in out]


def _poly(ring, text, lineno, col):
    try:
        f = ring.parse(text)
    except ParseError as exc:
        c = col + (exc.column - 1 if exc.column else 0)
        raise SessionError(str(exc).split(" (column")[0], lineno, c + 1) from None
    except ValueError as exc:
        raise SessionError(str(exc), lineno, col + 1) from None
    if f.homogeneous_degree() is None:
        raise SessionError(f"inhomogeneous polynomial {text!r}", lineno, col + 1)
    return f


def _poly_list(ring, text, lineno, col):
    pieces = [(p, c) for p, c in _split_commas(text, col) if p]
    return [_poly(ring, p, lineno, c) for p, c in pieces]


def _int_list(text, lineno, col):
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise SessionError("expected [n, ...]", lineno, col + 1)
    try:
        return [int(x) for x in body[1:-1].split(",") if x.strip()]
    except ValueError:
        raise SessionError(f"bad integer list {body!r}", lineno, col + 1) from None


def _parse_ring(line, lineno):
    m = _RING.match(line.strip())
    if not m:
        raise SessionError("expected: ring QQ[x,y,...] <order>", lineno, 1)
    field_ = GF(int(m["p"])) if m["p"] else QQ
    names = [v.strip() for v in m["vars"].split(",") if v.strip()]
    order = m["order"] or "grevlex"
    if order not in ORDERS:
        raise SessionError(f"unknown monomial order {order!r}", lineno, line.find(order) + 1)
    try:
        return PolyRing(tuple(names), field_, order)
    except ValueError as exc:
        raise SessionError(str(exc), lineno, line.find("[") + 1) from None


# --- bindings -------------------------------------------------------------------

def _parse_matrix(ring, text, lineno, col):
    body = text.strip()
    if not (body.startswith("[[") and body.endswith("]]")):
        raise SessionError("expected a matrix [[...], ...]", lineno, col + 1)
    inner = body[1:-1]
    rows = []
    for piece, c in _split_commas(inner, col + 1 + (len(text) - len(text.lstrip()))):
        if not (piece.startswith("[") and piece.endswith("]")):
            raise SessionError("expected a matrix row [...]", lineno, c + 1)
        rows.append(_poly_list(ring, piece[1:-1], lineno, c + 1))
    if len({len(r) for r in rows}) > 1:
        raise SessionError("ragged matrix", lineno, col + 1)
    return rows


def _find_keyword(text, word):
    m = re.search(rf"(?<![A-Za-z_0-9]){word}(?![A-Za-z_0-9])", text)
    return m.start() if m else -1


def _parse_module(ring, rhs, col, lineno, bindings):
    mod_at = _find_keyword(rhs, "mod")
    quotient = []
    if mod_at >= 0:
        quotient = _poly_list(ring, rhs[mod_at + 3:], lineno, col + mod_at + 3)
        rhs = rhs[:mod_at]
    ctx = QuotientRingContext(ring, quotient) if quotient else None
    s = rhs.strip()
    lead = col + len(rhs) - len(rhs.lstrip())
    if s.startswith("cyclic"):
        name = s[len("cyclic"):].strip()
        b = bindings.get(name)
        if b is None or b.kind != "ideal":
            raise SessionError(f"unknown ideal {name!r}", lineno, lead + len("cyclic") + 2)
        return Presentation(b.value.as_presentation().relations, ctx)
    if not s.startswith("coker"):
        raise SessionError("expected 'coker [[...]]' or 'cyclic NAME'", lineno, lead + 1)
    tw_at = _find_keyword(s, "twists")
    mat_text = s[len("coker"):tw_at if tw_at >= 0 else len(s)]
    rows = _parse_matrix(ring, mat_text, lineno, lead + len("coker"))
    twists = _int_list(s[tw_at + 6:], lineno, lead + tw_at + 6) if tw_at >= 0 else [0] * len(rows)
    if len(twists) != len(rows):
        raise SessionError(f"{len(twists)} twists for {len(rows)} rows", lineno, lead + max(tw_at, 0) + 1)
    try:
        rel = ModuleMap.from_rows(ring, rows, twists) if rows and rows[0] else \
            ModuleMap.zero(ring, _free(()), _free(tuple(twists)))
    except (StructuralError, ValueError) as exc:
        raise SessionError(f"inhomogeneous matrix: {exc}", lineno, lead + 1) from None
    return Presentation(rel, ctx)


def _free(tw):
    from .groebner import FreeModule
    return FreeModule(tw)


def _canonical_module(P):
    rows = P.relations.to_strings()
    if P.relations.source.rank == 0:
        rows = [[] for _ in range(P.ngens)]
    mat = "[" + ", ".join("[" + ", ".join(r) + "]" for r in rows) + "]"
    out = f"coker {mat} twists [{', '.join(str(t) for t in P.generators.twists)}]"
    if P.ctx:
        out += " mod " + ", ".join(str(g) for g in P.ctx.ideal_gens)
    return out


# --- tasks ---------------------------------------------------------------------

def _parse_task(line, lineno, bindings, ring):
    try:
        words = shlex.split(line)
    except ValueError as exc:
        raise SessionError(str(exc), lineno, 1) from None
    if len(words) < 3:
        raise SessionError("expected: task <kind> NAME key=value ...", lineno, 1)
    kind, target = words[1], words[2]
    if kind not in TASK_KINDS:
        raise SessionError(f"unknown task kind {kind!r}", lineno, line.find(kind) + 1)
    tcol = line.find(target, line.find(kind) + len(kind)) + 1
    if kind != "corpus":
        b = bindings.get(target)
        if b is None:
            raise SessionError(f"unknown name {target!r}", lineno, tcol)
        if kind in IDEAL_TASKS and b.kind != "ideal":
            raise SessionError(f"{kind} needs an ideal, {target!r} is a module", lineno, tcol)
        if kind in MODULE_TASKS and b.kind != "module":
            raise SessionError(f"{kind} needs a module, {target!r} is an ideal", lineno, tcol)
    elif not _NAME.fullmatch(target):
        raise SessionError(f"bad label {target!r}", lineno, tcol)
    allowed = TASK_ARGS[kind]
    args = {}
    search_from = tcol
    for w in words[3:]:
        wcol = line.find(w.split("=")[0], search_from) + 1
        search_from = max(wcol, 1)
        if "=" not in w:
            raise SessionError(f"expected key=value, got {w!r}", lineno, wcol)
        key, val = w.split("=", 1)
        if key not in allowed:
            raise SessionError(f"unknown argument {key!r} for {kind}", lineno, wcol)
        typ = allowed[key]
        vcol = wcol + len(key)
        if typ is int:
            try:
                args[key] = int(val)
            except ValueError:
                raise SessionError(f"{key} must be an integer", lineno, vcol + 1) from None
        elif typ == "ints":
            try:
                args[key] = [int(x) for x in val.split(",") if x.strip()]
            except ValueError:
                raise SessionError(f"{key} must be a list of integers", lineno, vcol + 1) from None
        elif typ == "seq":
            args[key] = [str(f) for f in _poly_list(ring, val, lineno, vcol)]
        elif typ == "poly":
            args[key] = str(_poly(ring, val, lineno, vcol))
        else:
            args[key] = val
    for key in REQUIRED.get(kind, ()):
        if key not in args:
            raise SessionError(f"{kind} requires {key}=", lineno, 1)
    return Task(kind, target, args, lineno)


# --- entry point -------------------------------------------------------------------

def parse_session(text):
    """Parse session text; raises SessionError at the first problem."""
    ring = None
    bindings = {}
    tasks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        head = line.split(None, 1)[0]
        if head == "ring":
            if ring is not None:
                raise SessionError("ring declared twice", lineno, 1)
            ring = _parse_ring(line, lineno)
            continue
        if ring is None:
            raise SessionError("the first statement must declare the ring", lineno, 1)
        if head in ("ideal", "module"):
            m = re.match(rf"\s*{head}\s+([A-Za-z_][A-Za-z_0-9]*)\s*=", line)
            if not m:
                raise SessionError(f"expected: {head} NAME = ...", lineno, 1)
            name = m.group(1)
            if name in bindings:
                raise SessionError(f"name {name!r} already bound", lineno, line.find(name) + 1)
            rhs = line[m.end():]
            col = m.end()
            if head == "ideal":
                gens = _poly_list(ring, rhs, lineno, col)
                I = Ideal(ring, gens)
                src = ", ".join(str(g) for g in gens)
                bindings[name] = Binding(name, "ideal", I, src, lineno)
            else:
                P = _parse_module(ring, rhs, col, lineno, bindings)
                P.name = name
                bindings[name] = Binding(name, "module", P, _canonical_module(P), lineno)
            continue
        if head == "task":
            tasks.append(_parse_task(line, lineno, bindings, ring))
            continue
        raise SessionError(f"unknown statement {head!r}", lineno, line.find(head) + 1)
    if ring is None:
        raise SessionError("empty session: no ring declared", 1, 1)
    return Session(ring, bindings, tasks, text)
