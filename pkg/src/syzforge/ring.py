"""Exact sparse multivariate polynomials over QQ and GF(p).

A polynomial is an immutable map ``exponent tuple -> nonzero coefficient``.
Rational coefficients are ``gmpy2.mpq``; prime-field coefficients are plain
ints in ``[0, p)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations_with_replacement

import gmpy2
from gmpy2 import mpq

GREVLEX = "grevlex"
LEX = "lex"
GRADED_LEX = "graded_lex"
ORDERS = (GREVLEX, LEX, GRADED_LEX)

LT, EQ, GT = -1, 0, 1


class StructuralError(ValueError):
    """Operands do not live in compatible structures (ring, rank, length)."""


class ParseError(ValueError):
    def __init__(self, message, column=None):
        super().__init__(message if column is None else f"{message} (column {column})")
        self.column = column


class _AnyDegree:
    def __repr__(self):
        return "ANY_DEGREE"


ANY_DEGREE = _AnyDegree()


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = GREVLEX

    def __post_init__(self):
        if self.kind not in ORDERS:
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, exps):
        """Sort key: a larger key is a larger monomial."""
        if self.kind == GREVLEX:
            return (sum(exps), tuple(-e for e in reversed(exps)))
        if self.kind == GRADED_LEX:
            return (sum(exps), tuple(exps))
        return tuple(exps)


@dataclass(frozen=True)
class Field:
    """QQ when ``p == 0``, otherwise the prime field GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p:
            if not (1 < self.p < 2**31) or not gmpy2.is_prime(self.p):
                raise ValueError(f"characteristic must be a prime below 2^31, got {self.p}")

    @property
    def name(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __call__(self, value):
        if self.p:
            if isinstance(value, (Fraction, type(mpq()))):
                num, den = int(value.numerator), int(value.denominator)
                if den % self.p == 0:
                    raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
                return num * pow(den, -1, self.p) % self.p
            return int(value) % self.p
        if isinstance(value, str):
            return mpq(value)
        return mpq(value)

    def one(self):
        return 1 if self.p else mpq(1)

    def zero(self):
        return 0 if self.p else mpq(0)

    def inv(self, a):
        if self.p:
            return pow(int(a), -1, self.p)
        return 1 / a

    def fmt(self, c):
        return str(int(c)) if self.p else str(c)


QQ = Field(0)


def GF(p):
    return Field(p)


_VAR_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


@dataclass(frozen=True)
class PolyRing:
    variables: tuple
    field: Field = QQ
    order: MonomialOrder = MonomialOrder(GREVLEX)
    _keycache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")
        for v in self.variables:
            if not _VAR_RE.match(v):
                raise ValueError(f"bad variable name {v!r}")
        if isinstance(self.order, str):
            object.__setattr__(self, "order", MonomialOrder(self.order))

    @property
    def nvars(self):
        return len(self.variables)

    @property
    def p(self):
        return self.field.p

    def mkey(self, exps):
        k = self._keycache.get(exps)
        if k is None:
            k = self._keycache[exps] = self.order.key(exps)
        return k

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name):
        i = self.variables.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one()})

    def gens(self):
        return [self.var(v) for v in self.variables]

    def monomial(self, exps, coeff=1):
        c = self.field(coeff)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def monomials_of_degree(self, d):
        """All exponent tuples of total degree ``d``, in increasing order."""
        cache = self._keycache.setdefault(("deg", d), None)
        if cache is not None:
            return cache
        if d < 0:
            out = []
        else:
            out = []
            n = self.nvars
            for combo in combinations_with_replacement(range(n), d):
                e = [0] * n
                for i in combo:
                    e[i] += 1
                out.append(tuple(e))
            out.sort(key=self.mkey)
        self._keycache[("deg", d)] = out
        return out

    def parse(self, text):
        return parse_polynomial(self, text)

    def describe(self):
        return f"{self.field.name}[{','.join(self.variables)}] {self.order.kind}"


def compare_monomials(a, b, order=MonomialOrder(GREVLEX)):
    if len(a) != len(b):
        raise StructuralError(f"monomial lengths differ: {len(a)} vs {len(b)}")
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return GT if ka > kb else LT if ka < kb else EQ


def _add_into(acc, terms, scale, p):
    for e, c in terms.items():
        v = acc.get(e)
        v = c * scale if v is None else v + c * scale
        if p:
            v %= p
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # --- construction helpers -------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise StructuralError("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction, type(mpq()))):
            return self.ring.const(other)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, type(mpq()))):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # --- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        _add_into(acc, other.terms, 1, self.ring.p)
        return Polynomial(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {e: (-c) % p if p else -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        _add_into(acc, other.terms, -1, self.ring.p)
        return Polynomial(self.ring, acc)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        acc = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = acc.get(e, 0) + c1 * c2
                if p:
                    v %= p
                if v:
                    acc[e] = v
                else:
                    acc.pop(e, None)
        return Polynomial(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c):
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        p = self.ring.p
        return Polynomial(self.ring, {e: (v * c) % p if p else v * c for e, v in self.terms.items()})

    # --- inspection -----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.mkey(t[0]), reverse=True)

    def lead(self):
        if not self.terms:
            return None
        return max(self.terms, key=self.ring.mkey)

    def lead_coeff(self):
        return self.terms[self.lead()] if self.terms else self.ring.field.zero()

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_degree(self):
        return homogeneity_check(self)

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero())

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def poly_arith(f, g, op):
    """Dispatch ``add | sub | mul | scale``; ``scale`` takes a scalar ``g``."""
    if op == "scale":
        return f.scale(g)
    if not isinstance(g, Polynomial) or f.ring != g.ring:
        raise StructuralError("poly_arith needs two polynomials over one ring")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def homogeneity_check(f):
    """Common total degree of all terms, ``ANY_DEGREE`` for 0, ``None`` if mixed."""
    degs = {sum(e) for e in f.terms}
    if not degs:
        return ANY_DEGREE
    if len(degs) == 1:
        return degs.pop()
    return None


def format_monomial(ring, exps):
    parts = []
    for v, e in zip(ring.variables, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_polynomial(f):
    if not f.terms:
        return "0"
    out = []
    p = f.ring.p
    for e, c in f.sorted_terms():
        if p and c > p // 2:
            c = c - p
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(f.ring, e)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# --- parsing -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1):
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            if not m.group(3).isspace():
                toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, ring, text):
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of input'!r}", t[2] + 1)

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                acc = acc * self.factor()
            elif t[0] == "op" and t[1] == "/":
                self.take()
                d = self.factor()
                if d.degree() > 0 or d.is_zero():
                    raise ParseError("division only by nonzero constants", t[2] + 1)
                acc = acc.scale(self.ring.field.inv(d.constant_coeff()))
            elif t[0] in ("num", "name") or (t[0] == "op" and t[1] == "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            t = self.take()
            if t[0] != "num":
                raise ParseError("exponent must be a non-negative integer", t[2] + 1)
            base = base ** int(t[1])
        return base

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return self.ring.const(int(t[1]))
        if t[0] == "name":
            if t[1] not in self.ring.variables:
                raise ParseError(f"unknown variable {t[1]!r}", t[2] + 1)
            return self.ring.var(t[1])
        if t[1] == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if t[1] == "-":
            return -self.factor()
        raise ParseError(f"unexpected {t[1] or 'end of input'!r}", t[2] + 1)


def parse_polynomial(ring, text):
    parser = _Parser(ring, text)
    out = parser.expr()
    t = parser.peek()
    if t[0] != "end":
        raise ParseError(f"unexpected {t[1]!r}", t[2] + 1)
    return out
