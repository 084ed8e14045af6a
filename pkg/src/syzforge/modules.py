"""Finitely presented graded modules over ``R`` or a quotient ``R/I``.

A quotient ring is never given its own arithmetic: a module "over R/I" is an
R-module whose relations implicitly include ``I * F0``.  Every routine that
accepts ``ctx`` honours that convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .groebner import (
    FreeModule,
    Lifter,
    ModuleMap,
    _Engine,
    buchberger,
    hstack,
    syzygy_matrix,
    vec_degree,
    vec_from_polys,
    vec_restrict,
)
from .linalg import Echelon, free_dim, ideal_multiples, minimal_subset, multiples_in_degree
from .ring import Polynomial, StructuralError


class QuotientRingContext:
    """``R/(ideal_gens)``; generators must be homogeneous."""

    def __init__(self, base, ideal_gens=()):
        self.base = base
        gens = [base.parse(g) if isinstance(g, str) else g for g in ideal_gens]
        self.ideal_gens = tuple(g for g in gens if g)
        for g in self.ideal_gens:
            if g.homogeneous_degree() is None:
                raise ValueError(f"ideal generator {g} is not homogeneous")
        self._engine = None
        if self.ideal_gens:
            gb = buchberger([[g] for g in self.ideal_gens], FreeModule((0,)), base)
            self._engine = gb._engine
            self.gb = gb
        else:
            self.gb = None

    def __bool__(self):
        return bool(self.ideal_gens)

    def __repr__(self):
        return f"QuotientRingContext({self.base.describe()} / ({', '.join(map(str, self.ideal_gens))}))"

    def ideal_terms(self):
        return [g.terms for g in self.ideal_gens]

    def reduce_poly(self, f):
        if self._engine is None:
            return f
        r = self._engine.full_reduce({(0, e): c for e, c in f.terms.items()})
        return Polynomial(self.base, {e: c for (_p, e), c in r.items()})

    def reduce_vec(self, v):
        if self._engine is None or not v:
            return v
        by_pos = {}
        for (pos, e), c in v.items():
            by_pos.setdefault(pos, {})[(0, e)] = c
        out = {}
        for pos, terms in by_pos.items():
            for (_z, e), c in self._engine.full_reduce(terms).items():
                out[(pos, e)] = c
        return out

    def contains(self, f):
        return self.reduce_poly(f).is_zero()

    def extended(self, more):
        return QuotientRingContext(self.base, self.ideal_gens + tuple(more))

    @property
    def length(self):
        return len(self.ideal_gens)


def as_ctx(ctx):
    return ctx if ctx else None


class Ideal:
    def __init__(self, ring, generators):
        self.ring = ring
        gens = [ring.parse(g) if isinstance(g, str) else g for g in generators]
        self.generators = tuple(g for g in gens if g)
        for g in self.generators:
            if g.homogeneous_degree() is None:
                raise ValueError(f"ideal generator {g} is not homogeneous")

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators)) or '0'})"

    def __str__(self):
        return "(" + ", ".join(map(str, self.generators)) + ")" if self.generators else "(0)"

    def is_zero(self):
        return not self.generators

    @cached_property
    def gb(self):
        return buchberger([[g] for g in self.generators], FreeModule((0,)), self.ring)

    def contains(self, f):
        if f.is_zero():
            return True
        if not self.generators:
            return False
        return self.gb.contains({(0, e): c for e, c in f.terms.items()})

    def is_unit(self, ctx=None):
        gens = self.generators + (ctx.ideal_gens if ctx else ())
        return any(g.degree() == 0 for g in gens) or any(
            sum(e) == 0 for (_p, e) in (Ideal(self.ring, gens).gb.leads if gens else []))

    def leading_monomials(self):
        return [e for (_p, e) in self.gb.leads] if self.generators else []

    def contains_ideal(self, other):
        return all(self.contains(g) for g in other.generators)

    def __add__(self, other):
        return Ideal(self.ring, self.generators + other.generators)

    def as_presentation(self):
        """Presentation of ``R/I``."""
        return Presentation(ModuleMap.from_rows(self.ring, [list(self.generators)], [0])
                            if self.generators else ModuleMap.zero(self.ring, FreeModule(()), FreeModule((0,))))

    def to_json(self):
        return [str(g) for g in self.generators]


@dataclass
class Presentation:
    """``coker(relations: F1 -> F0)``, over ``R/I`` when ``ctx`` is set."""

    relations: ModuleMap
    ctx: QuotientRingContext = None
    name: str = field(default=None, compare=False)

    def __post_init__(self):
        self.ctx = as_ctx(self.ctx)

    @property
    def ring(self):
        return self.relations.ring

    @property
    def generators(self):
        return self.relations.target

    @property
    def ngens(self):
        return self.relations.target.rank

    @classmethod
    def free(cls, ring, twists, ctx=None):
        return cls(ModuleMap.zero(ring, FreeModule(()), FreeModule(tuple(twists))), ctx)

    @classmethod
    def cyclic(cls, ring, ideal_gens, ctx=None):
        return cls(Ideal(ring, ideal_gens).as_presentation().relations, ctx)

    @classmethod
    def from_rows(cls, ring, rows, twists=None, ctx=None):
        return cls(ModuleMap.from_rows(ring, rows, twists), ctx)

    def explicit_relations(self):
        """Relations over R, with ``I * F0`` materialised as extra columns."""
        if not self.ctx:
            return self.relations
        ring = self.ring
        cols = list(self.relations.columns)
        tw = list(self.relations.source.twists)
        for pos, t in enumerate(self.generators.twists):
            for g in self.ctx.ideal_gens:
                cols.append({(pos, e): c for e, c in g.terms.items()})
                tw.append(t + g.degree())
        return ModuleMap(ring, FreeModule(tuple(tw)), self.generators, cols, check=False)

    def over_base(self):
        return Presentation(self.explicit_relations())

    def max_degree(self):
        ds = list(self.relations.source.twists) + list(self.generators.twists)
        if self.ctx:
            ds += [g.degree() + t for g in self.ctx.ideal_gens for t in self.generators.twists]
        return max(ds, default=0)

    def default_bound(self):
        return self.max_degree() + 4

    def to_json(self):
        return {
            "generator_twists": list(self.generators.twists),
            "relation_twists": list(self.relations.source.twists),
            "relations": self.relations.to_strings(),
            "quotient_by": [str(g) for g in self.ctx.ideal_gens] if self.ctx else [],
        }


def ideal_of_vectors(ring, vecs, pos=0):
    return Ideal(ring, [Polynomial(ring, {e: c for (q, e), c in v.items() if q == pos}) for v in vecs])


# --- minimal presentations -------------------------------------------------------

@dataclass
class MinimalPresentation:
    presentation: Presentation
    kept: tuple           # old generator indices that survive, in order
    express: ModuleMap    # old F0 -> new F0: each old generator in terms of the survivors


def minimal_generators(P, ctx=None):
    """Equivalent presentation whose generators are minimal (graded Nakayama).

    Constant entries are used as pivots to eliminate generators (lowest
    degree first, then row-major); redundant relations are then dropped.
    """
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    ring = P.ring
    p = ring.p
    z = (0,) * ring.nvars
    r = P.ngens
    tw = P.generators.twists
    cols = [ctx.reduce_vec(dict(c)) if ctx else dict(c) for c in P.relations.columns]
    col_tw = list(P.relations.source.twists)
    alive = list(range(r))
    express = {i: {(i, z): ring.field.one()} for i in range(r)}
    while True:
        pivot = None
        for ci in sorted(range(len(cols)), key=lambda k: (col_tw[k], k)):
            col = cols[ci]
            units = sorted(pos for (pos, e) in col if sum(e) == 0)
            if units:
                pivot = (ci, units[0])
                break
        if pivot is None:
            break
        ci, row = pivot
        pc = cols[ci]
        a = pc[(row, z)]
        inv = ring.field.inv(a)
        # e_row = -(1/a) * (pc - a e_row)
        repl = {k: ((-c * inv) % p if p else -c * inv) for k, c in pc.items() if k != (row, z)}
        newcols, newtw = [], []
        for k, col in enumerate(cols):
            if k == ci:
                continue
            c_r = [(e, c) for (pos, e), c in col.items() if pos == row]
            col = {kk: v for kk, v in col.items() if kk[0] != row}
            for e, c in c_r:
                _axpy_mono(col, c, e, repl, p)
            if ctx:
                col = ctx.reduce_vec(col)
            newcols.append(col)
            newtw.append(col_tw[k])
        cols, col_tw = newcols, newtw
        for i in express:
            ex = express[i]
            c_r = [(e, c) for (pos, e), c in ex.items() if pos == row]
            if c_r:
                ex = {kk: v for kk, v in ex.items() if kk[0] != row}
                for e, c in c_r:
                    _axpy_mono(ex, c, e, repl, p)
                express[i] = ctx.reduce_vec(ex) if ctx else ex
        alive.remove(row)
    remap = {old: new for new, old in enumerate(alive)}
    cols = [{(remap[pos], e): c for (pos, e), c in col.items()} for col in cols]
    new_tw = tuple(tw[i] for i in alive)
    keep = minimal_subset(ring, cols, new_tw, ideal_terms=ctx.ideal_terms() if ctx else ())
    cols = [cols[i] for i in keep]
    rel = ModuleMap(ring, FreeModule(tuple(col_tw[i] for i in keep)), FreeModule(new_tw), cols, check=False)
    ex_cols = [{(remap[pos], e): c for (pos, e), c in express[i].items()} for i in range(r)]
    ex_map = ModuleMap(ring, P.generators, FreeModule(new_tw), ex_cols, check=False)
    return MinimalPresentation(Presentation(rel, ctx, P.name), tuple(alive), ex_map)


def _axpy_mono(acc, c, mono, src, p):
    for (pos, e), x in src.items():
        k = (pos, tuple(a + b for a, b in zip(e, mono)))
        nv = acc.get(k, 0) + c * x
        if p:
            nv %= p
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def minimize_presentation(P, ctx=None):
    return minimal_generators(P, ctx).presentation


# --- Hom into the ring ---------------------------------------------------------

def hom_functionals(P, ctx=None):
    """Generators of ``Hom(M, R)`` as functionals on ``F0``: ``ker(relations^T)``."""
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    return syzygy_matrix(P.relations.transpose(), ctx)


def hom_of_submodule(S, beta_index, ctx=None):
    """Order ideal of the generator ``beta_index`` of ``S = coker(B)``."""
    if not 0 <= beta_index < S.ngens:
        raise IndexError(f"beta_index {beta_index} out of range for {S.ngens} generators")
    ctx = as_ctx(ctx if ctx is not None else S.ctx)
    K = hom_functionals(S, ctx)
    ring = S.ring
    gens = []
    for col in K.columns:
        f = Polynomial(ring, {e: c for (pos, e), c in col.items() if pos == beta_index})
        if ctx:
            f = ctx.reduce_poly(f)
        if f:
            gens.append(f)
    return Ideal(ring, gens)


# --- base change, Hilbert function, annihilator ------------------------------

def base_change_quotient(P, ctx):
    """``M (x) R/I`` as a module over the quotient context."""
    if P.ctx:
        ctx = P.ctx.extended(ctx.ideal_gens) if ctx else P.ctx
    rel = P.relations.reduce_entries(ctx)
    keep = [j for j, c in enumerate(rel.columns) if c]
    return Presentation(rel.select_columns(keep), ctx, P.name)


def hilbert_function(P, D, ctx=None):
    """``[dim_k M_d for d in 0..D]`` by truncated linear algebra."""
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    ring = P.ring
    tw = P.generators.twists
    out = []
    ideal_terms = ctx.ideal_terms() if ctx else ()
    cols = list(P.relations.columns)
    for d in range(D + 1):
        ech = Echelon(ring.p)
        for c in cols:
            for m in multiples_in_degree(ring, c, tw, d):
                ech.add(m)
        for m in ideal_multiples(ring, ideal_terms, tw, d):
            ech.add(m)
        out.append(free_dim(ring, tw, d) - len(ech))
    return out


def annihilator(P, ctx=None):
    """``ann_R(M)`` (including ``I`` over a quotient), via one kernel computation.

    ``r`` annihilates M iff ``r e_j`` lies in the relations for every generator
    ``e_j``; stacking those conditions gives a map whose kernel projects onto
    the annihilator.
    """
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    ring = P.ring
    r = P.ngens
    if r == 0:
        return Ideal(ring, [ring.one()])
    tw = P.generators.twists
    A = P.relations
    z = (0,) * ring.nvars
    one = ring.field.one()
    tgt = []
    for j in range(r):
        tgt.extend(t - tw[j] for t in tw)
    first = {(j * r + j, z): one for j in range(r)}
    cols = [first]
    src = [0]
    for j in range(r):
        for k, col in enumerate(A.columns):
            cols.append({(pos + j * r, e): c for (pos, e), c in col.items()})
            src.append(A.source.twists[k] - tw[j])
    big = ModuleMap(ring, FreeModule(tuple(src)), FreeModule(tuple(tgt)), cols, check=False)
    K = syzygy_matrix(big, ctx, minimal=False)
    gens = [Polynomial(ring, {e: c for (pos, e), c in col.items() if pos == 0}) for col in K.columns]
    gens = [g for g in gens if g]
    if ctx:
        gens = list(ctx.ideal_gens) + gens
    return minimal_ideal(Ideal(ring, gens))


def minimal_ideal(I):
    ring = I.ring
    vecs = [{(0, e): c for e, c in g.terms.items()} for g in I.generators]
    keep = minimal_subset(ring, vecs, (0,))
    return Ideal(ring, [I.generators[i] for i in keep])


def ideal_quotient(I, f, ctx=None):
    """``(I : f)`` via the kernel of ``[f | I]``."""
    ring = I.ring
    d = f.homogeneous_degree()
    gens = list(I.generators)
    row = [f] + gens
    A = ModuleMap(ring, FreeModule(tuple([d] + [g.degree() for g in gens])), FreeModule((0,)),
                  [vec_from_polys([g]) for g in row], check=False)
    K = syzygy_matrix(A, ctx, minimal=False)
    out = [Polynomial(ring, {e: c for (pos, e), c in col.items() if pos == 0}) for col in K.columns]
    return minimal_ideal(Ideal(ring, [g for g in out if g] + (list(ctx.ideal_gens) if ctx else [])))


def element_annihilator(P, v, ctx=None):
    """``{r : r v = 0 in M}`` for a homogeneous vector ``v`` of ``F0``."""
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    ring = P.ring
    d = vec_degree(v, P.generators.twists)
    A = hstack(ring, P.generators, [
        ModuleMap(ring, FreeModule((d,)), P.generators, [v], check=False), P.relations])
    K = syzygy_matrix(A, ctx, minimal=False)
    out = [Polynomial(ring, {e: c for (pos, e), c in col.items() if pos == 0}) for col in K.columns]
    out = [ctx.reduce_poly(g) if ctx else g for g in out]
    return minimal_ideal(Ideal(ring, [g for g in out if g]))


def is_zero_module(P, ctx=None):
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    if P.ngens == 0:
        return True
    lift = Lifter(P.relations, ctx)
    z = (0,) * P.ring.nvars
    one = P.ring.field.one()
    return all(lift.solve({(j, z): one}) is not None for j in range(P.ngens))


def subquotient(Z, D, ctx=None):
    """Presentation of ``(im Z + im D) / im D`` with generators the columns of ``Z``."""
    ring = Z.ring
    k = Z.source.rank
    if k == 0:
        return Presentation(ModuleMap.zero(ring, FreeModule(()), FreeModule(())), ctx)
    A = hstack(ring, Z.target, [Z, D])
    K = syzygy_matrix(A, ctx, minimal=False)
    cols = [vec_restrict(c, 0, k) for c in K.columns]
    cols = [c for c in cols if c]
    tw = Z.source.twists
    keep = minimal_subset(ring, cols, tw)
    cols = [cols[i] for i in keep]
    rel = ModuleMap(ring, FreeModule(tuple(vec_degree(c, tw) for c in cols)), Z.source, cols, check=False)
    return Presentation(rel, ctx)


def induced_map_kernel(P, Q, phi, ctx=None):
    """Generators (in ``P.F0``) of the kernel of the map ``P -> Q`` induced by ``phi: P.F0 -> Q.F0``."""
    ring = P.ring
    A = hstack(ring, Q.generators, [phi, Q.relations])
    K = syzygy_matrix(A, ctx, minimal=False)
    a = P.ngens
    return [vec_restrict(c, 0, a) for c in K.columns]


def is_injective(P, Q, phi, ctx=None):
    ctx = as_ctx(ctx if ctx is not None else Q.ctx)
    kern = induced_map_kernel(P, Q, phi, ctx)
    if not kern:
        return True
    lift = Lifter(P.relations, ctx)
    return all(not v or lift.solve(v) is not None for v in kern)


def well_defined(P, Q, phi, ctx=None):
    """First relation of ``P`` whose image under ``phi`` is not a relation of ``Q`` (or None)."""
    ctx = as_ctx(ctx if ctx is not None else Q.ctx)
    lift = Lifter(Q.relations, ctx)
    for j, col in enumerate(P.relations.columns):
        img = phi.apply(col)
        if img and lift.solve(img) is None:
            return j
    return None


# --- Hilbert series via initial modules ------------------------------------------

def _minimalize_monomials(gens):
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _poly_sub(a, b, shift=0):
    out = dict(a)
    for k, v in b.items():
        out[k + shift] = out.get(k + shift, 0) - v
        if not out[k + shift]:
            del out[k + shift]
    return out


def _hs_numerator(gens):
    """Numerator ``N(t)`` with ``HS(R/J) = N(t) / (1-t)^n``."""
    gens = _minimalize_monomials(gens)
    if not gens:
        return {0: 1}
    if any(sum(g) == 0 for g in gens):
        return {}
    supports = [frozenset(i for i, x in enumerate(g) if x) for g in gens]
    if all(supports[i].isdisjoint(supports[j]) for i in range(len(gens)) for j in range(i)):
        out = {0: 1}
        for g in gens:
            out = _poly_sub(out, out, sum(g))
        return out
    m = gens[-1]
    rest = gens[:-1]
    colon = [tuple(max(a - b, 0) for a, b in zip(g, m)) for g in rest]
    return _poly_sub(_hs_numerator(rest), _hs_numerator(colon), sum(m))


def hilbert_series_numerator(P, ctx=None):
    """``N(t)`` (as a dict) with ``HS(M) = N(t)/(1-t)^n``, from the initial module."""
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    gb = buchberger(list(P.relations.columns), P.generators, P.ring, ctx)
    by_pos = {}
    for (pos, e) in gb.leads:
        by_pos.setdefault(pos, []).append(e)
    out = {}
    for pos, t in enumerate(P.generators.twists):
        num = _hs_numerator(by_pos.get(pos, []))
        for k, v in num.items():
            out[k + t] = out.get(k + t, 0) + v
            if not out[k + t]:
                del out[k + t]
    return out


def dimension_and_multiplicity(P, ctx=None):
    """Krull dimension and multiplicity (``-1, 0`` for the zero module)."""
    num = hilbert_series_numerator(P, ctx)
    n = P.ring.nvars
    if not num:
        return -1, 0
    coeffs = dict(num)
    k = n
    while k > 0 and sum(coeffs.values()) == 0:
        # divide by (1 - t)
        q = {}
        lo, hi = min(coeffs), max(coeffs)
        carry = 0
        for i in range(lo, hi + 1):
            carry += coeffs.get(i, 0)
            if carry:
                q[i] = carry
        coeffs = q
        k -= 1
    return k, sum(coeffs.values())


def krull_dimension(P, ctx=None):
    return dimension_and_multiplicity(P, ctx)[0]


def module_rank(P, ctx=None):
    """Rank over ``R`` (or ``R/I``): ratio of multiplicities when dimensions agree."""
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    dm, em = dimension_and_multiplicity(P, ctx)
    ring_pres = Presentation.free(P.ring, (0,), ctx)
    dr, er = dimension_and_multiplicity(ring_pres, ctx)
    if dm < dr:
        return 0
    if em % er:
        raise ValueError("module has no well-defined rank (multiplicity not divisible)")
    return em // er


def height(I, ctx=None):
    """Codimension of ``I`` in ``R`` (or ``R/I0``) from Hilbert series; experimental."""
    ring = I.ring
    P = I.as_presentation()
    ctx = as_ctx(ctx)
    d = krull_dimension(Presentation(P.relations, ctx))
    d_ring = krull_dimension(Presentation.free(ring, (0,), ctx))
    return d_ring - d
