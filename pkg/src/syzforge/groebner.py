"""Module Groebner bases over graded free modules.

Vectors are dicts ``{(position, exponents): coefficient}``.  The module order
is position-over-term with lower positions larger, refining the ring order
inside each position.  Syzygies and lifts come from a single Buchberger run on
the generators augmented by an identity block: with positions of the target
dominating, elements whose target part reduces to zero are exactly the
relations, and their identity part records them.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .linalg import minimal_subset, vec_degree
from .ring import Polynomial, StructuralError


class InhomogeneousError(ValueError):
    pass


@dataclass(frozen=True)
class FreeModule:
    """Free module ``sum R(-twists[j])``; basis vector j sits in degree ``twists[j]``."""

    twists: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(t) for t in self.twists))

    @property
    def rank(self):
        return len(self.twists)

    @classmethod
    def of_rank(cls, rank, degree=0):
        return cls((degree,) * rank)

    def dual(self):
        return FreeModule(tuple(-t for t in self.twists))

    def shifted(self, k):
        """Generators moved up by ``k`` degrees."""
        return FreeModule(tuple(t + k for t in self.twists))

    def __add__(self, other):
        return FreeModule(self.twists + other.twists)


# --- vector primitives ---------------------------------------------------------

def vec_from_polys(polys):
    v = {}
    for pos, f in enumerate(polys):
        for e, c in f.terms.items():
            v[(pos, e)] = c
    return v


def vec_entries(v, rank, ring):
    """Dense list of Polynomials."""
    rows = [dict() for _ in range(rank)]
    for (pos, e), c in v.items():
        rows[pos][e] = c
    return [Polynomial(ring, r) for r in rows]


def vec_entry(v, pos, ring):
    return Polynomial(ring, {e: c for (q, e), c in v.items() if q == pos})


def vec_axpy(acc, c, mono, src, p):
    """``acc += c * mono * src`` in place."""
    if mono is None or not any(mono):
        for k, x in src.items():
            nv = acc.get(k, 0) + c * x
            if p:
                nv %= p
            if nv:
                acc[k] = nv
            else:
                acc.pop(k, None)
        return acc
    for (pos, e), x in src.items():
        k = (pos, tuple(a + b for a, b in zip(e, mono)))
        nv = acc.get(k, 0) + c * x
        if p:
            nv %= p
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def vec_add(a, b, p, scale=1):
    return vec_axpy(dict(a), scale, None, b, p)


def vec_scale(v, c, p):
    if not c:
        return {}
    if p:
        return {k: (x * c) % p for k, x in v.items()}
    return {k: x * c for k, x in v.items()}


def vec_mul_poly(v, f, p):
    out = {}
    for e, c in f.terms.items():
        vec_axpy(out, c, e, v, p)
    return out


def vec_reindex(v, offset):
    return {(pos + offset, e): c for (pos, e), c in v.items()}


def vec_restrict(v, lo, hi, offset=0):
    """Keep positions in ``[lo, hi)``, renumbered by ``-lo + offset``."""
    return {(pos - lo + offset, e): c for (pos, e), c in v.items() if lo <= pos < hi}


def vec_is_homogeneous(v, twists):
    return len({sum(e) + twists[pos] for (pos, e) in v}) <= 1


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _quot(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _Order:
    """Term order on module terms: lower position first, then ring order."""

    def __init__(self, ring):
        self.ring = ring
        mkey = ring.mkey
        self.key = lambda t: (-t[0], mkey(t[1]))

    def lead(self, v):
        return max(v, key=self.key)


# --- Buchberger core -----------------------------------------------------------

class _Engine:
    """Homogeneous Buchberger with the normal selection strategy.

    Positions ``>= boundary`` are tracking positions: an element whose leading
    term falls there has zero visible part and is emitted as a relation instead
    of joining the basis.
    """

    def __init__(self, ring, twists, boundary=None):
        self.ring = ring
        self.p = ring.p
        self.twists = twists
        self.boundary = len(twists) if boundary is None else boundary
        self.order = _Order(ring)
        self.basis = []
        self.leads = []
        self.by_pos = {}
        self.relations = []
        self.pairs = set()
        self.heap = []

    def _find_divisor(self, term):
        pos, e = term
        for idx in self.by_pos.get(pos, ()):
            if _divides(self.leads[idx][1], e):
                return idx
        return None

    def top_reduce(self, v):
        v = dict(v)
        key = self.order.key
        p = self.p
        while v:
            t = max(v, key=key)
            if t[0] >= self.boundary:
                return v
            idx = self._find_divisor(t)
            if idx is None:
                return v
            c = v[t]
            g = self.basis[idx]
            vec_axpy(v, (-c) % p if p else -c, _quot(t[1], self.leads[idx][1]), g, p)
        return v

    def full_reduce(self, v, upto=None):
        """Reduce every term in positions below ``upto`` (default boundary)."""
        upto = self.boundary if upto is None else upto
        v = dict(v)
        rem = {}
        key = self.order.key
        p = self.p
        while v:
            t = max(v, key=key)
            if t[0] >= upto:
                rem.update(v)
                break
            idx = self._find_divisor(t)
            if idx is None:
                rem[t] = v.pop(t)
                continue
            c = v[t]
            vec_axpy(v, (-c) % p if p else -c, _quot(t[1], self.leads[idx][1]), self.basis[idx], p)
        return rem

    def _monic(self, v):
        t = self.order.lead(v)
        c = v[t]
        if self.p:
            inv = pow(int(c), -1, self.p)
            return {k: (x * inv) % self.p for k, x in v.items()}, t
        return {k: x / c for k, x in v.items()}, t

    def _pair_degree(self, lcm, pos):
        return sum(lcm) + self.twists[pos]

    def _add(self, v):
        v, lead = self._monic(v)
        n = len(self.basis)
        pos, mf = lead
        # Gebauer-Moeller: prune old pairs made redundant by the new lead
        dead = []
        for (i, j) in self.pairs:
            if self.leads[i][0] != pos:
                continue
            lij = _lcm(self.leads[i][1], self.leads[j][1])
            if (_divides(mf, lij) and _lcm(self.leads[i][1], mf) != lij
                    and _lcm(self.leads[j][1], mf) != lij):
                dead.append((i, j))
        for d in dead:
            self.pairs.discard(d)
        cands = {}
        for i in self.by_pos.get(pos, ()):
            lcm = _lcm(self.leads[i][1], mf)
            cands.setdefault(lcm, []).append(i)
        lcms = sorted(cands, key=lambda m: (sum(m), m))
        kept = []
        for m in lcms:
            if any(_divides(k, m) and k != m for k in kept):
                continue
            kept.append(m)
        for m in kept:
            i = min(cands[m])
            self.pairs.add((i, n))
            heapq.heappush(self.heap, (self._pair_degree(m, pos), i, n))
        self.basis.append(v)
        self.leads.append(lead)
        self.by_pos.setdefault(pos, []).append(n)

    def _spoly(self, i, j):
        li, lj = self.leads[i], self.leads[j]
        lcm = _lcm(li[1], lj[1])
        s = {}
        vec_axpy(s, 1, _quot(lcm, li[1]), self.basis[i], self.p)
        vec_axpy(s, -1 if not self.p else self.p - 1, _quot(lcm, lj[1]), self.basis[j], self.p)
        return s

    def _consume(self, v):
        r = self.top_reduce(v)
        if not r:
            return
        lead = self.order.lead(r)
        if lead[0] >= self.boundary:
            self.relations.append(r)
        else:
            self._add(r)

    def run(self, gens):
        gens = [g for g in gens if g]
        degs = [vec_degree(g, self.twists) for g in gens]
        queue = sorted(range(len(gens)), key=lambda i: (degs[i], i))
        qi = 0
        while qi < len(queue) or self.heap:
            next_in = degs[queue[qi]] if qi < len(queue) else None
            next_pair = self.heap[0][0] if self.heap else None
            if next_pair is None or (next_in is not None and next_in <= next_pair):
                self._consume(gens[queue[qi]])
                qi += 1
                continue
            _, i, j = heapq.heappop(self.heap)
            if (i, j) not in self.pairs:
                continue
            self.pairs.discard((i, j))
            self._consume(self._spoly(i, j))
        return self

    def interreduced(self):
        """Reduced basis: minimal leads, tails fully reduced, monic."""
        idx = list(range(len(self.basis)))
        minimal = []
        for i in idx:
            pos, e = self.leads[i]
            if any(j != i and self.leads[j][0] == pos and _divides(self.leads[j][1], e)
                   and (self.leads[j][1] != e or j < i) for j in idx):
                continue
            minimal.append(i)
        sub = _Engine(self.ring, self.twists, self.boundary)
        for i in minimal:
            sub.basis.append(self.basis[i])
            sub.leads.append(self.leads[i])
            sub.by_pos.setdefault(self.leads[i][0], []).append(len(sub.basis) - 1)
        out = []
        for k in range(len(sub.basis)):
            g = sub.basis[k]
            lead = sub.leads[k]
            tail = {t: c for t, c in g.items() if t != lead}
            saved = sub.by_pos[lead[0]]
            sub.by_pos[lead[0]] = [j for j in saved if j != k]
            red = sub.full_reduce(tail, upto=len(self.twists))
            sub.by_pos[lead[0]] = saved
            red[lead] = g[lead]
            out.append(red)
        final = _Engine(self.ring, self.twists, self.boundary)
        order = sorted(range(len(out)), key=lambda k: (sub.leads[k][0], self.ring.mkey(sub.leads[k][1])))
        for k in order:
            final.basis.append(out[k])
            final.leads.append(sub.leads[k])
            final.by_pos.setdefault(sub.leads[k][0], []).append(len(final.basis) - 1)
        return final


def _coerce(ring, x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, str):
        return ring.parse(x)
    return ring.const(x)


# --- public types --------------------------------------------------------------

class ModuleMap:
    """Graded homomorphism ``source -> target`` given by the images of source basis vectors."""

    __slots__ = ("ring", "source", "target", "columns")

    def __init__(self, ring, source, target, columns, check=True):
        self.ring = ring
        self.source = source if isinstance(source, FreeModule) else FreeModule(source)
        self.target = target if isinstance(target, FreeModule) else FreeModule(target)
        self.columns = tuple(columns)
        if check:
            self.validate()

    def validate(self):
        if len(self.columns) != self.source.rank:
            raise StructuralError(f"{len(self.columns)} columns for source rank {self.source.rank}")
        tw = self.target.twists
        for j, col in enumerate(self.columns):
            for (pos, e) in col:
                if pos >= len(tw):
                    raise StructuralError(f"column {j} has entry in row {pos} beyond target rank")
                if sum(e) + tw[pos] != self.source.twists[j]:
                    raise InhomogeneousError(
                        f"column {j}: term in row {pos} has degree {sum(e) + tw[pos]}, "
                        f"expected {self.source.twists[j]}")

    @classmethod
    def from_rows(cls, ring, rows, target_twists=None, source_twists=None):
        """Build from a dense row-major matrix of Polynomials (or strings).

        Missing source twists are inferred from column degrees; an all-zero
        column is placed in degree 0 unless stated.
        """
        rows = [[_coerce(ring, x) for x in r] for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise StructuralError("ragged matrix")
        tt = tuple(target_twists) if target_twists is not None else (0,) * nrows
        if source_twists is None:
            st = []
            for j in range(ncols):
                d = None
                for i in range(nrows):
                    f = rows[i][j]
                    for e in f.terms:
                        d = sum(e) + tt[i]
                        break
                    if d is not None:
                        break
                st.append(0 if d is None else d)
        else:
            st = list(source_twists)
        cols = [vec_from_polys([rows[i][j] for i in range(nrows)]) for j in range(ncols)]
        return cls(ring, FreeModule(tuple(st)), FreeModule(tt), cols)

    @classmethod
    def identity(cls, ring, module):
        one = ring.field.one()
        z = (0,) * ring.nvars
        return cls(ring, module, module, [{(j, z): one} for j in range(module.rank)], check=False)

    @classmethod
    def zero(cls, ring, source, target):
        return cls(ring, source, target, [{} for _ in range(source.rank)], check=False)

    @property
    def shape(self):
        return (self.target.rank, self.source.rank)

    def entry(self, i, j):
        return vec_entry(self.columns[j], i, self.ring)

    def rows(self):
        return [[self.entry(i, j) for j in range(self.source.rank)] for i in range(self.target.rank)]

    def is_zero(self):
        return not any(self.columns)

    def apply(self, v):
        out = {}
        p = self.ring.p
        for (pos, e), c in v.items():
            vec_axpy(out, c, e, self.columns[pos], p)
        return out

    def compose(self, other):
        """``self o other``."""
        if other.target != self.source:
            raise StructuralError("composition of incompatible maps")
        return ModuleMap(self.ring, other.source, self.target,
                         [self.apply(c) for c in other.columns], check=False)

    __matmul__ = compose

    def __add__(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise StructuralError("adding maps with different source/target")
        p = self.ring.p
        return ModuleMap(self.ring, self.source, self.target,
                         [vec_add(a, b, p) for a, b in zip(self.columns, other.columns)], check=False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ring.field(c)
        return ModuleMap(self.ring, self.source, self.target,
                         [vec_scale(v, c, self.ring.p) for v in self.columns], check=False)

    def mul_poly(self, f, degree_shift):
        """Multiply every entry by the homogeneous ``f`` of degree ``degree_shift``."""
        return ModuleMap(self.ring, self.source.shifted(degree_shift), self.target,
                         [vec_mul_poly(v, f, self.ring.p) for v in self.columns], check=False)

    def transpose(self):
        cols = [dict() for _ in range(self.target.rank)]
        for j, col in enumerate(self.columns):
            for (i, e), c in col.items():
                cols[i][(j, e)] = c
        return ModuleMap(self.ring, self.target.dual(), self.source.dual(), cols, check=False)

    def select_columns(self, idx):
        return ModuleMap(self.ring, FreeModule(tuple(self.source.twists[j] for j in idx)),
                         self.target, [self.columns[j] for j in idx], check=False)

    def select_rows(self, idx):
        remap = {i: k for k, i in enumerate(idx)}
        cols = [{(remap[pos], e): c for (pos, e), c in col.items() if pos in remap}
                for col in self.columns]
        return ModuleMap(self.ring, self.source,
                         FreeModule(tuple(self.target.twists[i] for i in idx)), cols, check=False)

    def reduce_entries(self, ctx):
        if ctx is None or not ctx.ideal_gens:
            return self
        return ModuleMap(self.ring, self.source, self.target,
                         [ctx.reduce_vec(c) for c in self.columns], check=False)

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return (self.ring == other.ring and self.source == other.source
                and self.target == other.target and self.columns == other.columns)

    def __repr__(self):
        return f"ModuleMap({self.target.rank}x{self.source.rank}, src={self.source.twists}, tgt={self.target.twists})"

    def to_strings(self):
        return [[str(f) for f in row] for row in self.rows()]


def hstack(ring, target, maps):
    """``[A | B | ...]`` sharing a target."""
    cols, tw = [], []
    for m in maps:
        if m.target != target:
            raise StructuralError("hstack with differing targets")
        cols.extend(m.columns)
        tw.extend(m.source.twists)
    return ModuleMap(ring, FreeModule(tuple(tw)), target, cols, check=False)


def block_diag(ring, maps):
    cols, st, tt = [], [], []
    off = 0
    for m in maps:
        cols.extend(vec_reindex(c, off) for c in m.columns)
        st.extend(m.source.twists)
        tt.extend(m.target.twists)
        off += m.target.rank
    return ModuleMap(ring, FreeModule(tuple(st)), FreeModule(tuple(tt)), cols, check=False)


def block_matrix(ring, blocks, row_modules, col_modules):
    """Assemble from a 2D list of maps (``None`` = zero block)."""
    offs = [0]
    for m in row_modules:
        offs.append(offs[-1] + m.rank)
    cols = []
    for cj, cm in enumerate(col_modules):
        for k in range(cm.rank):
            v = {}
            for ri in range(len(row_modules)):
                b = blocks[ri][cj]
                if b is None:
                    continue
                for (pos, e), c in b.columns[k].items():
                    v[(pos + offs[ri], e)] = c
            cols.append(v)
    src = FreeModule(sum((m.twists for m in col_modules), ()))
    tgt = FreeModule(sum((m.twists for m in row_modules), ()))
    return ModuleMap(ring, src, tgt, cols, check=False)


@dataclass
class GroebnerBasis:
    ring: object
    ambient: FreeModule
    generators: tuple
    _engine: object = None

    @property
    def leads(self):
        return self._engine.leads

    def normal_form(self, v):
        if isinstance(v, (list, tuple)):
            v = vec_from_polys(v)
        self._check(v)
        return self._engine.full_reduce(v)

    def contains(self, v):
        if isinstance(v, (list, tuple)):
            v = vec_from_polys(v)
        self._check(v)
        return not self._engine.top_reduce(v)

    def _check(self, v):
        for (pos, _e) in v:
            if pos >= self.ambient.rank:
                raise StructuralError("vector does not live in the basis' ambient module")

    def s_vectors_reduce_to_zero(self):
        eng = self._engine
        n = len(eng.basis)
        for i in range(n):
            for j in range(i + 1, n):
                if eng.leads[i][0] != eng.leads[j][0]:
                    continue
                if eng.top_reduce(eng._spoly(i, j)):
                    return False
        return True

    def __len__(self):
        return len(self.generators)


def _ctx_extra(ctx, twists, ring):
    if ctx is None or not ctx.ideal_gens:
        return []
    out = []
    for pos in range(len(twists)):
        for g in ctx.ideal_gens:
            out.append({(pos, e): c for e, c in g.terms.items()})
    return out


def buchberger(gens, ambient, ring=None, ctx=None):
    """Reduced Groebner basis of the submodule generated by ``gens`` (plus ``I*ambient`` over a quotient)."""
    vecs = []
    for g in gens:
        if isinstance(g, (list, tuple)):
            if ring is None:
                ring = g[0].ring
            g = vec_from_polys(g)
        vecs.append(g)
    if ring is None:
        raise StructuralError("ring required when no polynomial entries are given")
    for v in vecs:
        for (pos, _e) in v:
            if pos >= ambient.rank:
                raise StructuralError("generator outside ambient module")
        if not vec_is_homogeneous(v, ambient.twists):
            raise InhomogeneousError("generator is not homogeneous in the ambient module")
    vecs = vecs + _ctx_extra(ctx, ambient.twists, ring)
    eng = _Engine(ring, ambient.twists).run(vecs).interreduced()
    return GroebnerBasis(ring, ambient, tuple(eng.basis), eng)


def normal_form(v, gb):
    return gb.normal_form(v)


def _augmented(A, ctx):
    """Run Buchberger on ``[A ; Id]`` (plus ``I*target`` rows when over a quotient)."""
    ring = A.ring
    b = A.target.rank
    twists = A.target.twists + A.source.twists
    z = (0,) * ring.nvars
    one = ring.field.one()
    gens = []
    for j, col in enumerate(A.columns):
        g = dict(col)
        g[(b + j, z)] = one
        gens.append(g)
    gens.extend(_ctx_extra(ctx, A.target.twists, ring))
    return _Engine(ring, twists, boundary=b).run(gens)


def syzygy_matrix(A, ctx=None, minimal=True):
    """Map whose columns generate ``ker A`` (over ``R/I`` when ``ctx`` is given)."""
    ring = A.ring
    b = A.target.rank
    a = A.source.rank
    if a == 0:
        return ModuleMap(ring, FreeModule(()), A.source, [], check=False)
    eng = _augmented(A, ctx)
    rels = []
    for r in eng.relations:
        v = vec_restrict(r, b, b + a)
        if ctx is not None:
            v = ctx.reduce_vec(v)
        if v:
            rels.append(v)
    tw = A.source.twists
    if minimal:
        keep = minimal_subset(ring, rels, tw, ideal_terms=ctx.ideal_terms() if ctx else ())
        rels = [rels[i] for i in keep]
    else:
        rels.sort(key=lambda v: vec_degree(v, tw))
    src = FreeModule(tuple(vec_degree(v, tw) for v in rels))
    return ModuleMap(ring, src, A.source, rels, check=False)


class NoSolution(Exception):
    pass


NO_SOLUTION = None


class Lifter:
    """Reusable solver for ``A x = b`` (mod ``I`` over a quotient)."""

    def __init__(self, A, ctx=None):
        self.A = A
        self.ctx = ctx
        self.engine = _augmented(A, ctx)
        self.b = A.target.rank

    def solve(self, rhs):
        """Return ``x`` with ``A x = rhs``, or ``None`` when ``rhs`` is not in the image."""
        if isinstance(rhs, (list, tuple)):
            rhs = vec_from_polys(rhs)
        for (pos, _e) in rhs:
            if pos >= self.b:
                raise StructuralError("right-hand side outside the target module")
        r = self.engine.top_reduce(rhs)
        if any(pos < self.b for (pos, _e) in r):
            return None
        p = self.A.ring.p
        x = vec_scale(vec_restrict(r, self.b, self.b + self.A.source.rank), -1 if not p else p - 1, p)
        if self.ctx is not None:
            x = self.ctx.reduce_vec(x)
        return x


def lift_through(A, b, ctx=None):
    return Lifter(A, ctx).solve(b)


def image_basis(A, ctx=None):
    """Groebner basis of ``im A`` (+ ``I*target``)."""
    return buchberger(list(A.columns), A.target, A.ring, ctx)
