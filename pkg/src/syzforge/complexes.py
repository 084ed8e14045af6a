"""Free complexes, minimal resolutions and derived functors.

Conventions (fixed once, used everywhere):

* A complex stores ``d[k]: F_k -> F_{k-1}`` for ``k = 1..len``.
* Mapping cone of ``phi: F -> G``: ``C_k = F_{k-1} + G_k`` with differential
  ``[[-d_F, 0], [phi, d_G]]``.
* A homotopy ``h`` for ``f - g`` satisfies ``f_k - g_k = d_{k+1} h_k + h_{k-1} d_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .groebner import (
    FreeModule,
    Lifter,
    ModuleMap,
    block_matrix,
    buchberger,
    hstack,
    syzygy_matrix,
    vec_axpy,
    vec_restrict,
)
from .linalg import (
    Echelon,
    free_dim,
    ideal_multiples,
    minimal_subset,
    multiples_in_degree,
    vec_degree,
)
from .modules import (
    Ideal,
    Presentation,
    as_ctx,
    minimal_generators,
    subquotient,
)
from .ring import StructuralError

INF = math.inf


class ComplexError(ValueError):
    pass


class TruncatedResolution(ComplexError):
    pass


class ImproperIdeal(ValueError):
    pass


class FreeComplex:
    """``F_0 <- F_1 <- ... <- F_n`` over ``R`` (or ``R/I`` with ``ctx``)."""

    def __init__(self, ring, modules, differentials, ctx=None, check=True):
        self.ring = ring
        self.modules = list(modules)
        self.differentials = list(differentials)
        self.ctx = as_ctx(ctx)
        if len(self.differentials) != max(len(self.modules) - 1, 0):
            raise StructuralError("need one differential per module above F_0")
        for k, d in enumerate(self.differentials, start=1):
            if d.source != self.modules[k] or d.target != self.modules[k - 1]:
                raise StructuralError(f"differential d_{k} has the wrong source/target")
        if check:
            bad = self.square_zero_failure()
            if bad is not None:
                raise ComplexError(f"d_{bad} o d_{bad + 1} != 0")

    @classmethod
    def from_maps(cls, ring, maps, ctx=None, base=None, check=True):
        if not maps:
            return cls(ring, [base if base is not None else FreeModule(())], [], ctx, check)
        mods = [maps[0].target] + [m.source for m in maps]
        return cls(ring, mods, maps, ctx, check)

    def __len__(self):
        return len(self.differentials)

    @property
    def length(self):
        """Index of the last nonzero module (``-1`` for the zero complex)."""
        for k in range(len(self.modules) - 1, -1, -1):
            if self.modules[k].rank:
                return k
        return -1

    def module(self, k):
        if 0 <= k < len(self.modules):
            return self.modules[k]
        return FreeModule(())

    def d(self, k):
        """``d_k: F_k -> F_{k-1}``; zero outside the stored range."""
        if 1 <= k <= len(self.differentials):
            return self.differentials[k - 1]
        return ModuleMap.zero(self.ring, self.module(k), self.module(k - 1))

    def ranks(self):
        return [m.rank for m in self.modules]

    def square_zero_failure(self):
        for k in range(1, len(self.differentials)):
            comp = self.differentials[k - 1].compose(self.differentials[k])
            comp = comp.reduce_entries(self.ctx)
            if not comp.is_zero():
                return k
        return None

    def is_minimal(self):
        for d in self.differentials:
            d = d.reduce_entries(self.ctx)
            for col in d.columns:
                if any(sum(e) == 0 for (_pos, e) in col):
                    return False
        return True

    def trimmed(self):
        """Drop trailing zero modules."""
        n = self.length
        if n < 0:
            return FreeComplex(self.ring, [FreeModule(())], [], self.ctx, check=False)
        return FreeComplex(self.ring, self.modules[: n + 1], self.differentials[:n], self.ctx, check=False)

    def is_zero(self):
        return self.length < 0

    def __repr__(self):
        return f"FreeComplex(ranks={self.ranks()})"

    def to_json(self):
        return {
            "ranks": self.ranks(),
            "twists": [list(m.twists) for m in self.modules],
            "differentials": [d.to_strings() for d in self.differentials],
        }


# --- homology bookkeeping ------------------------------------------------------

def _piece_rank(ring, maps_cols, twists, d, ctx):
    ech = Echelon(ring.p)
    for c in maps_cols:
        for m in multiples_in_degree(ring, c, twists, d):
            ech.add(m)
    base = 0
    if ctx:
        ideal = ideal_multiples(ring, ctx.ideal_terms(), twists, d)
        e2 = Echelon(ring.p)
        for m in ideal:
            e2.add(m)
            ech.add(m)
        base = len(e2)
    return len(ech) - base


def _free_piece_dim(ring, twists, d, ctx):
    if not ctx:
        return free_dim(ring, twists, d)
    e = Echelon(ring.p)
    for m in ideal_multiples(ring, ctx.ideal_terms(), twists, d):
        e.add(m)
    return free_dim(ring, twists, d) - len(e)


def homology_dims(C, k, D):
    """``dim_k H_k(C)_d`` for ``d = 0..D`` by truncated linear algebra."""
    ring = C.ring
    ctx = C.ctx
    out = []
    Fk = C.module(k)
    Fk1 = C.module(k - 1)
    dk = C.d(k)
    dk1 = C.d(k + 1)
    for d in range(D + 1):
        total = _free_piece_dim(ring, Fk.twists, d, ctx)
        rank_out = _piece_rank(ring, dk.columns, Fk1.twists, d, ctx) if Fk1.rank and Fk.rank else 0
        rank_in = _piece_rank(ring, dk1.columns, Fk.twists, d, ctx) if Fk.rank else 0
        out.append(total - rank_out - rank_in)
    return out


def _spot_certificate(C, k, D):
    """Exactness at ``F_k``: GB containment both ways plus degreewise dims to ``D``."""
    ctx = C.ctx
    dk, dk1 = C.d(k), C.d(k + 1)
    im_in_ker = dk.compose(dk1).reduce_entries(ctx).is_zero() if dk1.source.rank and dk.source.rank else True
    ker = syzygy_matrix(dk, ctx, minimal=False)
    lift = Lifter(dk1, ctx)
    ker_in_im = all(lift.solve(c) is not None for c in ker.columns if c)
    dims = homology_dims(C, k, D)
    return {
        "spot": k,
        "image_in_kernel": im_in_ker,
        "kernel_in_image": ker_in_im,
        "degree_bound": D,
        "homology_dims": dims,
        "exact": im_in_ker and ker_in_im and not any(dims),
    }


# --- resolutions -----------------------------------------------------------------

@dataclass
class Resolution:
    complex: FreeComplex
    resolved: Presentation
    minimal: bool = True
    truncated: bool = False
    certificate: list = field(default_factory=list)
    generator_map: object = None  # MinimalPresentation of the input

    @property
    def ctx(self):
        return self.complex.ctx

    @property
    def length(self):
        return max(self.complex.length, 0)

    def d(self, k):
        return self.complex.d(k)

    def module(self, k):
        return self.complex.module(k)

    def certify(self, D=None):
        D = self.resolved.default_bound() if D is None else D
        self.certificate = [_spot_certificate(self.complex, k, D) for k in range(1, len(self.complex) + 1)]
        return all(c["exact"] for c in self.certificate)

    @property
    def certified(self):
        return bool(self.certificate) and all(c["exact"] for c in self.certificate) or (
            not self.certificate and len(self.complex) == 0)

    def betti(self):
        return BettiTable.from_complex(self.complex)


def free_resolution(P, max_len=None, ctx=None, certify=False, D=None):
    """Minimal free resolution by iterated minimal syzygies."""
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    ring = P.ring
    if max_len is None:
        max_len = ring.nvars + 1
    mp = minimal_generators(P, ctx)
    d1 = mp.presentation.relations
    maps = []
    truncated = False
    if d1.source.rank:
        maps.append(d1)
        while True:
            if len(maps) >= max_len:
                if syzygy_matrix(maps[-1], ctx).source.rank:
                    truncated = True
                break
            S = syzygy_matrix(maps[-1], ctx)
            if S.source.rank == 0:
                break
            maps.append(S)
    C = FreeComplex.from_maps(ring, maps, ctx, base=d1.target, check=False)
    res = Resolution(C, mp.presentation, True, truncated, generator_map=mp)
    if certify:
        res.certify(D)
    return res


def minimalize(C):
    """Cancel unit entries pairwise (Gaussian elimination on the complex).

    Pivot order: lowest homological index, then lowest degree, then row-major.
    """
    ring = C.ring
    ctx = C.ctx
    p = ring.p
    z = (0,) * ring.nvars
    mods = [list(m.twists) for m in C.modules]
    ds = [None] + [[ctx.reduce_vec(dict(c)) if ctx else dict(c) for c in d.columns] for d in C.differentials]
    n = len(ds) - 1
    while True:
        pivot = None
        for k in range(1, n + 1):
            cands = []
            for c, col in enumerate(ds[k]):
                for (r, e), v in col.items():
                    if sum(e) == 0:
                        cands.append((mods[k][c], r, c))
            if cands:
                pivot = (k, min(cands))
                break
        if pivot is None:
            break
        k, (_deg, r, c) = pivot
        cols = ds[k]
        a = cols[c][(r, z)]
        inv = ring.field.inv(a)
        piv_col = cols[c]
        # d_k' = D - c a^{-1} b on the remaining rows/columns
        new_cols = []
        for j, col in enumerate(cols):
            if j == c:
                continue
            b = col.get((r, z))
            col = dict(col)
            if b:
                coef = (-b * inv) % p if p else -b * inv
                vec_axpy(col, coef, None, piv_col, p)
            col = {(pos if pos < r else pos - 1, e): v for (pos, e), v in col.items() if pos != r}
            if ctx:
                col = ctx.reduce_vec(col)
            new_cols.append(col)
        ds[k] = new_cols
        # d_{k+1}: drop row c
        if k + 1 <= n:
            ds[k + 1] = [{(pos if pos < c else pos - 1, e): v for (pos, e), v in col.items() if pos != c}
                         for col in ds[k + 1]]
        # d_{k-1}: drop column r
        if k - 1 >= 1:
            ds[k - 1] = [col for j, col in enumerate(ds[k - 1]) if j != r]
        del mods[k][c]
        del mods[k - 1][r]
    modules = [FreeModule(tuple(t)) for t in mods]
    maps = [ModuleMap(ring, modules[k], modules[k - 1], ds[k], check=False) for k in range(1, n + 1)]
    return FreeComplex(ring, modules, maps, ctx, check=False).trimmed()


# --- Betti tables ------------------------------------------------------------------

@dataclass
class BettiTable:
    entries: dict

    @classmethod
    def from_complex(cls, C):
        out = {}
        for i, m in enumerate(C.modules):
            for t in m.twists:
                out[(i, t)] = out.get((i, t), 0) + 1
        return cls(out)

    def totals(self):
        if not self.entries:
            return []
        n = max(i for i, _ in self.entries)
        return [sum(v for (i, _), v in self.entries.items() if i == k) for k in range(n + 1)]

    def degrees(self, i):
        return sorted(t for (k, t), v in self.entries.items() if k == i for _ in range(v))

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def to_text(self):
        if not self.entries:
            return "total: 0"
        n = max(i for i, _ in self.entries)
        rows = sorted({t - i for (i, t) in self.entries})
        totals = self.totals()
        width = max(len(str(v)) for v in totals + [n]) + 1
        label_w = max(len("total:"), max(len(f"{r}:") for r in rows))
        lines = ["".ljust(label_w) + "".join(str(i).rjust(width) for i in range(n + 1)),
                 "total:".rjust(label_w) + "".join(str(v).rjust(width) for v in totals)]
        for r in rows:
            cells = []
            for i in range(n + 1):
                v = self.entries.get((i, i + r), 0)
                cells.append(("." if v == 0 else str(v)).rjust(width))
            lines.append(f"{r}:".rjust(label_w) + "".join(cells))
        return "\n".join(lines)

    def to_json(self):
        return {
            "totals": self.totals(),
            "entries": [[i, t, v] for (i, t), v in sorted(self.entries.items())],
        }


def betti_table(P, max_len=None, ctx=None):
    res = free_resolution(P, max_len, ctx)
    if res.truncated:
        raise TruncatedResolution("resolution truncated before reaching zero")
    return res.betti()


# --- duality, chain maps, cones ----------------------------------------------------

def dualize(C):
    """``Hom(C, R)`` re-indexed as a chain complex: ``G_k = F_{n-k}^*``."""
    n = C.length
    if n < 0:
        return FreeComplex(C.ring, [FreeModule(())], [], C.ctx, check=False)
    mods = [C.module(n - k).dual() for k in range(n + 1)]
    maps = [C.d(n - k + 1).transpose() for k in range(1, n + 1)]
    return FreeComplex(C.ring, mods, maps, C.ctx, check=False)


class ChainMap:
    """``f_k: source_k -> target_{k + shift}``."""

    def __init__(self, source, target, components, shift=0):
        self.source = source
        self.target = target
        self.components = list(components)
        self.shift = shift

    def component(self, k):
        if 0 <= k < len(self.components):
            return self.components[k]
        return ModuleMap.zero(self.source.ring, self.source.module(k), self.target.module(k + self.shift))

    def commutes(self):
        """Index of the first non-commuting square, or None."""
        ctx = self.target.ctx
        top = max(len(self.components), self.source.length + 1)
        for k in range(1, top + 1):
            f_k = self.component(k)
            f_km = self.component(k - 1)
            lhs = self.target.d(k + self.shift).compose(f_k) if f_k.source.rank else None
            rhs = f_km.compose(self.source.d(k)) if self.source.d(k).source.rank else None
            if lhs is None and rhs is None:
                continue
            if lhs is None:
                diff = rhs
            elif rhs is None:
                diff = lhs
            else:
                diff = lhs - rhs
            if not diff.reduce_entries(ctx).is_zero():
                return k
        return None

    def __sub__(self, other):
        n = max(len(self.components), len(other.components))
        return ChainMap(self.source, self.target,
                        [self.component(k) - other.component(k) for k in range(n)], self.shift)


class WellDefinednessError(ValueError):
    pass


def lift_chain_map(f0, F, G, ctx=None):
    """Lift ``f0: F_0 -> G_0`` (inducing a map on ``H_0``) to a chain map ``F -> G``.

    ``G`` must be acyclic in positive degrees (e.g. a resolution).
    """
    if isinstance(F, Resolution):
        F = F.complex
    if isinstance(G, Resolution):
        G = G.complex
    ctx = as_ctx(ctx if ctx is not None else G.ctx)
    comps = [f0]
    for k in range(1, F.length + 1):
        target_d = G.d(k)
        rhs = comps[k - 1].compose(F.d(k))
        Tk = G.module(k)
        if not target_d.source.rank:
            bad = [j for j, c in enumerate(rhs.columns) if (ctx.reduce_vec(c) if ctx else c)]
            if bad:
                if k == 1:
                    raise WellDefinednessError(f"relation {bad[0]} does not map into the target relations")
                raise ComplexError(f"cannot lift at index {k}: target complex is not exact")
            comps.append(ModuleMap.zero(F.ring, F.module(k), Tk))
            continue
        lift = Lifter(target_d, ctx)
        cols = []
        for j, c in enumerate(rhs.columns):
            x = lift.solve(c)
            if x is None:
                if k == 1:
                    raise WellDefinednessError(f"relation {j} does not map into the target relations")
                raise ComplexError(f"cannot lift at index {k}: target complex is not exact")
            cols.append(x)
        comps.append(ModuleMap(F.ring, F.module(k), Tk, cols, check=False))
    return ChainMap(F, G, comps)


def mapping_cone(phi):
    """Cone with ``C_k = F_{k-1} + G_k`` and differential ``[[-d_F, 0], [phi, d_G]]``."""
    F, G = phi.source, phi.target
    if phi.shift:
        raise ComplexError("mapping cone expects a degree-0 chain map")
    ring = F.ring
    top = max(F.length + 1, G.length)
    mods = [G.module(0)]
    for k in range(1, top + 1):
        mods.append(F.module(k - 1) + G.module(k))
    maps = []
    for k in range(1, top + 1):
        rows = [F.module(k - 2), G.module(k - 1)]
        colsm = [F.module(k - 1), G.module(k)]
        if k == 1:
            m = hstack(ring, G.module(0), [phi.component(0), G.d(1)])
        else:
            m = block_matrix(ring, [[-F.d(k - 1), None], [phi.component(k - 1), G.d(k)]], rows, colsm)
        maps.append(m)
    return FreeComplex(ring, mods, maps, G.ctx, check=False)


@dataclass
class Homotopy:
    f: ChainMap
    g: ChainMap
    maps: list

    def h(self, k):
        if 0 <= k < len(self.maps):
            return self.maps[k]
        F, G = self.f.source, self.f.target
        return ModuleMap.zero(F.ring, F.module(k), G.module(k + 1))

    def identity_failure(self):
        """Index where ``f - g = d h + h d`` fails, or None."""
        F, G = self.f.source, self.f.target
        ctx = G.ctx
        for k in range(0, F.length + 1):
            lhs = self.f.component(k) - self.g.component(k)
            rhs = None
            if self.h(k).source.rank and G.module(k + 1).rank:
                rhs = G.d(k + 1).compose(self.h(k))
            if k >= 1 and F.d(k).source.rank:
                t = self.h(k - 1).compose(F.d(k))
                rhs = t if rhs is None else rhs + t
            diff = lhs if rhs is None else lhs - rhs
            if not diff.reduce_entries(ctx).is_zero():
                return k
        return None


def null_homotopy(phi, against=None):
    """Homotopy ``h`` with ``phi - against = d h + h d``; None if a lift fails."""
    F, G = phi.source, phi.target
    ctx = G.ctx
    ring = F.ring
    diff = phi if against is None else phi - against
    zero = against if against is not None else ChainMap(F, G, [
        ModuleMap.zero(ring, F.module(k), G.module(k)) for k in range(F.length + 1)])
    hs = []
    for k in range(0, F.length + 1):
        rhs = diff.component(k)
        if k >= 1 and F.d(k).source.rank:
            rhs = rhs - hs[k - 1].compose(F.d(k))
        Gk1 = G.module(k + 1)
        cols = []
        lift = Lifter(G.d(k + 1), ctx) if Gk1.rank else None
        for c in rhs.columns:
            c = ctx.reduce_vec(c) if ctx else c
            if not c:
                cols.append({})
                continue
            x = lift.solve(c) if lift else None
            if x is None:
                return None
            cols.append(x)
        hs.append(ModuleMap(ring, F.module(k), Gk1, cols, check=False))
    return Homotopy(phi, zero, hs)


def identity_chain_map(C):
    return ChainMap(C, C, [ModuleMap.identity(C.ring, m) for m in C.modules])


def scalar_chain_map(C, f):
    """Multiplication by the homogeneous polynomial ``f`` (target twisted by ``deg f``)."""
    d = f.degree()
    comps = [ModuleMap(C.ring, m.shifted(d), m,
                       [{(j, e): c for e, c in f.terms.items()} for j in range(m.rank)], check=False)
             for m in C.modules]
    src = FreeComplex(C.ring, [m.shifted(d) for m in C.modules],
                      [ModuleMap(C.ring, C.module(k).shifted(d), C.module(k - 1).shifted(d),
                                 C.d(k).columns, check=False) for k in range(1, len(C.modules))],
                      C.ctx, check=False)
    return ChainMap(src, C, comps)


# --- Ext / Tor -------------------------------------------------------------------

def _ensure_resolution(P, upto, ctx):
    if isinstance(P, Resolution):
        return P
    return free_resolution(P, max(upto, P.ring.nvars + 1), ctx)


def ext_module(P, i, ctx=None, resolution=None):
    """``Ext^i(M, R)`` (over ``R/I`` with ``ctx``) as a minimal presentation."""
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    res = resolution or _ensure_resolution(P, i + 1, ctx)
    if res.truncated and i + 1 > len(res.complex):
        raise TruncatedResolution("resolution too short for the requested Ext")
    ring = P.ring
    C = res.complex
    Fi = C.module(i)
    if i < 0 or Fi.rank == 0:
        return Presentation(ModuleMap.zero(ring, FreeModule(()), FreeModule(())), ctx)
    out_map = C.d(i + 1).transpose()          # F_i^* -> F_{i+1}^*
    if C.module(i + 1).rank:
        Z = syzygy_matrix(out_map, ctx)
    else:
        Z = ModuleMap.identity(ring, Fi.dual())
    if i >= 1:
        Dm = C.d(i).transpose()               # F_{i-1}^* -> F_i^*
    else:
        Dm = ModuleMap.zero(ring, FreeModule(()), Fi.dual())
    sq = subquotient(Z, Dm, ctx)
    return minimal_generators(sq, ctx).presentation


def ext_is_zero(P, i, ctx=None, resolution=None):
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    res = resolution or _ensure_resolution(P, i + 1, ctx)
    C = res.complex
    Fi = C.module(i)
    if i < 0 or Fi.rank == 0:
        return True
    out_map = C.d(i + 1).transpose()
    Z = syzygy_matrix(out_map, ctx) if C.module(i + 1).rank else ModuleMap.identity(P.ring, Fi.dual())
    if Z.source.rank == 0:
        return True
    if i == 0:
        return False
    lift = Lifter(C.d(i).transpose(), ctx)
    return all(lift.solve(c) is not None for c in Z.columns)


def kron(ring, A, B):
    """Tensor product of maps ``A (x) B`` with basis order ``(i, j) -> i * rank + j``."""
    p = ring.p
    nb_t = B.target.rank
    cols = []
    src = []
    for ja, ca in enumerate(A.columns):
        for jb, cb in enumerate(B.columns):
            v = {}
            for (ia, ea), xa in ca.items():
                for (ib, eb), xb in cb.items():
                    key = (ia * nb_t + ib, tuple(a + b for a, b in zip(ea, eb)))
                    nv = v.get(key, 0) + xa * xb
                    if p:
                        nv %= p
                    if nv:
                        v[key] = nv
                    else:
                        v.pop(key, None)
            cols.append(v)
            src.append(A.source.twists[ja] + B.source.twists[jb])
    tgt = [a + b for a in A.target.twists for b in B.target.twists]
    return ModuleMap(ring, FreeModule(tuple(src)), FreeModule(tuple(tgt)), cols, check=False)


def tor_module(P, N, i, resolution=None):
    """``Tor_i^R(M, N) = H_i(F (x) N)`` for a resolution ``F`` of ``M`` over ``R``."""
    ring = P.ring
    ctx = as_ctx(N.ctx)
    res = resolution or _ensure_resolution(P, i + 1, None)
    C = res.complex
    Fi = C.module(i)
    Nrel = N.explicit_relations() if N.ctx else N.relations
    if i < 0 or Fi.rank == 0 or N.ngens == 0:
        return Presentation(ModuleMap.zero(ring, FreeModule(()), FreeModule(())))
    Id = ModuleMap.identity
    # cycles: v in F_i (x) N0 with (d_i (x) 1) v in F_{i-1} (x) im(Nrel)
    if i >= 1:
        Fim = C.module(i - 1)
        A = hstack(ring, FreeModule(tuple(a + b for a in Fim.twists for b in N.generators.twists)),
                   [kron(ring, C.d(i), Id(ring, N.generators)), kron(ring, Id(ring, Fim), Nrel)])
        K = syzygy_matrix(A, None, minimal=False)
        width = Fi.rank * N.ngens
        zcols = [vec_restrict(c, 0, width) for c in K.columns]
        zcols = [c for c in zcols if c]
        rel_tw = tuple(a + b for a in Fi.twists for b in N.generators.twists)
        base_im = [kron(ring, Id(ring, Fi), Nrel)]
        keep = minimal_subset(ring, zcols, rel_tw, base=base_im[0].columns)
        zcols = [zcols[k] for k in keep]
        Z = ModuleMap(ring, FreeModule(tuple(vec_degree(c, rel_tw) for c in zcols)), FreeModule(rel_tw),
                      zcols, check=False)
    else:
        Z = ModuleMap.identity(ring, FreeModule(tuple(a + b for a in Fi.twists for b in N.generators.twists)))
    tgt = Z.target
    parts = [kron(ring, Id(ring, Fi), Nrel)]
    if C.module(i + 1).rank:
        parts.insert(0, kron(ring, C.d(i + 1), Id(ring, N.generators)))
    Dm = hstack(ring, tgt, parts)
    sq = subquotient(Z, Dm)
    return minimal_generators(sq).presentation


# --- grade and projective dimension -------------------------------------------

def proj_dim(P, ctx=None, max_len=None):
    res = free_resolution(P, max_len, ctx)
    if res.truncated:
        raise TruncatedResolution("projective dimension not reached within max_len")
    return res.complex.length if res.complex.length >= 0 else 0


def _is_unit_ideal(ring, gens):
    if not gens:
        return False
    gb = buchberger([[g] for g in gens], FreeModule((0,)), ring)
    return any(sum(e) == 0 for (_p, e) in gb.leads)


def grade(I, ctx=None):
    """``min{i : Ext^i(R/I, R) != 0}``; over ``R/(x)`` the regular sequence is subtracted.

    Raises ImproperIdeal for the unit ideal; the zero ideal has grade 0.
    """
    ctx = as_ctx(ctx)
    ring = I.ring
    gens = list(I.generators) + (list(ctx.ideal_gens) if ctx else [])
    if _is_unit_ideal(ring, gens):
        raise ImproperIdeal("grade of the unit ideal is undefined (use grade_or_inf)")
    t = ctx.length if ctx else 0
    J = Ideal(ring, gens)
    if J.is_zero():
        return 0
    P = J.as_presentation()
    res = free_resolution(P)
    for i in range(0, res.complex.length + 1):
        if not ext_is_zero(P, i, resolution=res):
            return i - t
    raise ComplexError("no nonvanishing Ext found below the projective dimension")


def grade_or_inf(I, ctx=None):
    """Grade with the unit ideal mapped to ``inf``."""
    try:
        return grade(I, ctx)
    except ImproperIdeal:
        return INF


def module_grade(P, ctx=None):
    """Grade of ``ann(M)`` (``inf`` for the zero module)."""
    from .modules import annihilator
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    ann = annihilator(P, ctx)
    return grade_or_inf(Ideal(P.ring, [g for g in ann.generators if not (ctx and ctx.contains(g))]), ctx)


def max_nonvanishing_ext(P, ctx=None, resolution=None):
    ctx = as_ctx(ctx if ctx is not None else P.ctx)
    res = resolution or free_resolution(P, None, ctx)
    for i in range(res.complex.length, -1, -1):
        if not ext_is_zero(P, i, ctx, res):
            return i
    return -1
