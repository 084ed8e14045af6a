"""Order ideals of syzygies, the order-ideal checker, and Tor-vanishing sequences.

Grades here are integers or ``math.inf`` (the unit ideal); JSON output writes
the latter as the string ``"inf"``.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .complexes import (
    INF,
    TruncatedResolution,
    free_resolution,
    grade_or_inf,
    proj_dim,
    tor_module,
)
from .embeddings import EmbeddingError, embed_module, is_regular_sequence
from .groebner import FreeModule, ModuleMap, hstack
from .linalg import vec_degree
from .modules import (
    Ideal,
    Presentation,
    QuotientRingContext,
    annihilator,
    as_ctx,
    height,
    hom_functionals,
    hom_of_submodule,
    ideal_quotient,
    is_injective,
    is_zero_module,
    minimal_generators,
    minimal_ideal,
    module_rank,
)
from .ring import Polynomial

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


def _g(v):
    return "inf" if v == INF else v


# --- order ideals ------------------------------------------------------------

def syzygy_presentation(res, i):
    """``S_i = im(d_i)`` presented as ``coker(d_{i+1})`` on the basis of ``F_i``."""
    C = res.complex
    return Presentation(ModuleMap(C.ring, C.module(i + 1), C.module(i), C.d(i + 1).columns,
                                  check=False), res.ctx)


def order_ideal(S, beta_index):
    """``{f(beta) : f in Hom(S, R)}`` for the ``beta_index``-th generator of ``S``."""
    return hom_of_submodule(S, beta_index)


def _combo_order_ideal(S, K, lambdas):
    ring = S.ring
    gens = []
    for col in K.columns:
        acc = ring.zero()
        for k, lam in lambdas.items():
            acc = acc + Polynomial(ring, {e: c for (pos, e), c in col.items() if pos == k}).scale(lam)
        if S.ctx:
            acc = S.ctx.reduce_poly(acc)
        if acc:
            gens.append(acc)
    return Ideal(ring, gens)


def entries_ideal(vec, ring):
    """Ideal generated by the coordinates of ``vec``."""
    return minimal_ideal(Ideal(ring, _entry_polys(vec, ring)))


def _entry_polys(vec, ring):
    by = {}
    for (pos, e), c in vec.items():
        by.setdefault(pos, {})[e] = c
    return [Polynomial(ring, by[k]) for k in sorted(by)]


@dataclass
class OicEntry:
    i: int
    label: str
    order_ideal: Ideal
    grade: object
    required: int
    verdict: str
    entries_ideal: Ideal = None
    entries_grade: object = None
    containment: bool = None
    reduction: dict = None

    def to_json(self):
        out = {
            "i": self.i,
            "beta": self.label,
            "order_ideal": [str(g) for g in self.order_ideal.generators],
            "grade": _g(self.grade),
            "required": self.required,
            "verdict": self.verdict,
        }
        if self.entries_ideal is not None:
            out["entries_ideal"] = [str(g) for g in self.entries_ideal.generators]
            out["entries_grade"] = _g(self.entries_grade)
            out["entries_contained"] = self.containment
        if self.reduction is not None:
            out["reduction"] = self.reduction
        return out


@dataclass
class OicReport:
    module_id: str
    entries: list = field(default_factory=list)
    pd: int = None
    partial: bool = False

    @property
    def verdict(self):
        if any(e.verdict != PASS for e in self.entries):
            return FAIL
        return PASS

    def levels(self):
        return sorted({e.i for e in self.entries})

    def min_grade(self, i):
        return min(e.grade for e in self.entries if e.i == i)

    def consistency_failures(self):
        """Entries where a containment or reduction cross-check disagrees."""
        bad = []
        for e in self.entries:
            if e.containment is False:
                bad.append((e.i, e.label, "containment"))
            elif e.entries_grade is not None and e.grade < e.entries_grade:
                bad.append((e.i, e.label, "entries_grade"))
            elif e.reduction and not e.reduction.get("holds", True):
                bad.append((e.i, e.label, "reduction"))
        return bad

    def to_json(self):
        return {
            "module": self.module_id,
            "pd": self.pd,
            "partial": self.partial,
            "verdict": self.verdict,
            "entries": [e.to_json() for e in self.entries],
        }

    def to_text(self):
        rows = [("i", "beta", "grade", "req", "verdict", "order ideal")]
        for e in self.entries:
            rows.append((str(e.i), e.label, str(_g(e.grade)), str(e.required), e.verdict,
                         ", ".join(str(g) for g in e.order_ideal.generators) or "0"))
        w = [max(len(r[k]) for r in rows) for k in range(5)]
        lines = [f"order ideals of {self.module_id}: {self.verdict}" + (" (partial)" if self.partial else "")]
        for r in rows:
            lines.append("  ".join(r[k].ljust(w[k]) for k in range(5)) + "  " + r[5])
        return "\n".join(lines)


def _reduction_check(ring, ctx, J, grade_O):
    """Compare ``grade(O)`` with ``1 + grade`` of ``J`` modulo a non-zero-divisor ``y`` in ``J``."""
    for y in J.generators:
        if not is_regular_sequence(ring, [y], ctx):
            continue
        sub = ctx.extended([y]) if ctx else QuotientRingContext(ring, [y])
        gJ = grade_or_inf(J, sub)
        return {"y": str(y), "grade_mod_y": _g(gJ), "holds": grade_O >= 1 + gJ}
    return {"y": None, "holds": True}


def _entry(S, K, res, i, k, ctx):
    ring = S.ring
    O = minimal_ideal(_combo_order_ideal(S, K, {k: ring.field.one()}))
    gO = grade_or_inf(O, ctx)
    col = res.complex.d(i).columns[k]
    J = entries_ideal(col, ring)
    gJ = grade_or_inf(J, ctx)
    contained = all(O.contains(g) for g in J.generators) if not ctx else \
        Ideal(ring, list(O.generators) + list(ctx.ideal_gens)).contains_ideal(J)
    red = _reduction_check(ring, ctx, J, gO) if i >= 2 else None
    return OicEntry(i, f"d{i}(e{k})", O, gO, i, PASS if gO >= i else FAIL, J, gJ, contained, red)


def check_oic(M, max_i=None, probes=0, seed=0, module_id=None, workers=1):
    """Check ``grade O_{S_i}(beta) >= i`` for every minimal generator of every syzygy.

    ``probes`` adds seeded unit combinations of same-degree generators per level.
    """
    M = minimal_generators(M).presentation
    ctx = M.ctx
    res = free_resolution(M)
    C = res.complex
    n = max(C.length, 0)
    top = n if max_i is None else min(max_i, n)
    report = OicReport(module_id or M.name or "M", pd=None if res.truncated else n,
                       partial=res.truncated)
    rng = random.Random(seed)
    jobs = []
    for i in range(1, top + 1):
        S = syzygy_presentation(res, i)
        K = hom_functionals(S)
        for k in range(C.module(i).rank):
            jobs.append((S, K, i, k))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            report.entries = list(ex.map(lambda j: _entry(j[0], j[1], res, j[2], j[3], ctx), jobs))
    else:
        report.entries = [_entry(S, K, res, i, k, ctx) for S, K, i, k in jobs]
    for i in range(1, top + 1):
        if probes <= 0:
            break
        S = syzygy_presentation(res, i)
        K = hom_functionals(S)
        by_deg = {}
        for k, t in enumerate(C.module(i).twists):
            by_deg.setdefault(t, []).append(k)
        groups = [g for _d, g in sorted(by_deg.items()) if len(g) > 1]
        for pnum in range(probes if groups else 0):
            grp = groups[pnum % len(groups)]
            lambdas = {k: rng.randint(1, 7) * rng.choice((1, -1)) for k in grp}
            O = _combo_order_ideal(S, K, lambdas)
            gO = grade_or_inf(O, ctx)
            label = "+".join(f"{v}*e{k}" for k, v in sorted(lambdas.items()))
            report.entries.append(OicEntry(i, f"d{i}({label})", O, gO, i, PASS if gO >= i else FAIL))
    return report


# --- free split ----------------------------------------------------------------

@dataclass
class FreeSplit:
    verdict: str
    rank: int
    columns: list
    M_prime: Presentation
    inclusion: ModuleMap = None
    tried: int = 0

    def to_json(self):
        return {
            "verdict": self.verdict,
            "rank": self.rank,
            "free_generators": [_vec_str(self.M_prime.ring, c) for c in self.columns],
            "M_prime": self.M_prime.to_json() if self.M_prime is not None else None,
            "candidates_tried": self.tried,
        }


def _vec_str(ring, v):
    return [str(p) for p in _entry_polys_dense(v, ring)]


def _entry_polys_dense(v, ring):
    top = max((pos for (pos, _e) in v), default=-1)
    by = {}
    for (pos, e), c in v.items():
        by.setdefault(pos, {})[e] = c
    return [Polynomial(ring, by.get(k, {})) for k in range(top + 1)]


def _quotient_by(M, cols):
    ring = M.ring
    tw = M.generators.twists
    extra = ModuleMap(ring, FreeModule(tuple(vec_degree(c, tw) for c in cols)), M.generators, cols,
                      check=False)
    return Presentation(hstack(ring, M.generators, [M.relations, extra]), M.ctx)


def _certify_split(M, cols):
    ring = M.ring
    tw = M.generators.twists
    Mp = _quotient_by(M, cols)
    if hom_functionals(Mp).columns:
        return None
    src = Presentation.free(ring, tuple(vec_degree(c, tw) for c in cols), M.ctx)
    phi = ModuleMap(ring, src.generators, M.generators, cols, check=False)
    if not is_injective(src, M, phi):
        return None
    return Mp, phi


def free_split(M, search=50, seed=0):
    """A free submodule of rank ``rank M`` on minimal generators with ``M/F`` of positive grade."""
    M = minimal_generators(M).presentation
    ring = M.ring
    s = module_rank(M)
    one = ring.field.one()
    z = (0,) * ring.nvars
    if s == 0:
        ok = not hom_functionals(M).columns
        return FreeSplit(PASS if ok else INCONCLUSIVE, 0, [], M, None, 0)
    r = M.ngens
    tried = 0
    for subset in itertools.combinations(range(r), s):
        if tried >= search:
            break
        tried += 1
        cols = [{(j, z): one} for j in subset]
        got = _certify_split(M, cols)
        if got:
            Mp, phi = got
            return FreeSplit(PASS, s, cols, minimal_generators(Mp).presentation, phi, tried)
    rng = random.Random(seed)
    tw = M.generators.twists
    by_deg = {}
    for j, t in enumerate(tw):
        by_deg.setdefault(t, []).append(j)
    degs = sorted(by_deg)
    for _ in range(search):
        tried += 1
        cols = []
        for _k in range(s):
            grp = by_deg[rng.choice(degs)]
            cols.append({(j, z): ring.field(rng.randint(-5, 5) or 1) for j in grp})
        got = _certify_split(M, cols)
        if got:
            Mp, phi = got
            return FreeSplit(PASS, s, cols, minimal_generators(Mp).presentation, phi, tried)
    return FreeSplit(INCONCLUSIVE, s, [], None, None, tried)


# --- non-zero-divisor check ------------------------------------------------------

@dataclass
class NzdReport:
    generators: list
    verdicts: list
    annihilators: list
    grade: object
    pd: int
    height: int
    profile: str

    @property
    def verdict(self):
        return PASS if all(v == "NZD" for v in self.verdicts) else FAIL

    def to_json(self):
        return {
            "verdict": self.verdict,
            "generators": [
                {"g": str(g), "verdict": v, "annihilator": [str(a) for a in ann.generators]}
                for g, v, ann in zip(self.generators, self.verdicts, self.annihilators)
            ],
            "grade": _g(self.grade),
            "pd": self.pd,
            "height": self.height,
            "profile": self.profile,
        }


def _plain_annihilator(g, ctx):
    return ideal_quotient(Ideal(g.ring, []), g, ctx)


def nzd_check(I, ctx=None, annihilator_hook=None):
    """Decide for each minimal generator ``g`` of ``I`` whether ``(0 : g)`` vanishes."""
    ring = I.ring
    ctx = as_ctx(ctx)
    hook = annihilator_hook or _plain_annihilator
    gens = list(minimal_ideal(I).generators)
    verdicts = []
    anns = []
    for g in gens:
        ann = hook(g, ctx)
        rest = [a for a in ann.generators if not (ctx.contains(a) if ctx else a.is_zero())]
        anns.append(Ideal(ring, rest))
        verdicts.append("NZD" if not rest else "ZERO_DIVISOR")
    gr = grade_or_inf(I, ctx)
    try:
        # over a quotient ring the resolution may not stop
        pd = proj_dim(Presentation.cyclic(ring, gens, ctx), max_len=None if ctx is None else ring.nvars + 2)
    except TruncatedResolution:
        pd = None
    ht = height(I, ctx) if gr != INF else None
    if gr != INF and ht != gr:
        profile = "UNSUPPORTED"
    elif gr == 2:
        profile = "GRADE_2_HEIGHT_2"
    else:
        profile = "OUTSIDE"
    return NzdReport(gens, verdicts, anns, gr, pd, ht, profile)


# --- Tor-vanishing sequences -------------------------------------------------------

@dataclass
class RegularSequenceCertificate:
    ring: object
    elements: list
    witnesses: list = field(default_factory=list)
    tor_vanishing: list = field(default_factory=list)
    pd: int = None
    verdict: str = PASS
    note: str = ""

    def verify(self):
        """Recompute every non-zero-divisor witness from scratch."""
        for k, x in enumerate(self.elements):
            prev = Ideal(self.ring, self.elements[:k])
            q = ideal_quotient(prev, x) if k else _plain_annihilator(x, None)
            if not all(prev.contains(g) for g in q.generators):
                return False
        return not Ideal(self.ring, self.elements).is_unit() if self.elements else True

    def to_json(self):
        return {
            "verdict": self.verdict,
            "pd": self.pd,
            "elements": [str(x) for x in self.elements],
            "witnesses": self.witnesses,
            "tor_vanishing": self.tor_vanishing,
            "note": self.note,
        }


def _nzd_candidates(ring, ann, prefix, rng, search):
    gens = [g for g in ann.generators if not Ideal(ring, prefix).contains(g)] if prefix else \
        list(ann.generators)
    yield from gens
    if not gens:
        return
    L = math.lcm(*[g.degree() for g in gens])
    powers = [g ** (L // g.degree()) for g in gens]
    for _ in range(search):
        acc = ring.zero()
        for p in powers:
            acc = acc + p.scale(ring.field(rng.randint(-5, 5)))
        if acc:
            yield acc


def _choose_nzd(ring, Mp, prefix, rng, search):
    ctx = Mp.ctx
    ann = annihilator(Mp, ctx)
    ann = Ideal(ring, [g for g in ann.generators if not (ctx and ctx.contains(g))])
    for cand in _nzd_candidates(ring, ann, prefix, rng, search):
        if is_regular_sequence(ring, prefix + [cand]):
            return cand.scale(ring.field.inv(cand.lead_coeff()))
    return None


def default_tor_partners(ring, xs):
    """``R/(v)`` for each variable ``v`` on which ``xs`` stays a regular sequence."""
    out = []
    for v in ring.gens():
        ctx = QuotientRingContext(ring, [v])
        if is_regular_sequence(ring, list(xs), ctx):
            out.append(Presentation.cyclic(ring, [v]))
    return out


def tor_vanishing_sequence(M, N_list=None, seed=0, search=50, max_j=None):
    """Build ``x_1..x_h`` (``h = pd M``) along the free-split / embedding ladder and test Tor."""
    ring = M.ring
    if M.ctx:
        raise ValueError("the module must be given over the polynomial ring")
    M = minimal_generators(M).presentation
    h = proj_dim(M)
    cert = RegularSequenceCertificate(ring, [], pd=h)
    rng = random.Random(seed)
    cur = M
    for step in range(h):
        split = free_split(cur, search, seed + step)
        if split.verdict != PASS:
            cert.verdict = INCONCLUSIVE
            cert.note = f"free split failed at step {step + 1}"
            return cert
        x = _choose_nzd(ring, split.M_prime, cert.elements, rng, search)
        if x is None:
            cert.verdict = INCONCLUSIVE
            cert.note = f"no non-zero-divisor found at step {step + 1}"
            return cert
        prev = Ideal(ring, list(cert.elements))
        q = ideal_quotient(prev, x) if cert.elements else _plain_annihilator(x, None)
        cert.witnesses.append({
            "x": str(x),
            "free_rank": split.rank,
            "colon": [str(g) for g in q.generators],
            "annihilator_zero": all(prev.contains(g) for g in q.generators),
        })
        cert.elements.append(x)
        if step + 1 < h:
            try:
                cur = embed_module(split.M_prime, [x]).Q
            except (EmbeddingError, ValueError) as exc:
                cert.verdict = INCONCLUSIVE
                cert.note = f"embedding failed at step {step + 1}: {exc}"
                return cert
    partners = default_tor_partners(ring, cert.elements) if N_list is None else list(N_list)
    top = max_j if max_j is not None else max(h + 1, ring.nvars)
    res = free_resolution(M)
    for N in partners:
        label = "R/(" + ", ".join(str(g) for g in _ideal_label(N)) + ")"
        for j in range(1, top + 1):
            zero = is_zero_module(tor_module(M, N, j, res))
            cert.tor_vanishing.append({"N": label, "j": j, "verdict": "ZERO" if zero else "NONZERO"})
            if not zero:
                cert.verdict = FAIL
    if not all(w["annihilator_zero"] for w in cert.witnesses):
        cert.verdict = FAIL
    return cert


def _ideal_label(N):
    return [g for c in N.explicit_relations().columns for g in _entry_polys(c, N.ring)]
