"""Sparse exact linear algebra on degree-truncated pieces of free modules.

Vectors are dicts keyed by ``(position, exponent tuple)``.  Everything here is
plain Gaussian elimination; no Groebner machinery is used, which is what makes
these routines usable as cross-checks of the Groebner engine.
"""

from __future__ import annotations

import heapq


class Echelon:
    """Incrementally built row-echelon basis; pivots are minimal keys."""

    def __init__(self, p=0):
        self.p = p
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        v = dict(v)
        rows = self.rows
        p = self.p
        heap = [k for k in v if k in rows]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            c = v.get(k)
            if not c:
                continue
            row = rows[k]
            for rk, rc in row.items():
                nv = v.get(rk, 0) - c * rc
                if p:
                    nv %= p
                if nv:
                    if rk not in v and rk in rows:
                        heapq.heappush(heap, rk)
                    v[rk] = nv
                else:
                    v.pop(rk, None)
        return v

    def add(self, v):
        """Insert ``v``; return True when it was independent of the span."""
        r = self.reduce(v)
        if not r:
            return False
        piv = min(r)
        c = r[piv]
        if self.p:
            inv = pow(int(c), -1, self.p)
            r = {k: (x * inv) % self.p for k, x in r.items()}
        else:
            r = {k: x / c for k, x in r.items()}
        self.rows[piv] = r
        return True


def vec_degree(v, twists):
    for (pos, e) in v:
        return sum(e) + twists[pos]
    return None


def shift(v, mono):
    if not any(mono):
        return v
    return {(pos, tuple(a + b for a, b in zip(e, mono))): c for (pos, e), c in v.items()}


def multiples_in_degree(ring, v, twists, d):
    """All monomial multiples of the homogeneous vector ``v`` landing in degree ``d``."""
    dv = vec_degree(v, twists)
    if dv is None or dv > d:
        return []
    return [shift(v, m) for m in ring.monomials_of_degree(d - dv)]


def ideal_multiples(ring, ideal_vecs_by_pos, twists, d):
    """Degree-``d`` pieces of ``I * F`` where ``I`` is given by polynomial term dicts."""
    out = []
    for pos, tw in enumerate(twists):
        for g in ideal_vecs_by_pos:
            gv = {(pos, e): c for e, c in g.items()}
            out.extend(multiples_in_degree(ring, gv, twists, d))
    return out


def span_rank(ring, gens, twists, d, ideal_terms=()):
    ech = Echelon(ring.p)
    for g in gens:
        for m in multiples_in_degree(ring, g, twists, d):
            ech.add(m)
    for m in ideal_multiples(ring, ideal_terms, twists, d):
        ech.add(m)
    return len(ech)


def free_dim(ring, twists, d):
    return sum(len(ring.monomials_of_degree(d - t)) for t in twists)


def minimal_subset(ring, vecs, twists, base=(), ideal_terms=()):
    """Indices of a minimal generating subset of ``vecs`` modulo ``base + I*F``.

    Processes degrees in increasing order and keeps a vector exactly when it is
    not in the span of lower-degree kept vectors, the base, and earlier kept
    vectors of the same degree.  Zero vectors are never kept.
    """
    degs = [vec_degree(v, twists) for v in vecs]
    order = sorted((i for i, v in enumerate(vecs) if v), key=lambda i: (degs[i], i))
    base = [b for b in base if b]
    base_degs = [vec_degree(b, twists) for b in base]
    kept = []
    by_degree = {}
    for i in order:
        by_degree.setdefault(degs[i], []).append(i)
    for d in sorted(by_degree):
        ech = Echelon(ring.p)
        for j in kept:
            for m in multiples_in_degree(ring, vecs[j], twists, d):
                ech.add(m)
        for b, db in zip(base, base_degs):
            if db <= d:
                for m in multiples_in_degree(ring, b, twists, d):
                    ech.add(m)
        for m in ideal_multiples(ring, ideal_terms, twists, d):
            ech.add(m)
        for i in by_degree[d]:
            if ech.add(vecs[i]):
                kept.append(i)
    return sorted(kept, key=lambda i: (degs[i], i))
