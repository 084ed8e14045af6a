"""Independent dense-linear-algebra oracles over Fraction.

Nothing here imports the package's linear algebra: polynomials are read only
through their ``terms`` dicts, and every answer is a rank computation on an
explicit matrix of one graded piece.
"""

from fractions import Fraction
from itertools import combinations, combinations_with_replacement


def monomials(n, d):
    if d < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out)


def frac(c):
    return Fraction(int(c.numerator), int(c.denominator))


def terms(f):
    return {e: frac(c) for e, c in f.terms.items()}


def rank(rows):
    """Rank of a list of dict-rows (column -> Fraction) by Gaussian elimination."""
    pivots = {}
    r = 0
    for row in rows:
        v = {k: x for k, x in row.items() if x}
        while v:
            col = min(v)
            if col not in pivots:
                inv = 1 / v[col]
                pivots[col] = {k: x * inv for k, x in v.items()}
                r += 1
                break
            p = pivots[col]
            f = v[col]
            for k, x in p.items():
                nv = v.get(k, 0) - f * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
    return r


def piece_basis(n, twists, d):
    """Basis ``(pos, monomial)`` of degree ``d`` of a free module with these twists."""
    return [(pos, m) for pos, t in enumerate(twists) for m in monomials(n, d - t)]


def image_vectors(n, columns, src_twists, d):
    """All ``m * col`` of degree ``d``, as dicts keyed by ``(pos, monomial)``."""
    out = []
    for col, t in zip(columns, src_twists):
        for m in monomials(n, d - t):
            v = {}
            for (pos, e), c in col.items():
                key = (pos, tuple(a + b for a, b in zip(m, e)))
                v[key] = v.get(key, 0) + frac(c)
            out.append(v)
    return out


def _index(vecs):
    keys = sorted({k for v in vecs for k in v})
    pos = {k: i for i, k in enumerate(keys)}
    return [{pos[k]: x for k, x in v.items()} for v in vecs]


def span_dim(vecs):
    return rank(_index(vecs))


def map_rank(n, columns, src_twists, d):
    return span_dim(image_vectors(n, columns, src_twists, d))


def kernel_dim(n, columns, src_twists, d):
    """``dim ker(A)_d = dim (F_src)_d - rank A_d``."""
    return len(piece_basis(n, src_twists, d)) - map_rank(n, columns, src_twists, d)


def ideal_columns(ideal_polys, gen_twists):
    """The generators of ``I * F0`` as columns, with their degrees."""
    cols, tw = [], []
    for pos, t in enumerate(gen_twists):
        for g in ideal_polys:
            cols.append({(pos, e): c for e, c in g.terms.items()})
            tw.append(t + max(sum(e) for e in g.terms))
    return cols, tw


def hilbert_function(n, columns, src_twists, gen_twists, D, ideal_polys=()):
    """``dim_k (coker A)_d`` for ``d = 0..D`` (modulo ``I * F0`` if given)."""
    extra, etw = ideal_columns(ideal_polys, gen_twists)
    cols = list(columns) + extra
    tw = list(src_twists) + etw
    return [len(piece_basis(n, gen_twists, d)) - map_rank(n, cols, tw, d) for d in range(D + 1)]


def homology_dim(n, d_in, in_src_twists, d_out, out_src_twists, mid_twists, d):
    """``dim H_d`` at a spot with incoming ``d_in`` and outgoing ``d_out`` (columns)."""
    dim_mid = len(piece_basis(n, mid_twists, d))
    r_out = map_rank(n, d_out, out_src_twists, d) if d_out is not None else 0
    r_in = map_rank(n, d_in, in_src_twists, d) if d_in is not None else 0
    return dim_mid - r_out - r_in


def koszul(n, sign_convention=True):
    """Koszul complex on the variables: ``d_k`` as columns over exterior subsets.

    Returns ``{k: (columns, source_twists, target_twists)}``.
    """
    one = Fraction(1)
    out = {}
    for k in range(1, n + 1):
        src = list(combinations(range(n), k))
        tgt = list(combinations(range(n), k - 1))
        tidx = {s: i for i, s in enumerate(tgt)}
        cols = []
        for S in src:
            col = {}
            for j, v in enumerate(S):
                e = [0] * n
                e[v] = 1
                col[(tidx[S[:j] + S[j + 1:]], tuple(e))] = one if j % 2 == 0 else -one
            cols.append(col)
        out[k] = (cols, [k] * len(src), [k - 1] * len(tgt))
    return out


def transpose_columns(columns, n_rows):
    """Columns of the transpose of a matrix given by columns."""
    out = [dict() for _ in range(n_rows)]
    for j, col in enumerate(columns):
        for (pos, e), c in col.items():
            out[pos][(j, e)] = c
    return out


def in_span(vecs, v):
    return span_dim(vecs + [v]) == span_dim(vecs)


def grade_by_dimension(n, ideal_polys, D):
    """``n - dim R/I`` from the Hilbert function up to degree ``D``.

    On a polynomial ring grade equals height; the Hilbert polynomial degree is
    read off by differencing the tail until it is eventually zero.
    """
    hf = hilbert_function(n, [], [], [0], D, ideal_polys)
    seq = hf[D // 2:]
    dim = 0
    while any(seq):
        seq = [b - a for a, b in zip(seq, seq[1:])]
        dim += 1
        if len(seq) < 2:
            break
    return n - dim
