"""Hypothesis strategies for homogeneous polynomials and matrices."""

from hypothesis import strategies as st

from syzforge.groebner import ModuleMap
from syzforge.ring import Polynomial


def forms(ring, degree, max_terms=4, coeff=5):
    mons = ring.monomials_of_degree(degree)

    @st.composite
    def build(draw):
        k = draw(st.integers(0, min(max_terms, len(mons))))
        chosen = draw(st.lists(st.sampled_from(mons), min_size=k, max_size=k, unique=True))
        terms = {}
        for e in chosen:
            c = draw(st.integers(-coeff, coeff).filter(bool))
            terms[e] = ring.field(c)
        return Polynomial(ring, terms)

    return build()


def polys(ring, max_degree=3):
    return st.integers(0, max_degree).flatmap(lambda d: forms(ring, d))


@st.composite
def homogeneous_maps(draw, ring, max_rows=2, max_cols=3, max_deg=2):
    """A graded map ``R^c -> R^r`` with generator twists in ``0..1``."""
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    tgt = [draw(st.integers(0, 1)) for _ in range(r)]
    src = [draw(st.integers(max(tgt) + 1, max(tgt) + max_deg)) for _ in range(c)]
    rows = [[draw(forms(ring, src[j] - tgt[i], max_terms=3)) for j in range(c)] for i in range(r)]
    return ModuleMap.from_rows(ring, rows, tgt, src)
