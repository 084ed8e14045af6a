"""Seeded random graded presentations, used as test fuel for the checkers."""

from __future__ import annotations

import random

from .groebner import FreeModule, ModuleMap
from .modules import Presentation, is_zero_module
from .ring import Polynomial

DEFAULT_PROFILE = ((0, 0), (1, 1, 2))


def random_form(ring, d, rng, density=0.6, coeff=3):
    """A random homogeneous form of degree ``d`` (possibly zero)."""
    if d < 0:
        return ring.zero()
    terms = {}
    for e in ring.monomials_of_degree(d):
        if rng.random() < density:
            c = rng.randint(-coeff, coeff)
            if c:
                terms[e] = ring.field(c)
    return Polynomial(ring, terms)


def random_presentation(ring, gen_twists, rel_twists, rng, density=0.6):
    cols = []
    for b in rel_twists:
        v = {}
        for pos, a in enumerate(gen_twists):
            f = random_form(ring, b - a, rng, density) if b > a else ring.zero()
            for e, c in f.terms.items():
                v[(pos, e)] = c
        cols.append(v)
    rel = ModuleMap(ring, FreeModule(tuple(rel_twists)), FreeModule(tuple(gen_twists)), cols, check=False)
    return Presentation(rel)


def generate_corpus(ring, seed, count, degree_profile=DEFAULT_PROFILE, keep_free=False,
                    density=0.6, max_attempts=None):
    """``count`` nonzero presentations, deterministic in ``seed``.

    ``degree_profile`` is ``(generator twists, relation twists)`` or a list of
    such pairs used round-robin.  Over a polynomial ring every module has finite
    projective dimension, so only zero modules (and free ones unless
    ``keep_free``) are filtered out.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    profiles = [degree_profile] if isinstance(degree_profile[0][0], int) else list(degree_profile)
    rng = random.Random(seed)
    out = []
    attempts = 0
    limit = max_attempts or 50 * count
    while len(out) < count and attempts < limit:
        gen_tw, rel_tw = profiles[attempts % len(profiles)]
        attempts += 1
        P = random_presentation(ring, gen_tw, rel_tw, rng, density)
        if all(not c for c in P.relations.columns) and not keep_free:
            continue
        if is_zero_module(P):
            continue
        P.name = f"corpus{seed}_{len(out)}"
        out.append(P)
    return out
