"""Exact graded syzygy computations over polynomial rings and their quotients."""

from .complexes import (
    BettiTable,
    FreeComplex,
    betti_table,
    ext_module,
    free_resolution,
    grade,
    grade_or_inf,
    minimalize,
    proj_dim,
    tor_module,
)
from .embeddings import embed_module, shamash_resolution, subcomplex_resolution, syzygy_split_check
from .groebner import FreeModule, ModuleMap, syzygy_matrix
from .modules import Ideal, Presentation, QuotientRingContext
from .order_ideals import check_oic, free_split, nzd_check, order_ideal, tor_vanishing_sequence
from .ring import GF, QQ, PolyRing, Polynomial

__version__ = "0.1.0"

__all__ = [
    "BettiTable", "FreeComplex", "FreeModule", "GF", "Ideal", "ModuleMap", "PolyRing", "Polynomial",
    "Presentation", "QQ", "QuotientRingContext", "betti_table", "check_oic", "embed_module",
    "ext_module", "free_resolution", "free_split", "grade", "grade_or_inf", "minimalize",
    "nzd_check", "order_ideal", "proj_dim", "shamash_resolution", "subcomplex_resolution",
    "syzygy_matrix", "syzygy_split_check", "tor_module", "tor_vanishing_sequence",
]
