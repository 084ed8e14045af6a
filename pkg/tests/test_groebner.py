import pytest
from hypothesis import given

from syzforge.groebner import (
    FreeModule, InhomogeneousError, Lifter, ModuleMap, buchberger, syzygy_matrix, vec_from_polys,
)
from syzforge.modules import QuotientRingContext
from syzforge.ring import PolyRing, QQ, StructuralError

import oracles
from strategies import homogeneous_maps

R3 = PolyRing(("x", "y", "z"), QQ)


def _koszul_row(R):
    x, y, z = R.gens()
    return ModuleMap.from_rows(R, [[x, y, z]])


def test_groebner_basis_of_twisted_cubic(R):
    x, y, z = R.gens()
    gb = buchberger([[x * x - y * z], [x * y - z * z]], FreeModule((0,)), R)
    assert gb.s_vectors_reduce_to_zero()
    # y^3 z - z^4 ... the S-polynomial of the two generators lies in the ideal
    assert gb.contains([y * (x * x - y * z) - x * (x * y - z * z)])
    assert not gb.contains([x * y])


def test_inhomogeneous_generator_rejected(R, xyz):
    x, y, _ = xyz
    with pytest.raises(InhomogeneousError):
        buchberger([[x + y * y]], FreeModule((0,)), R)


def test_koszul_syzygies(R):
    A = _koszul_row(R)
    K = syzygy_matrix(A)
    assert K.source.rank == 3
    assert K.source.twists == (2, 2, 2)
    assert A.compose(K).is_zero()


def test_lifter_solves_and_refuses(R, xyz):
    x, y, z = xyz
    A = _koszul_row(R)
    lift = Lifter(A)
    sol = lift.solve([x * y + z * z])
    assert A.apply(sol) == vec_from_polys([x * y + z * z])
    B = ModuleMap.from_rows(R, [[x, y]])
    assert Lifter(B).solve([z]) is None


def test_lifter_rejects_vectors_outside_target(R, xyz):
    with pytest.raises(StructuralError):
        Lifter(_koszul_row(R)).solve([xyz[0], xyz[1]])


def test_kernel_over_quotient(R, xyz):
    x, y, _ = xyz
    ctx = QuotientRingContext(R, [x])
    A = ModuleMap.from_rows(R, [[y]])
    assert syzygy_matrix(A, ctx).source.rank == 0   # y is a non-zero-divisor mod x
    B = ModuleMap.from_rows(R, [[x * y]], None, [2])
    # modulo x the entry is zero, so the whole source is the kernel
    assert syzygy_matrix(B, ctx).source.rank == 1


@given(homogeneous_maps(R3))
def test_syzygies_match_dense_kernels(A):
    K = syzygy_matrix(A)
    assert A.compose(K).is_zero()
    n = R3.nvars
    top = max(A.source.twists) + 2
    for d in range(top + 1):
        want = oracles.kernel_dim(n, A.columns, A.source.twists, d)
        got = oracles.map_rank(n, K.columns, K.source.twists, d)
        assert got == want, d
