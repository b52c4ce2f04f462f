import random

import pytest

from kleinlat.intmat import IntMatrix
from kleinlat.klein import (
    A,
    B,
    C,
    E,
    GROUP,
    KLattice,
    SignPair,
    diagonal_sign_lattice,
    dim_vector,
    eigencomponent,
    invariant_sublattice_module,
    is_A_lattice,
    regular_quadruple,
    regular_representation,
    sharp,
    sign_lattice,
    trivial_lattice,
    tube_membership,
)
from kleinlat.lattices import ZLattice, hnf
from kleinlat.quiver import lattice_of, special_tube_rep, tube_rep
from kleinlat.polys import F2Poly


def test_group_law():
    assert A * B == C
    assert A * A == E
    names = sorted(g.name() for g in GROUP)
    assert names == ["1", "a", "b", "c"]


def test_regular_quadruple():
    assert regular_quadruple(A) == (1, 1, -1, -1)
    assert regular_quadruple(B) == (1, -1, 1, -1)
    assert regular_quadruple(C) == (1, -1, -1, 1)
    for g in GROUP:
        for h in GROUP:
            gh = tuple(x * y for x, y in zip(regular_quadruple(g), regular_quadruple(h)))
            assert gh == regular_quadruple(g * h)


def test_klattice_validation():
    with pytest.raises(ValueError):
        KLattice(IntMatrix([[2]]), IntMatrix([[1]]))
    M = regular_representation()
    assert M.rank == 4
    assert not is_A_lattice(M)


def test_eigencomponents_trivial():
    M = trivial_lattice(1)
    assert eigencomponent(M, SignPair("+", "+")) == ZLattice.full(1)
    assert eigencomponent(M, SignPair("-", "+")).rank() == 0
    D = diagonal_sign_lattice((1, 0, 0, 1))
    comp = eigencomponent(D, SignPair("-", "-"))
    assert comp.basis == ((0, 1),)


def test_sharp_of_regular_representation():
    R = regular_representation()
    sh = sharp(R)
    assert sh.denom == 4
    assert sum(c.rank() for c in sh.components) == 4


def test_dim_vectors():
    assert dim_vector(sign_lattice("+", "+")).as_tuple() == (1, 1, 0, 0, 0)
    f = F2Poly.from_string("t^2+t+1")
    M = lattice_of(tube_rep(f, 1))
    assert dim_vector(M).as_tuple() == (4, 2, 2, 2, 2)
    T113 = lattice_of(special_tube_rep("1", 1, 3))
    assert dim_vector(T113).as_tuple() == (3, 2, 2, 1, 1)
    with pytest.raises(ValueError):
        dim_vector(regular_representation())


def test_sharp_index_of_tube():
    M = lattice_of(special_tube_rep("1", 1, 1))
    sh = sharp(M)
    assert sh.denom == 2
    # index of M in M^# is 2^(d_plus - d_dot) = 2
    scaled_m = ZLattice.full(M.rank).scale(sh.denom)
    assert scaled_m.index_in(sh.msharp) == 2


def test_is_A_lattice_and_tube_membership():
    assert is_A_lattice(sign_lattice("+", "+"))
    assert not tube_membership(sign_lattice("+", "+"))
    M = lattice_of(special_tube_rep("1", 1, 1))
    assert is_A_lattice(M)
    assert tube_membership(M)


def test_rank_additivity_of_sharp():
    rng = random.Random(0)
    from kleinlat.quiver import random_rep_in_R

    for _ in range(20):
        M = lattice_of(random_rep_in_R(rng, 3))
        sh = sharp(M)
        assert sum(c.rank() for c in sh.components) == M.rank
        dv = dim_vector(M)
        assert dv.d_plus == M.rank
        # 2M <= 2M^# <= M
        from kleinlat.klein import two_msharp_in_m

        L = two_msharp_in_m(M, sh)
        assert L is not None
        assert all(list(r) in L for r in ZLattice.full(M.rank).scale(2).basis)


def test_eigencomponent_inside_sharp_component():
    rng = random.Random(6)
    from kleinlat.quiver import random_rep_in_R
    from kleinlat.klein import SIGN_KEYS

    for _ in range(15):
        M = lattice_of(random_rep_in_R(rng, 3))
        sh = sharp(M)
        for i, key in enumerate(SIGN_KEYS):
            eig = eigencomponent(M, SignPair.from_key(key))
            comp = sh.components[i]
            for row in eig.basis:
                assert comp.coords([sh.denom * x for x in row]) is not None


def test_invariant_sublattice_module():
    M = diagonal_sign_lattice((1, 1, 0, 0))
    S = hnf([[1, 0]], 2)
    sub, quot, embed, project = invariant_sublattice_module(M, S)
    assert sub.rank == 1 and quot.rank == 1
    assert embed.cols == 1 and project.rows == 1
    with pytest.raises(ValueError):
        invariant_sublattice_module(M, hnf([[2, 0]], 2))
