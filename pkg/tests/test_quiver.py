import random

import pytest

from kleinlat.f2 import F2Matrix
from kleinlat.klein import DimVector, dim_vector
from kleinlat.polys import F2Poly
from kleinlat.quiver import (
    NON_REGULAR,
    LambdaRep,
    RepMorphism,
    TubeId,
    TubeLabel,
    decompose,
    endomorphism_local_data,
    hom_reps,
    identify_tube,
    in_category_R,
    lattice_of,
    lattice_of_model,
    lift_morphism,
    phi,
    phi_data,
    random_rep_in_R,
    reduce_morphism,
    reps_isomorphic,
    special_tube_rep,
    tube_rep,
)

F = F2Poly.from_string("t^2+t+1")
G3 = F2Poly.from_string("t^3+t+1")


def test_in_category_R():
    V = LambdaRep(
        DimVector(1, 1, 0, 0, 0),
        {
            "pp": F2Matrix([[1]]),
            "pm": F2Matrix([], cols=1),
            "mp": F2Matrix([], cols=1),
            "mm": F2Matrix([], cols=1),
        },
    )
    assert in_category_R(V)
    W = LambdaRep(
        DimVector(1, 0, 0, 0, 0),
        {k: F2Matrix([], cols=1) for k in ("pp", "pm", "mp", "mm")},
    )
    assert not in_category_R(W)
    assert in_category_R(tube_rep(F, 1))


def test_lattice_of_examples():
    V = LambdaRep(
        DimVector(1, 1, 0, 0, 0),
        {
            "pp": F2Matrix([[1]]),
            "pm": F2Matrix([], cols=1),
            "mp": F2Matrix([], cols=1),
            "mm": F2Matrix([], cols=1),
        },
    )
    M = lattice_of(V)
    assert M.rank == 1
    assert M.act_a.data == ((1,),) and M.act_b.data == ((1,),)
    # index of the tube lattice in its ambient is 2^(d_plus - d_dot)
    model = lattice_of_model(tube_rep(F, 1))
    from kleinlat.intmat import determinant

    assert abs(determinant(model.basis)) == 2 ** (8 - 4)
    with pytest.raises(ValueError):
        lattice_of(
            LambdaRep(
                DimVector(1, 0, 0, 0, 0),
                {k: F2Matrix([], cols=1) for k in ("pp", "pm", "mp", "mm")},
            )
        )


def test_phi_round_trip_random():
    rng = random.Random(0)
    for trial in range(60):
        V = random_rep_in_R(rng, 4)
        M = lattice_of(V)
        W = phi(M)
        assert dim_vector(M).as_tuple() == V.dims.as_tuple()
        pv, pw = decompose(V, seed=trial), decompose(W, seed=trial)
        assert len(pv) == len(pw)
        for Vp, mv in pv:
            assert any(
                mv == mw and reps_isomorphic(Vp, Wp) is not None for Wp, mw in pw
            )


def test_hom_reps_dimensions():
    V = phi(lattice_of(special_tube_rep("1", 1, 1)))
    assert len(hom_reps(V, V)) == 1
    W = phi(lattice_of(tube_rep(F, 1)))
    assert len(hom_reps(W, W)) == 2  # k[t]/(f) has dimension 2 over GF(2)
    # distinct homogeneous tubes see nothing of each other
    U = phi(lattice_of(tube_rep(G3, 1)))
    assert len(hom_reps(W, U)) == 0
    zero = LambdaRep(
        DimVector(0, 0, 0, 0, 0),
        {k: F2Matrix([], cols=0) for k in ("pp", "pm", "mp", "mm")},
    )
    assert all(h.is_zero() for h in hom_reps(V, zero))


def test_lift_and_reduce_functorial():
    M = lattice_of(special_tube_rep("1", 1, 2))
    N = lattice_of(special_tube_rep("1", 2, 1))
    dM, dN = phi_data(M), phi_data(N)
    for h in hom_reps(dM.rep, dN.rep):
        psi = lift_morphism(h, M, N)
        back = reduce_morphism(psi, M, N)
        assert back.phi_dot == h.phi_dot
        assert all(back.phi[k] == h.phi[k] for k in ("pp", "pm", "mp", "mm"))
    ident = RepMorphism.identity(dM.rep)
    psi = lift_morphism(ident, M, M)
    assert reduce_morphism(psi, M, M).phi_dot == ident.phi_dot
    # a zero morphism lifts into twice the sharp overlattice
    zero = RepMorphism.zero(dM.rep, dN.rep)
    psi0 = lift_morphism(zero, M, N)
    from kleinlat.klein import sharp, two_msharp_in_m

    L = two_msharp_in_m(N, sharp(N))
    for j in range(M.rank):
        assert L.coords(psi0.col(j)) is not None


def test_incompatible_morphism_rejected():
    # M has components (1,1,0,0), N has (0,0,1,1); a nonzero centre map
    # cannot intertwine with the forced zero component maps
    M = lattice_of(special_tube_rep("1", 1, 1))
    N = lattice_of(special_tube_rep("1", 2, 1))
    bad = RepMorphism(
        F2Matrix([[1]]),
        {
            "pp": F2Matrix([], cols=1),
            "pm": F2Matrix([], cols=1),
            "mp": F2Matrix([[]]),
            "mm": F2Matrix([[]]),
        },
    )
    with pytest.raises(ValueError):
        lift_morphism(bad, M, N)


def test_decompose_multiplicities_and_gluing():
    V1 = special_tube_rep("1", 1, 1)
    V2 = special_tube_rep("1", 2, 1)
    parts = decompose(V1.direct_sum(V2))
    assert sorted(p.dims.as_tuple() for p, _ in parts) == [
        (1, 0, 0, 1, 1),
        (1, 1, 1, 0, 0),
    ]
    parts = decompose(V1.direct_sum(V1))
    assert len(parts) == 1 and parts[0][1] == 2
    # random gluing: conjugate a direct sum and recover the same summands
    rng = random.Random(1)
    from kleinlat.f2 import is_invertible

    W = V1.direct_sum(tube_rep(F, 1))
    dd = W.dims.d_dot
    while True:
        g = F2Matrix([[rng.randint(0, 1) for _ in range(dd)] for _ in range(dd)])
        if is_invertible(g):
            break
    glued = LambdaRep(W.dims, {k: W.f[k] * g for k in ("pp", "pm", "mp", "mm")})
    pa = decompose(W)
    pb = decompose(glued)
    assert len(pa) == len(pb)
    for Vp, mv in pa:
        assert any(mv == mw and reps_isomorphic(Vp, Wp) is not None for Wp, mw in pb)


def test_indecomposability_certificate():
    ok, residue = endomorphism_local_data(tube_rep(F, 1))
    assert ok and residue == 2  # residue field GF(4)
    ok, residue = endomorphism_local_data(special_tube_rep("1", 1, 1))
    assert ok and residue == 1
    V = special_tube_rep("1", 1, 1)
    ok, _ = endomorphism_local_data(V.direct_sum(V))
    assert not ok


def test_identify_tube_sweep():
    for lam in ("0", "1", "inf"):
        for j in (1, 2):
            for n in range(1, 7):
                lab = identify_tube(special_tube_rep(lam, j, n))
                assert (lab.tube.lam, lab.j, lab.m) == (lam, j, n)
    for f, m in ((F, 1), (F, 2), (G3, 1), (G3, 2)):
        lab = identify_tube(tube_rep(f, m))
        assert lab.tube.kind == "hom" and lab.tube.poly == f and lab.m == m
    assert identify_tube(phi(lattice_of(special_tube_rep("0", 2, 3)))) == TubeLabel(
        TubeId.special("0"), 2, 3
    )
    # non-regular marker
    V = LambdaRep(
        DimVector(1, 1, 0, 0, 0),
        {
            "pp": F2Matrix([[1]]),
            "pm": F2Matrix([], cols=1),
            "mp": F2Matrix([], cols=1),
            "mm": F2Matrix([], cols=1),
        },
    )
    assert identify_tube(V) == NON_REGULAR


def test_tube_id_validation():
    with pytest.raises(ValueError):
        TubeId.homogeneous(F2Poly.from_string("t+1"))
    with pytest.raises(ValueError):
        TubeId.homogeneous(F2Poly.from_string("t^2+1"))  # reducible
    with pytest.raises(ValueError):
        TubeId.special("2")
