import pytest

from kleinlat.klein import sign_lattice
from kleinlat.polys import F2Poly
from kleinlat.quiver import TubeId
from kleinlat.tubes import tube_module
from kleinlat.colattices import (
    DualSumContext,
    DualTubeContext,
    co_canonical_form,
    colattice_cohomology,
    dual_chain,
    dual_level,
    dual_sum_orbit_partition,
    eta,
    subgroup_order,
    verify_eta_iso,
)
from kleinlat.cohomology import push_class

F = F2Poly.from_string("t^2+t+1")


def test_dual_level_basics():
    M = sign_lattice("+", "+")
    N = dual_level(M, 1)
    assert N.order() == 2
    assert N.transposed_module().act_a.data == ((1,),)
    T = tube_module(TubeId.special("1"), 1, 2)
    Nt = dual_level(T.lattice, 3)
    assert Nt.order() == 8 ** T.lattice.rank
    mod = Nt.transposed_module()
    assert mod.act_a * mod.act_a == __import__("kleinlat.intmat", fromlist=["IntMatrix"]).IntMatrix.identity(T.lattice.rank)


def test_stable_group_orders():
    Tf1 = tube_module(TubeId.homogeneous(F), None, 1)
    assert colattice_cohomology(Tf1.lattice, 2).invariants == (2, 2)
    T11 = tube_module(TubeId.special("1"), 1, 1)
    assert colattice_cohomology(T11.lattice, 1).invariants == (2,)
    assert colattice_cohomology(T11.lattice, 2).invariants == ()
    # parity periodicity
    for n in (1, 2):
        a = colattice_cohomology(Tf1.lattice, n).order()
        b = colattice_cohomology(Tf1.lattice, n + 2).order()
        assert a == b


def test_eta_iso_small_sweep():
    for lam in ("0", "1", "inf"):
        for j in (1, 2):
            for m in (1, 2):
                T = tube_module(TubeId.special(lam), j, m)
                for n in (1, 2, 3, 4):
                    assert verify_eta_iso(T, n), (lam, j, m, n)
    for m in (1, 2):
        T = tube_module(TubeId.homogeneous(F), None, m)
        for n in (1, 2):
            assert verify_eta_iso(T, n)


def test_eta_rejects_bad_vector():
    T = tube_module(TubeId.homogeneous(F), None, 1)
    H = colattice_cohomology(T.lattice, 1)
    N = H.colattice
    with pytest.raises(ValueError):
        eta(N, tuple([1] * N.rank), 1, False)


def test_dual_chain_orthogonality():
    T = tube_module(TubeId.homogeneous(F), None, 2)
    chain = dual_chain(T)
    N = dual_level(T.lattice, 3)
    orders = [subgroup_order(N, L) for L in chain]
    assert orders[0] == 1 and orders[-1] == N.order()
    for k in range(len(orders) - 1):
        assert orders[k] < orders[k + 1]
    for k, L in enumerate(chain):
        sub = T.chain[k]
        for row in L.basis:
            for v in sub.basis:
                assert sum(a * b for a, b in zip(row, v)) % N.modulus == 0
    # orders match the duals of the quotients M/M_k level-wise
    for k in range(len(chain)):
        rank_quot = T.lattice.rank - T.chain[k].rank()
        assert orders[k] == N.modulus ** rank_quot


def test_dual_positions_and_z_classes():
    T = tube_module(TubeId.homogeneous(F), None, 2)
    ctx = DualTubeContext(T, 2)
    for k in (0, 1):
        zc = ctx.z_class(k)
        assert zc is not None
        assert ctx.filtration_position(zc) == k
    assert ctx.filtration_position(ctx.H.zero()) == "zero"


def test_co_canonical_fibers_match_orbits():
    T = tube_module(TubeId.homogeneous(F), None, 2)
    sc = DualSumContext([T], 2)
    orbits = dual_sum_orbit_partition(sc)
    fibers = {}
    for cls in sc.H.all_classes():
        cf = co_canonical_form([T], cls, 2, context=sc)
        key = (str(cf.data), tuple(sorted(str(l) for l in cf.n0_labels)))
        fibers.setdefault(key, set()).add(tuple(cls.coords))
        assert push_class(cf.witness, cls, sc.H) == cf.canonical_class
    assert sorted(map(frozenset, fibers.values())) == sorted(map(frozenset, orbits))


def test_co_canonical_two_summands():
    T1 = tube_module(TubeId.special("1"), 1, 2)
    T2 = tube_module(TubeId.special("1"), 1, 1)
    sc = DualSumContext([T1, T2], 2)
    orbits = dual_sum_orbit_partition(sc)
    fibers = {}
    for cls in sc.H.all_classes():
        cf = co_canonical_form([T1, T2], cls, 2, context=sc)
        key = (str(cf.data), tuple(sorted(str(l) for l in cf.n0_labels)))
        fibers.setdefault(key, set()).add(tuple(cls.coords))
    assert sorted(map(frozenset, fibers.values())) == sorted(map(frozenset, orbits))
    # zero class leaves everything in the complement
    cf0 = co_canonical_form([T1, T2], sc.H.zero(), 2, context=sc)
    assert cf0.data.is_empty() and len(cf0.n0_labels) == 2


def test_costandard_sequence_shape():
    T = tube_module(TubeId.homogeneous(F), None, 2)
    sc = DualSumContext([T], 2)
    seen = set()
    for cls in sc.H.all_classes():
        cf = co_canonical_form([T], cls, 2, context=sc)
        if cf.positions[0] is not None:
            seen.add((cf.data.entries[0][1][0].m, cf.data.entries[0][1][0].k))
    assert (2, 1) in seen and (2, 0) in seen


def test_not_stabilized_detection():
    # absurdly low level: the stabilization check must engage (level >= 2)
    T = tube_module(TubeId.homogeneous(F), None, 1)
    with pytest.raises(ValueError):
        colattice_cohomology(T.lattice, 1, level=1)
