import random

import pytest
from hypothesis import given, settings, strategies as st

from kleinlat.intmat import (
    IntMatrix,
    determinant,
    kernel_basis,
    smith_form,
    solve_int,
)
from kleinlat.f2 import F2Matrix, inverse, is_invertible, nullspace, rank, solve
from kleinlat.lattices import (
    ZLattice,
    finite_quotient,
    hnf,
    hnf_mod,
    intersection_mod,
    inv_mod_2k,
    kernel_mod,
    lift_exact_sequence,
    lift_invertible,
    pow2_quotient,
    smith_mod_2k,
)


small_matrices = st.integers(1, 5).flatmap(
    lambda n: st.integers(1, 5).flatmap(
        lambda m: st.lists(
            st.lists(st.integers(-9, 9), min_size=m, max_size=m),
            min_size=n,
            max_size=n,
        )
    )
)


@settings(max_examples=120, deadline=None)
@given(small_matrices)
def test_smith_form_properties(rows):
    A = IntMatrix(rows)
    sf = smith_form(A)
    assert sf.U * A * sf.V == sf.D
    assert abs(determinant(sf.U)) == 1
    assert abs(determinant(sf.V)) == 1
    diag = sf.diagonal()
    for i in range(len(diag) - 1):
        if diag[i]:
            assert diag[i + 1] % diag[i] == 0
        else:
            assert diag[i + 1] == 0
    assert all(d >= 0 for d in diag)
    # off-diagonal zero
    for i in range(sf.D.rows):
        for j in range(sf.D.cols):
            if i != j:
                assert sf.D.data[i][j] == 0


def test_smith_examples():
    assert smith_form(IntMatrix.identity(3)).D == IntMatrix.identity(3)
    assert smith_form(IntMatrix.zero(2, 2)).D == IntMatrix.zero(2, 2)
    sf = smith_form(IntMatrix([[2, 4], [6, 8]]))
    assert sf.diagonal() == (2, 4)


def test_smith_deterministic():
    A = IntMatrix([[2, 4, 1], [6, 8, 0], [3, 3, 3]])
    assert smith_form(A) == smith_form(A)


def test_hnf_examples():
    assert hnf([[1, 0], [0, 1], [1, 1]]).basis == ((1, 0), (0, 1))
    assert hnf([[2, 0], [0, 2], [1, 1]]).basis == ((1, 1), (0, 2))
    assert hnf([], 3).basis == ()


@settings(max_examples=120, deadline=None)
@given(
    st.integers(1, 5).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(
                st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                min_size=0,
                max_size=6,
            ),
        )
    ),
    st.randoms(use_true_random=False),
)
def test_hnf_idempotent_and_mixing_invariant(data, rng):
    n, rows = data
    L = hnf(rows, n)
    assert hnf([list(r) for r in L.basis], n) == L
    if rows:
        mixed = [list(r) for r in rows]
        for _ in range(5):
            i, j = rng.randrange(len(mixed)), rng.randrange(len(mixed))
            if i != j:
                c = rng.randint(-2, 2)
                mixed[i] = [a + c * b for a, b in zip(mixed[i], mixed[j])]
        assert hnf(mixed, n) == L


def test_lattice_ops_examples():
    full = ZLattice.full(2)
    two = full.scale(2)
    assert full.quotient_invariants(two) == (2, 2)
    assert two.index_in(full) == 4
    assert full.quotient_invariants(full) == ()
    assert full.index_in(full) == 1
    L = hnf([[1, 1], [0, 2]])
    assert two.index_in(L) == 2
    # coset-count oracle: members of L modulo 2Z^2, found by enumeration
    reps = set()
    for a in range(-4, 5):
        for b in range(-4, 5):
            if (a, b) in L:
                reps.add((a % 2, b % 2))
    assert len(reps) == 2


def test_membership_and_sum_intersection():
    L1 = hnf([[2, 0], [0, 3]])
    L2 = hnf([[3, 0], [0, 2]])
    s = L1.sum(L2)
    assert s == ZLattice.full(2)
    inter = L1.intersection(L2)
    assert inter == hnf([[6, 0], [0, 6]])
    assert (2, 3) in L1 and (2, 2) not in L1
    with pytest.raises(ValueError):
        ZLattice.full(2).quotient_invariants(hnf([[1, 1, 1]], 3))


def test_not_a_sublattice_error():
    L1 = hnf([[2, 0], [0, 2]])
    with pytest.raises(ValueError):
        L1.quotient_invariants(ZLattice.full(2))


def test_saturation():
    L = hnf([[2, 0], [0, 4]])
    assert L.saturation() == ZLattice.full(2)
    L2 = hnf([[2, 4]])
    assert L2.saturation() == hnf([[1, 2]])


def test_lift_invertible_examples_and_random():
    ident = F2Matrix.identity(3)
    assert lift_invertible(ident) == IntMatrix.identity(3)
    M = lift_invertible(F2Matrix([[0, 1], [1, 0]]))
    assert abs(determinant(M)) == 1
    assert F2Matrix.from_int(M) == F2Matrix([[0, 1], [1, 0]])
    assert lift_invertible(F2Matrix([[1, 1], [0, 1]])) == IntMatrix([[1, 1], [0, 1]])
    rng = random.Random(0)
    for _ in range(1000):
        n = rng.randint(1, 8)
        while True:
            Ab = F2Matrix([[rng.randint(0, 1) for _ in range(n)] for _ in range(n)])
            if is_invertible(Ab):
                break
        M = lift_invertible(Ab)
        assert abs(determinant(M)) == 1
        assert F2Matrix.from_int(M) == Ab
    with pytest.raises(ValueError):
        lift_invertible(F2Matrix([[1, 1], [1, 1]]))


def test_lift_exact_sequence():
    alpha = F2Matrix([[1], [0]])
    beta = F2Matrix([[0, 1]])
    a, b = lift_exact_sequence(alpha, beta)
    assert (b * a).is_zero()
    assert F2Matrix.from_int(a) == alpha and F2Matrix.from_int(b) == beta
    rng = random.Random(1)
    for _ in range(60):
        n = rng.randint(2, 6)
        m = rng.randint(1, n - 1)
        while True:
            S = F2Matrix([[rng.randint(0, 1) for _ in range(n)] for _ in range(n)])
            if is_invertible(S):
                break
        alpha = F2Matrix([[S.data[i][j] for j in range(m)] for i in range(n)])
        Sinv = inverse(S)
        beta = F2Matrix([Sinv.data[i] for i in range(m, n)])
        a, b = lift_exact_sequence(alpha, beta)
        assert (b * a).is_zero()
        sfa, sfb = smith_form(a), smith_form(b)
        assert sfa.rank() == m and all(d == 1 for d in sfa.invariants())
        assert sfb.rank() == n - m and all(d == 1 for d in sfb.invariants())
    with pytest.raises(ValueError):
        # beta . alpha != 0
        lift_exact_sequence(F2Matrix([[1], [0]]), F2Matrix([[1, 0]]))
    with pytest.raises(ValueError):
        # alpha not injective
        lift_exact_sequence(F2Matrix([[0], [0]]), F2Matrix([[1, 0]]))


def test_kernel_basis_is_saturated():
    rng = random.Random(2)
    for _ in range(50):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 5)
        A = IntMatrix([[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)])
        ker = kernel_basis(A)
        for v in ker:
            assert all(x == 0 for x in A.apply(v))
        L = hnf([list(v) for v in ker], cols)
        assert L.saturation() == L


def test_solve_int():
    A = IntMatrix([[2, 0], [0, 3]])
    assert solve_int(A, [4, 9]) == (2, 3)
    assert solve_int(A, [1, 0]) is None


def test_f2_basics():
    A = F2Matrix([[1, 0, 1], [0, 1, 1], [1, 1, 0]])
    assert rank(A) == 2
    ns = nullspace(A)
    assert len(ns) == 1
    assert A.apply(ns[0]) == (0, 0, 0)
    x = solve(A, (1, 1, 0))
    assert x is not None and A.apply(x) == (1, 1, 0)
    B = F2Matrix([[1, 1], [0, 1]])
    assert inverse(B) * B == F2Matrix.identity(2)


def test_mod_2k_machinery():
    rng = random.Random(3)
    for _ in range(40):
        k = rng.randint(1, 4)
        q = 1 << k
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        A = IntMatrix([[rng.randint(0, q - 1) for _ in range(cols)] for _ in range(rows)])
        U, vals, V = smith_mod_2k(A, k)
        prod = (U * A * V).mod(q)
        for i in range(rows):
            for j in range(cols):
                want = (1 << vals[i]) % q if (i == j and i < len(vals)) else 0
                assert prod.data[i][j] == want
        ker = kernel_mod(A, q)
        for row in ker.basis:
            assert all(x % q == 0 for x in A.apply(row))
        # kernel is complete: every random solution lies inside
        for _ in range(10):
            x = [rng.randint(0, q - 1) for _ in range(cols)]
            if all(v % q == 0 for v in A.apply(x)):
                assert ker.coords(x) is not None


def test_pow2_quotient_against_finite_quotient():
    rng = random.Random(4)
    for _ in range(40):
        s = rng.randint(1, 4)
        k = rng.randint(1, 3)
        gens = [[rng.randint(0, 7) for _ in range(s)] for _ in range(rng.randint(0, 4))]
        C = IntMatrix(gens, cols=s) if gens else IntMatrix.zero(0, s)
        pq = pow2_quotient(C, s, k)
        L = hnf_mod(gens, s, 1 << k)
        fq = finite_quotient(ZLattice.full(s), L)
        assert tuple(sorted(pq.invariants)) == tuple(sorted(fq.invariants))


def test_inv_mod_2k():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(1, 5)
        k = rng.randint(1, 4)
        q = 1 << k
        while True:
            M = IntMatrix([[rng.randint(0, q - 1) for _ in range(n)] for _ in range(n)])
            if determinant(M) % 2 == 1:
                break
        Minv = inv_mod_2k(M, k)
        assert (M * Minv).mod(q) == IntMatrix.identity(n).mod(q)


def test_intersection_mod():
    q = 8
    L1 = hnf_mod([[2, 0]], 2, q)
    L2 = hnf_mod([[0, 2], [4, 0]], 2, q)
    inter = intersection_mod(L1, L2, q)
    for row in inter.basis:
        assert L1.coords([x % q for x in row]) is not None
        assert L2.coords([x % q for x in row]) is not None
