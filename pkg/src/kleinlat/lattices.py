"""Integer lattices, Hermite form, and lifting of exact sequences mod 2.

A ZLattice is a subgroup of Z^n held in row-style Hermite normal form
(positive pivots, entries above each pivot reduced into [0, pivot)), so two
lattices are equal iff their stored bases are equal.  On top of that sit the
usual operations: sum, intersection, membership, index, quotient invariants,
and saturation.

The second half implements the mod-2 lifting toolkit: lifting an invertible
matrix over GF(2) to a unimodular integer matrix and lifting a short exact
sequence of GF(2) vector spaces to one of free abelian groups.  These are the
building blocks for transporting quiver-level data to honest lattices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .f2 import F2Matrix, inverse as f2_inverse, is_invertible, rank as f2_rank, rref
from .intmat import IntMatrix, inverse_unimodular, smith_form


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _hnf_rows(rows: list[list[int]], cols: int) -> list[list[int]]:
    """Row-style HNF: positive pivots, reduced above, zero rows dropped."""
    basis: list[list[int]] = []  # echelon order by pivot column
    pivcol: list[int] = []

    for vec0 in rows:
        vec = list(vec0)
        for j in range(cols):
            if not vec[j]:
                continue
            at = next((bi for bi, pj in enumerate(pivcol) if pj == j), None)
            if at is None:
                if vec[j] < 0:
                    vec = [-x for x in vec]
                where = sum(1 for pj in pivcol if pj < j)
                basis.insert(where, vec)
                pivcol.insert(where, j)
                vec = None
                break
            row = basis[at]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                for t in range(j, cols):
                    vec[t] -= q * row[t]
            else:
                x, y, g = _xgcd(a, b)
                mbg, ag = -b // g, a // g
                for t in range(j, cols):
                    rt, vt = row[t], vec[t]
                    row[t] = x * rt + y * vt
                    vec[t] = mbg * rt + ag * vt
        # vec is either consumed or reduced to zero
    # normalize pivot signs and reduce above pivots (ascending pivot order,
    # so later reductions cannot disturb already-reduced pivot columns)
    for bi, j in enumerate(pivcol):
        if basis[bi][j] < 0:
            basis[bi] = [-x for x in basis[bi]]
    for bi in range(len(basis)):
        j = pivcol[bi]
        p = basis[bi][j]
        for ai in range(bi):
            q = basis[ai][j] // p
            if q:
                row = basis[bi]
                target = basis[ai]
                for t in range(j, cols):
                    target[t] -= q * row[t]
    return basis


class ZLattice:
    """A sublattice of Z^n with canonical (Hermite) basis rows."""

    __slots__ = ("ambient_rank", "basis", "_pivots")

    def __init__(self, ambient_rank: int, rows: Iterable[Sequence[int]] = (), *, _canonical=False):
        object.__setattr__(self, "ambient_rank", ambient_rank)
        if _canonical:
            b = tuple(tuple(r) for r in rows)
        else:
            mat = [list(r) for r in rows]
            for r in mat:
                if len(r) != ambient_rank:
                    raise ValueError("row length differs from ambient rank")
            b = tuple(tuple(r) for r in _hnf_rows(mat, ambient_rank))
        object.__setattr__(self, "basis", b)
        object.__setattr__(
            self,
            "_pivots",
            tuple(next(t for t in range(ambient_rank) if row[t]) for row in b),
        )

    def __setattr__(self, *a):  # pragma: no cover - guard
        raise AttributeError("ZLattice is immutable")

    @staticmethod
    def full(n: int) -> "ZLattice":
        return ZLattice(n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(n: int) -> "ZLattice":
        return ZLattice(n, [])

    def rank(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> IntMatrix:
        return IntMatrix(self.basis, cols=self.ambient_rank)

    def __eq__(self, other):
        return (
            isinstance(other, ZLattice)
            and self.ambient_rank == other.ambient_rank
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.basis))

    def __repr__(self):
        return f"ZLattice({self.ambient_rank}, {[list(r) for r in self.basis]!r})"

    # -- membership and coordinates -------------------------------------

    def coords(self, vec: Sequence[int]):
        """Coefficients of vec over the basis rows, or None if not a member."""
        if len(vec) != self.ambient_rank:
            raise ValueError("vector length differs from ambient rank")
        v = list(vec)
        out = [0] * len(self.basis)
        for bi, b in enumerate(self.basis):
            j = self._pivots[bi]
            if v[j]:
                if v[j] % b[j]:
                    return None
                q = v[j] // b[j]
                out[bi] = q
                for t in range(j, self.ambient_rank):
                    v[t] -= q * b[t]
        if any(v):
            return None
        return tuple(out)

    def __contains__(self, vec) -> bool:
        return self.coords(vec) is not None

    def contains_lattice(self, other: "ZLattice") -> bool:
        return all(self.coords(r) is not None for r in other.basis)

    # -- arithmetic ------------------------------------------------------

    def scale(self, c: int) -> "ZLattice":
        return ZLattice(self.ambient_rank, [[c * x for x in r] for r in self.basis])

    def sum(self, other: "ZLattice") -> "ZLattice":
        self._check(other)
        return ZLattice(self.ambient_rank, list(self.basis) + list(other.basis))

    def intersection(self, other: "ZLattice") -> "ZLattice":
        self._check(other)
        r1, r2 = len(self.basis), len(other.basis)
        if r1 == 0 or r2 == 0:
            return ZLattice.zero(self.ambient_rank)
        # kernel of [B1^T | -B2^T]: combinations x B1 = y B2
        stacked = IntMatrix(
            [
                [self.basis[i][t] for i in range(r1)] + [-other.basis[i][t] for i in range(r2)]
                for t in range(self.ambient_rank)
            ],
            cols=r1 + r2,
        )
        from .intmat import kernel_basis

        rows = []
        for k in kernel_basis(stacked):
            x = k[:r1]
            rows.append(
                [sum(x[i] * self.basis[i][t] for i in range(r1)) for t in range(self.ambient_rank)]
            )
        return ZLattice(self.ambient_rank, rows)

    def apply_matrix(self, M: IntMatrix) -> "ZLattice":
        """Image lattice {M v : v in L} (vectors as columns)."""
        if M.cols != self.ambient_rank:
            raise ValueError("matrix incompatible with ambient rank")
        return ZLattice(M.rows, [M.apply(r) for r in self.basis])

    def quotient_invariants(self, sub: "ZLattice") -> tuple:
        """Elementary divisors of self/sub (sub must be contained in self)."""
        self._check(sub)
        coords = []
        for r in sub.basis:
            c = self.coords(r)
            if c is None:
                raise ValueError("not a sublattice")
            coords.append(list(c))
        if len(self.basis) == 0:
            return ()
        C = IntMatrix(coords, cols=len(self.basis))
        sf = smith_form(C)
        diag = list(sf.invariants())
        free = len(self.basis) - len(diag)
        return tuple(d for d in diag if d != 1) + (0,) * free

    def index_in(self, ambient: "ZLattice"):
        """[ambient : self]; the string "infinite" when the ranks differ."""
        inv = ambient.quotient_invariants(self)
        if any(d == 0 for d in inv):
            return "infinite"
        out = 1
        for d in inv:
            out *= d
        return out

    def saturation(self) -> "ZLattice":
        """Smallest saturated (pure in Z^n) lattice containing self."""
        if not self.basis:
            return self
        from .intmat import kernel_basis

        # vectors w orthogonal to every basis row
        ker = kernel_basis(self.basis_matrix())
        if not ker:
            return ZLattice.full(self.ambient_rank)
        W = IntMatrix(ker, cols=self.ambient_rank)
        # saturation = {x : w . x = 0 for all relations w}
        sat_rows = kernel_basis(W)
        return ZLattice(self.ambient_rank, [list(v) for v in sat_rows])

    def _check(self, other: "ZLattice"):
        if self.ambient_rank != other.ambient_rank:
            raise ValueError("ambient ranks differ")

    def to_json(self) -> dict:
        return {"ambient_rank": self.ambient_rank, "basis": [list(r) for r in self.basis]}


def hnf(rows: Iterable[Sequence[int]], ambient_rank: int | None = None) -> ZLattice:
    """Canonical lattice generated by the given row vectors."""
    rows = [list(r) for r in rows]
    if ambient_rank is None:
        if not rows:
            raise ValueError("ambient rank required for an empty generating set")
        ambient_rank = len(rows[0])
    return ZLattice(ambient_rank, rows)


def lattice_mod2(L: ZLattice) -> F2Matrix:
    return F2Matrix(L.basis, cols=L.ambient_rank)


# ---------------------------------------------------------------------------
# lifting mod 2
# ---------------------------------------------------------------------------


def lift_invertible(Abar: F2Matrix) -> IntMatrix:
    """Lift an invertible matrix over GF(2) to one over Z with det +-1.

    Take the {0,1} entry lift M.  Its Smith form U M V has odd diagonal, so
    M is congruent to U^{-1} V^{-1} mod 2, and that product is unimodular.
    """
    if Abar.rows != Abar.cols:
        raise ValueError("not invertible mod 2")
    n = Abar.rows
    if n == 0:
        return IntMatrix([], cols=0)
    M = Abar.to_int()
    sf = smith_form(M)
    diag = sf.diagonal()
    if len(diag) < n or any(d % 2 == 0 for d in diag):
        raise ValueError("not invertible mod 2")
    out = inverse_unimodular(sf.U) * inverse_unimodular(sf.V)
    assert F2Matrix.from_int(out) == Abar
    return out


def lift_exact_sequence(alpha_bar: F2Matrix, beta_bar: F2Matrix) -> tuple[IntMatrix, IntMatrix]:
    """Lift 0 -> k^m -> k^n -> k^l -> 0 to a short exact sequence over Z.

    alpha_bar is n x m (injective), beta_bar is l x n (surjective) with
    beta_bar . alpha_bar = 0 and m + l = n.  Returns integer matrices
    (alpha, beta) reducing to the inputs mod 2 with Z^m -> Z^n -> Z^l exact.
    """
    n, m = alpha_bar.rows, alpha_bar.cols
    l = beta_bar.rows
    if beta_bar.cols != n or m + l != n:
        raise ValueError("input sequence not exact")
    if f2_rank(alpha_bar) != m or f2_rank(beta_bar) != l:
        raise ValueError("input sequence not exact")
    if not (beta_bar * alpha_bar).is_zero():
        raise ValueError("input sequence not exact")

    # Find invertible Sbar (n x n), Tbar (m x m) with Sbar^{-1} alpha Tbar = [I; 0].
    # Column-reduce alpha to echelon with row pivots recorded.
    R, pivots = rref(alpha_bar.transpose())  # rows of R = reduced columns
    # R rows (m of them) are a new basis of the column space; express alpha's
    # columns: alpha_bar * Tbar = stacked pivot form.  Simpler: build Sbar by
    # completing the column space of alpha to a basis of k^n.
    col_space = [tuple(r) for r in R.data[:m]]
    chosen = list(col_space)
    piv = set()
    for v in chosen:
        piv.add(next(i for i, x in enumerate(v) if x))
    for i in range(n):
        if i not in piv:
            e = tuple(1 if t == i else 0 for t in range(n))
            chosen.append(e)
    Sbar = F2Matrix([[chosen[j][i] for j in range(n)] for i in range(n)], cols=n)
    if not is_invertible(Sbar):
        raise ValueError("input sequence not exact")
    Sinv = f2_inverse(Sbar)
    top = F2Matrix([(Sinv * alpha_bar).data[i] for i in range(m)], cols=m)
    # alpha = Sbar [T'; 0] with T' invertible m x m
    if not is_invertible(top):
        raise ValueError("input sequence not exact")
    # beta_bar Sbar = [0 | Cbar]
    BS = beta_bar * Sbar
    zero_part = F2Matrix([r[:m] for r in BS.data], cols=m)
    Cbar = F2Matrix([r[m:] for r in BS.data], cols=l)
    if not zero_part.is_zero() or not is_invertible(Cbar):
        raise ValueError("input sequence not exact")

    S = lift_invertible(Sbar)
    T = lift_invertible(top)
    C = lift_invertible(Cbar)
    Sinv_z = inverse_unimodular(S)
    stack = IntMatrix([T.data[i] if i < m else [0] * m for i in range(n)], cols=m)
    alpha = S * stack
    beta = IntMatrix([[0] * m + list(C.data[i]) for i in range(l)], cols=n) * Sinv_z
    assert F2Matrix.from_int(alpha) == alpha_bar and F2Matrix.from_int(beta) == beta_bar
    assert (beta * alpha).is_zero()
    return alpha, beta


# ---------------------------------------------------------------------------
# subgroups of (Z/2^k)^n
# ---------------------------------------------------------------------------


def _hnf_rows_mod(rows: list, cols: int, q: int) -> list[list[int]]:
    """HNF of (row span + q Z^n), entries reduced mod q at every step.

    Reduction is sound because multiples of q e_i lie in the lattice; the
    final basis equals the plain HNF but intermediate growth is impossible.
    """
    basis: list[list[int]] = []
    pivcol: list[int] = []

    def insert(vec, j):
        if vec[j] < 0:
            vec = [-x for x in vec]
        where = sum(1 for pj in pivcol if pj < j)
        basis.insert(where, vec)
        pivcol.insert(where, j)

    work = [[x % q for x in r] for r in rows]
    work.extend([q if i == j else 0 for j in range(cols)] for i in range(cols))
    for vec in work:
        for j in range(cols):
            if not vec[j]:
                continue
            at = next((bi for bi, pj in enumerate(pivcol) if pj == j), None)
            if at is None:
                insert(vec, j)
                vec = None
                break
            row = basis[at]
            a, b = row[j], vec[j]
            if b % a == 0:
                f = b // a
                for t in range(j, cols):
                    vec[t] = (vec[t] - f * row[t]) % q
            else:
                x, y, g = _xgcd(a, b)
                mbg, ag = -b // g, a // g
                for t in range(j, cols):
                    rt, vt = row[t], vec[t]
                    row[t] = (x * rt + y * vt) % q
                    vec[t] = (mbg * rt + ag * vt) % q
                if row[j] == 0:
                    # reduction mod q can cancel the pivot; reinstate it
                    row[j] = q if g % q == 0 else g
                assert row[j] == g or row[j] == q
    for bi, j in enumerate(pivcol):
        if basis[bi][j] == 0:
            basis[bi][j] = q
    for bi in range(len(basis)):
        j = pivcol[bi]
        p = basis[bi][j]
        for ai in range(bi):
            f = basis[ai][j] // p
            if f:
                row = basis[bi]
                target = basis[ai]
                for t in range(j, cols):
                    target[t] -= f * row[t]
    return basis


def hnf_mod(rows: Iterable[Sequence[int]], n: int, q: int) -> ZLattice:
    """HNF basis of the lattice spanned by rows together with q Z^n.

    Entries are reduced mod q throughout, so this stays fast for the
    mod 2^k computations; the result is a full-rank lattice containing qZ^n.
    """
    reduced = _hnf_rows_mod([list(r) for r in rows], n, q)
    return ZLattice(n, reduced)


def _val2(x: int, k: int) -> int:
    """2-adic valuation of x mod 2^k, capped at k."""
    x &= (1 << k) - 1
    if x == 0:
        return k
    v = 0
    while x & 1 == 0:
        x >>= 1
        v += 1
    return v


def smith_mod_2k(A: IntMatrix, k: int, want_u: bool = True):
    """Diagonalize A over Z/2^k: U A V = diag(2^v_i) mod 2^k.

    Pivots are entries of minimal 2-adic valuation, so a single clearing
    pass per step suffices and entries never leave [0, 2^k).  Returns
    (U, vals, V) with U, V invertible mod 2^k and vals the pivot valuations;
    U is None when want_u is false.
    """
    q = 1 << k
    rows, cols = A.rows, A.cols
    m = [[x % q for x in r] for r in A.data]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)] if want_u else None
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    vals = []
    for s in range(min(rows, cols)):
        best = None
        for i in range(s, rows):
            mi = m[i]
            for j in range(s, cols):
                if mi[j]:
                    val = _val2(mi[j], k)
                    if best is None or val < best[0]:
                        best = (val, i, j)
                        if val == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        val, pi, pj = best
        if pi != s:
            m[pi], m[s] = m[s], m[pi]
            if want_u:
                u[pi], u[s] = u[s], u[pi]
        if pj != s:
            for r in m:
                r[pj], r[s] = r[s], r[pj]
            for r in v:
                r[pj], r[s] = r[s], r[pj]
        unit = m[s][s] >> val
        inv = pow(unit, -1, q)
        m[s] = [(x * inv) % q for x in m[s]]
        if want_u:
            u[s] = [(x * inv) % q for x in u[s]]
        p = 1 << val
        for i in range(s + 1, rows):
            if m[i][s]:
                f = m[i][s] // p
                mi, ms = m[i], m[s]
                for t in range(cols):
                    mi[t] = (mi[t] - f * ms[t]) % q
                if want_u:
                    ui, us = u[i], u[s]
                    for t in range(rows):
                        ui[t] = (ui[t] - f * us[t]) % q
        for j in range(s + 1, cols):
            if m[s][j]:
                f = m[s][j] // p
                for r in m:
                    r[j] = (r[j] - f * r[s]) % q
                for r in v:
                    r[j] = (r[j] - f * r[s]) % q
        vals.append(val)
    return (IntMatrix(u, cols=rows) if want_u else None), vals, IntMatrix(v, cols=cols)


def annihilator_mod(L: ZLattice, q: int) -> ZLattice:
    """{w : <w, x> = 0 mod q for all x in L}, for lattices containing qZ^n."""
    if not L.basis:
        return ZLattice.full(L.ambient_rank)
    return kernel_mod(L.basis_matrix(), q)


def intersection_mod(L1: ZLattice, L2: ZLattice, q: int) -> ZLattice:
    """Intersection of two lattices containing qZ^n, all arithmetic mod q."""
    A1 = annihilator_mod(L1, q)
    A2 = annihilator_mod(L2, q)
    stacked = [list(r) for r in A1.basis] + [list(r) for r in A2.basis]
    if not stacked:
        return ZLattice.full(L1.ambient_rank)
    return kernel_mod(IntMatrix(stacked, cols=L1.ambient_rank), q)


def inv_mod_2k(M: IntMatrix, k: int) -> IntMatrix:
    """Inverse of a matrix invertible mod 2^k (odd determinant)."""
    q = 1 << k
    n = M.rows
    if M.cols != n:
        raise ValueError("not square")
    a = [[x % q for x in r] + [1 if t == i else 0 for t in range(n)] for i, r in enumerate(M.data)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col] % 2 == 1:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix not invertible mod 2")
        a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], -1, q)
        a[col] = [(x * inv) % q for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[col])]
    return IntMatrix([r[n:] for r in a], cols=n)


@dataclass(frozen=True)
class Pow2Quotient:
    """Z^s modulo (row space of C + 2^k Z^s), with coordinates.

    invariants are the cyclic orders (powers of two, > 1); generators[i] is a
    vector of Z^s generating the i-th factor.
    """

    s: int
    k: int
    invariants: tuple
    positions: tuple
    generators: tuple
    _U: IntMatrix

    def coords(self, vec) -> tuple:
        q = 1 << self.k
        y = self._U.apply(vec)
        return tuple(y[p] % d for p, d in zip(self.positions, self.invariants))


def pow2_quotient(C: IntMatrix, s: int, k: int) -> Pow2Quotient:
    """Quotient of Z^s by the subgroup generated by the rows of C and 2^k."""
    q = 1 << k
    if C.rows == 0:
        Ct = IntMatrix.zero(s, 0)
    else:
        Ct = C.transpose()
    U, vals, _V = smith_mod_2k(Ct, k)
    vals = list(vals) + [k] * (s - len(vals))
    Uinv = inv_mod_2k(U, k)
    invariants = []
    positions = []
    gens = []
    for i in range(s):
        d = 1 << vals[i]
        if d == 1:
            continue
        invariants.append(d)
        positions.append(i)
        gens.append(tuple(Uinv.data[t][i] % q for t in range(s)))
    return Pow2Quotient(
        s=s,
        k=k,
        invariants=tuple(invariants),
        positions=tuple(positions),
        generators=tuple(gens),
        _U=U,
    )


def kernel_mod(A: IntMatrix, q: int) -> ZLattice:
    """The lattice {x in Z^n : A x = 0 mod q} (contains q Z^n)."""
    n = A.cols
    if A.rows == 0 or q == 1:
        return ZLattice.full(n)
    k = q.bit_length() - 1
    if q == (1 << k):
        _U, vals, V = smith_mod_2k(A, k, want_u=False)
        gens = []
        for i in range(n):
            if i < len(vals):
                scale = 1 << (k - vals[i])
                gens.append([(scale * V.data[t][i]) % q for t in range(n)])
            else:
                gens.append([V.data[t][i] % q for t in range(n)])
        return hnf_mod(gens, n, q)
    Amod = A.mod(q)
    aug = Amod.hstack(IntMatrix.diagonal([q] * A.rows))
    from .intmat import kernel_basis

    ker = kernel_basis(aug)
    rows = [list(v[:n]) for v in ker]
    return hnf_mod(rows, n, q)


@dataclass(frozen=True)
class FiniteQuotient:
    """The group K/I for lattices I <= K <= Z^n, I of finite index in K.

    invariants: orders (> 1, or 0 for a free factor) of the cyclic factors;
    generators: vectors in Z^n whose classes generate those factors.  When
    q > 0, classes are taken mod q Z^n as well (q Z^n must lie inside I).
    """

    n: int
    q: int
    invariants: tuple
    generators: tuple  # tuple of vectors
    _K: ZLattice
    _I: ZLattice
    _V: IntMatrix  # right Smith transform of the inclusion
    _positions: tuple  # indices of the non-trivial factors

    def coords(self, vec: Sequence[int]) -> tuple:
        """Coordinates of the class of vec, reduced mod the invariants."""
        v = [x % self.q for x in vec] if self.q else list(vec)
        c = self._K.coords(v)
        if c is None:
            raise ValueError("vector is not in the subgroup")
        y = self._V.transpose().apply(c)  # row c times V
        out = []
        for pos, d in zip(self._positions, self.invariants):
            out.append(y[pos] % d if d else y[pos])
        return tuple(out)

    def order(self) -> int:
        out = 1
        for d in self.invariants:
            if d == 0:
                raise ValueError("quotient is infinite")
            out *= d
        return out

    def exponent(self) -> int:
        out = 1
        for d in self.invariants:
            if d == 0:
                raise ValueError("quotient is infinite")
            out = out * d // _gcd(out, d)
        return out

    def is_trivial(self) -> bool:
        return not self.invariants


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def finite_quotient(K: ZLattice, I: ZLattice, q: int = 0) -> FiniteQuotient:
    """Structure of K/I as an abelian group, with coordinates.

    q > 0 declares that both lattices contain q Z^n and that classes may be
    reduced mod q when testing membership.
    """
    n = K.ambient_rank
    coords = []
    for r in I.basis:
        c = K.coords(r)
        if c is None:
            raise ValueError("not a sublattice")
        coords.append(list(c))
    rk = len(K.basis)
    if rk == 0:
        return FiniteQuotient(n, q, (), (), K, I, IntMatrix([], cols=0), ())
    C = IntMatrix(coords, cols=rk) if coords else IntMatrix.zero(0, rk)
    sf = smith_form(C)
    diag = [0] * rk
    for i, d in enumerate(sf.diagonal()):
        diag[i] = d
    Vinv = inverse_unimodular(sf.V)
    # In the K-basis given by the rows of Vinv, the sublattice I is spanned by
    # diag[i] times row i; factors with diag != 1 survive in the quotient.
    invariants = []
    gens = []
    positions = []
    B = K.basis_matrix()
    for i in range(rk):
        d = diag[i]
        if d == 1:
            continue
        invariants.append(d)
        positions.append(i)
        coeffs = Vinv.data[i]
        vec = [sum(coeffs[s] * B.data[s][t] for s in range(rk)) for t in range(n)]
        gens.append(tuple(vec))
    return FiniteQuotient(
        n, q, tuple(invariants), tuple(gens), K, I, sf.V, tuple(positions)
    )
