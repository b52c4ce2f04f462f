"""Group cohomology of Kleinian lattices and canonical forms of classes.

Cochains in degree n are (n+1)-tuples of module vectors, the value on the
monomial x^j y^(n-j) sitting at index j.  H^n is computed exactly from the
polynomial resolution by Smith reduction of kernel modulo image; every class
carries coordinates against the computed cyclic generators.

For a tube member the submodule chain induces a filtration of H^n whose
strata are the automorphism orbits.  canonical_form() normalizes a class on
a direct sum of tube members to the fixed stratum representatives and then
cancels components against each other with unipotent automorphisms, emitting
standard data, the complementary summand list, and an explicit witness
automorphism.  A brute-force orbit closure is included as the independent
oracle for the orbit structure on small groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .f2 import F2Matrix, is_invertible
from .intmat import IntMatrix, determinant, inverse_unimodular, kernel_basis, solve_int, solve_matrix_exact
from .klein import KLattice, SignPair, eigencomponent
from .lattices import ZLattice, finite_quotient, hnf, pow2_quotient
from .quiver import TubeLabel
from .resolutions import r_apply, twist_chain_maps
from .tubes import TubeModule, hom_klattices, s3_images


@dataclass(frozen=True)
class Cochain:
    """Degree-n cochain; values[j] is the value on x^j y^(n-j)."""

    n: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.n + 1:
            raise ValueError("a degree-n cochain has n+1 values")

    @staticmethod
    def zero(n: int, rank: int) -> "Cochain":
        return Cochain(n, tuple((0,) * rank for _ in range(n + 1)))

    def flatten(self) -> tuple:
        out = []
        for v in self.values:
            out.extend(v)
        return tuple(out)

    @staticmethod
    def unflatten(n: int, rank: int, flat: Sequence[int]) -> "Cochain":
        vals = tuple(tuple(flat[j * rank: (j + 1) * rank]) for j in range(n + 1))
        return Cochain(n, vals)

    def map_values(self, psi: IntMatrix) -> "Cochain":
        return Cochain(self.n, tuple(psi.apply(v) for v in self.values))

    def add(self, other: "Cochain") -> "Cochain":
        return Cochain(
            self.n,
            tuple(tuple(a + b for a, b in zip(v, w)) for v, w in zip(self.values, other.values)),
        )

    def scale(self, c: int) -> "Cochain":
        return Cochain(self.n, tuple(tuple(c * x for x in v) for v in self.values))


def coboundary(gamma: Cochain, M: KLattice) -> Cochain:
    """The differential: values of the degree-(n+1) coboundary."""
    n = gamma.n
    rank = M.rank
    for v in gamma.values:
        if len(v) != rank:
            raise ValueError("cochain values do not match the module rank")
    out = []
    for k in range(n + 2):
        acc = [0] * rank
        sk = 1 if k % 2 == 0 else -1
        if 1 <= k <= n + 1:
            prev = gamma.values[k - 1]
            av = M.act_a.apply(prev)
            for t in range(rank):
                acc[t] += av[t] + sk * prev[t]
        if k <= n:
            cur = gamma.values[k]
            l = n + 1 - k
            sl = 1 if l % 2 == 0 else -1
            bv = M.act_b.apply(cur)
            for t in range(rank):
                acc[t] += sk * (bv[t] + sl * cur[t])
        out.append(tuple(acc))
    return Cochain(n + 1, tuple(out))


def differential_matrix(M: KLattice, n: int) -> IntMatrix:
    """Matrix of the coboundary C^n -> C^(n+1) on flattened cochains."""
    r = M.rank
    rows = (n + 2) * r
    cols = (n + 1) * r
    data = [[0] * cols for _ in range(rows)]

    def add_block(bi, bj, mat, sign=1):
        for i in range(r):
            for j in range(r):
                v = mat.data[i][j]
                if v:
                    data[bi * r + i][bj * r + j] += sign * v

    ident = IntMatrix.identity(r)
    for k in range(n + 2):
        sk = 1 if k % 2 == 0 else -1
        if 1 <= k <= n + 1:
            add_block(k, k - 1, M.act_a)
            add_block(k, k - 1, ident, sk)
        if k <= n:
            l = n + 1 - k
            sl = 1 if l % 2 == 0 else -1
            add_block(k, k, M.act_b, sk)
            add_block(k, k, ident, sk * sl)
    return IntMatrix(data, cols=cols)


class CohomologyGroup:
    """H^n(K, M) with explicit generator cocycles and coordinates.

    Kernel modulo image of the cochain complex; since the exponent divides
    four, the quotient is taken mod 8 by fast 2-adic reduction, and an
    assertion confirms no invariant 8 shows up.
    """

    def __init__(self, M: KLattice, n: int):
        if n < 1:
            raise ValueError("degree must be >= 1")
        self.module = M
        self.n = n
        r = M.rank
        D = differential_matrix(M, n)
        ker = hnf([list(v) for v in kernel_basis(D)], (n + 1) * r)
        self._kernel = ker
        s = ker.rank()
        Dprev = differential_matrix(M, n - 1)
        coords = []
        for j in range(Dprev.cols):
            c = ker.coords(Dprev.col(j))
            assert c is not None, "image not inside the kernel"
            coords.append(list(c))
        C = IntMatrix(coords, cols=s) if coords else IntMatrix.zero(0, s)
        self._q = pow2_quotient(C, s, 3)
        assert all(4 % d == 0 for d in self._q.invariants)
        self.invariants = self._q.invariants
        B = ker.basis
        gens = []
        for g in self._q.generators:
            flat = [0] * ((n + 1) * r)
            for t, c in enumerate(g):
                if c:
                    row = B[t]
                    for a in range((n + 1) * r):
                        flat[a] += c * row[a]
            gens.append(Cochain.unflatten(n, r, flat))
        self.generators = tuple(gens)

    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def exponent(self) -> int:
        out = 1
        for d in self.invariants:
            out = out * d // _gcd(out, d)
        return out

    def is_cocycle(self, gamma: Cochain) -> bool:
        return all(x == 0 for v in coboundary(gamma, self.module).values for x in v)

    def class_of(self, gamma: Cochain) -> "CohClass":
        flat = gamma.flatten()
        c = self._kernel.coords(flat)
        if c is None:
            raise ValueError("not a cocycle")
        coords = self._q.coords(c)
        return CohClass(self, coords)

    def zero(self) -> "CohClass":
        return CohClass(self, tuple(0 for _ in self.invariants))

    def from_coords(self, coords: Sequence[int]) -> "CohClass":
        return CohClass(
            self, tuple(c % d for c, d in zip(coords, self.invariants))
        )

    def cochain_of(self, cls: "CohClass") -> Cochain:
        out = Cochain.zero(self.n, self.module.rank)
        for c, g in zip(cls.coords, self.generators):
            if c:
                out = out.add(g.scale(c))
        return out

    def all_classes(self):
        """Iterate every class (intended for small groups)."""
        def rec(i, acc):
            if i == len(self.invariants):
                yield CohClass(self, tuple(acc))
                return
            for v in range(self.invariants[i]):
                acc.append(v)
                yield from rec(i + 1, acc)
                acc.pop()
        yield from rec(0, [])


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class CohClass:
    """A cohomology class as coordinates in its group."""

    group: CohomologyGroup
    coords: tuple

    def __eq__(self, other):
        return (
            isinstance(other, CohClass)
            and self.group is other.group
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.group), self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def add(self, other: "CohClass") -> "CohClass":
        assert self.group is other.group
        return self.group.from_coords(
            tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def to_json(self):
        return {"coords": list(self.coords), "invariants": list(self.group.invariants)}


def cohomology_group(M: KLattice, n: int) -> CohomologyGroup:
    return CohomologyGroup(M, n)


def cohomology_invariants_generic(M: KLattice, n: int) -> tuple:
    """Invariant factors by the generic Smith route (independent oracle)."""
    r = M.rank
    D = differential_matrix(M, n)
    ker = hnf([list(v) for v in kernel_basis(D)], (n + 1) * r)
    Dprev = differential_matrix(M, n - 1)
    img = hnf([list(Dprev.col(j)) for j in range(Dprev.cols)], (n + 1) * r)
    fq = finite_quotient(ker, img)
    return tuple(sorted(fq.invariants))


def push_class(psi: IntMatrix, cls: CohClass, dst: CohomologyGroup) -> CohClass:
    """Image of a class under an equivariant map given on cochain values."""
    gamma = cls.group.cochain_of(cls)
    return dst.class_of(gamma.map_values(psi))


def in_span(gens: list[CohClass], target: CohClass) -> bool:
    """Membership of target in the subgroup generated by gens."""
    group = target.group
    if target.is_zero():
        return True
    if not gens:
        return False
    s = len(group.invariants)
    cols = [list(g.coords) for g in gens]
    Amat = IntMatrix(
        [[cols[j][i] for j in range(len(cols))] for i in range(s)], cols=len(cols)
    )
    aug = Amat.hstack(IntMatrix.diagonal(list(group.invariants)))
    return solve_int(aug, list(target.coords)) is not None


# ---------------------------------------------------------------------------
# the closed-form cocycles
# ---------------------------------------------------------------------------


def is_infinity_tube(label: TubeLabel) -> bool:
    return label.tube.kind == "special" and label.tube.lam == "inf"


def target_component_key(n: int, in_infinity: bool) -> str:
    if n % 2 == 0:
        return "pp"
    return "pm" if in_infinity else "mp"


def target_component(M: KLattice, n: int, in_infinity: bool) -> ZLattice:
    """The eigencomponent M(n) feeding the closed-form cocycles."""
    return eigencomponent(M, SignPair.from_key(target_component_key(n, in_infinity)))


def xi(M: KLattice, v: Sequence[int], n: int, in_infinity: bool) -> Cochain:
    """The one-slot cocycle with value v on x^n (or on y^n for the infinity tube)."""
    comp = target_component(M, n, in_infinity)
    if comp.coords(v) is None:
        raise ValueError("v not in M(n)")
    slot = 0 if in_infinity else n
    values = [tuple([0] * M.rank) for _ in range(n + 1)]
    values[slot] = tuple(v)
    gamma = Cochain(n, tuple(values))
    assert all(x == 0 for w in coboundary(gamma, M).values for x in w)
    return gamma


def verify_xi_iso(T: TubeModule, n: int, H: CohomologyGroup | None = None) -> bool:
    """The closed-form classes over a basis of M(n) form a GF(2)-basis of H^n."""
    M = T.lattice
    inf = is_infinity_tube(T.label)
    comp = target_component(M, n, inf)
    H = H or cohomology_group(M, n)
    if any(d != 2 for d in H.invariants):
        return False
    if len(H.invariants) != comp.rank():
        return False
    if comp.rank() == 0:
        return True
    rows = []
    for v in comp.basis:
        cls = H.class_of(xi(M, v, n, inf))
        rows.append([c % 2 for c in cls.coords])
    return is_invertible(F2Matrix(rows, cols=len(H.invariants)))


# ---------------------------------------------------------------------------
# filtration, orbits, canonical elements on one tube member
# ---------------------------------------------------------------------------


class TubeCohContext:
    """Cohomology of one tube member with its filtration and orbit data."""

    def __init__(self, T: TubeModule, n: int):
        self.T = T
        self.n = n
        self.in_inf = is_infinity_tube(T.label)
        self.H = cohomology_group(T.lattice, n)
        assert all(d == 2 for d in self.H.invariants)
        self._images: Optional[list] = None
        self._e_classes: Optional[list] = None
        self._e_vectors: Optional[list] = None
        self._gens: Optional[list] = None

    # -- filtration ----------------------------------------------------

    def _chain_images(self) -> list:
        if self._images is None:
            out = []
            m = self.T.m
            for k in range(m + 1):
                sub = self.T.chain_modules[k]
                if sub is None or sub.rank == 0:
                    out.append([])
                    continue
                Hk = cohomology_group(sub, self.n)
                emb = self.T.chain_embeds[k]
                gens = [
                    self.H.class_of(g.map_values(emb)) for g in Hk.generators
                ]
                out.append(gens)
            self._images = out
        return self._images

    def filtration_position(self, cls: CohClass):
        if cls.is_zero():
            return "zero"
        images = self._chain_images()
        pos = 0
        for k in range(len(images)):
            if in_span(images[k], cls):
                pos = k
            else:
                break
        return pos

    # -- canonical elements ---------------------------------------------

    def _component_lattice(self, k: int) -> ZLattice:
        sub = self.T.chain_modules[k]
        n_amb = self.T.lattice.rank
        if sub is None or sub.rank == 0:
            return ZLattice.zero(n_amb)
        comp = target_component(sub, self.n, self.in_inf)
        emb = self.T.chain_embeds[k]
        return hnf([emb.apply(r) for r in comp.basis], n_amb)

    def e_vector(self, k: int):
        """Fixed element of the k-th stratum set, or None when it is empty."""
        if self._e_vectors is None:
            self._e_vectors = [None] * self.T.m
        cached = self._e_vectors[k]
        if cached is not None:
            return cached
        Mk = self._component_lattice(k)
        Mk1 = self._component_lattice(k + 1)
        excl = Mk.scale(2).sum(Mk1)
        for v in Mk.basis:
            if excl.coords(v) is None:
                self._e_vectors[k] = tuple(v)
                return tuple(v)
        return None

    def e_class(self, k: int):
        if self._e_classes is None:
            self._e_classes = [None] * self.T.m
        if self._e_classes[k] is None:
            v = self.e_vector(k)
            if v is None:
                return None
            cls = self.H.class_of(xi(self.T.lattice, v, self.n, self.in_inf))
            assert self.filtration_position(cls) == k
            self._e_classes[k] = cls
        return self._e_classes[k]

    # -- automorphisms ---------------------------------------------------

    def aut_generators(self) -> list[IntMatrix]:
        """Generating family of automorphisms (closed under inverse).

        Unit lifts of invertible quiver endomorphisms (blockwise unimodular
        {0,1}-lifts) together with the elementary congruent-to-identity
        units: transvections 1 + 2E_ij inside each sharp block and single
        sign flips.  Completeness of the family is empirical; the orbit
        oracle cross-checks it on small cohomology groups.
        """
        if self._gens is None:
            self._gens = _aut_generator_family(self.T)
        return self._gens

    def class_action(self, U: IntMatrix) -> F2Matrix:
        s = len(self.H.invariants)
        cols = []
        for g in self.H.generators:
            cols.append(self.H.class_of(g.map_values(U)).coords)
        return F2Matrix([[cols[j][i] & 1 for j in range(s)] for i in range(s)], cols=s)

    def orbit_partition(self) -> list[set]:
        """Orbits of the generated automorphism group on all of H^n."""
        gens = [self.class_action(U) for U in self.aut_generators()]
        s = len(self.H.invariants)
        all_pts = [tuple(c) for c in _all_f2(s)]
        seen = set()
        orbits = []
        for p in all_pts:
            if p in seen:
                continue
            orb = {p}
            stack = [p]
            while stack:
                x = stack.pop()
                for g in gens:
                    y = g.apply(x)
                    if y not in orb:
                        orb.add(y)
                        stack.append(y)
            seen |= orb
            orbits.append(orb)
        return orbits

    def move_to(self, src: CohClass, dst: CohClass):
        """Automorphism word carrying src to dst, as one matrix, or None."""
        if src == dst:
            return IntMatrix.identity(self.T.lattice.rank)
        gens = self.aut_generators()
        actions = [self.class_action(U) for U in gens]
        start = tuple(c & 1 for c in src.coords)
        goal = tuple(c & 1 for c in dst.coords)
        frontier = {start: IntMatrix.identity(self.T.lattice.rank)}
        seen = {start}
        while frontier:
            new = {}
            for x, W in frontier.items():
                for U, act in zip(gens, actions):
                    y = act.apply(x)
                    if y in seen:
                        continue
                    Wy = U * W
                    if y == goal:
                        return Wy
                    seen.add(y)
                    new[y] = Wy
            frontier = new
        return None


def _all_f2(s: int):
    for mask in range(1 << s):
        yield tuple((mask >> t) & 1 for t in range(s))


def _ambient_to_module(T: TubeModule, amb: IntMatrix) -> IntMatrix:
    """Rewrite an ambient block-diagonal map preserving M in M's coordinates."""
    Bc = T.model.basis.transpose()
    U = solve_matrix_exact(Bc, amb * Bc)
    assert U * T.lattice.act_a == T.lattice.act_a * U
    assert U * T.lattice.act_b == T.lattice.act_b * U
    return U


def _blockdiag_int(blocks: list[IntMatrix]) -> IntMatrix:
    n = sum(b.rows for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[off + i][off + j] = b.data[i][j]
        off += b.rows
    return IntMatrix(out, cols=n)


def _aut_generator_family(T: TubeModule, unit_cap: int = 512) -> list[IntMatrix]:
    from .lattices import lift_invertible
    from .quiver import SIGN_KEYS as _KEYS
    from .quiver import hom_reps, phi

    rep = phi(T.lattice)
    mult = T.model.ambient_dims
    n_amb = sum(mult)
    out = []
    seen = set()

    def push_ambient(amb: IntMatrix):
        U = _ambient_to_module(T, amb)
        if abs(determinant(U)) != 1:
            return
        for W in (U, inverse_unimodular(U)):
            if not W.is_identity() and W.data not in seen:
                seen.add(W.data)
                out.append(W)

    # unit lifts of invertible quiver endomorphisms
    end = hom_reps(rep, rep)
    combos = []
    if (1 << len(end)) <= unit_cap:
        for mask in range(1, 1 << len(end)):
            e = None
            for t in range(len(end)):
                if (mask >> t) & 1:
                    e = end[t] if e is None else e.add(end[t])
            combos.append(e)
    else:
        import random as _random

        rng = _random.Random(0)
        combos.extend(end)
        for _ in range(unit_cap):
            e = None
            for c in end:
                if rng.random() < 0.5:
                    e = c if e is None else e.add(c)
            if e is not None:
                combos.append(e)
    for e in combos:
        if not e.is_invertible():
            continue
        blocks = [lift_invertible(e.phi[k]) for k in _KEYS]
        push_ambient(_blockdiag_int(blocks))

    # elementary units congruent to the identity mod 2
    offs = []
    off = 0
    for s in mult:
        offs.append(off)
        off += s
    for t, s in enumerate(mult):
        for i in range(s):
            flip = [[1 if a == b else 0 for b in range(n_amb)] for a in range(n_amb)]
            flip[offs[t] + i][offs[t] + i] = -1
            push_ambient(IntMatrix(flip, cols=n_amb))
            for j in range(s):
                if i == j:
                    continue
                tr = [[1 if a == b else 0 for b in range(n_amb)] for a in range(n_amb)]
                tr[offs[t] + i][offs[t] + j] = 2
                push_ambient(IntMatrix(tr, cols=n_amb))
    return out


# ---------------------------------------------------------------------------
# direct sums and canonical form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StandardEntry:
    j: Optional[int]
    m: int
    k: int

    def to_json(self):
        out = {"m": self.m, "k": self.k}
        if self.j is not None:
            out["j"] = self.j
        return out


@dataclass(frozen=True)
class StandardData:
    """Canonical combinatorics of a class: per-tube position sequences."""

    entries: tuple  # tuple of (TubeId, tuple of StandardEntry)
    parity: str  # "even" | "odd" | "none"

    def is_empty(self) -> bool:
        return not self.entries

    def to_json(self):
        return {
            "data": [
                {"tube": tube.to_json(), "seq": [e.to_json() for e in seq]}
                for tube, seq in self.entries
            ],
            "parity": self.parity,
        }

    def __str__(self):
        if not self.entries:
            return "empty"
        parts = []
        for tube, seq in self.entries:
            inner = ",".join(
                (f"(j={e.j},m={e.m},k={e.k})" if e.j is not None else f"(m={e.m},k={e.k})")
                for e in seq
            )
            parts.append(f"{tube}:[{inner}]")
        return " ".join(parts) + f" [{self.parity}]"


class SumContext:
    """A direct sum of tube members with its cohomology."""

    def __init__(self, summands: list[TubeModule], n: int):
        if not summands:
            raise ValueError("need at least one summand")
        self.summands = list(summands)
        self.n = n
        mod = summands[0].lattice
        for T in summands[1:]:
            mod = mod.direct_sum(T.lattice)
        self.module = mod
        self.offsets = []
        off = 0
        for T in summands:
            self.offsets.append(off)
            off += T.lattice.rank
        self.H = cohomology_group(mod, n)
        self.ctxs = [TubeCohContext(T, n) for T in summands]

    def embed_matrix(self, i: int) -> IntMatrix:
        r = self.module.rank
        ri = self.summands[i].lattice.rank
        off = self.offsets[i]
        return IntMatrix(
            [[1 if (t == off + s) else 0 for s in range(ri)] for t in range(r)],
            cols=ri,
        )

    def project_values(self, gamma: Cochain, i: int) -> Cochain:
        off = self.offsets[i]
        ri = self.summands[i].lattice.rank
        return Cochain(
            gamma.n, tuple(tuple(v[off: off + ri]) for v in gamma.values)
        )

    def split(self, cls: CohClass) -> list[CohClass]:
        gamma = self.H.cochain_of(cls)
        out = []
        for i, ctx in enumerate(self.ctxs):
            out.append(ctx.H.class_of(self.project_values(gamma, i)))
        return out

    def merge(self, comps: list[CohClass]) -> CohClass:
        gamma = Cochain.zero(self.n, self.module.rank)
        for i, c in enumerate(comps):
            emb = self.embed_matrix(i)
            gamma = gamma.add(c.group.cochain_of(c).map_values(emb))
        return self.H.class_of(gamma)

    def block_witness(self, i: int, U: IntMatrix) -> IntMatrix:
        r = self.module.rank
        out = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
        off = self.offsets[i]
        for a in range(U.rows):
            for b in range(U.cols):
                out[off + a][off + b] = U.data[a][b]
        return IntMatrix(out, cols=r)

    def unipotent_witness(self, i: int, j: int, theta: IntMatrix) -> IntMatrix:
        """Identity plus theta mapping block i into block j."""
        r = self.module.rank
        out = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
        oi, oj = self.offsets[i], self.offsets[j]
        for a in range(theta.rows):
            for b in range(theta.cols):
                out[oj + a][oi + b] += theta.data[a][b]
        return IntMatrix(out, cols=r)


@dataclass(frozen=True)
class CanonicalForm:
    data: StandardData
    m0_labels: tuple
    witness: IntMatrix
    canonical_class: CohClass
    positions: tuple  # per-summand: int position or None


def canonical_form(summands: list[TubeModule], cls: CohClass, n: int,
                   context: SumContext | None = None) -> CanonicalForm:
    """Normalize a class on a direct sum of tube members.

    Returns the standard data, the labels of the summands on which the class
    was cleared, a witness automorphism W with W . cls = canonical class, and
    the per-summand stratum positions.
    """
    sc = context or SumContext(summands, n)
    assert cls.group is sc.H
    comps = sc.split(cls)
    r = sc.module.rank
    witness = IntMatrix.identity(r)

    # move every nonzero component to its stratum representative
    for i, ctx in enumerate(sc.ctxs):
        if comps[i].is_zero():
            continue
        k = ctx.filtration_position(comps[i])
        target = ctx.e_class(k)
        assert target is not None, "stratum without a fixed representative"
        W = ctx.move_to(comps[i], target)
        assert W is not None, "class not in the orbit of its stratum representative"
        witness = sc.block_witness(i, W) * witness
        comps[i] = target

    # cancellation sweep with unipotent automorphisms
    changed = True
    guard = 0
    while changed:
        changed = False
        guard += 1
        assert guard <= 4 * len(sc.summands) ** 2 + 4
        for i in range(len(sc.summands)):
            if comps[i].is_zero():
                continue
            for j in range(len(sc.summands)):
                if i == j or comps[j].is_zero():
                    continue
                if sc.summands[i].label.tube != sc.summands[j].label.tube:
                    continue
                homs = hom_klattices(
                    sc.summands[i].lattice, sc.summands[j].lattice
                )
                combo = _solve_cancellation(sc.ctxs[i], sc.ctxs[j], comps[i], comps[j], homs)
                if combo is None:
                    continue
                witness = sc.unipotent_witness(i, j, combo) * witness
                comps[j] = sc.ctxs[j].H.zero()
                changed = True
        # after cancellations the remaining components are still canonical
    entries_by_tube: dict = {}
    m0 = []
    positions = []
    for i, T in enumerate(sc.summands):
        if comps[i].is_zero():
            m0.append(T.label)
            positions.append(None)
            continue
        k = sc.ctxs[i].filtration_position(comps[i])
        positions.append(k)
        entries_by_tube.setdefault(T.label.tube, []).append(
            StandardEntry(j=T.label.j, m=T.label.m, k=k)
        )
    entries = []
    for tube in sorted(entries_by_tube, key=lambda t: str(t)):
        seq = sorted(entries_by_tube[tube], key=lambda e: (-e.m, e.k))
        _check_standard_sequence(seq)
        entries.append((tube, tuple(seq)))
    special = any(tube.kind == "special" for tube, _ in entries)
    parity = "none" if not special else ("even" if n % 2 == 0 else "odd")
    data = StandardData(entries=tuple(entries), parity=parity)
    canonical = sc.merge(comps)
    assert push_class(witness, cls, sc.H) == canonical
    return CanonicalForm(
        data=data,
        m0_labels=tuple(m0),
        witness=witness,
        canonical_class=canonical,
        positions=tuple(positions),
    )


def _check_standard_sequence(seq):
    for t in range(len(seq) - 1):
        assert seq[t].m > seq[t + 1].m, "equal lengths survived cancellation"
    for t in range(len(seq)):
        for s in range(t + 1, len(seq)):
            e, e2 = seq[t], seq[s]
            assert e2.k < e.k < e2.k + e.m - e2.m, "standard inequalities violated"


def _solve_cancellation(ctx_i, ctx_j, cls_i, cls_j, homs):
    """Combination theta of homs with theta_*(cls_i) = cls_j, or None."""
    if not homs:
        return None
    s = len(ctx_j.H.invariants)
    cols = []
    for th in homs:
        pushed = push_class(th, cls_i, ctx_j.H)
        cols.append([c & 1 for c in pushed.coords])
    Amat = F2Matrix([[cols[j][i] for j in range(len(homs))] for i in range(s)], cols=len(homs))
    from .f2 import solve as f2_solve

    sol = f2_solve(Amat, [c & 1 for c in cls_j.coords])
    if sol is None:
        return None
    combo = None
    for c, th in zip(sol, homs):
        if c:
            combo = th if combo is None else combo + th
    if combo is None:
        return None
    return combo


def sum_orbit_partition(sc: SumContext, cap: int = 1 << 6) -> list[set]:
    """Brute-force orbit closure of the generated automorphism family."""
    assert sc.H.order() <= cap, "group too large for the brute-force oracle"
    gens: list[IntMatrix] = []
    for i, ctx in enumerate(sc.ctxs):
        for U in ctx.aut_generators():
            gens.append(sc.block_witness(i, U))
    for i in range(len(sc.summands)):
        for j in range(len(sc.summands)):
            if i == j:
                continue
            for th in hom_klattices(sc.summands[i].lattice, sc.summands[j].lattice):
                gens.append(sc.unipotent_witness(i, j, th))
                gens.append(sc.unipotent_witness(i, j, th.scale(-1)))
    # swap equal summands
    for i in range(len(sc.summands)):
        for j in range(i + 1, len(sc.summands)):
            if sc.summands[i].label == sc.summands[j].label:
                gens.append(_swap_witness(sc, i, j))
    actions = []
    s = len(sc.H.invariants)
    for U in gens:
        cols = [push_class(U, sc.H.from_coords(tuple(1 if t == a else 0 for t in range(s))), sc.H).coords
                for a in range(s)]
        actions.append(cols)
    pts = [tuple(c.coords) for c in sc.H.all_classes()]
    seen = set()
    orbits = []
    invs = sc.H.invariants
    for p in pts:
        if p in seen:
            continue
        orb = {p}
        stack = [p]
        while stack:
            x = stack.pop()
            for cols in actions:
                y = [0] * s
                for a in range(s):
                    if x[a]:
                        for t in range(s):
                            y[t] += x[a] * cols[a][t]
                y = tuple(yy % dd for yy, dd in zip(y, invs))
                if y not in orb:
                    orb.add(y)
                    stack.append(y)
        seen |= orb
        orbits.append(orb)
    return orbits


def _swap_witness(sc: SumContext, i: int, j: int) -> IntMatrix:
    r = sc.module.rank
    out = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
    oi, oj = sc.offsets[i], sc.offsets[j]
    ri = sc.summands[i].lattice.rank
    for a in range(ri):
        out[oi + a][oi + a] = 0
        out[oj + a][oj + a] = 0
        out[oi + a][oj + a] = 1
        out[oj + a][oi + a] = 1
    return IntMatrix(out, cols=r)


# ---------------------------------------------------------------------------
# group automorphisms acting on modules and classes
# ---------------------------------------------------------------------------


def transport_class(Msrc: KLattice, cls: CohClass, dst_group: CohomologyGroup,
                    seed: int = 0) -> CohClass:
    """Map a class through a lifted isomorphism Msrc -> module of dst_group."""
    from .quiver import lift_morphism, phi, reps_isomorphic

    iso = reps_isomorphic(phi(Msrc), phi(dst_group.module), seed=seed)
    assert iso is not None, "modules are not isomorphic"
    psi = lift_morphism(iso, Msrc, dst_group.module)
    return push_class(psi, cls, dst_group)


def apply_group_automorphism(which: str, M: KLattice, cls: CohClass):
    """Twist the module by a group automorphism and transport the class.

    Returns (twisted module, transported class in its cohomology).
    """
    n = cls.group.n
    ia, ib = s3_images(which)
    maps = twist_chain_maps(ia, ib, n)
    Tn = maps[n]
    gamma = cls.group.cochain_of(cls)
    values = []
    for j in range(n + 1):
        acc = (0,) * M.rank
        for i in range(n + 1):
            ent = Tn.data[i][j]
            if any(ent):
                contrib = r_apply(M, ent, gamma.values[i])
                acc = tuple(a + b for a, b in zip(acc, contrib))
        values.append(acc)
    twisted = M.twist(ia, ib)
    H2 = cohomology_group(twisted, n)
    return twisted, H2.class_of(Cochain(n, tuple(values)))
