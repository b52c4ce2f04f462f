"""Representations of the 5-vertex star quiver over GF(2).

A LambdaRep assigns a space to the centre and to each of the four sign
vertices, with a map f_ab from the centre to each vertex.  The admissible
objects ("category R") are those with every f_ab surjective and the stacked
map injective; these correspond exactly to lattices over the minimal
overring, via phi() one way and lattice_of() the other.

decompose() is a Meataxe-style splitter over GF(2): find an endomorphism
whose Fitting power is a proper idempotent-like projection, split along its
kernel and image, recurse.  identify_tube() names a regular indecomposable
by its point on the projective line: special patterns are read off dimension
vectors, homogeneous ones through the characteristic polynomial of the
associated matrix pencil, with explicit isomorphism testing as the fallback.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .f2 import F2Matrix, is_invertible, nullspace, rank as f2_rank, rref, solve as f2_solve
from .f2 import inverse as f2_inverse
from .intmat import IntMatrix, solve_matrix_exact
from .klein import (
    SIGN_KEYS,
    DimVector,
    KLattice,
    SharpData,
    diagonal_sign_lattice,
    sharp,
    two_msharp_in_m,
)
from .lattices import ZLattice, finite_quotient, hnf
from .polys import F2Poly, char_poly, companion_matrix, irreducibles_of_degree, primary_decomposition


class LambdaRep:
    """Representation of the star quiver over GF(2)."""

    __slots__ = ("dims", "f")

    def __init__(self, dims: DimVector, f: dict):
        if set(f) != set(SIGN_KEYS):
            raise ValueError("maps must be given for pp, pm, mp, mm")
        for key in SIGN_KEYS:
            m = f[key]
            if m.rows != dims.component(key) or m.cols != dims.d_dot:
                raise ValueError(f"map {key} has shape {m.rows}x{m.cols}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "f", dict(f))

    def __setattr__(self, *a):  # pragma: no cover - guard
        raise AttributeError("LambdaRep is immutable")

    def __eq__(self, other):
        return isinstance(other, LambdaRep) and self.dims == other.dims and self.f == other.f

    def __hash__(self):
        return hash((self.dims, tuple(self.f[k] for k in SIGN_KEYS)))

    def __repr__(self):
        return f"LambdaRep(dims={self.dims})"

    def stacked(self) -> F2Matrix:
        out = F2Matrix.zero(0, self.dims.d_dot)
        for key in SIGN_KEYS:
            out = out.vstack(self.f[key])
        return out

    def direct_sum(self, other: "LambdaRep") -> "LambdaRep":
        dims = DimVector(
            self.dims.d_dot + other.dims.d_dot,
            *(self.dims.component(k) + other.dims.component(k) for k in SIGN_KEYS),
        )
        f = {}
        for key in SIGN_KEYS:
            m1, m2 = self.f[key], other.f[key]
            rows = []
            for r in m1.data:
                rows.append(list(r) + [0] * m2.cols)
            for r in m2.data:
                rows.append([0] * m1.cols + list(r))
            f[key] = F2Matrix(rows, cols=m1.cols + m2.cols)
        return LambdaRep(dims, f)

    def to_json(self) -> dict:
        return {
            "dims": self.dims.to_json(),
            "f": {k: self.f[k].to_json() for k in SIGN_KEYS},
        }

    @staticmethod
    def from_json(obj: dict) -> "LambdaRep":
        dims = DimVector(*obj["dims"])
        return LambdaRep(dims, {k: F2Matrix.from_json(obj["f"][k]) for k in SIGN_KEYS})


def in_category_R(V: LambdaRep) -> bool:
    """All maps surjective and the stacked map injective."""
    for key in SIGN_KEYS:
        if f2_rank(V.f[key]) != V.dims.component(key):
            return False
    return f2_rank(V.stacked()) == V.dims.d_dot


@dataclass(frozen=True)
class RepMorphism:
    """Quintuple of maps intertwining two representations."""

    phi_dot: F2Matrix
    phi: dict  # key -> F2Matrix

    def __hash__(self):
        return hash((self.phi_dot, tuple(self.phi[k] for k in SIGN_KEYS)))

    def component(self, key: str) -> F2Matrix:
        return self.phi[key]

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(
            self.phi_dot * other.phi_dot,
            {k: self.phi[k] * other.phi[k] for k in SIGN_KEYS},
        )

    def add(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(
            self.phi_dot + other.phi_dot,
            {k: self.phi[k] + other.phi[k] for k in SIGN_KEYS},
        )

    def is_zero(self) -> bool:
        return self.phi_dot.is_zero() and all(self.phi[k].is_zero() for k in SIGN_KEYS)

    def is_invertible(self) -> bool:
        return is_invertible(self.phi_dot) and all(is_invertible(self.phi[k]) for k in SIGN_KEYS)

    @staticmethod
    def identity(V: LambdaRep) -> "RepMorphism":
        return RepMorphism(
            F2Matrix.identity(V.dims.d_dot),
            {k: F2Matrix.identity(V.dims.component(k)) for k in SIGN_KEYS},
        )

    @staticmethod
    def zero(V: LambdaRep, W: LambdaRep) -> "RepMorphism":
        return RepMorphism(
            F2Matrix.zero(W.dims.d_dot, V.dims.d_dot),
            {k: F2Matrix.zero(W.dims.component(k), V.dims.component(k)) for k in SIGN_KEYS},
        )


def is_morphism(phi: RepMorphism, V: LambdaRep, W: LambdaRep) -> bool:
    for key in SIGN_KEYS:
        if phi.phi[key] * V.f[key] != W.f[key] * phi.phi_dot:
            return False
    return True


def hom_reps(V: LambdaRep, W: LambdaRep) -> list[RepMorphism]:
    """GF(2)-basis of the space of morphisms V -> W."""
    dd, dd2 = V.dims.d_dot, W.dims.d_dot
    sizes = [(W.dims.component(k), V.dims.component(k)) for k in SIGN_KEYS]
    # unknown layout: vec(phi_dot) then vec(phi_pp), ... row-major
    offs = [dd2 * dd]
    for r, c in sizes:
        offs.append(offs[-1] + r * c)
    total = offs[-1]
    rows = []
    for idx, key in enumerate(SIGN_KEYS):
        fV, fW = V.f[key], W.f[key]
        r, c = sizes[idx]
        base = offs[idx]
        for i in range(r):
            for j in range(dd):
                eq = [0] * total
                # (phi_key * fV)[i][j]
                for k in range(c):
                    if fV.data[k][j]:
                        eq[base + i * c + k] ^= 1
                # (fW * phi_dot)[i][j]
                for k in range(dd2):
                    if fW.data[i][k]:
                        eq[k * dd + j] ^= 1
                rows.append(eq)
    if not rows:
        sols = [tuple(1 if t == s else 0 for t in range(total)) for s in range(total)]
    else:
        sols = nullspace(F2Matrix(rows, cols=total))
    out = []
    for vec in sols:
        phi_dot = F2Matrix(
            [[vec[i * dd + j] for j in range(dd)] for i in range(dd2)], cols=dd
        )
        phi = {}
        for idx, key in enumerate(SIGN_KEYS):
            r, c = sizes[idx]
            base = offs[idx]
            phi[key] = F2Matrix(
                [[vec[base + i * c + j] for j in range(c)] for i in range(r)], cols=c
            )
        out.append(RepMorphism(phi_dot, phi))
    return out


def _invertible_search(cands: list[RepMorphism], cap: int, seed: int):
    """Scan combinations of a hom basis for an invertible element."""
    n = len(cands)
    if n == 0:
        return None
    if n <= 12:
        for mask in range(1, 1 << n):
            phi = None
            for t in range(n):
                if (mask >> t) & 1:
                    phi = cands[t] if phi is None else phi.add(cands[t])
            if phi.is_invertible():
                return phi
        return None
    rng = random.Random(seed)
    for c in cands:
        if c.is_invertible():
            return c
    for _ in range(cap):
        phi = None
        for c in cands:
            if rng.random() < 0.5:
                phi = c if phi is None else phi.add(c)
        if phi is not None and phi.is_invertible():
            return phi
    return None


def reps_isomorphic(V: LambdaRep, W: LambdaRep, seed: int = 0) -> Optional[RepMorphism]:
    """An isomorphism V -> W, or None."""
    if V.dims != W.dims:
        return None
    return _invertible_search(hom_reps(V, W), cap=64, seed=seed)


# ---------------------------------------------------------------------------
# the functor phi and its quasi-inverse
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhiData:
    """phi(M) together with the choices that realize it.

    u_vectors are vectors of M whose classes are the chosen basis of
    M / 2 M^#; comp_coords[i] maps M-coordinates to coordinates in the
    basis of the (scaled) sharp component i.
    """

    rep: LambdaRep
    u_vectors: tuple
    sharp: SharpData
    comp_coords: tuple  # four IntMatrix, d_ab x rank
    two_msharp: ZLattice


def _component_coord_matrix(M: KLattice, sh: SharpData, idx: int) -> IntMatrix:
    comp = sh.components[idx]
    P = sh.projectors[idx]
    scale = 4 // sh.denom
    cols = []
    for t in range(M.rank):
        w = P.apply(tuple(1 if s == t else 0 for s in range(M.rank)))
        w = tuple(x // scale for x in w)
        c = comp.coords(w)
        assert c is not None
        cols.append(c)
    return IntMatrix(
        [[cols[t][i] for t in range(M.rank)] for i in range(comp.rank())], cols=M.rank
    )


def phi_data(M: KLattice) -> PhiData:
    """Full data of the quiver representation attached to an A-lattice."""
    sh = sharp(M)
    L = two_msharp_in_m(M, sh)
    if L is None:
        raise ValueError("not an A-lattice")
    fq = finite_quotient(ZLattice.full(M.rank), L)
    assert all(d == 2 for d in fq.invariants)
    u_vectors = fq.generators
    d_dot = len(u_vectors)
    comp_coords = tuple(_component_coord_matrix(M, sh, i) for i in range(4))
    dims = DimVector(d_dot, *(sh.components[i].rank() for i in range(4)))
    f = {}
    for i, key in enumerate(SIGN_KEYS):
        Q = comp_coords[i]
        cols = [Q.apply(u) for u in u_vectors]
        f[key] = F2Matrix(
            [[cols[j][r] & 1 for j in range(d_dot)] for r in range(dims.component(key))],
            cols=d_dot,
        )
    rep = LambdaRep(dims, f)
    assert in_category_R(rep)
    return PhiData(
        rep=rep,
        u_vectors=tuple(u_vectors),
        sharp=sh,
        comp_coords=comp_coords,
        two_msharp=L,
    )


def phi(M: KLattice) -> LambdaRep:
    return phi_data(M).rep


@dataclass(frozen=True)
class LatticeModel:
    """A KLattice cut out of a sign-diagonal ambient lattice.

    basis rows express the module's basis in the ambient coordinates; the
    ambient carries the diagonal action with multiplicities ambient_dims.
    """

    module: KLattice
    basis: IntMatrix
    ambient_dims: tuple


def lattice_of_model(V: LambdaRep) -> LatticeModel:
    """Realize V as a lattice between 2 Mtilde and Mtilde."""
    if not in_category_R(V):
        raise ValueError("not in category R")
    dims = V.dims
    n = dims.d_plus
    mult = tuple(dims.component(k) for k in SIGN_KEYS)
    ambient = diagonal_sign_lattice(mult)
    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    stacked = V.stacked()
    for k in range(dims.d_dot):
        rows.append([stacked.data[i][k] for i in range(n)])
    B = hnf(rows, n).basis_matrix()
    assert B.rows == n
    Bc = B.transpose()  # basis vectors as columns
    act_a = solve_matrix_exact(Bc, ambient.act_a * Bc)
    act_b = solve_matrix_exact(Bc, ambient.act_b * Bc)
    return LatticeModel(module=KLattice(act_a, act_b), basis=B, ambient_dims=mult)


def lattice_of(V: LambdaRep) -> KLattice:
    return lattice_of_model(V).module


def lift_morphism(phi_m: RepMorphism, M: KLattice, N: KLattice) -> IntMatrix:
    """Integer K-map M -> N reducing to the given morphism phi(M) -> phi(N)."""
    dM = phi_data(M)
    dN = phi_data(N)
    if not is_morphism(phi_m, dM.rep, dN.rep):
        raise ValueError("morphism incompatible with representations")
    E_M = IntMatrix.zero(0, M.rank)
    for Q in dM.comp_coords:
        E_M = E_M.vstack(Q)
    E_N = IntMatrix.zero(0, N.rank)
    for Q in dN.comp_coords:
        E_N = E_N.vstack(Q)
    blocks = []
    for key in SIGN_KEYS:
        blocks.append(phi_m.phi[key].to_int())
    L = _blockdiag(blocks)
    psi = solve_matrix_exact(E_N, L * E_M)
    assert psi * M.act_a == N.act_a * psi and psi * M.act_b == N.act_b * psi
    return psi


def reduce_morphism(psi: IntMatrix, M: KLattice, N: KLattice) -> RepMorphism:
    """The induced morphism phi(M) -> phi(N) of an integer K-map."""
    dM = phi_data(M)
    dN = phi_data(N)
    # centre component: classes of psi(u_k)
    cols = []
    for u in dM.u_vectors:
        v = psi.apply(u)
        cols.append(_center_coords(dN, v))
    phi_dot = F2Matrix(
        [[cols[j][i] for j in range(len(cols))] for i in range(dN.rep.dims.d_dot)],
        cols=dM.rep.dims.d_dot,
    )
    phi = {}
    for idx, key in enumerate(SIGN_KEYS):
        compM = dM.sharp.components[idx]
        compN = dN.sharp.components[idx]
        num, den = dN.sharp.denom, dM.sharp.denom
        cols = []
        for w in compM.basis:
            x = psi.apply(w)
            if num % den == 0:
                x = tuple(v * (num // den) for v in x)
            else:
                assert all(v % (den // num) == 0 for v in x)
                x = tuple(v // (den // num) for v in x)
            c = compN.coords(x)
            assert c is not None
            cols.append(c)
        phi[key] = F2Matrix(
            [[cols[j][i] & 1 for j in range(len(cols))] for i in range(compN.rank())],
            cols=compM.rank(),
        )
    return RepMorphism(phi_dot, phi)


def _center_coords(d: PhiData, vec) -> tuple:
    """Class of a module vector in M / 2 M^#, as 0/1 coordinates."""
    # solve [u_1 ... u_d | basis of 2M^#] x = vec over GF(2)
    n = len(vec)
    gens = [list(u) for u in d.u_vectors] + [list(r) for r in d.two_msharp.basis]
    Amat = F2Matrix(
        [[gens[g][i] for g in range(len(gens))] for i in range(n)], cols=len(gens)
    )
    sol = f2_solve(Amat, [x & 1 for x in vec])
    assert sol is not None
    return tuple(sol[: len(d.u_vectors)])


def _blockdiag(blocks: list[IntMatrix]) -> IntMatrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    rows = []
    coff = 0
    for b in blocks:
        for r in b.data:
            rows.append([0] * coff + list(r) + [0] * (m - coff - b.cols))
        coff += b.cols
    return IntMatrix(rows, cols=m)


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


def _vertex_matrices(phi_m: RepMorphism) -> list[F2Matrix]:
    return [phi_m.phi_dot] + [phi_m.phi[k] for k in SIGN_KEYS]


def _fitting_power(e: RepMorphism) -> RepMorphism:
    """e^(2^t) for t large enough that kernels and images stabilize."""
    cur = e
    prev_ranks = None
    for _ in range(24):
        ranks = tuple(f2_rank(m) for m in _vertex_matrices(cur))
        if ranks == prev_ranks:
            return cur
        prev_ranks = ranks
        cur = cur.compose(cur)
    return cur


def _subspace_basis(rows: list[tuple], width: int) -> list[tuple]:
    R, piv = rref(F2Matrix(rows, cols=width) if rows else F2Matrix([], cols=width))
    return [R.data[i] for i in range(len(piv))]


def _restrict(V: LambdaRep, bases: dict) -> tuple[LambdaRep, dict]:
    """Subrepresentation spanned by given row bases at each vertex."""
    dd = len(bases["dot"])
    dims = DimVector(dd, *(len(bases[k]) for k in SIGN_KEYS))
    f = {}
    for key in SIGN_KEYS:
        rows_out = []
        Bv = bases[key]
        Amat = F2Matrix(
            [[Bv[g][i] for g in range(len(Bv))] for i in range(V.dims.component(key))],
            cols=len(Bv),
        )
        cols = []
        for s in bases["dot"]:
            w = V.f[key].apply(s)
            sol = f2_solve(Amat, w)
            assert sol is not None, "subspaces not compatible with the maps"
            cols.append(sol)
        f[key] = F2Matrix(
            [[cols[j][i] for j in range(dd)] for i in range(len(Bv))], cols=dd
        )
    sub = LambdaRep(dims, f)
    return sub, bases


def decompose(V: LambdaRep, seed: int = 0) -> list[tuple[LambdaRep, int]]:
    """Indecomposable summands with multiplicities, deterministically ordered."""
    pieces = _split_completely(V, seed)
    groups: list[list] = []
    for W in pieces:
        placed = False
        for g in groups:
            if reps_isomorphic(g[0], W, seed=seed) is not None:
                g.append(W)
                placed = True
                break
        if not placed:
            groups.append([W])
    out = [(g[0], len(g)) for g in groups]
    out.sort(key=lambda t: (t[0].dims.as_tuple(), _rep_sort_key(t[0])))
    return out


def _rep_sort_key(W: LambdaRep):
    return tuple(tuple(W.f[k].data) for k in SIGN_KEYS)


def _split_completely(V: LambdaRep, seed: int) -> list[LambdaRep]:
    if V.dims.d_plus == 0 and V.dims.d_dot == 0:
        return []
    end = hom_reps(V, V)
    split = _find_splitting(V, end, seed)
    if split is None:
        return [V]
    W1, W2 = split
    return _split_completely(W1, seed) + _split_completely(W2, seed)


def _find_splitting(V: LambdaRep, end: list[RepMorphism], seed: int):
    n = len(end)
    if n <= 1:
        return None

    def try_element(e: RepMorphism):
        pi = _fitting_power(e)
        mats = _vertex_matrices(pi)
        ranks = [f2_rank(m) for m in mats]
        full = [V.dims.d_dot] + [V.dims.component(k) for k in SIGN_KEYS]
        if all(r == 0 for r in ranks) or ranks == full:
            return None
        keys = ["dot"] + list(SIGN_KEYS)
        im_bases = {}
        ker_bases = {}
        for key, m in zip(keys, mats):
            im_bases[key] = _subspace_basis([m.col(j) for j in range(m.cols)], m.rows)
            ker_bases[key] = _subspace_basis(list(nullspace(m)), m.cols)
        Wim, _ = _restrict(V, im_bases)
        Wker, _ = _restrict(V, ker_bases)
        if Wim.dims.d_plus + Wim.dims.d_dot == 0 or Wker.dims.d_plus + Wker.dims.d_dot == 0:
            return None
        return (Wim, Wker)

    if n <= 12:
        for mask in range(1, 1 << n):
            e = None
            for t in range(n):
                if (mask >> t) & 1:
                    e = end[t] if e is None else e.add(end[t])
            got = try_element(e)
            if got is not None:
                return got
        return None
    rng = random.Random(seed)
    for e in end:
        got = try_element(e)
        if got is not None:
            return got
    for _ in range(64):
        e = None
        for c in end:
            if rng.random() < 0.5:
                e = c if e is None else e.add(c)
        if e is not None:
            got = try_element(e)
            if got is not None:
                return got
    return None


def endomorphism_local_data(V: LambdaRep, seed: int = 0):
    """(is_local, residue_dim) certificate for indecomposability.

    For small endomorphism rings all elements are checked to be nilpotent or
    invertible; the residue dimension is dim End - dim of the nilpotent set.
    """
    end = hom_reps(V, V)
    n = len(end)
    if n == 0:
        return (True, 0)
    if n > 12:
        return (_find_splitting(V, end, seed) is None, None)
    nil = 0
    dim_total = 1 << n
    for mask in range(dim_total):
        e = None
        for t in range(n):
            if (mask >> t) & 1:
                e = end[t] if e is None else e.add(end[t])
        if e is None:
            nil += 1
            continue
        pi = _fitting_power(e)
        if all(m.is_zero() for m in _vertex_matrices(pi)):
            nil += 1
        elif not e.is_invertible():
            return (False, None)
    # |End| = |rad| * 2^s
    s = 0
    while (nil << s) < dim_total:
        s += 1
    return (True, s)


# ---------------------------------------------------------------------------
# identification of tube representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TubeId:
    """Label of a tube: a monic irreducible polynomial or 0, 1, infinity."""

    kind: str  # "hom" | "special"
    poly: Optional[F2Poly] = None
    lam: Optional[str] = None  # "0" | "1" | "inf"

    def __post_init__(self):
        if self.kind == "hom":
            if self.poly is None or not self.poly.is_irreducible():
                raise ValueError("invalid tube id")
            if self.poly in (F2Poly.t(), F2Poly.from_string("t+1")):
                raise ValueError("invalid tube id")
        elif self.kind == "special":
            if self.lam not in ("0", "1", "inf"):
                raise ValueError("invalid tube id")
        else:
            raise ValueError("invalid tube id")

    @staticmethod
    def homogeneous(f: F2Poly) -> "TubeId":
        return TubeId(kind="hom", poly=f)

    @staticmethod
    def special(lam: str) -> "TubeId":
        return TubeId(kind="special", lam=str(lam))

    def __str__(self):
        return str(self.poly) if self.kind == "hom" else {"0": "0", "1": "1", "inf": "inf"}[self.lam]

    def to_json(self):
        if self.kind == "hom":
            return {"kind": "hom", "f": self.poly.to_json()}
        return {"kind": "special", "lambda": self.lam}

    @staticmethod
    def from_json(obj) -> "TubeId":
        if obj["kind"] == "hom":
            return TubeId.homogeneous(F2Poly(obj["f"]))
        return TubeId.special(obj["lambda"])


@dataclass(frozen=True)
class TubeLabel:
    """Full label of a regular indecomposable: tube, branch j, length m."""

    tube: TubeId
    j: Optional[int]  # 1 | 2 for special tubes, None for homogeneous
    m: int

    def __str__(self):
        if self.tube.kind == "hom":
            return f"T[{self.tube}]_{self.m}"
        return f"T[{self.tube},{self.j}]_{self.m}"

    def to_json(self):
        out = {"tube": self.tube.to_json(), "m": self.m}
        if self.j is not None:
            out["j"] = self.j
        return out


NON_REGULAR = "non-regular"

# odd special tubes are pinned down by their dimension pattern; entries give
# (lambda, j) for the pattern of (d_pp, d_pm, d_mp, d_mm) in terms of m, m-1
_ODD_PATTERNS = {
    (1, 1, 0, 0): ("1", 1),
    (0, 0, 1, 1): ("1", 2),
    (1, 0, 0, 1): ("0", 1),
    (0, 1, 1, 0): ("0", 2),
    (1, 0, 1, 0): ("inf", 1),
    (0, 1, 0, 1): ("inf", 2),
}


def tube_rep(f: F2Poly, m: int) -> LambdaRep:
    """Normal form of the homogeneous tube member for irreducible f."""
    if not f.is_irreducible() or f in (F2Poly.t(), F2Poly.from_string("t+1")):
        raise ValueError("invalid tube id")
    if m < 1:
        raise ValueError("m must be positive")
    d = f.degree()
    s = d * m
    F = companion_matrix(f ** m)
    ident = F2Matrix.identity(s)
    zero = F2Matrix.zero(s, s)
    f_maps = {
        "pp": ident.hstack(zero),
        "pm": zero.hstack(ident),
        "mp": ident.hstack(ident),
        "mm": ident.hstack(F),
    }
    return LambdaRep(DimVector(2 * s, s, s, s, s), f_maps)


def _jordan_one(m: int) -> F2Matrix:
    """m x m unipotent Jordan block, nilpotent part on the subdiagonal."""
    out = [[0] * m for _ in range(m)]
    for i in range(m):
        out[i][i] = 1
        if i:
            out[i][i - 1] = 1
    return F2Matrix(out, cols=m)


def special_tube_rep(lam: str, j: int, n: int) -> LambdaRep:
    """Normal form of the length-n member on branch j of the tube at lam."""
    if lam not in ("0", "1", "inf") or j not in (1, 2) or n < 1:
        raise ValueError("invalid tube id")
    if n % 2 == 0:
        m = n // 2
        ident = F2Matrix.identity(m)
        zero = F2Matrix.zero(m, m)
        maps = [
            ident.hstack(zero),
            zero.hstack(ident),
            ident.hstack(ident),
            ident.hstack(_jordan_one(m)),
        ]
    else:
        m = (n + 1) // 2
        w = n  # = 2m - 1 columns, blocks (m-1) + (m-1) + 1
        t = m - 1

        def mat(rows):
            return F2Matrix(rows, cols=w)

        f1 = [[1 if c == r else 0 for c in range(w)] for r in range(t)]
        f1.append([1 if c == w - 1 else 0 for c in range(w)])
        f2 = [[1 if c == t + r else 0 for c in range(w)] for r in range(t)]
        f2.append([1 if c == w - 1 else 0 for c in range(w)])
        f3 = [[1 if (c == r or c == t + r) else 0 for c in range(w)] for r in range(t)]
        J = _jordan_one(t) if t else F2Matrix([], cols=0)
        f4 = []
        for r in range(t):
            row = [0] * w
            row[r] = 1
            for c in range(t):
                row[t + c] = J.data[r][c]
            if r == t - 1:
                row[w - 1] ^= 1
            f4.append(row)
        maps = [mat(f1), mat(f2), mat(f3), mat(f4)]
    if j == 2:
        maps = [maps[2], maps[3], maps[0], maps[1]]
    if lam == "0":
        maps = [maps[0], maps[3], maps[2], maps[1]]
    elif lam == "inf":
        maps = [maps[0], maps[2], maps[1], maps[3]]
    dims = DimVector(n, *(mp.rows for mp in maps))
    return LambdaRep(dims, dict(zip(SIGN_KEYS, maps)))


def label_rep(label: TubeLabel) -> LambdaRep:
    if label.tube.kind == "hom":
        return tube_rep(label.tube.poly, label.m)
    return special_tube_rep(label.tube.lam, label.j, label.m)


def _pencil_matrix(V: LambdaRep):
    """The conjugacy-invariant square matrix of a nondegenerate pencil."""
    q = V.dims.d_dot // 2
    g = V.f["pp"].vstack(V.f["pm"])
    if not is_invertible(g):
        return None
    W = V.f["mp"].vstack(V.f["mm"]) * f2_inverse(g)
    blocks = {}
    for bi, bj, name in ((0, 0, "11"), (0, 1, "12"), (1, 0, "21"), (1, 1, "22")):
        blocks[name] = F2Matrix(
            [[W.data[bi * q + i][bj * q + j] for j in range(q)] for i in range(q)], cols=q
        )
    for name in ("11", "12", "21"):
        if not is_invertible(blocks[name]):
            return None
    return (
        f2_inverse(blocks["21"]) * blocks["22"] * f2_inverse(blocks["12"]) * blocks["11"]
    )


def identify_tube(V: LambdaRep, seed: int = 0):
    """Tube label of a regular indecomposable, or the non-regular marker."""
    dims = V.dims
    if 2 * dims.d_dot != dims.d_plus:
        return NON_REGULAR
    comps = tuple(dims.component(k) for k in SIGN_KEYS)
    n = dims.d_dot
    if n % 2 == 1 or len(set(comps)) > 1:
        # odd special pattern
        m = max(comps)
        pattern = tuple(1 if c == m else 0 for c in comps)
        if (
            sorted(comps) != [m - 1, m - 1, m, m]
            or n != 2 * m - 1
            or pattern not in _ODD_PATTERNS
        ):
            raise ValueError("dimension vector is not of tube type")
        lam, j = _ODD_PATTERNS[pattern]
        return TubeLabel(TubeId.special(lam), j, n)
    # even, all components equal q
    q = n // 2
    X = _pencil_matrix(V)
    if X is not None:
        cp = char_poly(X)
        fac = primary_decomposition(cp)
        if len(fac) == 1:
            f, e = fac[0]
            if f not in (F2Poly.t(), F2Poly.from_string("t+1")):
                assert f.degree() * e == q
                return TubeLabel(TubeId.homogeneous(f), None, e)
    # special even tube: try the six candidates
    for lam in ("0", "1", "inf"):
        for j in (1, 2):
            cand = special_tube_rep(lam, j, n)
            if reps_isomorphic(V, cand, seed=seed) is not None:
                return TubeLabel(TubeId.special(lam), j, n)
    # fallback: exhaustive homogeneous candidates
    for d in range(2, q + 1):
        if q % d:
            continue
        for f in irreducibles_of_degree(d):
            if reps_isomorphic(V, tube_rep(f, q // d), seed=seed) is not None:
                return TubeLabel(TubeId.homogeneous(f), None, q // d)
    raise ValueError("could not identify the tube of an indecomposable regular module")


def random_rep_in_R(rng: random.Random, max_center: int = 4) -> LambdaRep:
    """Seeded random object of category R with small central dimension."""
    while True:
        d_dot = rng.randint(1, max_center)
        comps = [rng.randint(0, d_dot) for _ in range(4)]
        if sum(comps) < d_dot:
            continue
        f = {}
        ok = True
        for key, c in zip(SIGN_KEYS, comps):
            m = F2Matrix([[rng.randint(0, 1) for _ in range(d_dot)] for _ in range(c)], cols=d_dot)
            if f2_rank(m) != c:
                ok = False
                break
            f[key] = m
        if not ok:
            continue
        V = LambdaRep(DimVector(d_dot, *comps), f)
        if in_category_R(V):
            return V
