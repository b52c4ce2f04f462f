"""Regular tube modules: constructors, chains, syzygies, endomorphism rings.

tube_module() realizes a labelled tube member as an honest lattice, together
with its canonical submodule chain.  The chain is built one step at a time:
find a map onto the quasi-simple top (by lifting a surjective quiver
morphism), take the kernel, repeat.  Layer labels are recomputed from the
actual subquotients rather than trusted, so the stored data is self-checking.

hom_klattices() computes an integer basis of the K-equivariant maps between
two overring lattices through their sharp coordinates: a block-diagonal
unknown is constrained by an integrality congruence mod a power of two,
which keeps the linear algebra word-sized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .f2 import F2Matrix, rank as f2_rank
from .intmat import IntMatrix, determinant, kernel_basis, smith_form, solve_matrix_exact
from .klein import GROUP, GroupElt, KLattice, invariant_sublattice_module, is_A_lattice
from .lattices import ZLattice, hnf, kernel_mod
from .polys import F2Poly, companion_matrix
from .quiver import (
    NON_REGULAR,
    LambdaRep,
    LatticeModel,
    PhiData,
    TubeId,
    TubeLabel,
    decompose,
    hom_reps,
    identify_tube,
    label_rep,
    lattice_of_model,
    lift_morphism,
    phi,
    phi_data,
)

T_POLY = F2Poly.t()
T1_POLY = F2Poly.from_string("t+1")


def frobenius_matrix(f: F2Poly, m: int) -> F2Matrix:
    """Companion matrix of f(t)^m over GF(2)."""
    if not f.is_monic() or f.degree() < 1:
        raise ValueError("f must be monic of positive degree")
    return companion_matrix(f ** m)


@dataclass(frozen=True)
class TubeModule:
    """A tube member with its realization and submodule chain.

    chain[k] is M_k as a sublattice of the module's own coordinate space,
    chain_modules[k] the corresponding abstract KLattice, chain_embeds[k]
    the embedding matrix into those coordinates, and layer_labels[k] the
    label of M_k / M_{k+1}.
    """

    label: TubeLabel
    model: LatticeModel
    chain: tuple
    chain_modules: tuple
    chain_embeds: tuple
    layer_labels: tuple

    @property
    def lattice(self) -> KLattice:
        return self.model.module

    @property
    def m(self) -> int:
        return self.label.m


def _surjective_combo(homs, W: LambdaRep, cap: int = 4096):
    """First combination of hom basis elements surjective at every vertex."""
    n = len(homs)
    if n == 0:
        return None

    def surjective(phi_m):
        if f2_rank(phi_m.phi_dot) != W.dims.d_dot:
            return False
        return all(f2_rank(phi_m.phi[k]) == W.dims.component(k) for k in ("pp", "pm", "mp", "mm"))

    if (1 << n) <= cap:
        for mask in range(1, 1 << n):
            cand = None
            for t in range(n):
                if (mask >> t) & 1:
                    cand = homs[t] if cand is None else cand.add(homs[t])
            if surjective(cand):
                return cand
        return None
    for cand in homs:
        if surjective(cand):
            return cand
    import random as _random

    rng = _random.Random(0)
    for _ in range(256):
        cand = None
        for c in homs:
            if rng.random() < 0.5:
                cand = c if cand is None else cand.add(c)
        if cand is not None and surjective(cand):
            return cand
    return None


def _quasi_simple_label(tube: TubeId, branch: Optional[int]) -> TubeLabel:
    return TubeLabel(tube, branch, 1)


def _chain_for(module: KLattice, label: TubeLabel, seed: int = 0):
    """Submodule chain M_0 > M_1 > ... > M_m = 0 with layer labels."""
    n_amb = module.rank
    chain = [ZLattice.full(n_amb)]
    chain_modules = [module]
    chain_embeds = [IntMatrix.identity(n_amb)]
    layer_labels = []
    cur = module
    cur_label = label
    embed_total = IntMatrix.identity(n_amb)
    while cur_label.m > 1:
        special = cur_label.tube.kind == "special"
        if special:
            n_cur = cur_label.m
            pred = cur_label.j if n_cur % 2 == 1 else 3 - cur_label.j
            top_candidates = [pred, 3 - pred]
        else:
            top_candidates = [None]
        found = None
        d_cur = phi_data(cur)
        for branch in top_candidates:
            S_label = _quasi_simple_label(cur_label.tube, branch)
            S_model = lattice_of_model(label_rep(S_label))
            S_mod = S_model.module
            W = phi(S_mod)
            homs = hom_reps(d_cur.rep, W)
            combo = _surjective_combo(homs, W)
            if combo is not None:
                found = (S_label, S_mod, combo)
                break
        assert found is not None, f"no quasi-simple quotient found below {cur_label}"
        S_label, S_mod, combo = found
        psi = lift_morphism(combo, cur, S_mod)
        ker = hnf([list(v) for v in kernel_basis(psi)], cur.rank)
        sub, _quot, embed, _proj = invariant_sublattice_module(cur, ker)
        assert sub is not None and sub.rank == cur.rank - S_mod.rank
        layer_labels.append(S_label)
        embed_total = embed_total * embed
        sub_rows = [tuple(embed_total.col(j)) for j in range(embed_total.cols)]
        chain.append(hnf(sub_rows, n_amb))
        chain_modules.append(sub)
        chain_embeds.append(embed_total)
        sub_label = identify_tube(phi(sub), seed=seed)
        assert sub_label != NON_REGULAR and sub_label.tube == cur_label.tube
        assert sub_label.m == cur_label.m - 1
        cur = sub
        cur_label = sub_label
    if cur_label.m == 1:
        layer_labels.append(cur_label)
        chain.append(ZLattice.zero(n_amb))
        chain_modules.append(None)
        chain_embeds.append(IntMatrix.zero(n_amb, 0))
    return tuple(chain), tuple(chain_modules), tuple(chain_embeds), tuple(layer_labels)


def tube_module(tube: TubeId, j: Optional[int], m: int, with_chain: bool = True) -> TubeModule:
    """Construct the length-m member of a tube (branch j if special)."""
    if tube.kind == "special":
        if j not in (1, 2):
            raise ValueError("invalid tube id")
    else:
        if j is not None:
            raise ValueError("invalid tube id")
    if m < 1:
        raise ValueError("invalid tube id")
    label = TubeLabel(tube, j, m)
    model = lattice_of_model(label_rep(label))
    if with_chain:
        chain, chain_modules, chain_embeds, layer_labels = _chain_for(model.module, label)
    else:
        chain = chain_modules = chain_embeds = layer_labels = ()
    return TubeModule(
        label=label,
        model=model,
        chain=chain,
        chain_modules=chain_modules,
        chain_embeds=chain_embeds,
        layer_labels=layer_labels,
    )


def tube_module_from_label(label: TubeLabel, with_chain: bool = True) -> TubeModule:
    return tube_module(label.tube, label.j, label.m, with_chain=with_chain)


def chain_of(T: TubeModule):
    """The stored chain with its layer labels."""
    return list(zip(T.chain, list(T.layer_labels) + [None]))


# ---------------------------------------------------------------------------
# integer hom spaces
# ---------------------------------------------------------------------------


def _embedding_matrix(d: PhiData) -> IntMatrix:
    E = IntMatrix.zero(0, d.comp_coords[0].cols)
    for Q in d.comp_coords:
        E = E.vstack(Q)
    return E


def _block_slots(dimsN, dimsM):
    slots = []
    roN = 0
    roM = 0
    for t in range(4):
        for a in range(dimsN[t]):
            for b in range(dimsM[t]):
                slots.append((roN + a, roM + b))
        roN += dimsN[t]
        roM += dimsM[t]
    return slots


def hom_klattices(M: KLattice, N: KLattice, dM: PhiData | None = None, dN: PhiData | None = None):
    """Z-basis of the K-equivariant maps M -> N (both overring lattices)."""
    dM = dM or phi_data(M)
    dN = dN or phi_data(N)
    E_M = _embedding_matrix(dM)
    E_N = _embedding_matrix(dN)
    det_N = determinant(E_N)
    q = abs(det_N)
    adjN = solve_matrix_exact(E_N, IntMatrix.diagonal([det_N] * N.rank))
    dimsM = [c.rank() for c in dM.sharp.components]
    dimsN = [c.rank() for c in dN.sharp.components]
    slots = _block_slots(dimsN, dimsM)
    u = len(slots)
    if u == 0:
        return []
    if q == 1:
        sol_rows = [[1 if t == s else 0 for t in range(u)] for s in range(u)]
    else:
        W_rows = []
        for i in range(N.rank):
            for jj in range(M.rank):
                row = [
                    (adjN.data[i][a] * E_M.data[b][jj]) % q for (a, b) in slots
                ]
                W_rows.append(row)
        W = IntMatrix(W_rows, cols=u)
        sol = kernel_mod(W, q)
        sol_rows = [list(r) for r in sol.basis]
    out = []
    for y in sol_rows:
        Y = [[0] * M.rank for _ in range(N.rank)]
        for val, (a, b) in zip(y, slots):
            Y[a][b] = val
        Ym = IntMatrix(Y, cols=M.rank)
        prod = adjN * Ym * E_M
        psi_rows = []
        for r in prod.data:
            assert all(x % det_N == 0 for x in r)
            psi_rows.append([x // det_N for x in r])
        psi = IntMatrix(psi_rows, cols=M.rank)
        assert psi * M.act_a == N.act_a * psi and psi * M.act_b == N.act_b * psi
        out.append(psi)
    return out


def end_klattice(M: KLattice, dM: PhiData | None = None):
    dM = dM or phi_data(M)
    return hom_klattices(M, M, dM, dM)


def hom_cross_tube_check(Mt: TubeModule, Nt: TubeModule) -> bool:
    """Every K-map between members of different tubes lands in 2 N^#.

    2 N^# is twice the ambient overlattice of the target (equivalently the
    radical-ideal multiple of N); images of cross-tube maps always fall into
    it because the induced quiver morphism vanishes.
    """
    if Mt.label.tube == Nt.label.tube:
        raise ValueError("same tube")
    from .klein import sharp, two_msharp_in_m

    N = Nt.lattice
    L = two_msharp_in_m(N, sharp(N))
    assert L is not None
    for psi in hom_klattices(Mt.lattice, Nt.lattice):
        for j in range(Mt.lattice.rank):
            col = psi.col(j)
            if L.coords(col) is None:
                return False
    return True


def hom_cross_tube_strict_2n(Mt: TubeModule, Nt: TubeModule) -> bool:
    """Literal containment of cross-tube hom images in 2N (generally false)."""
    if Mt.label.tube == Nt.label.tube:
        raise ValueError("same tube")
    for psi in hom_klattices(Mt.lattice, Nt.lattice):
        if any(x % 2 for row in psi.data for x in row):
            return False
    return True


# ---------------------------------------------------------------------------
# syzygies
# ---------------------------------------------------------------------------


def is_regular(M: KLattice, seed: int = 0) -> bool:
    if not is_A_lattice(M):
        return False
    for W, _mult in decompose(phi(M), seed=seed):
        if identify_tube(W, seed=seed) == NON_REGULAR:
            return False
    return True


def syzygy(M: KLattice) -> KLattice:
    """Kernel of the free cover R^{d_dot} -> M on lifted generators."""
    if not is_regular(M):
        raise ValueError("not regular")
    d = phi_data(M)
    gens = d.u_vectors
    dd = len(gens)
    cols = []
    for i in range(dd):
        for g in GROUP:
            cols.append(M.apply(g, gens[i]))
    Psi = IntMatrix(
        [[cols[c][r] for c in range(4 * dd)] for r in range(M.rank)], cols=4 * dd
    )
    sf = smith_form(Psi)
    assert sf.rank() == M.rank and all(x == 1 for x in sf.invariants()), "cover not onto"
    ker = hnf([list(v) for v in kernel_basis(Psi)], 4 * dd)
    free = _free_module(dd)
    sub, _quot, _embed, _proj = invariant_sublattice_module(free, ker)
    assert sub is not None
    return sub


def _free_module(copies: int) -> KLattice:
    """R^copies with the regular action, basis grouped as (1,a,b,ab) blocks."""
    order = {g: t for t, g in enumerate(GROUP)}

    def perm(g: GroupElt) -> IntMatrix:
        m = [[0] * (4 * copies) for _ in range(4 * copies)]
        for i in range(copies):
            for t, h in enumerate(GROUP):
                m[4 * i + order[g * h]][4 * i + t] = 1
        return IntMatrix(m)

    return KLattice(perm(GroupElt(1, 0)), perm(GroupElt(0, 1)))


# ---------------------------------------------------------------------------
# endomorphism rings as orders
# ---------------------------------------------------------------------------


def _member_conditions_mod2(model: LatticeModel) -> F2Matrix:
    """Rows h with: x in M  iff  h . x = 0 mod 2 (for x in the ambient)."""
    B2 = F2Matrix(model.basis.data, cols=model.basis.cols)
    from .f2 import nullspace as f2_nullspace

    # rows of B2 span M mod 2; the conditions are the kernel of B2 (as rows)
    rel = f2_nullspace(B2)
    return F2Matrix([list(v) for v in rel], cols=model.basis.cols)


def end_order_lattice(model: LatticeModel) -> ZLattice:
    """End_A(M) as a lattice of block-diagonal ambient matrices, flattened."""
    mult = model.ambient_dims
    n = sum(mult)
    H = _member_conditions_mod2(model)
    slots = _block_slots(mult, mult)
    u = len(slots)
    rows = []
    for v in model.basis.data:
        for hrow in H.data:
            eq = [0] * u
            for idx, (a, b) in enumerate(slots):
                if hrow[a] & v[b] & 1:
                    eq[idx] ^= 1
            rows.append(eq)
    from .f2 import nullspace as f2_nullspace

    if rows:
        sols = f2_nullspace(F2Matrix(rows, cols=u))
    else:
        sols = [tuple(1 if t == s else 0 for t in range(u)) for s in range(u)]
    gens = [list(v) for v in sols]
    gens.extend([2 if t == s else 0 for t in range(u)] for s in range(u))
    return hnf(gens, u)


def expected_end_order(label: TubeLabel, lift_coeffs: Optional[list[int]] = None) -> ZLattice:
    """The predicted order: companion-diagonal part plus twice everything."""
    rep = label_rep(label)
    mult = tuple(rep.dims.component(k) for k in ("pp", "pm", "mp", "mm"))
    slots = _block_slots(mult, mult)
    u = len(slots)
    if label.tube.kind == "hom":
        f = label.tube.poly
        if lift_coeffs is None:
            lift_coeffs = [int(c) for c in f.coeffs]
        g = _int_poly_power(lift_coeffs, label.m)
        size = (f.degree()) * label.m
        comp = _int_companion(g, size)
        powers = [_int_power(comp, k) for k in range(size)]
        blocks = [[powers[k]] * 4 for k in range(size)]
    else:
        # the odd-length normal form realizes the truncated polynomial ring
        # with the basis order reversed, so the shift transposes
        upper = label.m % 2 == 1
        mmax = max(mult)
        shifts = {s: _int_shift(s, upper) for s in set(mult)}
        blocks = []
        for k in range(mmax):
            blocks.append([_int_power(shifts[s], k) for s in mult])
    gens = []
    for quad in blocks:
        vec = [0] * u
        roN = 0
        for t in range(4):
            block = quad[t]
            for idx, (a, b) in enumerate(slots):
                if roN <= a < roN + mult[t] and roN <= b < roN + mult[t]:
                    vec[idx] = block.data[a - roN][b - roN]
            roN += mult[t]
        gens.append(vec)
    gens.extend([2 if t == s else 0 for t in range(u)] for s in range(u))
    return hnf(gens, u)


def _int_poly_power(coeffs: list[int], m: int) -> list[int]:
    out = [1]
    for _ in range(m):
        new = [0] * (len(out) + len(coeffs) - 1)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(coeffs):
                    new[i + j] += a * b
        out = new
    return out


def _int_shift(size: int, upper: bool) -> IntMatrix:
    m = [[0] * size for _ in range(size)]
    for i in range(size - 1):
        if upper:
            m[i][i + 1] = 1
        else:
            m[i + 1][i] = 1
    return IntMatrix(m, cols=size)


def _int_companion(monic_coeffs: list[int], size: int) -> IntMatrix:
    assert monic_coeffs[-1] == 1 and len(monic_coeffs) == size + 1
    m = [[0] * size for _ in range(size)]
    for i in range(size - 1):
        m[i + 1][i] = 1
    for i in range(size):
        m[i][size - 1] = -monic_coeffs[i]
    return IntMatrix(m, cols=size)


def _int_power(Mtx: IntMatrix, k: int) -> IntMatrix:
    out = IntMatrix.identity(Mtx.rows)
    for _ in range(k):
        out = out * Mtx
    return out


def end_ring_check(T: TubeModule, lift_coeffs: Optional[list[int]] = None) -> bool:
    """Lattice equality of End_A(T) with the predicted order."""
    got = end_order_lattice(T.model)
    want = expected_end_order(T.label, lift_coeffs=lift_coeffs)
    return got == want


# ---------------------------------------------------------------------------
# the symmetric-group action on labels
# ---------------------------------------------------------------------------

TAU2 = "t2"  # exchanges a and b
TAU3 = "t3"  # exchanges a and c

_S3_IMAGES = {
    "id": ("a", "b"),
    TAU2: ("b", "a"),
    TAU3: ("c", "b"),
    "t2t3": ("c", "a"),  # t2 after t3
    "t3t2": ("b", "c"),  # t3 after t2
    "t2t3t2": ("a", "c"),
}

_ELT = {"a": GroupElt(1, 0), "b": GroupElt(0, 1), "c": GroupElt(1, 1)}

# action on the three special points, from the component exchange each
# generator performs (t2 swaps the +- and -+ components, t3 swaps +- and --)
_SPECIAL_ACTION = {
    TAU2: {"0": "0", "1": "inf", "inf": "1"},
    TAU3: {"0": "1", "1": "0", "inf": "inf"},
}


def s3_images(which: str) -> tuple[GroupElt, GroupElt]:
    ia, ib = _S3_IMAGES[which]
    return _ELT[ia], _ELT[ib]


def twist_module(M: KLattice, which: str) -> KLattice:
    ia, ib = s3_images(which)
    return M.twist(ia, ib)


def s3_on_polynomial(f: F2Poly, which: str) -> F2Poly:
    """Transform of a homogeneous tube label under t2 or t3."""
    if f in (T_POLY, T1_POLY):
        raise ValueError("special label required")
    if not f.is_irreducible():
        raise ValueError("polynomial must be irreducible")
    if which == TAU2:
        out = f.compose_frac(F2Poly.t(), T1_POLY)
    elif which == TAU3:
        out = f.compose_frac(T1_POLY, F2Poly.one())
    else:
        raise ValueError("which must be 't2' or 't3'")
    assert out.is_monic() and out.degree() == f.degree()
    return out


def s3_on_tube(tube: TubeId, which: str) -> TubeId:
    """Transform of a tube label under t2 or t3."""
    if which == "id":
        return tube
    if tube.kind == "special":
        if which in _SPECIAL_ACTION:
            return TubeId.special(_SPECIAL_ACTION[which][tube.lam])
        lam = tube.lam
        for step in _word(which):
            lam = _SPECIAL_ACTION[step][lam]
        return TubeId.special(lam)
    f = tube.poly
    for step in _word(which):
        f = s3_on_polynomial(f, step)
    return TubeId.homogeneous(f)


def _word(which: str) -> list[str]:
    """Decompose an S3 element name into generator applications.

    Composition is right-to-left: "t2t3" means apply t3 first, then t2.
    """
    table = {
        "id": [],
        TAU2: [TAU2],
        TAU3: [TAU3],
        "t2t3": [TAU3, TAU2],
        "t3t2": [TAU2, TAU3],
        "t2t3t2": [TAU2, TAU3, TAU2],
    }
    return table[which]


_TRANSPORT_CACHE: dict = {}


def transport_label(label: TubeLabel, which: str, seed: int = 0) -> TubeLabel:
    """Label of the twisted module, computed from an actual twist."""
    key = (label.tube, label.j, label.m, which)
    got = _TRANSPORT_CACHE.get(key)
    if got is None:
        M = lattice_of_model(label_rep(label)).module
        got = identify_tube(phi(twist_module(M, which)), seed=seed)
        assert got != NON_REGULAR
        _TRANSPORT_CACHE[key] = got
    return got


def sweep_labels(max_m: int, homogeneous=("t^2+t+1", "t^3+t+1")) -> list[TubeLabel]:
    """The standard test sweep of tube labels."""
    out = []
    for txt in homogeneous:
        f = F2Poly.from_string(txt)
        for m in range(1, max_m + 1):
            out.append(TubeLabel(TubeId.homogeneous(f), None, m))
    for lam in ("0", "1", "inf"):
        for j in (1, 2):
            for m in range(1, max_m + 1):
                out.append(TubeLabel(TubeId.special(lam), j, m))
    return out
