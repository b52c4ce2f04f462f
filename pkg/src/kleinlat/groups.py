"""Group extensions from 2-cocycles and the standard presentations.

A degree-2 class is converted to a multiplication table through the bar
comparison maps, giving an honest group on pairs (module element, group
element).  The standard crystallographic and Chernikov presentations are
produced from canonical (co)standard data; their defining relations are
verified mechanically on the constructed extension by solving for a section
with the prescribed squares.

classify() decides isomorphism of two extensions with regular base: both
classes are brought to canonical data and compared across the six
relabelings of the acting group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .intmat import IntMatrix, solve_int
from .klein import GROUP, GroupElt, KLattice, dim_vector
from .quiver import TubeLabel
from .resolutions import comparison_maps, r_apply
from .tubes import TubeModule, transport_label, tube_module_from_label
from .cohomology import (
    CohClass,
    StandardData,
    SumContext,
    canonical_form,
    is_infinity_tube,
)
from .colattices import (
    CostandardData,
    DualSumContext,
    co_canonical_form,
)

BAR2_INDEX = {}
_NONTRIV = [GroupElt(1, 0), GroupElt(0, 1), GroupElt(1, 1)]
for _i, _g in enumerate(_NONTRIV):
    for _j, _h in enumerate(_NONTRIV):
        BAR2_INDEX[(_g, _h)] = 3 * _i + _j


class BarCocycle:
    """Normalized 2-cocycle table K x K -> module vectors."""

    def __init__(self, rank: int, table: dict, modulus: int = 0):
        self.rank = rank
        self.modulus = modulus
        full = {}
        zero = tuple([0] * rank)
        for g in GROUP:
            for h in GROUP:
                full[(g, h)] = tuple(table.get((g, h), zero))
        for g in GROUP:
            if any(full[(GroupElt(0, 0), g)]) or any(full[(g, GroupElt(0, 0))]):
                raise ValueError("table is not normalized")
        self.table = full

    def value(self, g: GroupElt, h: GroupElt) -> tuple:
        v = self.table[(g, h)]
        if self.modulus:
            return tuple(x % self.modulus for x in v)
        return v

    def is_cocycle(self, module) -> bool:
        """The 2-cocycle identity over all triples."""
        for g in GROUP:
            for h in GROUP:
                for k in GROUP:
                    lhs = module.applied(g, self.value(h, k))
                    v = [
                        a - b + c - d
                        for a, b, c, d in zip(
                            lhs,
                            self.value(g * h, k),
                            self.value(g, h * k),
                            self.value(g, h),
                        )
                    ]
                    if self.modulus:
                        if any(x % self.modulus for x in v):
                            return False
                    elif any(v):
                        return False
        return True


class ModuleOps:
    """Uniform vector arithmetic for lattice or finite-level dual bases."""

    def __init__(self, acting: KLattice, modulus: int = 0):
        self.acting = acting
        self.modulus = modulus
        self.rank = acting.rank

    def applied(self, g: GroupElt, vec):
        out = self.acting.apply(g, vec)
        if self.modulus:
            out = tuple(x % self.modulus for x in out)
        return out

    def add(self, u, v):
        out = tuple(a + b for a, b in zip(u, v))
        if self.modulus:
            out = tuple(x % self.modulus for x in out)
        return out

    def reduce(self, u):
        return tuple(x % self.modulus for x in u) if self.modulus else tuple(u)

    def zero(self):
        return tuple([0] * self.rank)


class ExtensionGroup:
    """The group on pairs (module vector, group element) for a 2-cocycle."""

    def __init__(self, ops: ModuleOps, gamma: BarCocycle):
        if gamma.rank != ops.rank:
            raise ValueError("rank mismatch")
        self.ops = ops
        self.gamma = gamma

    def mul(self, x, y):
        u, g = x
        v, h = y
        w = self.ops.add(self.ops.add(u, self.ops.applied(g, v)), self.gamma.value(g, h))
        return (self.ops.reduce(w), g * h)

    def identity(self):
        return (self.ops.zero(), GroupElt(0, 0))

    def associativity_check(self, samples) -> bool:
        for (u, v, w) in samples:
            for g in GROUP:
                for h in GROUP:
                    for k in GROUP:
                        x, y, z = (u, g), (v, h), (w, k)
                        if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                            return False
        return True


def bar_cocycle_from_class(cls: CohClass, acting: KLattice, modulus: int = 0) -> BarCocycle:
    """Transport a degree-2 class to a normalized multiplication table."""
    group = cls.group
    if group.n != 2:
        raise ValueError("need a degree-2 class")
    gamma = group.cochain_of(cls)
    maps = comparison_maps()
    table = {}
    for (g, h), col in BAR2_INDEX.items():
        acc = tuple([0] * acting.rank)
        for i in range(3):
            ent = maps.u2.data[i][col]
            if any(ent):
                contrib = r_apply(acting, ent, gamma.values[i])
                acc = tuple(a + b for a, b in zip(acc, contrib))
        if modulus:
            acc = tuple(x % modulus for x in acc)
        table[(g, h)] = acc
    return BarCocycle(acting.rank, table, modulus=modulus)


def extension_from_class(M: KLattice, cls: CohClass) -> ExtensionGroup:
    """The extension of the Kleinian group by M with the given class."""
    gamma = bar_cocycle_from_class(cls, M)
    ops = ModuleOps(M)
    ext = ExtensionGroup(ops, gamma)
    assert gamma.is_cocycle(ops)
    return ext


def extension_from_dual_class(cls: CohClass) -> ExtensionGroup:
    """Extension by a finite-level dual (Chernikov approximation)."""
    H = cls.group
    acting = H.module
    q = H.colattice.modulus
    gamma = bar_cocycle_from_class(cls, acting, modulus=q)
    ops = ModuleOps(acting, modulus=q)
    ext = ExtensionGroup(ops, gamma)
    assert gamma.is_cocycle(ops)
    return ext


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relations: tuple
    base_description: str
    section: dict  # explicit vectors witnessing the squared relations

    def text(self) -> str:
        lines = ["generators: " + ", ".join(self.generators)]
        lines.append("base: " + self.base_description)
        lines.extend("relation: " + r for r in self.relations)
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": list(self.relations),
            "base": self.base_description,
            "section": {k: list(v) for k, v in self.section.items()},
        }


def _data_labels(entries) -> list[TubeLabel]:
    out = []
    for tube, seq in entries:
        for e in seq:
            out.append(TubeLabel(tube, e.j, e.m))
    return out


def _check_even_special(entries):
    for tube, seq in entries:
        if tube.kind != "special":
            continue
        for e in seq:
            if (e.m - e.k - e.j) % 2 != 0:
                raise ValueError("odd special data in degree 2")


def standard_class_vectors(summands: list[TubeModule], entries, n: int, sc: SumContext):
    """The canonical cocycle vectors e0 (finite part) and einf (infinity part)."""
    e0 = [0] * sc.module.rank
    einf = [0] * sc.module.rank
    idx = 0
    wanted = _data_labels(entries)
    positions = {}
    for tube, seq in entries:
        for e in seq:
            positions[(str(tube), e.j, e.m)] = e.k
    for i, T in enumerate(summands):
        key = (str(T.label.tube), T.label.j, T.label.m)
        if key not in positions:
            continue
        k = positions.pop(key)
        ctx = sc.ctxs[i]
        v = ctx.e_vector(k)
        assert v is not None
        off = sc.offsets[i]
        target = einf if is_infinity_tube(T.label) else e0
        for t, x in enumerate(v):
            target[off + t] += x
    assert not positions, "standard data does not match the summands"
    return tuple(e0), tuple(einf)


def cr_presentation(data: StandardData, m0_labels: Sequence[TubeLabel] = ()) -> GroupPresentation:
    """Presentation of the standard crystallographic group over the data."""
    _check_even_special(data.entries)
    labels = _data_labels(data.entries) + list(m0_labels)
    if not labels:
        raise ValueError("empty base")
    summands = [tube_module_from_label(l) for l in labels]
    sc = SumContext(summands, 2)
    e0, einf = standard_class_vectors(summands, data.entries, 2, sc)
    cls = _xi_sum_class(sc, data.entries)
    ext = extension_from_class(sc.module, cls)
    section = _solve_section(ext, e0, einf)
    assert section is not None, "constructed extension does not satisfy the relations"
    w_a, w_b = section
    gens = ("abar", "bbar") + tuple(f"w{i+1}" for i in range(sc.module.rank))
    rels = (
        "abar w = (a.w) abar  for every w in the base",
        "bbar w = (b.w) bbar  for every w in the base",
        "abar bbar = bbar abar",
        f"abar^2 = {list(e0)}",
        f"bbar^2 = {list(einf)}",
    )
    desc = " + ".join(str(l) for l in labels)
    return GroupPresentation(
        generators=gens,
        relations=rels,
        base_description=desc,
        section={"abar": w_a, "bbar": w_b, "e0": e0, "einf": einf},
    )


def _xi_sum_class(sc: SumContext, entries) -> CohClass:
    positions = {}
    for tube, seq in entries:
        for e in seq:
            positions[(str(tube), e.j, e.m)] = e.k
    comps = []
    for i, T in enumerate(sc.summands):
        key = (str(T.label.tube), T.label.j, T.label.m)
        ctx = sc.ctxs[i]
        if key in positions:
            comps.append(ctx.e_class(positions.pop(key)))
        else:
            comps.append(ctx.H.zero())
    return sc.merge(comps)


def _solve_section(ext: ExtensionGroup, e0, einf):
    """Vectors w_a, w_b making the standard relations exact, or None.

    Conditions: (w_a, a)^2 = (e0, 1), (w_b, b)^2 = (einf, 1) and the two
    lifted generators commute.
    """
    ops = ext.ops
    r = ops.rank
    g = ext.gamma
    A_ELT, B_ELT = GroupElt(1, 0), GroupElt(0, 1)
    ident = IntMatrix.identity(r)
    Aact = ops.acting.act_a
    Bact = ops.acting.act_b
    rows = []
    rhs = []
    # (1 + a) w_a = e0 - gamma(a,a)
    top = (ident + Aact).hstack(IntMatrix.zero(r, r))
    for i in range(r):
        rows.append(list(top.data[i]))
    rhs.extend(x - y for x, y in zip(e0, g.value(A_ELT, A_ELT)))
    # (1 + b) w_b = einf - gamma(b,b)
    mid = IntMatrix.zero(r, r).hstack(ident + Bact)
    for i in range(r):
        rows.append(list(mid.data[i]))
    rhs.extend(x - y for x, y in zip(einf, g.value(B_ELT, B_ELT)))
    # commutation: (1 - b) w_a - (1 - a) w_b = gamma(b,a) - gamma(a,b)
    bot = (ident - Bact).hstack((Aact - ident))
    for i in range(r):
        rows.append(list(bot.data[i]))
    rhs.extend(x - y for x, y in zip(g.value(B_ELT, A_ELT), g.value(A_ELT, B_ELT)))
    Amat = IntMatrix(rows, cols=2 * r)
    if ops.modulus:
        q = ops.modulus
        aug = Amat.hstack(IntMatrix.diagonal([q] * len(rows)))
        sol = solve_int(aug, list(rhs))
        if sol is None:
            return None
        w = sol[: 2 * r]
    else:
        w = solve_int(Amat, list(rhs))
        if w is None:
            return None
    w_a = tuple(ops.reduce(w[:r]))
    w_b = tuple(ops.reduce(w[r:2 * r]))
    # verify mechanically
    a_lift = (w_a, A_ELT)
    b_lift = (w_b, B_ELT)
    sq_a = ext.mul(a_lift, a_lift)
    sq_b = ext.mul(b_lift, b_lift)
    if sq_a != (ops.reduce(e0), GroupElt(0, 0)):
        return None
    if sq_b != (ops.reduce(einf), GroupElt(0, 0)):
        return None
    if ext.mul(a_lift, b_lift) != ext.mul(b_lift, a_lift):
        return None
    return w_a, w_b


def is_crystallographic(M: KLattice) -> bool:
    """At least two of the three nontrivial sign components are nonzero."""
    dv = dim_vector(M)
    nonzero = sum(1 for key in ("pm", "mp", "mm") if dv.component(key) > 0)
    return nonzero >= 2


def ch_presentation(data: CostandardData, n0_labels: Sequence[TubeLabel] = (),
                    level: int = 3) -> GroupPresentation:
    """Presentation of the standard Chernikov group over costandard data."""
    _check_even_special(data.entries)
    labels = _data_labels(data.entries) + list(n0_labels)
    if not labels:
        raise ValueError("empty base")
    summands = [tube_module_from_label(l) for l in labels]
    sc = DualSumContext(summands, 2, level)
    q = sc.N.modulus
    z0 = [0] * sc.base.rank
    zinf = [0] * sc.base.rank
    positions = {}
    for tube, seq in data.entries:
        for e in seq:
            positions[(str(tube), e.j, e.m)] = e.k
    comps = []
    for i, T in enumerate(sc.summands):
        key = (str(T.label.tube), T.label.j, T.label.m)
        ctx = sc.ctxs[i]
        if key in positions:
            k = positions.pop(key)
            z = ctx.z_vector(k)
            assert z is not None
            off = sc.offsets[i]
            target = zinf if is_infinity_tube(T.label) else z0
            for t, x in enumerate(z):
                target[off + t] = (target[off + t] + x) % q
            comps.append(ctx.z_class(k))
        else:
            comps.append(ctx.H.zero())
    assert not positions, "costandard data does not match the summands"
    cls = sc.merge(comps)
    ext = extension_from_dual_class(cls)
    section = _solve_section(ext, tuple(z0), tuple(zinf))
    assert section is not None, "constructed extension does not satisfy the relations"
    w_a, w_b = section

    def dyadic(vec):
        return "(" + ", ".join(f"{x % q}/{q}" for x in vec) + ")"

    gens = ("abar", "bbar")
    rels = (
        "abar w = (a.w) abar  for every w in the base",
        "bbar w = (b.w) bbar  for every w in the base",
        "abar bbar = bbar abar",
        f"abar^2 = {dyadic(z0)}",
        f"bbar^2 = {dyadic(zinf)}",
    )
    desc = " + ".join("D" + str(l) for l in labels) + f"  (level 2^{sc.N.level})"
    return GroupPresentation(
        generators=gens,
        relations=rels,
        base_description=desc,
        section={"abar": w_a, "bbar": w_b, "z0": tuple(z0), "zinf": tuple(zinf)},
    )


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

S3_NAMES = ("id", "t2", "t3", "t2t3", "t3t2", "t2t3t2")


@dataclass(frozen=True)
class StandardEntryLike:
    j: Optional[int]
    m: int
    k: int


def _transport_entries(entries, which: str):
    out = []
    for tube, seq in entries:
        moved = []
        new_tube = None
        for e in seq:
            lab = transport_label(TubeLabel(tube, e.j, e.m), which)
            if new_tube is None:
                new_tube = lab.tube
            else:
                assert new_tube == lab.tube
            moved.append(StandardEntryLike(lab.j, e.m, e.k))
        out.append((new_tube, tuple(moved)))
    out.sort(key=lambda p: str(p[0]))
    return tuple(out)


def _entries_key(entries):
    out = []
    for tube, seq in entries:
        out.append((str(tube), tuple((e.j, e.m, e.k) for e in seq)))
    return tuple(sorted(out))


def _labels_key(labels, which: str = "id"):
    moved = [transport_label(l, which) if which != "id" else l for l in labels]
    return tuple(sorted(str(l) for l in moved))


@dataclass(frozen=True)
class ClassifyResult:
    isomorphic: bool
    psi: Optional[str]

    def to_json(self):
        return {"isomorphic": self.isomorphic, "psi": self.psi}


def classify(summands1: list[TubeModule], cls1: CohClass,
             summands2: list[TubeModule], cls2: CohClass,
             context1: SumContext | None = None,
             context2: SumContext | None = None) -> ClassifyResult:
    """Isomorphism of crystallographic extensions with regular bases."""
    cf1 = canonical_form(summands1, cls1, 2, context=context1)
    cf2 = canonical_form(summands2, cls2, 2, context=context2)
    key2 = _entries_key(cf2.data.entries)
    m0_key2 = _labels_key(cf2.m0_labels)
    for psi in S3_NAMES:
        moved = _transport_entries(cf1.data.entries, psi)
        if _entries_key(moved) == key2 and _labels_key(cf1.m0_labels, psi) == m0_key2:
            return ClassifyResult(isomorphic=True, psi=psi)
    return ClassifyResult(isomorphic=False, psi=None)


def co_classify(summands1: list[TubeModule], cls1: CohClass,
                summands2: list[TubeModule], cls2: CohClass,
                level: int = 3,
                context1: DualSumContext | None = None,
                context2: DualSumContext | None = None) -> ClassifyResult:
    """Isomorphism of Chernikov extensions with regular bases."""
    cf1 = co_canonical_form(summands1, cls1, 2, level, context=context1)
    cf2 = co_canonical_form(summands2, cls2, 2, level, context=context2)
    key2 = _entries_key(cf2.data.entries)
    m0_key2 = _labels_key(cf2.n0_labels)
    for psi in S3_NAMES:
        moved = _transport_entries(cf1.data.entries, psi)
        if _entries_key(moved) == key2 and _labels_key(cf1.n0_labels, psi) == m0_key2:
            return ClassifyResult(isomorphic=True, psi=psi)
    return ClassifyResult(isomorphic=False, psi=None)
