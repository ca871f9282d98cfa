"""Degree-structured diagram shapes and the towers they induce.

A degree function on a finite category splits the morphisms into a
raising class and a lowering class so that every morphism factors
uniquely as a lowering part followed by a raising part. That structure
gives each object a latching object (values at smaller degrees mapping
in along raising morphisms) and a matching object (values at smaller
degrees mapped to along lowering morphisms), relative latching and
matching comparisons for a transformation, a classification that
refines the objectwise one, and canonical stagewise presentations:
every transformation is exhibited as a pullback tower whose stage cores
are its relative matching maps, and dually as a chain of pushouts whose
stage cores are its relative latching maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .categories import FinCat
from .complexes import (
    ChainComplex,
    ChainMap,
    PullbackResult,
    PushoutResult,
    is_quasi_iso,
    pullback,
    pushout,
)
from .diagrams import (
    DiagCellCert,
    DiagCellStage,
    DiagGenRef,
    DiagPostnikovCert,
    DiagPullback,
    DiagPushout,
    DiagTowerStage,
    Diagram,
    DiagramColimit,
    DiagramLimit,
    NatSquare,
    NatTrans,
    SetDiagram,
    copower_inclusion,
    copower_map,
    diagram_biproduct_nat,
    diagram_colimit,
    diagram_limit,
    diagram_pullback,
    diagram_pushout,
    hom_set_diagram,
    identity_nat,
    make_nat_square,
    power_map,
    power_restriction,
    sub_set_diagram,
)
from .errors import (
    DegreeViolation,
    FactorizationMissing,
    FactorizationNotUnique,
    InternalCheckFailed,
    NotReedy,
)
from .lifting import Classification, classify
from .linalg import Matrix, hstack, inverse, is_invertible, vstack


@dataclass(frozen=True)
class ReedyCat:
    """A finite category with degrees and a raising/lowering splitting.

    Every identity lies in both classes, non-identity raising morphisms
    strictly raise degree, non-identity lowering ones strictly lower it,
    both classes are closed under composition, and every morphism factors
    uniquely as a lowering morphism followed by a raising one. The
    canonical factorizations are computed up front and reused everywhere.
    """

    cat: FinCat
    degree: dict[str, int]
    plus: tuple[str, ...]
    minus: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "degree", dict(self.degree))
        object.__setattr__(self, "plus", tuple(self.plus))
        object.__setattr__(self, "minus", tuple(self.minus))
        cat = self.cat
        if set(self.degree) != set(cat.objects):
            raise NotReedy("degrees do not cover the objects exactly")
        for o, n in self.degree.items():
            if not isinstance(n, int) or n < 0:
                raise NotReedy(f"degree of {o} must be a non-negative integer")
        pset, mset = set(self.plus), set(self.minus)
        for m in pset | mset:
            if m not in cat.morphs:
                raise NotReedy(f"unknown morphism in a class: {m}")
        for o in cat.objects:
            i = cat.ids[o]
            if i not in pset or i not in mset:
                raise NotReedy(f"identity at {o} must lie in both classes")
        for m in self.plus:
            if cat.is_identity(m):
                continue
            if self.degree[cat.tgt[m]] <= self.degree[cat.src[m]]:
                raise DegreeViolation(f"raising morphism {m} does not strictly raise degree")
        for m in self.minus:
            if cat.is_identity(m):
                continue
            if self.degree[cat.tgt[m]] >= self.degree[cat.src[m]]:
                raise DegreeViolation(f"lowering morphism {m} does not strictly lower degree")
        for (g, f), c in cat.table.items():
            if g in pset and f in pset and c not in pset:
                raise NotReedy(f"raising class is not closed under composition at ({g}, {f})")
            if g in mset and f in mset and c not in mset:
                raise NotReedy(f"lowering class is not closed under composition at ({g}, {f})")
        factor = {}
        for m in cat.morphs:
            found = []
            for mm in self.minus:
                if cat.src[mm] != cat.src[m]:
                    continue
                for pm in self.plus:
                    if cat.src[pm] != cat.tgt[mm] or cat.tgt[pm] != cat.tgt[m]:
                        continue
                    if cat.table[(pm, mm)] == m:
                        found.append((mm, pm))
            if not found:
                raise FactorizationMissing(f"{m} has no lowering-then-raising factorization")
            if len(found) > 1:
                raise FactorizationNotUnique(f"{m} factors as lowering-then-raising in more than one way")
            factor[m] = found[0]
        object.__setattr__(self, "_factor", factor)

    def deg(self, o: str) -> int:
        return self.degree[o]

    def factorization(self, m: str) -> tuple[str, str]:
        """The unique (lowering part, raising part) pair composing to m."""
        return self._factor[m]

    def lowering_part(self, m: str) -> str:
        return self._factor[m][0]

    def raising_part(self, m: str) -> str:
        return self._factor[m][1]

    def op(self) -> "ReedyCat":
        """The opposite shape: classes swap roles, degrees stay."""
        return ReedyCat(self.cat.op(), dict(self.degree), tuple(self.minus), tuple(self.plus))


# -- builders ----------------------------------------------------------------


def direct_reedy(cat: FinCat, degree: dict[str, int]) -> ReedyCat:
    """Every non-identity morphism raises; the lowering class is trivial."""
    return ReedyCat(cat, degree, tuple(cat.morphs), tuple(cat.ids[o] for o in cat.objects))


def inverse_reedy(cat: FinCat, degree: dict[str, int]) -> ReedyCat:
    """Every non-identity morphism lowers; the raising class is trivial."""
    return ReedyCat(cat, degree, tuple(cat.ids[o] for o in cat.objects), tuple(cat.morphs))


def poset_degrees(cat: FinCat) -> dict[str, int]:
    """Longest-chain degrees: each object gets the length of the longest
    path of non-identity morphisms ending there."""
    deg = {o: 0 for o in cat.objects}
    edges = [(cat.src[m], cat.tgt[m]) for m in cat.nonidentity()]
    for _ in range(len(cat.objects) + 1):
        changed = False
        for a, b in edges:
            if deg[b] < deg[a] + 1:
                deg[b] = deg[a] + 1
                changed = True
        if not changed:
            return deg
    raise NotReedy("category has a directed cycle of non-identity morphisms")


def delta_le1() -> ReedyCat:
    """Two truncated simplex levels: a point object and an edge object, two
    raising endpoint inclusions, one lowering collapse, and the two
    idempotent endpoint projections of the edge object."""
    objects = ("[0]", "[1]")
    morphs = ("id0", "id1", "d0", "d1", "s0", "e0", "e1")
    src = {"id0": "[0]", "id1": "[1]", "d0": "[0]", "d1": "[0]", "s0": "[1]", "e0": "[1]", "e1": "[1]"}
    tgt = {"id0": "[0]", "id1": "[1]", "d0": "[1]", "d1": "[1]", "s0": "[0]", "e0": "[1]", "e1": "[1]"}
    ids = {"[0]": "id0", "[1]": "id1"}
    table = {
        ("id0", "id0"): "id0",
        ("d0", "id0"): "d0",
        ("d1", "id0"): "d1",
        ("s0", "d0"): "id0",
        ("s0", "d1"): "id0",
        ("id1", "d0"): "d0",
        ("id1", "d1"): "d1",
        ("e0", "d0"): "d0",
        ("e0", "d1"): "d0",
        ("e1", "d0"): "d1",
        ("e1", "d1"): "d1",
        ("id0", "s0"): "s0",
        ("d0", "s0"): "e0",
        ("d1", "s0"): "e1",
        ("s0", "id1"): "s0",
        ("s0", "e0"): "s0",
        ("s0", "e1"): "s0",
        ("id1", "id1"): "id1",
        ("id1", "e0"): "e0",
        ("id1", "e1"): "e1",
        ("e0", "id1"): "e0",
        ("e0", "e0"): "e0",
        ("e0", "e1"): "e0",
        ("e1", "id1"): "e1",
        ("e1", "e0"): "e1",
        ("e1", "e1"): "e1",
    }
    cat = FinCat(objects, morphs, src, tgt, ids, table)
    return ReedyCat(cat, {"[0]": 0, "[1]": 1}, ("id0", "id1", "d0", "d1"), ("id0", "id1", "s0"))


# -- boundaries of representables ---------------------------------------------


def boundary_representable(R: ReedyCat, r: str, variance: str) -> SetDiagram:
    """The sub-functor of the representable at r spanned by the morphisms
    that factor through an object of strictly smaller degree: exactly those
    whose canonical raising part (contravariant case) or lowering part
    (covariant case) is not an identity."""
    S = hom_set_diagram(R.cat, r, variance)
    keep = {}
    for o in R.cat.objects:
        if variance == "co":
            keep[o] = tuple(f for f in S.elems[o] if not R.cat.is_identity(R.lowering_part(f)))
        else:
            keep[o] = tuple(f for f in S.elems[o] if not R.cat.is_identity(R.raising_part(f)))
    return sub_set_diagram(S, keep)


# -- latching and matching objects --------------------------------------------


def _raising_slice(R: ReedyCat, r: str) -> tuple[FinCat, dict[str, str]]:
    """Shape under the latching object at r: objects are the non-identity
    raising morphisms into r, morphisms are the raising triangles between
    them. Also returns the underlying morphism of each triangle."""
    cat = R.cat
    pset = set(R.plus)
    objs = tuple(f for f in cat.morphs if f in pset and cat.tgt[f] == r and not cat.is_identity(f))
    morphs, src, tgt, under = [], {}, {}, {}
    for f in objs:
        for g in objs:
            for h in cat.hom(cat.src[f], cat.src[g]):
                if h in pset and cat.table[(g, h)] == f:
                    lab = f"{h}@{g}"
                    morphs.append(lab)
                    src[lab] = f
                    tgt[lab] = g
                    under[lab] = h
    ids = {f: f"{cat.ids[cat.src[f]]}@{f}" for f in objs}
    table = {}
    for l1 in morphs:
        for l2 in morphs:
            if src[l2] != tgt[l1]:
                continue
            h = cat.table[(under[l2], under[l1])]
            table[(l2, l1)] = f"{h}@{tgt[l2]}"
    return FinCat(objs, tuple(morphs), src, tgt, ids, table), under


def _lowering_coslice(R: ReedyCat, r: str) -> tuple[FinCat, dict[str, str]]:
    """Shape over the matching object at r: objects are the non-identity
    lowering morphisms out of r, morphisms are the lowering triangles."""
    cat = R.cat
    mset = set(R.minus)
    objs = tuple(g for g in cat.morphs if g in mset and cat.src[g] == r and not cat.is_identity(g))
    morphs, src, tgt, under = [], {}, {}, {}
    for g1 in objs:
        for g2 in objs:
            for h in cat.hom(cat.tgt[g1], cat.tgt[g2]):
                if h in mset and cat.table[(h, g1)] == g2:
                    lab = f"{h}@{g1}"
                    morphs.append(lab)
                    src[lab] = g1
                    tgt[lab] = g2
                    under[lab] = h
    ids = {g: f"{cat.ids[cat.tgt[g]]}@{g}" for g in objs}
    table = {}
    for l1 in morphs:
        for l2 in morphs:
            if src[l2] != tgt[l1]:
                continue
            h = cat.table[(under[l2], under[l1])]
            table[(l2, l1)] = f"{h}@{src[l1]}"
    return FinCat(objs, tuple(morphs), src, tgt, ids, table), under


@dataclass(frozen=True)
class LatchingData:
    shape: FinCat
    diagram: Diagram
    colimit: DiagramColimit
    canonical: ChainMap

    @property
    def obj(self) -> ChainComplex:
        return self.colimit.obj


@dataclass(frozen=True)
class MatchingData:
    shape: FinCat
    diagram: Diagram
    limit: DiagramLimit
    canonical: ChainMap

    @property
    def obj(self) -> ChainComplex:
        return self.limit.obj


def latching(R: ReedyCat, Phi: Diagram, r: str) -> LatchingData:
    """Colimit of the values below r along raising morphisms, with the
    canonical comparison into the value at r."""
    shape, under = _raising_slice(R, r)
    at = {f: Phi.at[R.cat.src[f]] for f in shape.objects}
    arrow = {lab: Phi.arrow[under[lab]] for lab in shape.morphs}
    D = Diagram(shape, Phi.field, at, arrow)
    colim = diagram_colimit(D)
    cocone = {f: Phi.arrow[f] for f in shape.objects}
    return LatchingData(shape, D, colim, colim.induce(cocone, target=Phi.at[r]))


def matching(R: ReedyCat, Phi: Diagram, r: str) -> MatchingData:
    """Limit of the values below r along lowering morphisms, with the
    canonical comparison from the value at r."""
    shape, under = _lowering_coslice(R, r)
    at = {g: Phi.at[R.cat.tgt[g]] for g in shape.objects}
    arrow = {lab: Phi.arrow[under[lab]] for lab in shape.morphs}
    D = Diagram(shape, Phi.field, at, arrow)
    lim = diagram_limit(D)
    cone = {g: Phi.arrow[g] for g in shape.objects}
    return MatchingData(shape, D, lim, lim.induce(cone, source=Phi.at[r]))


# -- relative latching and matching maps --------------------------------------


@dataclass(frozen=True)
class RelLatching:
    source_data: LatchingData
    target_data: LatchingData
    induced: ChainMap
    corner: PushoutResult
    map: ChainMap


@dataclass(frozen=True)
class RelMatching:
    source_data: MatchingData
    target_data: MatchingData
    induced: ChainMap
    corner: PullbackResult
    map: ChainMap


def rel_latching(R: ReedyCat, tau: NatTrans, r: str) -> RelLatching:
    """The comparison out of the source value glued with the target
    latching object, into the target value at r."""
    ldS = latching(R, tau.source, r)
    ldT = latching(R, tau.target, r)
    cocone = {f: ldT.colimit.legs[f] @ tau.comps[R.cat.src[f]] for f in ldS.shape.objects}
    induced = ldS.colimit.induce(cocone, target=ldT.obj)
    corner = pushout(ldS.canonical, induced)
    m = corner.induce(tau.comps[r], ldT.canonical)
    return RelLatching(ldS, ldT, induced, corner, m)


def rel_matching(R: ReedyCat, tau: NatTrans, r: str) -> RelMatching:
    """The comparison from the source value at r into the target value
    crossed over the source matching object."""
    mdS = matching(R, tau.source, r)
    mdT = matching(R, tau.target, r)
    cone = {g: tau.comps[R.cat.tgt[g]] @ mdS.limit.legs[g] for g in mdS.shape.objects}
    induced = mdT.limit.induce(cone, source=mdS.obj)
    corner = pullback(mdT.canonical, induced)
    m = corner.induce(tau.comps[r], mdS.canonical)
    return RelMatching(mdS, mdT, induced, corner, m)


@dataclass(frozen=True)
class ReedyClassification:
    """Degree-aware classification of a transformation: monomorphy of the
    relative latching maps, fibrancy of the relative matching maps, and the
    objectwise homology comparison."""

    rel_latching: dict[str, Classification]
    rel_matching: dict[str, Classification]
    objectwise_we: dict[str, bool]

    @property
    def cofibration(self) -> bool:
        return all(c.cofibration for c in self.rel_latching.values())

    @property
    def fibration(self) -> bool:
        return all(c.fibration for c in self.rel_matching.values())

    @property
    def weak_equivalence(self) -> bool:
        return all(self.objectwise_we.values())

    @property
    def acyclic_cofibration(self) -> bool:
        return self.cofibration and self.weak_equivalence

    @property
    def acyclic_fibration(self) -> bool:
        return self.fibration and self.weak_equivalence

    def to_dict(self) -> dict:
        return {
            "cofibration": self.cofibration,
            "fibration": self.fibration,
            "weak_equivalence": self.weak_equivalence,
            "acyclic_cofibration": self.acyclic_cofibration,
            "acyclic_fibration": self.acyclic_fibration,
            "rel_latching": {r: c.to_dict() for r, c in self.rel_latching.items()},
            "rel_matching": {r: c.to_dict() for r, c in self.rel_matching.items()},
            "objectwise_weak_equivalence": dict(self.objectwise_we),
        }


def reedy_classify(R: ReedyCat, tau: NatTrans) -> ReedyClassification:
    rl = {r: classify(rel_latching(R, tau, r).map) for r in R.cat.objects}
    rm = {r: classify(rel_matching(R, tau, r).map) for r in R.cat.objects}
    we = {o: is_quasi_iso(tau.comps[o]) for o in R.cat.objects}
    return ReedyClassification(rl, rm, we)


# -- corner generators ---------------------------------------------------------


@dataclass(frozen=True)
class TensorGenData:
    """Corner comparison of a chain map spread covariantly over the
    representable at an object against its boundary inclusion."""

    full: SetDiagram
    boundary: SetDiagram
    corner: DiagPushout
    map: NatTrans


@dataclass(frozen=True)
class CotensorGenData:
    """Corner comparison of a chain map spread contravariantly over the
    representable at an object against its boundary restriction."""

    full: SetDiagram
    boundary: SetDiagram
    corner: DiagPullback
    map: NatTrans


def pushout_product_gen(R: ReedyCat, i: ChainMap, r: str) -> TensorGenData:
    """Glue (source over the full representable) and (target over the
    boundary) over (source over the boundary), compared into (target over
    the full representable)."""
    S_full = hom_set_diagram(R.cat, r, "co")
    S_bd = boundary_representable(R, r, "co")
    corner = diagram_pushout(copower_inclusion(i.source, S_bd, S_full), copower_map(i, S_bd))
    out = corner.induce(copower_map(i, S_full), copower_inclusion(i.target, S_bd, S_full))
    return TensorGenData(S_full, S_bd, corner, out)


def pullback_cotensor_gen(R: ReedyCat, p: ChainMap, r: str) -> CotensorGenData:
    """Compare (source over the full representable) into (target over the
    full representable) crossed over (target over the boundary) with
    (source over the boundary)."""
    S_full = hom_set_diagram(R.cat, r, "contra")
    S_bd = boundary_representable(R, r, "contra")
    corner = diagram_pullback(power_restriction(p.target, S_full, S_bd), power_map(p, S_bd))
    out = corner.induce(power_map(p, S_full), power_restriction(p.source, S_full, S_bd))
    return CotensorGenData(S_full, S_bd, corner, out)


# -- transposing lifting problems ----------------------------------------------


def _hstack_block_maps(source: ChainComplex, target: ChainComplex, blocks: list[ChainMap]) -> ChainMap:
    field = target.field
    comps = []
    for n in range(max(source.top, target.top) + 1):
        cols = [b.comp(n) for b in blocks]
        comps.append(hstack(cols) if cols else Matrix.zeros(field, target.dim(n), source.dim(n)))
    return ChainMap(source, target, comps)


def _vstack_block_maps(source: ChainComplex, target: ChainComplex, blocks: list[ChainMap]) -> ChainMap:
    field = target.field
    comps = []
    for n in range(max(source.top, target.top) + 1):
        rows = [b.comp(n) for b in blocks]
        comps.append(vstack(rows) if rows else Matrix.zeros(field, target.dim(n), source.dim(n)))
    return ChainMap(source, target, comps)


def reedy_transpose_square(
    R: ReedyCat,
    tau: NatTrans,
    r: str,
    i: ChainMap,
    u: ChainMap,
    v: ChainMap,
    rel: RelMatching | None = None,
    gen: TensorGenData | None = None,
) -> tuple[NatSquare, TensorGenData, RelMatching]:
    """Rewrite a commuting square (i on the left, the relative matching map
    of tau at r on the right) as the equivalent diagram-level square whose
    left edge is the corner generator of i at r and whose right edge is tau.
    Lifts exist on one side exactly when they exist on the other."""
    cat = R.cat
    rel = rel if rel is not None else rel_matching(R, tau, r)
    gen = gen if gen is not None else pushout_product_gen(R, i, r)
    Phi, Psi = tau.source, tau.target
    vpsi = rel.corner.leg1 @ v
    vmatch = rel.corner.leg2 @ v
    Bfull = gen.map.target
    bottom = NatTrans(
        Bfull,
        Psi,
        {
            o: _hstack_block_maps(Bfull.at[o], Psi.at[o], [Psi.arrow[f] @ vpsi for f in gen.full.elems[o]])
            for o in cat.objects
        },
    )
    Xfull = gen.corner.leg1.source
    Bbd = gen.corner.leg2.source
    u1 = NatTrans(
        Xfull,
        Phi,
        {
            o: _hstack_block_maps(Xfull.at[o], Phi.at[o], [Phi.arrow[f] @ u for f in gen.full.elems[o]])
            for o in cat.objects
        },
    )
    u2_comps = {}
    for o in cat.objects:
        blocks = []
        for f in gen.boundary.elems[o]:
            mm, pm = R.factorization(f)
            blocks.append(Phi.arrow[pm] @ rel.source_data.limit.legs[mm] @ vmatch)
        u2_comps[o] = _hstack_block_maps(Bbd.at[o], Phi.at[o], blocks)
    top = gen.corner.induce(u1, NatTrans(Bbd, Phi, u2_comps))
    return make_nat_square(gen.map, tau, top, bottom), gen, rel


# -- canonical towers ------------------------------------------------------------


def _inverse_map(f: ChainMap) -> ChainMap:
    # stage comparisons below the working degree must be isomorphisms
    comps = []
    for n in range(max(f.source.top, f.target.top) + 1):
        M = f.comp(n)
        if M.rows != M.cols or not is_invertible(M):
            raise InternalCheckFailed("stage comparison is not invertible")
        comps.append(inverse(M))
    return ChainMap(f.target, f.source, comps)


def reedy_canonical_tower(R: ReedyCat, tau: NatTrans) -> DiagPostnikovCert:
    """Present tau as a pullback tower with one stage per occupied degree:
    the stage at degree n attaches the corner generators of the relative
    matching maps at the degree-n objects, and the top stage is the source
    diagram itself with its accumulated comparison legs."""
    cat, field = tau.cat, tau.field
    Phi, Psi = tau.source, tau.target
    degrees = sorted({R.degree[o] for o in cat.objects})
    stages: list[DiagTowerStage] = []
    current = Psi
    lam = tau
    pi = identity_nat(Psi)
    for idx, n in enumerate(degrees):
        rs = [o for o in cat.objects if R.degree[o] == n]
        rels = {r: rel_matching(R, tau, r) for r in rs}
        gdatas = {r: pullback_cotensor_gen(R, rels[r].map, r) for r in rs}
        gens = tuple(DiagGenRef("custom", custom=gdatas[r].map) for r in rs)
        G, gsrc, gtgt = diagram_biproduct_nat(cat, field, [gdatas[r].map for r in rs])
        rho: dict[str, ChainMap] = {}

        def rho_at(b: str) -> ChainMap:
            if b not in rho:
                rho[b] = _inverse_map(lam.comps[b])
            return rho[b]

        per_r = {}
        for r in rs:
            rel, gdata = rels[r], gdatas[r]
            Yfull = gdata.corner.leg1.target
            Xbd = gdata.corner.leg2.target
            ky_comps, kx_comps = {}, {}
            for o in cat.objects:
                yblocks = []
                for f in gdata.full.elems[o]:
                    upsi = Psi.arrow[f] @ pi.comps[o]
                    mcone = {
                        g: rho_at(cat.tgt[g]) @ current.arrow[cat.table[(g, f)]]
                        for g in rel.source_data.shape.objects
                    }
                    umatch = rel.source_data.limit.induce(mcone, source=current.at[o])
                    yblocks.append(rel.corner.induce(upsi, umatch))
                ky_comps[o] = _vstack_block_maps(current.at[o], Yfull.at[o], yblocks)
                xblocks = []
                for f in gdata.boundary.elems[o]:
                    mm, pm = R.factorization(f)
                    xblocks.append(Phi.arrow[pm] @ rho_at(cat.tgt[mm]) @ current.arrow[mm])
                kx_comps[o] = _vstack_block_maps(current.at[o], Xbd.at[o], xblocks)
            per_r[r] = gdata.corner.induce(
                NatTrans(current, Yfull, ky_comps), NatTrans(current, Xbd, kx_comps)
            )
        attach = NatTrans(
            current,
            gtgt.obj,
            {
                o: _vstack_block_maps(current.at[o], gtgt.obj.at[o], [per_r[r].comps[o] for r in rs])
                for o in cat.objects
            },
        )
        unit = NatTrans(
            Phi,
            gsrc.obj,
            {
                o: _vstack_block_maps(
                    Phi.at[o],
                    gsrc.obj.at[o],
                    [Phi.arrow[f] for r in rs for f in gdatas[r].full.elems[o]],
                )
                for o in cat.objects
            },
        )
        if (attach @ lam) != (G @ unit):
            raise InternalCheckFailed("tower stage square does not close")
        if idx == len(degrees) - 1:
            stages.append(DiagTowerStage(gens, attach, Phi, lam, unit))
        else:
            pb = diagram_pullback(attach, G)
            lam_new = pb.induce(lam, unit)
            stages.append(DiagTowerStage(gens, attach, pb.obj, pb.leg1, pb.leg2))
            current = pb.obj
            pi = pi @ pb.leg1
            lam = lam_new
    return DiagPostnikovCert(Psi, tuple(stages), tau)


def reedy_canonical_cells(R: ReedyCat, tau: NatTrans) -> DiagCellCert:
    """Present tau as a chain of pushouts with one stage per occupied
    degree: the stage at degree n attaches the corner generators of the
    relative latching maps at the degree-n objects, and the top stage is
    the target diagram itself with its accumulated comparison legs."""
    cat, field = tau.cat, tau.field
    Phi, Psi = tau.source, tau.target
    degrees = sorted({R.degree[o] for o in cat.objects})
    stages: list[DiagCellStage] = []
    current = Phi
    mu = tau
    iota = identity_nat(Phi)
    for idx, n in enumerate(degrees):
        rs = [o for o in cat.objects if R.degree[o] == n]
        rels = {r: rel_latching(R, tau, r) for r in rs}
        gdatas = {r: pushout_product_gen(R, rels[r].map, r) for r in rs}
        gens = tuple(DiagGenRef("custom", custom=gdatas[r].map) for r in rs)
        G, gsrc, gtgt = diagram_biproduct_nat(cat, field, [gdatas[r].map for r in rs])
        sigma: dict[str, ChainMap] = {}

        def sigma_at(b: str) -> ChainMap:
            if b not in sigma:
                sigma[b] = _inverse_map(mu.comps[b])
            return sigma[b]

        per_r = {}
        for r in rs:
            rel, gdata = rels[r], gdatas[r]
            Zfull = gdata.corner.leg1.source
            Bbd = gdata.corner.leg2.source
            uz_comps, vb_comps = {}, {}
            for o in cat.objects:
                zblocks = []
                for f in gdata.full.elems[o]:
                    uphi = current.arrow[f] @ iota.comps[r]
                    lcocone = {
                        h: current.arrow[cat.table[(f, h)]] @ sigma_at(cat.src[h])
                        for h in rel.target_data.shape.objects
                    }
                    ulatch = rel.target_data.colimit.induce(lcocone, target=current.at[o])
                    zblocks.append(rel.corner.induce(uphi, ulatch))
                uz_comps[o] = _hstack_block_maps(Zfull.at[o], current.at[o], zblocks)
                bblocks = []
                for f in gdata.boundary.elems[o]:
                    mm, pm = R.factorization(f)
                    bblocks.append(current.arrow[pm] @ sigma_at(cat.tgt[mm]) @ Psi.arrow[mm])
                vb_comps[o] = _hstack_block_maps(Bbd.at[o], current.at[o], bblocks)
            per_r[r] = gdata.corner.induce(
                NatTrans(Zfull, current, uz_comps), NatTrans(Bbd, current, vb_comps)
            )
        attach = NatTrans(
            gsrc.obj,
            current,
            {
                o: _hstack_block_maps(gsrc.obj.at[o], current.at[o], [per_r[r].comps[o] for r in rs])
                for o in cat.objects
            },
        )
        counit = NatTrans(
            gtgt.obj,
            Psi,
            {
                o: _hstack_block_maps(
                    gtgt.obj.at[o],
                    Psi.at[o],
                    [Psi.arrow[f] for r in rs for f in gdatas[r].full.elems[o]],
                )
                for o in cat.objects
            },
        )
        if (mu @ attach) != (counit @ G):
            raise InternalCheckFailed("cell stage square does not close")
        if idx == len(degrees) - 1:
            stages.append(DiagCellStage(gens, attach, Psi, mu, counit))
        else:
            po = diagram_pushout(attach, G)
            mu_new = po.induce(mu, counit)
            stages.append(DiagCellStage(gens, attach, po.obj, po.leg1, po.leg2))
            current = po.obj
            iota = po.leg1 @ iota
            mu = mu_new
    return DiagCellCert(Phi, tuple(stages), tau)
