"""Functors from a finite category into chain complexes, and their algebra.

A diagram assigns a complex to every object and a chain map to every
morphism, functorially; a transformation assigns a componentwise chain map,
naturally. Both are validated exhaustively on construction. On top of that
this module provides exact limits and colimits with mediating maps, discrete
left and right Kan extensions with their adjunction transposes, copower and
power constructions against hom-sets, objectwise classification, joint
lifting (one linear system covering all components plus naturality), tower
and cell certificates at the diagram level, and the factorization of any
transformation into an objectwise monomorphism followed by a certified
tower projection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .categories import FinCat
from .certificates import GenRef, VerifyResult, gen_chain_map
from .complexes import (
    Biproduct,
    ChainComplex,
    ChainMap,
    PullbackResult,
    PushoutResult,
    _pruned_top,
    biproduct,
    disc,
    identity_map,
    is_degreewise_mono,
    make_map,
    pullback,
    pushout,
    zero_complex,
    zero_map,
)
from .errors import (
    BadShape,
    FieldMismatch,
    InternalCheckFailed,
    NotACommutingSquare,
    NotFunctorial,
    NotNatural,
    ValidationFailure,
)
from .fields import FieldSpec
from .lifting import Classification, classify
from .linalg import (
    Matrix,
    block_diag,
    complement_basis,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    kron,
    np_identity,
    rank,
    solve,
    try_solve,
    vstack,
)

# -- diagrams and transformations ------------------------------------------


@dataclass(frozen=True)
class Diagram:
    cat: FinCat
    field: FieldSpec
    at: dict[str, ChainComplex]
    arrow: dict[str, ChainMap]

    def __post_init__(self) -> None:
        object.__setattr__(self, "at", dict(self.at))
        object.__setattr__(self, "arrow", dict(self.arrow))
        if set(self.at) != set(self.cat.objects):
            raise NotFunctorial("object values do not cover the objects exactly")
        if set(self.arrow) != set(self.cat.morphs):
            raise NotFunctorial("arrow values do not cover the morphisms exactly")
        for o, C in self.at.items():
            if C.field != self.field:
                raise FieldMismatch(f"value at {o} lives over a different field")
        for m, f in self.arrow.items():
            if f.source != self.at[self.cat.src[m]] or f.target != self.at[self.cat.tgt[m]]:
                raise NotFunctorial(f"value of {m} has wrong ends")
        for o in self.cat.objects:
            if self.arrow[self.cat.ids[o]] != identity_map(self.at[o]):
                raise NotFunctorial(f"identity at {o} is not sent to the identity map")
        for (g, f), c in self.cat.table.items():
            if self.arrow[c] != self.arrow[g] @ self.arrow[f]:
                raise NotFunctorial(f"composite ({g}, {f}) disagrees with the table")

    def width(self) -> int:
        return max((self.at[o].top for o in self.cat.objects), default=0) + 1


def constant_diagram(cat: FinCat, C: ChainComplex) -> Diagram:
    return Diagram(cat, C.field, {o: C for o in cat.objects}, {m: identity_map(C) for m in cat.morphs})


def zero_diagram(cat: FinCat, field: FieldSpec) -> Diagram:
    return constant_diagram(cat, zero_complex(field))


@dataclass(frozen=True)
class NatTrans:
    source: Diagram
    target: Diagram
    comps: dict[str, ChainMap]

    def __post_init__(self) -> None:
        object.__setattr__(self, "comps", dict(self.comps))
        if self.source.cat != self.target.cat:
            raise BadShape("transformation between diagrams over different categories")
        if self.source.field != self.target.field:
            raise FieldMismatch("transformation between diagrams over different fields")
        cat = self.source.cat
        if set(self.comps) != set(cat.objects):
            raise NotNatural("components do not cover the objects exactly")
        for o, f in self.comps.items():
            if f.source != self.source.at[o] or f.target != self.target.at[o]:
                raise BadShape(f"component at {o} has wrong ends")
        for m in cat.nonidentity():
            a, b = cat.src[m], cat.tgt[m]
            if self.target.arrow[m] @ self.comps[a] != self.comps[b] @ self.source.arrow[m]:
                raise NotNatural(f"naturality fails at {m}")

    @property
    def cat(self) -> FinCat:
        return self.source.cat

    @property
    def field(self) -> FieldSpec:
        return self.source.field

    def __matmul__(self, other: "NatTrans") -> "NatTrans":
        if other.target != self.source:
            raise BadShape("transformations are not composable")
        return NatTrans(other.source, self.target, {o: self.comps[o] @ other.comps[o] for o in self.comps})

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.comps.values())


def identity_nat(D: Diagram) -> NatTrans:
    return NatTrans(D, D, {o: identity_map(D.at[o]) for o in D.cat.objects})


def zero_nat(source: Diagram, target: Diagram) -> NatTrans:
    return NatTrans(
        source, target, {o: zero_map(source.at[o], target.at[o]) for o in source.cat.objects}
    )


# -- limits and colimits ----------------------------------------------------


def _object_offsets(D: Diagram, n: int) -> dict[str, int]:
    offs = {}
    run = 0
    for o in D.cat.objects:
        offs[o] = run
        run += D.at[o].dim(n)
    return offs


def _constraint_rows(D: Diagram, n: int) -> Matrix:
    """Rows vanishing exactly on compatible families in degree n."""
    field = D.field
    offs = _object_offsets(D, n)
    total = sum(D.at[o].dim(n) for o in D.cat.objects)
    rows = []
    for m in D.cat.nonidentity():
        a, b = D.cat.src[m], D.cat.tgt[m]
        nb = D.at[b].dim(n)
        if nb == 0:
            continue
        row = Matrix.zeros(field, nb, total)
        arr = np.array(row.data)
        fa = D.arrow[m].comp(n)
        if fa.data.size:
            arr[:, offs[a] : offs[a] + D.at[a].dim(n)] += np.array(fa.data)
        ib = np.array(Matrix.identity(field, nb).data)
        arr[:, offs[b] : offs[b] + nb] -= ib
        rows.append(Matrix(field, arr % field.p if field.kind == "prime" else arr))
    if not rows:
        return Matrix.zeros(field, 0, total)
    return vstack(rows)


@dataclass(frozen=True)
class DiagramLimit:
    diagram: Diagram
    obj: ChainComplex
    legs: dict[str, ChainMap]
    _bases: tuple[Matrix, ...]

    def induce(self, cone: dict[str, ChainMap], source: ChainComplex | None = None) -> ChainMap:
        """The unique map through the limit from a compatible cone."""
        D = self.diagram
        if set(cone) != set(D.cat.objects):
            raise BadShape("cone does not cover the objects exactly")
        if source is None:
            if not cone:
                raise BadShape("empty cone needs an explicit source")
            source = next(iter(cone.values())).source
        if any(cone[o].source != source for o in cone):
            raise BadShape("cone legs need a common source")
        for o in cone:
            if cone[o].target != D.at[o]:
                raise BadShape(f"cone leg at {o} has the wrong target")
        for m in D.cat.nonidentity():
            a, b = D.cat.src[m], D.cat.tgt[m]
            if D.arrow[m] @ cone[a] != cone[b]:
                raise NotNatural(f"cone is not compatible at {m}")
        comps = []
        for n in range(max(self.obj.top, source.top) + 1):
            K = self._bases[n] if n < len(self._bases) else Matrix.zeros(
                D.field, sum(D.at[o].dim(n) for o in D.cat.objects), 0
            )
            rhs = (
                vstack([cone[o].comp(n) for o in D.cat.objects])
                if D.cat.objects
                else Matrix.zeros(D.field, 0, source.dim(n))
            )
            comps.append(solve(K, rhs))
        return ChainMap(source, self.obj, comps)


def diagram_limit(D: Diagram) -> DiagramLimit:
    """Degreewise exact limit, with projection legs."""
    field = D.field
    width = D.width()
    bases = [kernel_basis(_constraint_rows(D, n)) for n in range(width)]
    top = _pruned_top([b.cols for b in bases])
    dims = [bases[n].cols for n in range(top + 1)]
    diff = []
    for n in range(1, top + 1):
        bigd = block_diag(field, [D.at[o].d(n) for o in D.cat.objects])
        diff.append(solve(bases[n - 1], bigd @ bases[n]))
    obj = ChainComplex(field, dims, diff)
    legs = {}
    for o in D.cat.objects:
        comps = []
        for n in range(top + 1):
            off = _object_offsets(D, n)[o]
            comps.append(bases[n].row_slice(off, off + D.at[o].dim(n)))
        legs[o] = ChainMap(obj, D.at[o], comps)
    return DiagramLimit(D, obj, legs, tuple(bases))


@dataclass(frozen=True)
class DiagramColimit:
    diagram: Diagram
    obj: ChainComplex
    legs: dict[str, ChainMap]
    _sections: tuple[Matrix, ...]

    def induce(self, cocone: dict[str, ChainMap], target: ChainComplex | None = None) -> ChainMap:
        """The unique map out of the colimit from a compatible cocone."""
        D = self.diagram
        if set(cocone) != set(D.cat.objects):
            raise BadShape("cocone does not cover the objects exactly")
        if target is None:
            if not cocone:
                raise BadShape("empty cocone needs an explicit target")
            target = next(iter(cocone.values())).target
        if any(cocone[o].target != target for o in cocone):
            raise BadShape("cocone legs need a common target")
        for o in cocone:
            if cocone[o].source != D.at[o]:
                raise BadShape(f"cocone leg at {o} has the wrong source")
        for m in D.cat.nonidentity():
            a, b = D.cat.src[m], D.cat.tgt[m]
            if cocone[b] @ D.arrow[m] != cocone[a]:
                raise NotNatural(f"cocone is not compatible at {m}")
        comps = []
        for n in range(max(self.obj.top, target.top) + 1):
            sec = self._sections[n] if n < len(self._sections) else Matrix.zeros(
                D.field, sum(D.at[o].dim(n) for o in D.cat.objects), 0
            )
            U = (
                hstack([cocone[o].comp(n) for o in D.cat.objects])
                if D.cat.objects
                else Matrix.zeros(D.field, target.dim(n), 0)
            )
            comps.append(U @ sec)
        return ChainMap(self.obj, target, comps)


def diagram_colimit(D: Diagram) -> DiagramColimit:
    """Degreewise exact colimit, with insertion legs."""
    field = D.field
    width = D.width()
    sections = []
    quotients = []
    dims = []
    for n in range(width):
        offs = _object_offsets(D, n)
        total = sum(D.at[o].dim(n) for o in D.cat.objects)
        cols = []
        for m in D.cat.nonidentity():
            a, b = D.cat.src[m], D.cat.tgt[m]
            na = D.at[a].dim(n)
            if na == 0:
                continue
            col = Matrix.zeros(field, total, na)
            arr = np.array(col.data)
            fb = D.arrow[m].comp(n)
            if fb.data.size:
                arr[offs[b] : offs[b] + D.at[b].dim(n), :] += np.array(fb.data)
            arr[offs[a] : offs[a] + na, :] -= np.array(Matrix.identity(field, na).data)
            cols.append(Matrix(field, arr % field.p if field.kind == "prime" else arr))
        span = hstack(cols) if cols else Matrix.zeros(field, total, 0)
        img = image_basis(span)
        sec = complement_basis(img)
        basis = hstack([sec, img])
        if basis.cols != total:
            raise InternalCheckFailed("colimit basis does not span")
        q = inverse(basis).row_slice(0, sec.cols) if total else Matrix.zeros(field, 0, 0)
        sections.append(sec)
        quotients.append(q)
        dims.append(sec.cols)
    top = _pruned_top(dims)
    dims = dims[: top + 1]
    diff = []
    for n in range(1, top + 1):
        bigd = block_diag(field, [D.at[o].d(n) for o in D.cat.objects])
        diff.append(quotients[n - 1] @ bigd @ sections[n])
    obj = ChainComplex(field, dims, diff)
    legs = {}
    for o in D.cat.objects:
        comps = []
        for n in range(top + 1):
            off = _object_offsets(D, n)[o]
            comps.append(quotients[n].col_slice(off, off + D.at[o].dim(n)))
        legs[o] = ChainMap(D.at[o], obj, comps)
    return DiagramColimit(D, obj, legs, tuple(sections))


# -- objectwise biproducts, pullbacks, pushouts ------------------------------


@dataclass(frozen=True)
class DiagBiproduct:
    obj: Diagram
    injections: tuple[NatTrans, ...]
    projections: tuple[NatTrans, ...]
    _locals: dict[str, Biproduct]


def diagram_biproduct(cat: FinCat, field: FieldSpec, summands: list[Diagram]) -> DiagBiproduct:
    locals_ = {o: biproduct(field, [S.at[o] for S in summands]) for o in cat.objects}
    at = {o: locals_[o].obj for o in cat.objects}
    arrow = {}
    for m in cat.morphs:
        a, b = cat.src[m], cat.tgt[m]
        w = max(at[a].top, at[b].top) + 1
        comps = [
            block_diag(field, [S.arrow[m].comp(n) for S in summands]) for n in range(w)
        ]
        arrow[m] = ChainMap(at[a], at[b], comps)
    obj = Diagram(cat, field, at, arrow)
    injections = tuple(
        NatTrans(S, obj, {o: locals_[o].injections[i] for o in cat.objects})
        for i, S in enumerate(summands)
    )
    projections = tuple(
        NatTrans(obj, S, {o: locals_[o].projections[i] for o in cat.objects})
        for i, S in enumerate(summands)
    )
    return DiagBiproduct(obj, injections, projections, locals_)


def diagram_biproduct_nat(
    cat: FinCat, field: FieldSpec, nats: list[NatTrans]
) -> tuple[NatTrans, DiagBiproduct, DiagBiproduct]:
    """Blockwise sum of transformations, with source and target biproducts."""
    src = diagram_biproduct(cat, field, [t.source for t in nats])
    tgt = diagram_biproduct(cat, field, [t.target for t in nats])
    comps = {}
    for o in cat.objects:
        w = max(src.obj.at[o].top, tgt.obj.at[o].top) + 1
        comps[o] = ChainMap(
            src.obj.at[o],
            tgt.obj.at[o],
            [block_diag(field, [t.comps[o].comp(n) for t in nats]) for n in range(w)],
        )
    return NatTrans(src.obj, tgt.obj, comps), src, tgt


@dataclass(frozen=True)
class DiagPullback:
    obj: Diagram
    leg1: NatTrans
    leg2: NatTrans
    _locals: dict[str, PullbackResult]

    def induce(self, u: NatTrans, v: NatTrans) -> NatTrans:
        if u.source != v.source:
            raise BadShape("induced transformation needs a common source")
        comps = {o: self._locals[o].induce(u.comps[o], v.comps[o]) for o in self._locals}
        return NatTrans(u.source, self.obj, comps)


def diagram_pullback(f: NatTrans, g: NatTrans) -> DiagPullback:
    """Objectwise pullback of f against g, with induced functorial action."""
    if f.target != g.target:
        raise BadShape("pullback needs a common target")
    cat, field = f.cat, f.field
    locals_ = {o: pullback(f.comps[o], g.comps[o]) for o in cat.objects}
    at = {o: locals_[o].obj for o in cat.objects}
    A, B = f.source, g.source
    arrow = {}
    for m in cat.morphs:
        a, b = cat.src[m], cat.tgt[m]
        arrow[m] = locals_[b].induce(
            A.arrow[m] @ locals_[a].leg1, B.arrow[m] @ locals_[a].leg2
        )
    obj = Diagram(cat, field, at, arrow)
    leg1 = NatTrans(obj, A, {o: locals_[o].leg1 for o in cat.objects})
    leg2 = NatTrans(obj, B, {o: locals_[o].leg2 for o in cat.objects})
    return DiagPullback(obj, leg1, leg2, locals_)


@dataclass(frozen=True)
class DiagPushout:
    obj: Diagram
    leg1: NatTrans
    leg2: NatTrans
    _locals: dict[str, PushoutResult]

    def induce(self, u: NatTrans, v: NatTrans) -> NatTrans:
        if u.target != v.target:
            raise BadShape("induced transformation needs a common target")
        comps = {o: self._locals[o].induce(u.comps[o], v.comps[o]) for o in self._locals}
        return NatTrans(self.obj, u.target, comps)


def diagram_pushout(f: NatTrans, g: NatTrans) -> DiagPushout:
    """Objectwise pushout of f along g, with induced functorial action."""
    if f.source != g.source:
        raise BadShape("pushout needs a common source")
    cat, field = f.cat, f.field
    locals_ = {o: pushout(f.comps[o], g.comps[o]) for o in cat.objects}
    at = {o: locals_[o].obj for o in cat.objects}
    A, B = f.target, g.target
    arrow = {}
    for m in cat.morphs:
        a, b = cat.src[m], cat.tgt[m]
        arrow[m] = locals_[a].induce(
            locals_[b].leg1 @ A.arrow[m], locals_[b].leg2 @ B.arrow[m]
        )
    obj = Diagram(cat, field, at, arrow)
    leg1 = NatTrans(A, obj, {o: locals_[o].leg1 for o in cat.objects})
    leg2 = NatTrans(B, obj, {o: locals_[o].leg2 for o in cat.objects})
    return DiagPushout(obj, leg1, leg2, locals_)


# -- set-valued functors, copowers, powers ----------------------------------


@dataclass(frozen=True)
class SetDiagram:
    """A functor into finite sets, covariant or contravariant, as tables.

    For a covariant functor a morphism m: a -> b acts elems[a] -> elems[b];
    for a contravariant one it acts elems[b] -> elems[a]. action is keyed by
    (morphism, element acted on).
    """

    cat: FinCat
    variance: str
    elems: dict[str, tuple[str, ...]]
    action: dict[tuple[str, str], str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elems", {o: tuple(v) for o, v in self.elems.items()})
        object.__setattr__(self, "action", dict(self.action))
        if self.variance not in ("co", "contra"):
            raise ValidationFailure(f"unknown variance: {self.variance!r}")
        if set(self.elems) != set(self.cat.objects):
            raise NotFunctorial("element sets do not cover the objects exactly")
        for o, v in self.elems.items():
            if len(set(v)) != len(v):
                raise NotFunctorial(f"duplicate element at {o}")
        expected = set()
        for m in self.cat.morphs:
            dom, cod = self._ends(m)
            for x in self.elems[dom]:
                expected.add((m, x))
        if set(self.action) != expected:
            raise NotFunctorial("action table does not cover the morphisms exactly")
        for (m, x), y in self.action.items():
            if y not in self.elems[self._ends(m)[1]]:
                raise NotFunctorial(f"action of {m} on {x} leaves the element set")
        for o in self.cat.objects:
            i = self.cat.ids[o]
            for x in self.elems[o]:
                if self.action[(i, x)] != x:
                    raise NotFunctorial(f"identity at {o} moves {x}")
        for (g, f), c in self.cat.table.items():
            if self.variance == "co":
                for x in self.elems[self.cat.src[f]]:
                    if self.action[(c, x)] != self.action[(g, self.action[(f, x)])]:
                        raise NotFunctorial(f"action disagrees on composite ({g}, {f})")
            else:
                for x in self.elems[self.cat.tgt[g]]:
                    if self.action[(c, x)] != self.action[(f, self.action[(g, x)])]:
                        raise NotFunctorial(f"action disagrees on composite ({g}, {f})")

    def _ends(self, m: str) -> tuple[str, str]:
        """(object whose elements m acts on, object where the result lives)."""
        if self.variance == "co":
            return self.cat.src[m], self.cat.tgt[m]
        return self.cat.tgt[m], self.cat.src[m]


def hom_set_diagram(cat: FinCat, d: str, variance: str) -> SetDiagram:
    """The hom functor out of d (covariant) or into d (contravariant)."""
    elems = {}
    action = {}
    if variance == "co":
        for e in cat.objects:
            elems[e] = cat.hom(d, e)
        for m in cat.morphs:
            for h in cat.hom(d, cat.src[m]):
                action[(m, h)] = cat.table[(m, h)]
    else:
        for e in cat.objects:
            elems[e] = cat.hom(e, d)
        for m in cat.morphs:
            for h in cat.hom(cat.tgt[m], d):
                action[(m, h)] = cat.table[(h, m)]
    return SetDiagram(cat, variance, elems, action)


def sub_set_diagram(S: SetDiagram, keep: dict[str, tuple[str, ...]]) -> SetDiagram:
    """Restriction of S to the kept elements; rejects non-closed choices."""
    kept = {o: tuple(x for x in S.elems[o] if x in set(keep.get(o, ()))) for o in S.cat.objects}
    action = {}
    for (m, x), y in S.action.items():
        dom, cod = S._ends(m)
        if x in kept[dom]:
            if y not in kept[cod]:
                raise NotFunctorial(f"kept elements are not closed under {m} at {x}")
            action[(m, x)] = y
    return SetDiagram(S.cat, S.variance, kept, action)


def _indexed_block_map(
    field: FieldSpec,
    src_blocks: int,
    tgt_blocks: int,
    pairs: list[tuple[int, int]],
    cell_rows: int,
    cell_cols: int,
    cells: list[Matrix] | None = None,
) -> Matrix:
    """Block matrix whose (i, j) cell for each listed pair is the identity,
    or the supplied cell; all other cells are zero."""
    out = Matrix.zeros(field, tgt_blocks * cell_rows, src_blocks * cell_cols)
    arr = np.array(out.data)
    for k, (i, j) in enumerate(pairs):
        cell = cells[k] if cells is not None else Matrix.identity(field, cell_rows)
        if cell.data.size:
            arr[i * cell_rows : (i + 1) * cell_rows, j * cell_cols : (j + 1) * cell_cols] = np.array(cell.data)
    return Matrix(field, arr)


def copower(X: ChainComplex, S: SetDiagram) -> Diagram:
    """Coproduct of copies of X indexed by a covariant set functor."""
    if S.variance != "co":
        raise BadShape("copower needs a covariant set functor")
    cat, field = S.cat, X.field
    at = {o: biproduct(field, [X] * len(S.elems[o])).obj for o in cat.objects}
    arrow = {}
    for m in cat.morphs:
        a, b = cat.src[m], cat.tgt[m]
        idx_b = {x: i for i, x in enumerate(S.elems[b])}
        pairs = [(idx_b[S.action[(m, x)]], j) for j, x in enumerate(S.elems[a])]
        comps = [
            _indexed_block_map(field, len(S.elems[a]), len(S.elems[b]), pairs, X.dim(n), X.dim(n))
            for n in range(X.top + 1)
        ]
        arrow[m] = ChainMap(at[a], at[b], comps)
    return Diagram(cat, field, at, arrow)


def power(X: ChainComplex, S: SetDiagram) -> Diagram:
    """Product of copies of X indexed by a contravariant set functor."""
    if S.variance != "contra":
        raise BadShape("power needs a contravariant set functor")
    cat, field = S.cat, X.field
    at = {o: biproduct(field, [X] * len(S.elems[o])).obj for o in cat.objects}
    arrow = {}
    for m in cat.morphs:
        a, b = cat.src[m], cat.tgt[m]
        idx_a = {x: i for i, x in enumerate(S.elems[a])}
        pairs = [(i, idx_a[S.action[(m, y)]]) for i, y in enumerate(S.elems[b])]
        comps = [
            _indexed_block_map(field, len(S.elems[a]), len(S.elems[b]), pairs, X.dim(n), X.dim(n))
            for n in range(X.top + 1)
        ]
        arrow[m] = ChainMap(at[a], at[b], comps)
    return Diagram(cat, field, at, arrow)


def copower_map(f: ChainMap, S: SetDiagram) -> NatTrans:
    src = copower(f.source, S)
    tgt = copower(f.target, S)
    field = f.field
    comps = {}
    for o in S.cat.objects:
        k = len(S.elems[o])
        w = max(src.at[o].top, tgt.at[o].top) + 1
        comps[o] = ChainMap(src.at[o], tgt.at[o], [block_diag(field, [f.comp(n)] * k) for n in range(w)])
    return NatTrans(src, tgt, comps)


def power_map(p: ChainMap, S: SetDiagram) -> NatTrans:
    src = power(p.source, S)
    tgt = power(p.target, S)
    field = p.field
    comps = {}
    for o in S.cat.objects:
        k = len(S.elems[o])
        w = max(src.at[o].top, tgt.at[o].top) + 1
        comps[o] = ChainMap(src.at[o], tgt.at[o], [block_diag(field, [p.comp(n)] * k) for n in range(w)])
    return NatTrans(src, tgt, comps)


def copower_inclusion(X: ChainComplex, S_sub: SetDiagram, S_full: SetDiagram) -> NatTrans:
    """Block inclusion induced by a sub set-functor, covariantly."""
    src = copower(X, S_sub)
    tgt = copower(X, S_full)
    field = X.field
    comps = {}
    for o in S_full.cat.objects:
        idx_full = {x: i for i, x in enumerate(S_full.elems[o])}
        pairs = [(idx_full[x], j) for j, x in enumerate(S_sub.elems[o])]
        comps[o] = ChainMap(
            src.at[o],
            tgt.at[o],
            [
                _indexed_block_map(field, len(S_sub.elems[o]), len(S_full.elems[o]), pairs, X.dim(n), X.dim(n))
                for n in range(X.top + 1)
            ],
        )
    return NatTrans(src, tgt, comps)


def power_restriction(X: ChainComplex, S_full: SetDiagram, S_sub: SetDiagram) -> NatTrans:
    """Block projection induced by a sub set-functor, contravariantly."""
    src = power(X, S_full)
    tgt = power(X, S_sub)
    field = X.field
    comps = {}
    for o in S_full.cat.objects:
        idx_full = {x: i for i, x in enumerate(S_full.elems[o])}
        pairs = [(i, idx_full[x]) for i, x in enumerate(S_sub.elems[o])]
        comps[o] = ChainMap(
            src.at[o],
            tgt.at[o],
            [
                _indexed_block_map(field, len(S_full.elems[o]), len(S_sub.elems[o]), pairs, X.dim(n), X.dim(n))
                for n in range(X.top + 1)
            ],
        )
    return NatTrans(src, tgt, comps)


def tensor_gen(f: ChainMap, d: str, cat: FinCat) -> NatTrans:
    """f spread over the covariant hom functor out of d."""
    return copower_map(f, hom_set_diagram(cat, d, "co"))


def pitchfork_gen(p: ChainMap, d: str, cat: FinCat) -> NatTrans:
    """p spread over the contravariant hom functor into d."""
    return power_map(p, hom_set_diagram(cat, d, "contra"))


# -- discrete Kan extensions and their transposes ---------------------------


def _lan_index(cat: FinCat, d: str) -> list[tuple[str, str]]:
    return [(dp, f) for dp in cat.objects for f in cat.hom(dp, d)]


def _ran_index(cat: FinCat, d: str) -> list[tuple[str, str]]:
    return [(dp, f) for dp in cat.objects for f in cat.hom(d, dp)]


def _family_blocks(
    field: FieldSpec, family: dict[str, ChainComplex], index: list[tuple[str, str]]
) -> ChainComplex:
    return biproduct(field, [family[dp] for dp, _ in index]).obj


def _block_cells(
    field: FieldSpec,
    row_index: list[tuple[str, str]],
    col_index: list[tuple[str, str]],
    family: dict[str, ChainComplex],
    pairs: list[tuple[int, int]],
    n: int,
) -> Matrix:
    row_sizes = [family[dp].dim(n) for dp, _ in row_index]
    col_sizes = [family[dp].dim(n) for dp, _ in col_index]
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    out = Matrix.zeros(field, roff[-1], coff[-1])
    arr = np.array(out.data)
    for i, j in pairs:
        k = row_sizes[i]
        if k and k == col_sizes[j]:
            arr[roff[i] : roff[i] + k, coff[j] : coff[j] + k] = np.array(
                Matrix.identity(field, k).data
            )
    return Matrix(field, arr)


def lan_discrete(family: dict[str, ChainComplex], cat: FinCat) -> Diagram:
    """Left Kan extension of an objectwise family along the object inclusion:
    at d, one summand of family[d'] for every morphism d' -> d."""
    field = next(iter(family.values())).field if family else None
    if set(family) != set(cat.objects):
        raise BadShape("family does not cover the objects exactly")
    if field is None:
        raise BadShape("empty category needs an explicit field; use zero_diagram")
    at = {d: _family_blocks(field, family, _lan_index(cat, d)) for d in cat.objects}
    arrow = {}
    for m in cat.morphs:
        a, b = cat.src[m], cat.tgt[m]
        src_idx = _lan_index(cat, a)
        tgt_idx = _lan_index(cat, b)
        pos = {key: i for i, key in enumerate(tgt_idx)}
        pairs = [(pos[(dp, cat.table[(m, f)])], j) for j, (dp, f) in enumerate(src_idx)]
        w = max(at[a].top, at[b].top) + 1
        comps = [_block_cells(field, tgt_idx, src_idx, family, pairs, n) for n in range(w)]
        arrow[m] = ChainMap(at[a], at[b], comps)
    return Diagram(cat, field, at, arrow)


def ran_discrete(family: dict[str, ChainComplex], cat: FinCat) -> Diagram:
    """Right Kan extension of an objectwise family along the object inclusion:
    at d, one factor of family[d'] for every morphism d -> d'."""
    field = next(iter(family.values())).field if family else None
    if set(family) != set(cat.objects):
        raise BadShape("family does not cover the objects exactly")
    if field is None:
        raise BadShape("empty category needs an explicit field; use zero_diagram")
    at = {d: _family_blocks(field, family, _ran_index(cat, d)) for d in cat.objects}
    arrow = {}
    for m in cat.morphs:
        a, b = cat.src[m], cat.tgt[m]
        src_idx = _ran_index(cat, a)
        tgt_idx = _ran_index(cat, b)
        pos = {key: j for j, key in enumerate(src_idx)}
        pairs = [(i, pos[(dp, cat.table[(h, m)])]) for i, (dp, h) in enumerate(tgt_idx)]
        w = max(at[a].top, at[b].top) + 1
        comps = [_block_cells(field, tgt_idx, src_idx, family, pairs, n) for n in range(w)]
        arrow[m] = ChainMap(at[a], at[b], comps)
    return Diagram(cat, field, at, arrow)


def unit_ran(Phi: Diagram) -> NatTrans:
    """The canonical map from a diagram into the right Kan extension of its
    own objectwise restriction; the factor at (d', f: d -> d') is Phi(f)."""
    cat, field = Phi.cat, Phi.field
    family = {o: Phi.at[o] for o in cat.objects}
    ran = ran_discrete(family, cat)
    comps = {}
    for d in cat.objects:
        idx = _ran_index(cat, d)
        w = max(Phi.at[d].top, ran.at[d].top) + 1
        comps[d] = ChainMap(
            Phi.at[d],
            ran.at[d],
            [vstack([Phi.arrow[f].comp(n) for _, f in idx]) if idx else Matrix.zeros(field, 0, Phi.at[d].dim(n)) for n in range(w)],
        )
    return NatTrans(Phi, ran, comps)


def ran_transpose_out(tau: NatTrans, family: dict[str, ChainComplex]) -> dict[str, ChainMap]:
    """From a transformation into ran(family), the objectwise maps it
    corresponds to: project at the identity factor."""
    cat = tau.cat
    if tau.target != ran_discrete(family, cat):
        raise BadShape("transformation does not land in the stated extension")
    out = {}
    for d in cat.objects:
        idx = _ran_index(cat, d)
        i = idx.index((d, cat.ids[d]))
        comps = []
        for n in range(tau.comps[d].target.top + 1):
            off = sum(family[dp].dim(n) for dp, _ in idx[:i])
            comps.append(tau.comps[d].comp(n).row_slice(off, off + family[d].dim(n)))
        out[d] = ChainMap(tau.source.at[d], family[d], comps)
    return out


def ran_transpose_in(Phi: Diagram, family: dict[str, ChainComplex], sigma: dict[str, ChainMap]) -> NatTrans:
    """From objectwise maps Phi(d) -> family[d], the transformation into
    ran(family) whose factor at (d', f) is sigma[d'] . Phi(f)."""
    cat, field = Phi.cat, Phi.field
    ran = ran_discrete(family, cat)
    comps = {}
    for d in cat.objects:
        idx = _ran_index(cat, d)
        w = max(Phi.at[d].top, ran.at[d].top) + 1
        per_deg = []
        for n in range(w):
            blocks = [(sigma[dp] @ Phi.arrow[f]).comp(n) for dp, f in idx]
            per_deg.append(vstack(blocks) if blocks else Matrix.zeros(field, 0, Phi.at[d].dim(n)))
        comps[d] = ChainMap(Phi.at[d], ran.at[d], per_deg)
    return NatTrans(Phi, ran, comps)


def lan_transpose_out(tau: NatTrans, family: dict[str, ChainComplex]) -> dict[str, ChainMap]:
    """From a transformation out of lan(family), the objectwise maps it
    corresponds to: restrict to the identity summand."""
    cat = tau.cat
    if tau.source != lan_discrete(family, cat):
        raise BadShape("transformation does not start at the stated extension")
    out = {}
    for d in cat.objects:
        idx = _lan_index(cat, d)
        i = idx.index((d, cat.ids[d]))
        comps = []
        for n in range(tau.comps[d].source.top + 1):
            off = sum(family[dp].dim(n) for dp, _ in idx[:i])
            comps.append(tau.comps[d].comp(n).col_slice(off, off + family[d].dim(n)))
        out[d] = ChainMap(family[d], tau.target.at[d], comps)
    return out


def lan_transpose_in(family: dict[str, ChainComplex], Phi: Diagram, sigma: dict[str, ChainMap]) -> NatTrans:
    """From objectwise maps family[d] -> Phi(d), the transformation out of
    lan(family) whose summand at (d', f) is Phi(f) . sigma[d']."""
    cat, field = Phi.cat, Phi.field
    lan = lan_discrete(family, cat)
    comps = {}
    for d in cat.objects:
        idx = _lan_index(cat, d)
        w = max(lan.at[d].top, Phi.at[d].top) + 1
        per_deg = []
        for n in range(w):
            blocks = [(Phi.arrow[f] @ sigma[dp]).comp(n) for dp, f in idx]
            per_deg.append(hstack(blocks) if blocks else Matrix.zeros(field, Phi.at[d].dim(n), 0))
        comps[d] = ChainMap(lan.at[d], Phi.at[d], per_deg)
    return NatTrans(lan, Phi, comps)


# -- objectwise classification ----------------------------------------------


@dataclass(frozen=True)
class ObjectwiseClassification:
    per_object: dict[str, Classification]

    @property
    def cofibration(self) -> bool:
        return all(c.cofibration for c in self.per_object.values())

    @property
    def fibration(self) -> bool:
        return all(c.fibration for c in self.per_object.values())

    @property
    def weak_equivalence(self) -> bool:
        return all(c.weak_equivalence for c in self.per_object.values())

    @property
    def acyclic_cofibration(self) -> bool:
        return self.cofibration and self.weak_equivalence

    @property
    def acyclic_fibration(self) -> bool:
        return self.fibration and self.weak_equivalence

    def to_dict(self) -> dict:
        return {
            "per_object": {o: c.to_dict() for o, c in self.per_object.items()},
            "cofibration": self.cofibration,
            "fibration": self.fibration,
            "weak_equivalence": self.weak_equivalence,
        }


def objectwise_classify(tau: NatTrans) -> ObjectwiseClassification:
    return ObjectwiseClassification({o: classify(tau.comps[o]) for o in tau.cat.objects})


# -- joint lifting ----------------------------------------------------------


@dataclass(frozen=True)
class NatSquare:
    left: NatTrans
    right: NatTrans
    top: NatTrans
    bottom: NatTrans


def make_nat_square(left: NatTrans, right: NatTrans, top: NatTrans, bottom: NatTrans) -> NatSquare:
    if top.source != left.source:
        raise BadShape("top and left must share their source")
    if top.target != right.source:
        raise BadShape("top must land in the source of right")
    if bottom.source != left.target:
        raise BadShape("bottom must start at the target of left")
    if bottom.target != right.target:
        raise BadShape("bottom and right must share their target")
    if (right @ top) != (bottom @ left):
        raise NotACommutingSquare("the square does not commute")
    return NatSquare(left, right, top, bottom)


def solve_lift_nat(square: NatSquare) -> NatTrans | None:
    """A natural diagonal, or None when the joint system is infeasible.

    Unknowns are the entries of every component c_{d,n}, stacked column-major
    object by object and degree by degree. Equations: the two triangle
    conditions and the chain-map condition per object, plus naturality
    against every non-identity morphism.
    """
    B = square.left.target
    E = square.right.source
    cat, field = B.cat, B.field

    widths = {d: max(B.at[d].top, E.at[d].top) + 1 for d in cat.objects}
    offsets: dict[tuple[str, int], int] = {}
    total = 0
    for d in cat.objects:
        for n in range(widths[d]):
            offsets[(d, n)] = total
            total += E.at[d].dim(n) * B.at[d].dim(n)

    rows: list[np.ndarray] = []
    rhs_rows: list[np.ndarray] = []

    def emit(blocks: dict[tuple[str, int], np.ndarray], rhs: Matrix, nrows: int) -> None:
        if nrows == 0:
            return
        row = np.array(Matrix.zeros(field, nrows, total).data)
        for key, blk in blocks.items():
            if blk.size:
                off = offsets[key]
                row[:, off : off + blk.shape[1]] = blk
        rows.append(row)
        rhs_rows.append(np.array(rhs.data).reshape((nrows, 1), order="F"))

    def seg_size(d: str, n: int) -> int:
        if n >= widths[d]:
            return 0
        return E.at[d].dim(n) * B.at[d].dim(n)

    for d in cat.objects:
        Bd, Ed = B.at[d], E.at[d]
        f = square.left.comps[d]
        g = square.right.comps[d]
        a = square.top.comps[d]
        b = square.bottom.comps[d]
        Ad = square.left.source.at[d]
        Yd = square.right.target.at[d]
        for n in range(widths[d]):
            xd, bd = Ed.dim(n), Bd.dim(n)
            ad, yd = Ad.dim(n), Yd.dim(n)
            if xd * ad:
                blk = kron(field, np.array(f.comp(n).data.T), np_identity(field, xd))
                emit({(d, n): blk}, a.comp(n), xd * ad)
            if yd * bd:
                blk = kron(field, np_identity(field, bd), np.array(g.comp(n).data))
                emit({(d, n): blk}, b.comp(n), yd * bd)
            if n >= 1:
                xprev = Ed.dim(n - 1)
                if xprev * bd:
                    blocks: dict[tuple[str, int], np.ndarray] = {}
                    blocks[(d, n)] = kron(field, np_identity(field, bd), np.array(Ed.d(n).data))
                    if seg_size(d, n - 1):
                        neg = -kron(field, np.array(Bd.d(n).data.T), np_identity(field, xprev))
                        if field.kind == "prime":
                            neg %= field.p
                        blocks[(d, n - 1)] = neg
                    emit(blocks, Matrix.zeros(field, xprev, bd), xprev * bd)

    for m in cat.nonidentity():
        d, e = cat.src[m], cat.tgt[m]
        Bm = B.arrow[m]
        Em = E.arrow[m]
        for n in range(max(widths[d], widths[e])):
            nrows = E.at[e].dim(n) * B.at[d].dim(n)
            if nrows == 0:
                continue
            blocks = {}
            if seg_size(d, n):
                blocks[(d, n)] = kron(field, np_identity(field, B.at[d].dim(n)), np.array(Em.comp(n).data))
            if seg_size(e, n):
                neg = -kron(field, np.array(Bm.comp(n).data.T), np_identity(field, E.at[e].dim(n)))
                if field.kind == "prime":
                    neg %= field.p
                # endomorphisms put both naturality terms in the same segment
                if (e, n) in blocks:
                    neg = blocks[(e, n)] + neg
                    if field.kind == "prime":
                        neg %= field.p
                blocks[(e, n)] = neg
            emit(blocks, Matrix.zeros(field, E.at[e].dim(n), B.at[d].dim(n)), nrows)

    if not rows:
        sol = Matrix.zeros(field, total, 1)
    else:
        Amat = Matrix(field, np.vstack(rows)) if len(rows) > 1 else Matrix(field, rows[0])
        rhs = Matrix(field, np.vstack(rhs_rows)) if len(rhs_rows) > 1 else Matrix(field, rhs_rows[0])
        sol = try_solve(Amat, rhs)
        if sol is None:
            return None

    comps = {}
    for d in cat.objects:
        per_deg = []
        for n in range(widths[d]):
            xd, bd = E.at[d].dim(n), B.at[d].dim(n)
            off = offsets[(d, n)]
            seg = np.array(sol.data[off : off + xd * bd, 0]).reshape((xd, bd), order="F")
            per_deg.append(Matrix(field, seg))
        comps[d] = ChainMap(B.at[d], E.at[d], per_deg)
    c = NatTrans(B, E, comps)
    if (c @ square.left) != square.top or (square.right @ c) != square.bottom:
        raise InternalCheckFailed("solver produced a non-lift")
    return c


# -- diagram-level certificates ---------------------------------------------


@dataclass(frozen=True)
class DiagGenRef:
    """Named diagram-level generator: a two-step or sphere generator spread
    over the contravariant hom functor into at_obj, or a custom
    transformation."""

    family: str
    degree: int | None = None
    at_obj: str | None = None
    custom: NatTrans | None = None

    def __post_init__(self) -> None:
        if self.family in ("p", "q"):
            GenRef(self.family, self.degree)
            if self.at_obj is None:
                raise ValidationFailure(f"{self.family}-generator needs an object")
        elif self.family == "custom":
            if self.custom is None:
                raise ValidationFailure("custom generator without a transformation")
        else:
            raise ValidationFailure(f"unknown generator family: {self.family!r}")


def diag_gen_nat(ref: DiagGenRef, cat: FinCat, field: FieldSpec) -> NatTrans:
    """The transformation a diagram-level generator reference names."""
    if ref.family == "custom":
        if ref.custom.cat != cat:
            raise ValidationFailure("custom generator lives over a different category")
        return ref.custom
    if ref.at_obj not in cat.objects:
        raise ValidationFailure(f"generator object {ref.at_obj!r} is not in the category")
    return pitchfork_gen(gen_chain_map(GenRef(ref.family, ref.degree), field), ref.at_obj, cat)


def diag_cogen_nat(ref: DiagGenRef, cat: FinCat, field: FieldSpec) -> NatTrans:
    """Covariant counterpart used by cell certificates: the generator spread
    over the hom functor out of at_obj."""
    if ref.family == "custom":
        if ref.custom.cat != cat:
            raise ValidationFailure("custom generator lives over a different category")
        return ref.custom
    if ref.at_obj not in cat.objects:
        raise ValidationFailure(f"generator object {ref.at_obj!r} is not in the category")
    return tensor_gen(gen_chain_map(GenRef(ref.family, ref.degree), field), ref.at_obj, cat)


@dataclass(frozen=True)
class DiagTowerStage:
    gens: tuple[DiagGenRef, ...]
    attaching: NatTrans
    obj: Diagram
    leg_down: NatTrans
    leg_gen: NatTrans


@dataclass(frozen=True)
class DiagPostnikovCert:
    base: Diagram
    stages: tuple[DiagTowerStage, ...]
    claimed_composite: NatTrans


@dataclass(frozen=True)
class DiagCellStage:
    gens: tuple[DiagGenRef, ...]
    attaching: NatTrans
    obj: Diagram
    leg_up: NatTrans
    leg_gen: NatTrans


@dataclass(frozen=True)
class DiagCellCert:
    base: Diagram
    stages: tuple[DiagCellStage, ...]
    claimed_composite: NatTrans


def _fail(stage: int | None, reason: str) -> VerifyResult:
    return VerifyResult(False, stage, reason)


def verify_diag_postnikov_cert(cert: DiagPostnikovCert) -> VerifyResult:
    cat, field = cert.base.cat, cert.base.field
    current = cert.base
    for i, st in enumerate(cert.stages):
        try:
            gnats = [diag_gen_nat(g, cat, field) for g in st.gens]
            G, gsrc, gtgt = diagram_biproduct_nat(cat, field, gnats)
        except ValidationFailure as e:
            return _fail(i, f"bad generator: {e}")
        if st.attaching.source != current:
            return _fail(i, "attaching map does not start at the current diagram")
        if st.attaching.target != gtgt.obj:
            return _fail(i, "attaching map does not land in the generator targets")
        if st.leg_down.source != st.obj or st.leg_down.target != current:
            return _fail(i, "leg_down has wrong ends")
        if st.leg_gen.source != st.obj or st.leg_gen.target != gsrc.obj:
            return _fail(i, "leg_gen has wrong ends")
        if (st.attaching @ st.leg_down) != (G @ st.leg_gen):
            return _fail(i, "stage square does not commute")
        for o in cat.objects:
            width = max(st.obj.at[o].top, current.at[o].top, gsrc.obj.at[o].top) + 1
            for n in range(width):
                stacked = vstack([st.leg_down.comps[o].comp(n), st.leg_gen.comps[o].comp(n)])
                if rank(stacked) != st.obj.at[o].dim(n):
                    return _fail(i, f"legs are not jointly injective at {o} in degree {n}")
                constraint = hstack([st.attaching.comps[o].comp(n), -(G.comps[o].comp(n))])
                expected = current.at[o].dim(n) + gsrc.obj.at[o].dim(n) - rank(constraint)
                if st.obj.at[o].dim(n) != expected:
                    return _fail(i, f"stage object has wrong dimension at {o} in degree {n}")
        current = st.obj
    composite = identity_nat(cert.base)
    for st in cert.stages:
        composite = composite @ st.leg_down
    if composite != cert.claimed_composite:
        return _fail(None, "claimed composite does not match the tower legs")
    return VerifyResult(True)


def verify_diag_cell_cert(cert: DiagCellCert) -> VerifyResult:
    cat, field = cert.base.cat, cert.base.field
    current = cert.base
    for i, st in enumerate(cert.stages):
        try:
            gnats = [diag_cogen_nat(g, cat, field) for g in st.gens]
            G, gsrc, gtgt = diagram_biproduct_nat(cat, field, gnats)
        except ValidationFailure as e:
            return _fail(i, f"bad generator: {e}")
        if st.attaching.source != gsrc.obj:
            return _fail(i, "attaching map does not start at the generator sources")
        if st.attaching.target != current:
            return _fail(i, "attaching map does not land in the current diagram")
        if st.leg_up.source != current or st.leg_up.target != st.obj:
            return _fail(i, "leg_up has wrong ends")
        if st.leg_gen.source != gtgt.obj or st.leg_gen.target != st.obj:
            return _fail(i, "leg_gen has wrong ends")
        if (st.leg_up @ st.attaching) != (st.leg_gen @ G):
            return _fail(i, "stage square does not commute")
        for o in cat.objects:
            width = max(st.obj.at[o].top, current.at[o].top, gtgt.obj.at[o].top) + 1
            for n in range(width):
                stacked = hstack([st.leg_up.comps[o].comp(n), st.leg_gen.comps[o].comp(n)])
                if rank(stacked) != st.obj.at[o].dim(n):
                    return _fail(i, f"legs are not jointly surjective at {o} in degree {n}")
                relation = vstack([st.attaching.comps[o].comp(n), -(G.comps[o].comp(n))])
                expected = current.at[o].dim(n) + gtgt.obj.at[o].dim(n) - rank(relation)
                if st.obj.at[o].dim(n) != expected:
                    return _fail(i, f"stage object has wrong dimension at {o} in degree {n}")
        current = st.obj
    composite = identity_nat(cert.base)
    for st in cert.stages:
        composite = st.leg_up @ composite
    if composite != cert.claimed_composite:
        return _fail(None, "claimed composite does not match the attachment legs")
    return VerifyResult(True)


# -- objectwise-mono factorization ------------------------------------------


@dataclass(frozen=True)
class DiagFactorResult:
    left: NatTrans
    cert: DiagPostnikovCert

    @property
    def right(self) -> NatTrans:
        return self.cert.claimed_composite


def _disc_functional(C: ChainComplex, n: int, i: int, field: FieldSpec) -> ChainMap:
    """The chain map C -> (two-step complex ending in degree n+1) whose
    degree-n component reads off basis coordinate i."""
    D = disc(field, n + 1)
    comps = [Matrix.zeros(field, 0, C.dim(k)) for k in range(n)]
    comps.append(Matrix.identity(field, C.dim(n)).row_slice(i, i + 1))
    comps.append(C.d(n + 1).row_slice(i, i + 1))
    return make_map(C, D, comps)


def factor_injective_z(tau: NatTrans) -> DiagFactorResult:
    """Factor tau as an objectwise degreewise monomorphism followed by a
    certified tower projection: the left map pairs tau with, for every
    object, every basis functional of the source transposed through the
    right Kan extension; the right map is the projection away from those
    factors, exhibited as one pullback stage of two-step power generators.
    """
    Phi, Psi = tau.source, tau.target
    cat, field = tau.cat, tau.field

    gens: list[DiagGenRef] = []
    readers: list[tuple[str, int, int]] = []
    for dp in cat.objects:
        C = Phi.at[dp]
        for n in range(C.top + 1):
            for i in range(C.dim(n)):
                gens.append(DiagGenRef("q", n + 1, dp))
                readers.append((dp, n, i))

    gnats = [diag_gen_nat(g, cat, field) for g in gens]
    G, gsrc, gtgt = diagram_biproduct_nat(cat, field, gnats)
    big = diagram_biproduct(cat, field, [gsrc.obj, Psi])
    obj = big.obj

    funcs = {key: _disc_functional(Phi.at[key[0]], key[1], key[2], field) for key in readers}
    comps = {}
    for d in cat.objects:
        entries = [
            funcs[key] @ Phi.arrow[f] for key in readers for f in cat.hom(d, key[0])
        ]
        w = max(Phi.at[d].top, obj.at[d].top) + 1
        per_deg = []
        for n in range(w):
            blocks = [e.comp(n) for e in entries]
            blocks.append(tau.comps[d].comp(n))
            per_deg.append(vstack(blocks))
        comps[d] = ChainMap(Phi.at[d], obj.at[d], per_deg)
    left = NatTrans(Phi, obj, comps)
    if not all(is_degreewise_mono(left.comps[d]) for d in cat.objects):
        raise InternalCheckFailed("left factor failed to be objectwise injective")

    leg_gen = big.projections[0]
    leg_down = big.projections[1]
    attaching = zero_nat(Psi, gtgt.obj)
    stage = DiagTowerStage(tuple(gens), attaching, obj, leg_down, leg_gen)
    cert = DiagPostnikovCert(Psi, (stage,), leg_down)
    if (cert.claimed_composite @ left) != tau:
        raise InternalCheckFailed("objectwise factorization lost the input map")
    return DiagFactorResult(left, cert)
