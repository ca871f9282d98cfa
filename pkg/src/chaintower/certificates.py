"""Checkable build certificates for towers of pullbacks and cell attachments.

A tower certificate explains a map as a finite sequence of stages, each a
pullback of a finite product of named generator maps; a cell certificate
dually uses pushouts of finite coproducts. Verification rebuilds nothing:
it only checks, stage by stage, shapes, commutativity, exactness of the
claimed (co)cartesian square, and finally that the legs compose to the
claimed map. The first defect is reported with its stage index.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (
    ChainComplex,
    ChainMap,
    biproduct_map,
    disc,
    identity_map,
    make_map,
    sphere,
    zero_complex,
)
from .errors import BadDegree, ValidationFailure
from .fields import FieldSpec
from .linalg import Matrix, hstack, rank, vstack


@dataclass(frozen=True)
class GenRef:
    """Named generator map.

    family "p": the collapse of a contractible two-step complex onto the
    sphere in its top degree (degree 0 means the inclusion of zero into the
    degree-0 sphere). family "q": the map from a contractible two-step
    complex to zero (degree >= 1). family "custom" embeds an explicit map.
    """

    family: str
    degree: int | None = None
    custom: ChainMap | None = None

    def __post_init__(self) -> None:
        if self.family == "p":
            if self.degree is None or self.degree < 0:
                raise BadDegree(f"p-generator needs degree >= 0, got {self.degree}")
        elif self.family == "q":
            if self.degree is None or self.degree < 1:
                raise BadDegree(f"q-generator needs degree >= 1, got {self.degree}")
        elif self.family == "custom":
            if self.custom is None:
                raise ValidationFailure("custom generator without a map")
        else:
            raise ValidationFailure(f"unknown generator family: {self.family!r}")


def gen_chain_map(ref: GenRef, field: FieldSpec) -> ChainMap:
    """The chain map a generator reference names."""
    if ref.family == "custom":
        return ref.custom
    n = ref.degree
    if ref.family == "p":
        if n == 0:
            return make_map(zero_complex(field), sphere(field, 0), [Matrix.zeros(field, 1, 0)])
        D = disc(field, n)
        S = sphere(field, n)
        comps = [Matrix.zeros(field, S.dim(k), D.dim(k)) for k in range(n)]
        comps.append(Matrix.identity(field, 1))
        return make_map(D, S, comps)
    # family "q"
    D = disc(field, n)
    return make_map(D, zero_complex(field), [Matrix.zeros(field, 0, D.dim(k)) for k in range(n + 1)])


@dataclass(frozen=True)
class TowerStage:
    """One pullback stage: obj is a pullback of attaching against the
    product of the generators; leg_down continues the tower, leg_gen maps to
    the product of generator sources."""

    gens: tuple[GenRef, ...]
    attaching: ChainMap
    obj: ChainComplex
    leg_down: ChainMap
    leg_gen: ChainMap


@dataclass(frozen=True)
class PostnikovCert:
    base: ChainComplex
    stages: tuple[TowerStage, ...]
    claimed_composite: ChainMap


@dataclass(frozen=True)
class CellStage:
    """One pushout stage: obj is a pushout of attaching (defined on the
    coproduct of generator sources) against the coproduct of the generators;
    leg_up continues the sequence, leg_gen comes from the generator targets."""

    gens: tuple[GenRef, ...]
    attaching: ChainMap
    obj: ChainComplex
    leg_up: ChainMap
    leg_gen: ChainMap


@dataclass(frozen=True)
class CellCert:
    base: ChainComplex
    stages: tuple[CellStage, ...]
    claimed_composite: ChainMap


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    stage: int | None = None
    reason: str | None = None

    def to_dict(self) -> dict:
        return {"verified": self.ok, "stage": self.stage, "reason": self.reason}


def _fail(stage: int | None, reason: str) -> VerifyResult:
    return VerifyResult(False, stage, reason)


def verify_postnikov_cert(cert: PostnikovCert) -> VerifyResult:
    field = cert.base.field
    current = cert.base
    for i, st in enumerate(cert.stages):
        try:
            gmaps = [gen_chain_map(g, field) for g in st.gens]
            G, gsrc, gtgt = biproduct_map(field, gmaps)
        except ValidationFailure as e:
            return _fail(i, f"bad generator: {e}")
        if st.attaching.source != current:
            return _fail(i, "attaching map does not start at the current object")
        if st.attaching.target != gtgt.obj:
            return _fail(i, "attaching map does not land in the generator targets")
        if st.leg_down.source != st.obj or st.leg_down.target != current:
            return _fail(i, "leg_down has wrong ends")
        if st.leg_gen.source != st.obj or st.leg_gen.target != gsrc.obj:
            return _fail(i, "leg_gen has wrong ends")
        if (st.attaching @ st.leg_down) != (G @ st.leg_gen):
            return _fail(i, "stage square does not commute")
        # exactness of the pullback square, degree by degree:
        # the legs jointly embed obj, and its dimension matches the kernel
        # of [attaching | -G], which the commuting square maps it into.
        width = max(st.obj.top, current.top, gsrc.obj.top) + 1
        for n in range(width):
            stacked = vstack([st.leg_down.comp(n), st.leg_gen.comp(n)])
            if rank(stacked) != st.obj.dim(n):
                return _fail(i, f"legs are not jointly injective in degree {n}")
            constraint = hstack([st.attaching.comp(n), -(G.comp(n))])
            expected = current.dim(n) + gsrc.obj.dim(n) - rank(constraint)
            if st.obj.dim(n) != expected:
                return _fail(i, f"stage object has wrong dimension in degree {n}")
        current = st.obj
    composite = identity_map(cert.base)
    for st in cert.stages:
        composite = composite @ st.leg_down
    if composite != cert.claimed_composite:
        return _fail(None, "claimed composite does not match the tower legs")
    return VerifyResult(True)


def verify_cell_cert(cert: CellCert) -> VerifyResult:
    field = cert.base.field
    current = cert.base
    for i, st in enumerate(cert.stages):
        try:
            gmaps = [gen_chain_map(g, field) for g in st.gens]
            G, gsrc, gtgt = biproduct_map(field, gmaps)
        except ValidationFailure as e:
            return _fail(i, f"bad generator: {e}")
        if st.attaching.source != gsrc.obj:
            return _fail(i, "attaching map does not start at the generator sources")
        if st.attaching.target != current:
            return _fail(i, "attaching map does not land in the current object")
        if st.leg_up.source != current or st.leg_up.target != st.obj:
            return _fail(i, "leg_up has wrong ends")
        if st.leg_gen.source != gtgt.obj or st.leg_gen.target != st.obj:
            return _fail(i, "leg_gen has wrong ends")
        if (st.leg_up @ st.attaching) != (st.leg_gen @ G):
            return _fail(i, "stage square does not commute")
        # exactness of the pushout square: the legs jointly cover obj, and
        # its dimension matches the quotient by the image of [attaching; -G].
        width = max(st.obj.top, current.top, gtgt.obj.top) + 1
        for n in range(width):
            stacked = hstack([st.leg_up.comp(n), st.leg_gen.comp(n)])
            if rank(stacked) != st.obj.dim(n):
                return _fail(i, f"legs are not jointly surjective in degree {n}")
            relation = vstack([st.attaching.comp(n), -(G.comp(n))])
            expected = current.dim(n) + gtgt.obj.dim(n) - rank(relation)
            if st.obj.dim(n) != expected:
                return _fail(i, f"stage object has wrong dimension in degree {n}")
        current = st.obj
    composite = identity_map(cert.base)
    for st in cert.stages:
        composite = st.leg_up @ composite
    if composite != cert.claimed_composite:
        return _fail(None, "claimed composite does not match the attachment legs")
    return VerifyResult(True)
