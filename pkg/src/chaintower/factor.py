"""Functorial factorizations through certified towers.

factor_acyclic_fibration writes any map f: X -> Y as a degreewise-injective
map followed by a surjective quasi-isomorphism; each tower stage freely
adjoins one contractible two-step summand per basis element of X in one
degree, so the right factor is a finite tower of pullbacks of products of
q-generators.

factor_fibration writes f as an injective quasi-isomorphism followed by a
map surjective in positive degrees, certified as a tower of pullbacks of
products of p-generators: make the map injective if needed (re-expressing
the q-tower in p-stages), attach spheres dual to the kernel of homology,
drop the unreached classes in degree 0 by passing to a kernel, then kill
the remaining excess homology degree by degree with new boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .certificates import GenRef, PostnikovCert, TowerStage, gen_chain_map
from .complexes import (
    Biproduct,
    ChainComplex,
    ChainMap,
    HomologyData,
    biproduct,
    biproduct_map,
    disc,
    homology,
    homology_map,
    identity_map,
    is_degreewise_mono,
    make_complex,
    make_map,
    sphere,
    zero_complex,
    zero_map,
)
from .errors import InternalCheckFailed
from .fields import FieldSpec
from .linalg import (
    Matrix,
    complement_basis,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    rank,
    solve,
    vstack,
)


@dataclass(frozen=True)
class FactorResult:
    """left followed by the certificate's composite equals the input map."""

    left: ChainMap
    cert: PostnikovCert
    side: str

    @property
    def right(self) -> ChainMap:
        return self.cert.claimed_composite


def _tower_composite(base: ChainComplex, stages) -> ChainMap:
    comp = identity_map(base)
    for st in stages:
        comp = comp @ st.leg_down
    return comp


def factor_acyclic_fibration(f: ChainMap) -> FactorResult:
    """f = (degreewise mono) ; (tower of q-generator pullbacks)."""
    X, Y = f.source, f.target
    field = f.field
    stages: list[TowerStage] = []
    current = Y
    block_degrees: list[tuple[int, int]] = []  # (degree n, multiplicity m)
    for n in range(X.top + 1):
        m = X.dim(n)
        if m == 0:
            continue
        gsrc = biproduct(field, [disc(field, n + 1)] * m)
        b = biproduct(field, [current, gsrc.obj])
        stages.append(
            TowerStage(
                gens=tuple(GenRef("q", n + 1) for _ in range(m)),
                attaching=zero_map(current, zero_complex(field)),
                obj=b.obj,
                leg_down=b.projections[0],
                leg_gen=b.projections[1],
            )
        )
        current = b.obj
        block_degrees.append((n, m))

    # left factor: f stacked over one functional-plus-boundary block per
    # stage; the identity rows in each stage's own degree make it injective.
    width = max(X.top, current.top) + 1
    comps = []
    for deg in range(width):
        parts = [f.comp(deg)]
        for (n, m) in block_degrees:
            if deg == n:
                parts.append(Matrix.identity(field, m))
            elif deg == n + 1:
                parts.append(X.d(n + 1))
            else:
                parts.append(Matrix.zeros(field, 0, X.dim(deg)))
        comps.append(vstack(parts))
    left = make_map(X, current, comps)

    cert = PostnikovCert(Y, tuple(stages), _tower_composite(Y, stages))
    if (cert.claimed_composite @ left) != f:
        raise InternalCheckFailed("factor_acyclic_fibration lost the input map")
    return FactorResult(left, cert, "z")


def _sphere_power(field: FieldSpec, n: int, k: int) -> ChainComplex:
    return biproduct(field, [sphere(field, n)] * k).obj


def _retagged_injectivity_stages(
    zcert: PostnikovCert,
) -> tuple[list[TowerStage], ChainComplex]:
    """Re-express each q-stage as two p-stages reaching the same tower top.

    Adjoining m contractible blocks D^t is, stage by stage, first a pullback
    of m copies of the degree-(t+1) collapse along zero (adjoining m spheres
    S^t) and then a pullback of m copies of the degree-t collapse along the
    projection onto those spheres (thickening each sphere into a block).
    """
    field = zcert.base.field
    current = zcert.base
    stages: list[TowerStage] = []
    for zst in zcert.stages:
        m = len(zst.gens)
        t = zst.gens[0].degree  # each adjoined block is D^t, t >= 1
        # stage A: adjoin m spheres S^t
        spheres_t = _sphere_power(field, t, m)
        a = biproduct(field, [current, spheres_t])
        gsrcA = biproduct(field, [disc(field, t + 1)] * m).obj
        leg_genA_comps = []
        for deg in range(max(a.obj.top, gsrcA.top) + 1):
            mat = Matrix.zeros(field, gsrcA.dim(deg), a.obj.dim(deg))
            if deg == t:
                arr = np.array(mat.data)
                off = a.obj.dim(t) - m  # the new sphere coordinates come last
                for k in range(m):
                    arr[k, off + k] = field.parse(1)
                mat = Matrix(field, arr)
            leg_genA_comps.append(mat)
        stages.append(
            TowerStage(
                gens=tuple(GenRef("p", t + 1) for _ in range(m)),
                attaching=zero_map(current, _sphere_power(field, t + 1, m)),
                obj=a.obj,
                leg_down=a.projections[0],
                leg_gen=make_map(a.obj, gsrcA, leg_genA_comps),
            )
        )
        # stage B: thicken the spheres into blocks
        gsrcB = biproduct(field, [disc(field, t)] * m).obj
        gtgtB = _sphere_power(field, t, m)
        b = biproduct(field, [current, gsrcB])
        att_comps = []
        for deg in range(max(a.obj.top, gtgtB.top) + 1):
            mat = Matrix.zeros(field, gtgtB.dim(deg), a.obj.dim(deg))
            if deg == t:
                arr = np.array(mat.data)
                off = a.obj.dim(t) - m
                for k in range(m):
                    arr[k, off + k] = field.parse(1)
                mat = Matrix(field, arr)
            att_comps.append(mat)
        collapse, _, _ = biproduct_map(
            field, [gen_chain_map(GenRef("p", t), field)] * m
        )
        down_comps = []
        for deg in range(max(b.obj.top, a.obj.top) + 1):
            down_comps.append(
                vstack(
                    [
                        hstack(
                            [
                                Matrix.identity(field, current.dim(deg)),
                                Matrix.zeros(field, current.dim(deg), gsrcB.dim(deg)),
                            ]
                        ),
                        hstack(
                            [
                                Matrix.zeros(field, spheres_t.dim(deg), current.dim(deg)),
                                collapse.comp(deg),
                            ]
                        ),
                    ]
                )
            )
        stages.append(
            TowerStage(
                gens=tuple(GenRef("p", t) for _ in range(m)),
                attaching=make_map(a.obj, gtgtB, att_comps),
                obj=b.obj,
                leg_down=make_map(b.obj, a.obj, down_comps),
                leg_gen=b.projections[1],
            )
        )
        current = b.obj
    return stages, current


def _subspace_class_readers(h: HomologyData, subspace: Matrix, n: int) -> Matrix:
    """Functionals reading off a chain's class coordinates along a subspace.

    subspace has independent columns in class coordinates at degree n; the
    rows returned compute those coordinates in the basis [subspace | chosen
    complement] and vanish on the complement, on boundaries, and on the
    chosen noncycles.
    """
    k = subspace.cols
    if k == 0:
        return Matrix.zeros(h.complex.field, 0, h.complex.dim(n))
    ext = hstack([subspace, complement_basis(subspace)])
    coords = inverse(ext).row_slice(0, k)
    return coords @ h.class_coords(n)


def factor_fibration(f: ChainMap) -> FactorResult:
    """f = (mono quasi-isomorphism) ; (tower of p-generator pullbacks)."""
    X, Y = f.source, f.target
    field = f.field
    hx = homology(X)

    def alpha_duals(g: ChainMap, htgt: HomologyData) -> list[Matrix]:
        hmaps = homology_map(g, hx, htgt)
        return [
            _subspace_class_readers(hx, kernel_basis(hmaps[n]), n)
            for n in range(X.top + 1)
        ]

    stages: list[TowerStage] = []
    current = Y
    carrier = f
    duals = alpha_duals(f, homology(Y))

    # phase 1: ensure the carrier-with-duals will be injective
    needs_mono = False
    for deg in range(X.top + 1):
        stacked = vstack([f.comp(deg), duals[deg]])
        if kernel_basis(stacked).cols:
            needs_mono = True
            break
    if needs_mono:
        zfac = factor_acyclic_fibration(f)
        retagged, top_obj = _retagged_injectivity_stages(zfac.cert)
        if top_obj != zfac.left.target:
            raise InternalCheckFailed("re-expressed tower reached a different object")
        stages.extend(retagged)
        current = top_obj
        carrier = zfac.left
        duals = alpha_duals(carrier, homology(current))

    # phase 2: attach spheres dual to the kernel of homology
    sphere_counts = [(n, duals[n].rows) for n in range(X.top + 1) if duals[n].rows]
    if sphere_counts:
        blocks = [(n, i) for n, k in sphere_counts for i in range(k)]
        bottom_inclusions = []
        for n, _ in blocks:
            D = disc(field, n + 1)
            S = sphere(field, n)
            comps = [Matrix.zeros(field, D.dim(t), S.dim(t)) for t in range(n)]
            comps.append(Matrix.identity(field, 1))
            bottom_inclusions.append(make_map(S, D, comps))
        incl, ksrc, gsrc = biproduct_map(field, bottom_inclusions)
        b = biproduct(field, [current, ksrc.obj])
        leg_gen_comps = [
            hstack(
                [
                    Matrix.zeros(field, gsrc.obj.dim(deg), current.dim(deg)),
                    incl.comp(deg),
                ]
            )
            for deg in range(max(b.obj.top, gsrc.obj.top) + 1)
        ]
        stages.append(
            TowerStage(
                gens=tuple(GenRef("p", n + 1) for n, _ in blocks),
                attaching=zero_map(
                    current, biproduct(field, [sphere(field, n + 1) for n, _ in blocks]).obj
                ),
                obj=b.obj,
                leg_down=b.projections[0],
                leg_gen=make_map(b.obj, gsrc.obj, leg_gen_comps),
            )
        )
        carrier_comps = []
        for deg in range(max(X.top, b.obj.top) + 1):
            parts = [carrier.comp(deg)]
            if deg <= X.top and duals[deg].rows:
                parts.append(duals[deg])
            carrier_comps.append(vstack(parts))
        current = b.obj
        carrier = make_map(X, current, carrier_comps)

    if not is_degreewise_mono(carrier):
        raise InternalCheckFailed("carrier failed to be injective")

    # phase 3: drop unreached degree-0 classes by passing to a kernel
    hw = homology(current)
    img0 = image_basis(homology_map(carrier, hx, hw)[0])
    b0 = hw.betti[0] - img0.cols
    if b0 > 0:
        readers = _unreached_class_readers(hw, img0, 0)
        gtgt = _sphere_power(field, 0, b0)
        g0 = make_map(
            current,
            gtgt,
            [readers]
            + [Matrix.zeros(field, 0, current.dim(t)) for t in range(1, current.top + 1)],
        )
        if not (g0 @ carrier).is_zero():
            raise InternalCheckFailed("degree-0 functionals see the image")
        K0 = kernel_basis(readers)
        dims = list(current.dims)
        dims[0] = K0.cols
        diff = list(current.diff)
        if current.top >= 1:
            diff[0] = solve(K0, current.d(1))
        newobj = make_complex(field, dims, diff)
        down_comps = [K0] + [
            Matrix.identity(field, current.dim(t)) for t in range(1, current.top + 1)
        ]
        stages.append(
            TowerStage(
                gens=tuple(GenRef("p", 0) for _ in range(b0)),
                attaching=g0,
                obj=newobj,
                leg_down=make_map(newobj, current, down_comps),
                leg_gen=zero_map(newobj, zero_complex(field)),
            )
        )
        carrier = make_map(
            X,
            newobj,
            [solve(K0, carrier.comp(0))]
            + [carrier.comp(t) for t in range(1, max(X.top, newobj.top) + 1)],
        )
        current = newobj

    # phase 4: kill excess homology in each positive degree with new
    # boundaries; the adapted basis [image reps | excess reps | boundaries
    # and pushed noncycles | rest] makes the functionals vanish on the image.
    for deg in range(1, current.top + 1):
        hw = homology(current)
        imgd = image_basis(homology_map(carrier, hx, hw)[deg])
        b = hw.betti[deg] - imgd.cols
        if b == 0:
            continue
        if deg <= X.top:
            jreps = carrier.comp(deg) @ hx.reps[deg]
            pushed_noncycles = carrier.comp(deg) @ hx.noncycles[deg]
        else:
            jreps = Matrix.zeros(field, current.dim(deg), 0)
            pushed_noncycles = Matrix.zeros(field, current.dim(deg), 0)
        beta = complement_basis(imgd)
        creps = hw.reps[deg] @ beta
        V = image_basis(hstack([hw.boundaries[deg], pushed_noncycles]))
        U = hstack([jreps, creps, V])
        if rank(U) != U.cols:
            raise InternalCheckFailed("adapted basis is degenerate")
        P = hstack([U, complement_basis(U)])
        g_rows = inverse(P).row_slice(jreps.cols, jreps.cols + b)
        gtgt = _sphere_power(field, deg, b)
        g = make_map(
            current,
            gtgt,
            [Matrix.zeros(field, gtgt.dim(t), current.dim(t)) for t in range(deg)]
            + [g_rows],
        )
        if not (g @ carrier).is_zero():
            raise InternalCheckFailed("excess-class functionals see the image")
        dims = list(current.dims)
        dims[deg - 1] += b
        diff = list(current.diff)
        diff[deg - 1] = vstack([current.d(deg), g_rows])
        if deg >= 2:
            diff[deg - 2] = hstack(
                [current.d(deg - 1), Matrix.zeros(field, current.dim(deg - 2), b)]
            )
        newobj = make_complex(field, dims, diff)
        down_comps = []
        for t in range(current.top + 1):
            if t == deg - 1:
                down_comps.append(
                    hstack(
                        [
                            Matrix.identity(field, current.dim(t)),
                            Matrix.zeros(field, current.dim(t), b),
                        ]
                    )
                )
            else:
                down_comps.append(Matrix.identity(field, current.dim(t)))
        gsrc = biproduct(field, [disc(field, deg)] * b).obj
        leg_gen_comps = []
        for t in range(max(newobj.top, gsrc.top) + 1):
            if t == deg:
                leg_gen_comps.append(g_rows)
            elif t == deg - 1:
                leg_gen_comps.append(
                    hstack(
                        [
                            Matrix.zeros(field, b, current.dim(t)),
                            Matrix.identity(field, b),
                        ]
                    )
                )
            else:
                leg_gen_comps.append(Matrix.zeros(field, gsrc.dim(t), newobj.dim(t)))
        stages.append(
            TowerStage(
                gens=tuple(GenRef("p", deg) for _ in range(b)),
                attaching=g,
                obj=newobj,
                leg_down=make_map(newobj, current, down_comps),
                leg_gen=make_map(newobj, gsrc, leg_gen_comps),
            )
        )
        carrier_comps = []
        for t in range(max(X.top, newobj.top) + 1):
            if t == deg - 1:
                carrier_comps.append(
                    vstack([carrier.comp(t), Matrix.zeros(field, b, X.dim(t))])
                )
            else:
                carrier_comps.append(carrier.comp(t))
        carrier = make_map(X, newobj, carrier_comps)
        current = newobj

    cert = PostnikovCert(Y, tuple(stages), _tower_composite(Y, stages))
    if (cert.claimed_composite @ carrier) != f:
        raise InternalCheckFailed("factor_fibration lost the input map")
    return FactorResult(carrier, cert, "x")


def _unreached_class_readers(h: HomologyData, img: Matrix, n: int) -> Matrix:
    """Functionals vanishing on the given image classes (and on boundaries
    and noncycles) that read off a chosen complement of them."""
    comp = complement_basis(img)
    ext = hstack([img, comp])
    rows = inverse(ext).row_slice(img.cols, img.cols + comp.cols)
    return rows @ h.class_coords(n)
