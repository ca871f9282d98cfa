"""Seeded random instances: complexes, maps, categories, diagrams.

Everything is driven by a random.Random so identical seeds replay
identical instances. Structured constraints (differentials squaring to
zero, chain conditions, naturality) are enforced by sampling from the
exact solution space of the defining linear system, never by rejection
on those conditions.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from .categories import (
    FinCat,
    chain_category,
    cyclic_group_category,
    discrete_category,
    poset_category,
)
from .complexes import (
    ChainComplex,
    ChainMap,
    biproduct,
    disc,
    make_complex,
    make_map,
    zero_complex,
    zero_map,
)
from .diagrams import (
    DiagGenRef,
    DiagPostnikovCert,
    DiagTowerStage,
    Diagram,
    NatTrans,
    constant_diagram,
    diag_gen_nat,
    diagram_biproduct_nat,
    diagram_pullback,
    identity_nat,
    lan_discrete,
    make_nat_square,
    NatSquare,
    ran_discrete,
)
from .fields import FieldSpec
from .lifting import SquareProblem, make_square, solve_lift
from .reedy import ReedyCat, delta_le1, direct_reedy, inverse_reedy, poset_degrees
from .linalg import Matrix, hstack, kernel_basis, vstack


def rand_scalar(field: FieldSpec, rng: random.Random):
    if field.is_prime:
        return rng.randrange(field.p)
    return Fraction(rng.randint(-3, 3), rng.choice((1, 1, 1, 2, 3)))


def rand_matrix(field: FieldSpec, rows: int, cols: int, rng: random.Random) -> Matrix:
    out = Matrix.zeros(field, rows, cols)
    arr = np.array(out.data)
    for i in range(rows):
        for j in range(cols):
            arr[i, j] = rand_scalar(field, rng)
    return Matrix(field, arr)


def rand_complex(
    field: FieldSpec, rng: random.Random, max_top: int = 4, max_dim: int = 5
) -> ChainComplex:
    top = rng.randint(0, max_top)
    dims = [rng.randint(0, max_dim) for _ in range(top + 1)]
    diff = []
    prev = None  # d_{n-1} as a Matrix, or None in degree 1
    for n in range(1, top + 1):
        if prev is None:
            d = rand_matrix(field, dims[0], dims[1], rng)
        else:
            # sample d_n inside the kernel of d_{n-1}
            K = kernel_basis(prev)
            coeff = rand_matrix(field, K.cols, dims[n], rng)
            d = K @ coeff
        diff.append(d)
        prev = d
    return make_complex(field, dims, diff)


def _chain_condition_kernel(src: ChainComplex, tgt: ChainComplex) -> tuple[Matrix, list[int]]:
    """Kernel of the chain-map condition on all components jointly.

    Unknowns are the entries of each component, column-major degree by
    degree; returns the kernel basis and the per-degree unknown sizes.
    """
    from .linalg import kron, np_identity

    field = src.field
    width = max(src.top, tgt.top) + 1
    sizes = [tgt.dim(n) * src.dim(n) for n in range(width)]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    total = offsets[-1]
    rows = []
    for n in range(1, width):
        nrows = tgt.dim(n - 1) * src.dim(n)
        if nrows == 0:
            continue
        row = np.array(Matrix.zeros(field, nrows, total).data)
        if sizes[n]:
            row[:, offsets[n] : offsets[n + 1]] = np.array(
                kron(field, np_identity(field, src.dim(n)), np.array(tgt.d(n).data))
            )
        if sizes[n - 1]:
            blk = -kron(field, np.array(src.d(n).data.T), np_identity(field, tgt.dim(n - 1)))
            if field.kind == "prime":
                blk = blk % field.p
            row[:, offsets[n - 1] : offsets[n]] = blk
        rows.append(row)
    if rows:
        mat = Matrix(field, np.vstack(rows))
    else:
        mat = Matrix.zeros(field, 0, total)
    return kernel_basis(mat), sizes


def rand_map(src: ChainComplex, tgt: ChainComplex, rng: random.Random) -> ChainMap:
    """Uniformly random chain map: a random combination of a basis of the
    solution space of the chain-map condition."""
    field = src.field
    K, sizes = _chain_condition_kernel(src, tgt)
    coeff = rand_matrix(field, K.cols, 1, rng)
    sol = K @ coeff
    comps = []
    at = 0
    for n, s in enumerate(sizes):
        seg = np.array(sol.data[at : at + s, 0]).reshape((tgt.dim(n), src.dim(n)), order="F")
        comps.append(Matrix(field, seg))
        at += s
    return make_map(src, tgt, comps)


def _twist(field: FieldSpec, A: ChainComplex, C: ChainComplex, rng: random.Random) -> list[Matrix]:
    """Degree-lowering maps h_n: C_n -> A_{n-1} with d h + h d = 0, sampled
    from the exact solution space; makes [[dA, h], [0, dC]] a differential."""
    from .linalg import kron, np_identity

    width = max(A.top, C.top) + 1
    sizes = [A.dim(n - 1) * C.dim(n) for n in range(width + 1)]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    total = offsets[-1]
    rows = []
    # condition per degree n >= 2: dA_{n-1} h_n + h_{n-1} dC_n = 0
    for n in range(2, width + 1):
        nrows = A.dim(n - 2) * C.dim(n)
        if nrows == 0:
            continue
        row = np.array(Matrix.zeros(field, nrows, total).data)
        if sizes[n]:
            row[:, offsets[n] : offsets[n + 1]] = np.array(
                kron(field, np_identity(field, C.dim(n)), np.array(A.d(n - 1).data))
            )
        if sizes[n - 1]:
            blk = kron(field, np.array(C.d(n).data.T), np_identity(field, A.dim(n - 2)))
            row[:, offsets[n - 1] : offsets[n]] = blk
        rows.append(row)
    if rows:
        K = kernel_basis(Matrix(field, np.vstack(rows)))
    else:
        K = Matrix.identity(field, total)
    coeff = rand_matrix(field, K.cols, 1, rng)
    sol = K @ coeff
    out = []
    at = 0
    for n in range(width + 1):
        s = sizes[n]
        seg = np.array(sol.data[at : at + s, 0]).reshape((A.dim(n - 1), C.dim(n)), order="F")
        out.append(Matrix(field, seg))
        at += s
    return out


def twisted_extension(
    field: FieldSpec, A: ChainComplex, C: ChainComplex, rng: random.Random
) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """Complex B with underlying A + C, twisted differential, inclusion of
    the subcomplex A, and projection onto the quotient C."""
    h = _twist(field, A, C, rng)
    top = max(A.top, C.top)
    dims = [A.dim(n) + C.dim(n) for n in range(top + 1)]
    diff = []
    for n in range(1, top + 1):
        upper = hstack([A.d(n), h[n]])
        lower = hstack([Matrix.zeros(field, C.dim(n - 1), A.dim(n)), C.d(n)])
        diff.append(vstack([upper, lower]))
    B = make_complex(field, dims, diff)
    incl = make_map(
        A,
        B,
        [
            vstack([Matrix.identity(field, A.dim(n)), Matrix.zeros(field, C.dim(n), A.dim(n))])
            for n in range(top + 1)
        ],
    )
    proj = make_map(
        B,
        C,
        [
            hstack([Matrix.zeros(field, C.dim(n), A.dim(n)), Matrix.identity(field, C.dim(n))])
            for n in range(top + 1)
        ],
    )
    return B, incl, proj


def rand_acyclic(field: FieldSpec, rng: random.Random, max_top: int = 4, max_blocks: int = 3) -> ChainComplex:
    """A biproduct of contractible two-step blocks (possibly none)."""
    blocks = [disc(field, rng.randint(1, max(1, max_top))) for _ in range(rng.randint(0, max_blocks))]
    return biproduct(field, blocks).obj


def rand_mono(src: ChainComplex, rng: random.Random, max_extra: int = 3) -> ChainMap:
    """Degreewise injective map out of src with a random twisted quotient."""
    field = src.field
    C = rand_complex(field, rng, max_top=max(src.top, 1), max_dim=max_extra)
    B, incl, _ = twisted_extension(field, src, C, rng)
    return incl


def rand_acyclic_cofibration(src: ChainComplex, rng: random.Random, max_blocks: int = 3) -> ChainMap:
    """Degreewise injective quasi-isomorphism out of src: twisted extension
    by a contractible complex."""
    field = src.field
    C = rand_acyclic(field, rng, max_top=max(src.top, 1) + 1, max_blocks=max_blocks)
    B, incl, _ = twisted_extension(field, src, C, rng)
    return incl


def rand_acyclic_quotient(tgt: ChainComplex, rng: random.Random, max_blocks: int = 3) -> ChainMap:
    """Degreewise surjective quasi-isomorphism onto tgt: quotient of a
    twisted extension by a contractible subcomplex."""
    field = tgt.field
    A = rand_acyclic(field, rng, max_top=max(tgt.top, 1) + 1, max_blocks=max_blocks)
    _, _, proj = twisted_extension(field, A, tgt, rng)
    return proj


def rand_surjection_onto(tgt: ChainComplex, rng: random.Random, extra: int = 2) -> ChainMap:
    """Degreewise surjective map onto tgt with a random twisted kernel."""
    field = tgt.field
    A = rand_complex(field, rng, max_top=max(tgt.top, 1), max_dim=extra)
    _, _, proj = twisted_extension(field, A, tgt, rng)
    return proj


# -- categories, diagrams, transformations ----------------------------------


def rand_poset(rng: random.Random, max_objects: int = 4) -> FinCat:
    """Random partial order: a random DAG on index-ordered vertices."""
    k = rng.randint(1, max_objects)
    names = [f"v{i}" for i in range(k)]
    pairs = [
        (names[i], names[j])
        for i in range(k)
        for j in range(i + 1, k)
        if rng.random() < 0.5
    ]
    return poset_category(names, pairs)


def rand_category(rng: random.Random, max_objects: int = 4) -> FinCat:
    """Mixed corpus: posets, discrete categories, chains, small groups."""
    kind = rng.randrange(4)
    if kind == 0:
        return rand_poset(rng, max_objects)
    if kind == 1:
        return discrete_category(tuple(f"o{i}" for i in range(rng.randint(1, max_objects))))
    if kind == 2:
        return chain_category(rng.randint(0, max_objects - 1))
    return cyclic_group_category(rng.choice((2, 3)))


def rand_aut(C: ChainComplex, rng: random.Random) -> ChainMap:
    """Random chain automorphism: identity plus a random chain endomorphism
    when that stays invertible, identity otherwise."""
    from .complexes import identity_map
    from .linalg import is_invertible

    g = identity_map(C) + rand_map(C, C, rng)
    if all(is_invertible(g.comp(n)) for n in range(C.top + 1)):
        return g
    return identity_map(C)


def _inverse_aut(g: ChainMap) -> ChainMap:
    from .linalg import inverse

    return make_map(g.target, g.source, [inverse(g.comp(n)) for n in range(g.source.top + 1)])


def rand_diagram(
    cat: FinCat, field: FieldSpec, rng: random.Random, max_top: int = 1, max_dim: int = 2
) -> Diagram:
    """Random functorial diagram: a Kan-extension or constant shape,
    conjugated at every object by a random automorphism."""
    kind = rng.randrange(3)
    if kind == 0:
        fam = {o: rand_complex(field, rng, max_top, max_dim) for o in cat.objects}
        D = lan_discrete(fam, cat)
    elif kind == 1:
        fam = {o: rand_complex(field, rng, max_top, max_dim) for o in cat.objects}
        D = ran_discrete(fam, cat)
    else:
        D = constant_diagram(cat, rand_complex(field, rng, max_top, max_dim))
    auts = {o: rand_aut(D.at[o], rng) for o in cat.objects}
    inv = {o: _inverse_aut(auts[o]) for o in cat.objects}
    arrow = {
        m: auts[cat.tgt[m]] @ D.arrow[m] @ inv[cat.src[m]] for m in cat.morphs
    }
    return Diagram(cat, field, {o: D.at[o] for o in cat.objects}, arrow)


def _nat_condition_kernel(Phi: Diagram, Psi: Diagram) -> tuple[Matrix, dict, dict]:
    """Basis of all natural transformations Phi -> Psi: the joint kernel of
    every chain-map condition and every naturality condition, unknowns
    stacked column-major by object then degree."""
    from .linalg import kron, np_identity

    cat, field = Phi.cat, Phi.field
    widths = {d: max(Phi.at[d].top, Psi.at[d].top) + 1 for d in cat.objects}
    offsets: dict[tuple[str, int], int] = {}
    total = 0
    for d in cat.objects:
        for n in range(widths[d]):
            offsets[(d, n)] = total
            total += Psi.at[d].dim(n) * Phi.at[d].dim(n)
    rows = []

    def emit(blocks: dict[tuple[str, int], np.ndarray], nrows: int) -> None:
        if nrows == 0:
            return
        row = np.array(Matrix.zeros(field, nrows, total).data)
        for key, blk in blocks.items():
            if blk.size:
                off = offsets[key]
                row[:, off : off + blk.shape[1]] = blk
        rows.append(row)

    for d in cat.objects:
        S, T = Phi.at[d], Psi.at[d]
        for n in range(1, widths[d]):
            tprev, sd = T.dim(n - 1), S.dim(n)
            if tprev * sd == 0:
                continue
            blocks = {}
            if T.dim(n) * sd:
                blocks[(d, n)] = kron(field, np_identity(field, sd), np.array(T.d(n).data))
            if tprev * S.dim(n - 1):
                neg = -kron(field, np.array(S.d(n).data.T), np_identity(field, tprev))
                if field.kind == "prime":
                    neg %= field.p
                blocks[(d, n - 1)] = neg
            emit(blocks, tprev * sd)
    for m in cat.nonidentity():
        a, b = cat.src[m], cat.tgt[m]
        for n in range(max(widths[a], widths[b])):
            nrows = Psi.at[b].dim(n) * Phi.at[a].dim(n)
            if nrows == 0:
                continue
            blocks = {}
            if n < widths[a] and Psi.at[a].dim(n) * Phi.at[a].dim(n):
                blocks[(a, n)] = kron(
                    field, np_identity(field, Phi.at[a].dim(n)), np.array(Psi.arrow[m].comp(n).data)
                )
            if n < widths[b] and Psi.at[b].dim(n) * Phi.at[b].dim(n):
                neg = -kron(
                    field, np.array(Phi.arrow[m].comp(n).data.T), np_identity(field, Psi.at[b].dim(n))
                )
                if field.kind == "prime":
                    neg %= field.p
                # endomorphisms put both naturality terms in the same segment
                if (b, n) in blocks:
                    neg = blocks[(b, n)] + neg
                    if field.kind == "prime":
                        neg %= field.p
                blocks[(b, n)] = neg
            emit(blocks, nrows)
    if rows:
        A = Matrix(field, np.vstack(rows)) if len(rows) > 1 else Matrix(field, rows[0])
    else:
        A = Matrix.zeros(field, 0, total)
    return kernel_basis(A), offsets, widths


def rand_nat(Phi: Diagram, Psi: Diagram, rng: random.Random) -> NatTrans:
    """Uniformly random natural transformation: a random combination of a
    basis of the joint condition space."""
    cat, field = Phi.cat, Phi.field
    K, offsets, widths = _nat_condition_kernel(Phi, Psi)
    coeff = rand_matrix(field, K.cols, 1, rng)
    sol = K @ coeff
    comps = {}
    for d in cat.objects:
        per_deg = []
        for n in range(widths[d]):
            td, sd = Psi.at[d].dim(n), Phi.at[d].dim(n)
            off = offsets[(d, n)]
            seg = np.array(sol.data[off : off + td * sd, 0]).reshape((td, sd), order="F")
            per_deg.append(Matrix(field, seg))
        comps[d] = ChainMap(Phi.at[d], Psi.at[d], per_deg)
    return NatTrans(Phi, Psi, comps)


def rand_diag_tower(
    cat: FinCat,
    field: FieldSpec,
    rng: random.Random,
    family: str = "p",
    max_stages: int = 2,
    max_gens: int = 2,
) -> DiagPostnikovCert:
    """Random verified tower certificate over a random base diagram: each
    stage is an honest objectwise pullback of a product of hom-power
    generators along a random natural attaching map."""
    base = rand_diagram(cat, field, rng)
    current = base
    stages = []
    for _ in range(rng.randint(0, max_stages)):
        lo = 1 if family == "q" else 0
        gens = tuple(
            DiagGenRef(family, rng.randint(lo, 3), rng.choice(cat.objects))
            for _ in range(rng.randint(1, max_gens))
        )
        gnats = [diag_gen_nat(g, cat, field) for g in gens]
        G, gsrc, gtgt = diagram_biproduct_nat(cat, field, gnats)
        attaching = rand_nat(current, gtgt.obj, rng)
        pb = diagram_pullback(attaching, G)
        stages.append(DiagTowerStage(gens, attaching, pb.obj, pb.leg1, pb.leg2))
        current = pb.obj
    composite = identity_nat(base)
    for st in stages:
        composite = composite @ st.leg_down
    return DiagPostnikovCert(base, tuple(stages), composite)


def rand_planted_square(left: ChainMap, right: ChainMap, rng: random.Random) -> SquareProblem:
    """Commuting square around a random diagonal, so a lift exists by
    construction; solvers must still find one on their own."""
    c = rand_map(left.target, right.source, rng)
    return make_square(left, right, c @ left, right @ c)


def rand_planted_nat_square(left: NatTrans, right: NatTrans, rng: random.Random) -> NatSquare:
    """Diagram-level planted square: the diagonal is a random natural
    transformation, so a joint lift exists by construction."""
    c = rand_nat(left.target, right.source, rng)
    return make_nat_square(left, right, c @ left, right @ c)


def rand_commuting_square(left: ChainMap, right: ChainMap, rng: random.Random) -> SquareProblem:
    """Random commuting square with the given edges: a random top is
    completed to a commuting bottom whenever the linear system allows it,
    otherwise the square factors through a random diagonal. Lifts may or
    may not exist."""
    z = zero_complex(left.field)
    for _ in range(4):
        u = rand_map(left.source, right.source, rng)
        # completing the bottom is itself a lifting problem against zero
        v = solve_lift(make_square(left, zero_map(right.target, z), right @ u, zero_map(left.target, z)))
        if v is not None:
            return make_square(left, right, u, v)
    c = rand_map(left.target, right.source, rng)
    return make_square(left, right, c @ left, right @ c)


def rand_reedy(rng: random.Random, max_objects: int = 4) -> ReedyCat:
    """Random degree-structured shape: a direct or inverse poset with
    longest-chain degrees, or the two-level truncated simplex shape."""
    k = rng.randrange(3)
    if k == 2:
        return delta_le1()
    cat = rand_poset(rng, max_objects)
    deg = poset_degrees(cat)
    if k == 0:
        return direct_reedy(cat, deg)
    top = max(deg.values(), default=0)
    return inverse_reedy(cat, {o: top - d for o, d in deg.items()})
