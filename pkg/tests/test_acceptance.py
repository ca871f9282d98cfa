"""Acceptance gate: end-to-end checks over seeded random corpora.

Each test prints one PASS/FAIL line so the whole gate can be read off a
plain run with -s (failures still raise, so this stays an ordinary pytest
module). Every corpus is seeded; reruns see byte-identical instances.
"""

from __future__ import annotations

import functools
import random
import time

import numpy as np

from chaintower.categories import (
    FinCat,
    chain_category,
    cospan_category,
    discrete_category,
    parallel_pair_category,
    span_category,
)
from chaintower.certificates import GenRef, gen_chain_map, verify_postnikov_cert
from chaintower.complexes import (
    ChainComplex,
    ChainMap,
    disc,
    homology,
    identity_map,
    is_degreewise_mono,
    is_quasi_iso,
    pullback,
    pushout,
    sphere,
)
from chaintower.diagrams import (
    DiagGenRef,
    Diagram,
    NatTrans,
    constant_diagram,
    diag_gen_nat,
    diagram_colimit,
    diagram_limit,
    factor_injective_z,
    lan_discrete,
    lan_transpose_in,
    lan_transpose_out,
    objectwise_classify,
    ran_discrete,
    ran_transpose_in,
    ran_transpose_out,
    solve_lift_nat,
    unit_ran,
    verify_diag_postnikov_cert,
)
from chaintower.factor import factor_acyclic_fibration, factor_fibration
from chaintower.fields import F101, FieldSpec
from chaintower.lifting import classify, make_square, solve_lift
from chaintower.linalg import Matrix, hstack, kernel_basis, rank, vstack
from chaintower.randgen import (
    rand_acyclic_cofibration,
    rand_acyclic_quotient,
    rand_commuting_square,
    rand_complex,
    rand_diag_tower,
    rand_diagram,
    rand_map,
    rand_mono,
    rand_nat,
    rand_poset,
    rand_reedy,
    rand_surjection_onto,
)
from chaintower.reedy import (
    delta_le1,
    direct_reedy,
    inverse_reedy,
    poset_degrees,
    reedy_canonical_tower,
    reedy_classify,
    reedy_transpose_square,
    rel_matching,
)

F3 = FieldSpec("prime", 3)


def gate(label: str):
    """Print one PASS/FAIL line per acceptance check."""

    def wrap(fn):
        @functools.wraps(fn)
        def run() -> None:
            try:
                fn()
            except BaseException:
                print(f"acceptance {label}: FAIL")
                raise
            print(f"acceptance {label}: PASS")

        return run

    return wrap


@functools.lru_cache(maxsize=1)
def shared_corpus() -> tuple[ChainMap, ...]:
    """200 seeded random maps over F_101, top degree <= 4, dims <= 5."""
    maps = []
    for seed in range(200):
        rng = random.Random(seed)
        a = rand_complex(F101, rng, max_top=4, max_dim=5)
        b = rand_complex(F101, rng, max_top=4, max_dim=5)
        maps.append(rand_map(a, b, rng))
    return tuple(maps)


@gate("01 injective-then-surjective-quasi-iso factorization")
def test_01_factor_acyclic_fibration_corpus():
    t0 = time.monotonic()
    for f in shared_corpus():
        res = factor_acyclic_fibration(f)
        assert res.side == "z"
        assert is_degreewise_mono(res.left)
        assert all(g.family == "q" for st in res.cert.stages for g in st.gens)
        ver = verify_postnikov_cert(res.cert)
        assert ver.ok, ver.reason
        assert res.right @ res.left == f
    assert time.monotonic() - t0 < 60.0


@gate("02 acyclic-cofibration-then-fibration factorization")
def test_02_factor_fibration_corpus():
    t0 = time.monotonic()
    for f in shared_corpus():
        res = factor_fibration(f)
        assert res.side == "x"
        assert is_degreewise_mono(res.left)
        assert is_quasi_iso(res.left)
        assert all(g.family == "p" for st in res.cert.stages for g in st.gens)
        ver = verify_postnikov_cert(res.cert)
        assert ver.ok, ver.reason
        assert res.right @ res.left == f
    assert time.monotonic() - t0 < 120.0


@gate("03 lifting soundness for both generating pairs")
def test_03_lifting_soundness():
    solved = 0
    for seed in range(100):
        rng = random.Random(10_000 + seed)
        a = rand_complex(F101, rng, max_top=3, max_dim=3)
        i = rand_acyclic_cofibration(a, rng)
        f = rand_map(
            rand_complex(F101, rng, max_top=3, max_dim=3),
            rand_complex(F101, rng, max_top=3, max_dim=3),
            rng,
        )
        p = factor_fibration(f).right
        sq = rand_commuting_square(i, p, rng)
        assert solve_lift(sq) is not None
        solved += 1
    for seed in range(100):
        rng = random.Random(11_000 + seed)
        a = rand_complex(F101, rng, max_top=3, max_dim=3)
        i = rand_mono(a, rng)
        f = rand_map(
            rand_complex(F101, rng, max_top=3, max_dim=3),
            rand_complex(F101, rng, max_top=3, max_dim=3),
            rng,
        )
        p = factor_acyclic_fibration(f).right
        sq = rand_commuting_square(i, p, rng)
        assert solve_lift(sq) is not None
        solved += 1
    assert solved == 200
    # the sphere-valued two-step generator has no section
    p1 = gen_chain_map(GenRef("p", 1), F101)
    no_section = make_square(p1, p1, identity_map(p1.source), identity_map(p1.target))
    assert solve_lift(no_section) is None


@gate("04 retract squares for surjective quasi-isos")
def test_04_retract_argument():
    for seed in range(50):
        rng = random.Random(20_000 + seed)
        tgt = rand_complex(F101, rng, max_top=3, max_dim=3)
        f = rand_acyclic_quotient(tgt, rng)
        assert classify(f).acyclic_fibration
        res = factor_acyclic_fibration(f)
        sq = make_square(res.left, f, identity_map(f.source), res.right)
        assert solve_lift(sq) is not None


@gate("05 homology oracle and counting identities")
def test_05_homology_oracle():
    for n in range(1, 7):
        assert homology(disc(F101, n)).betti == tuple([0] * (n + 1))
    for n in range(0, 7):
        assert homology(sphere(F101, n)).betti == tuple([0] * n + [1])
    for seed in range(500):
        rng = random.Random(30_000 + seed)
        c = rand_complex(F101, rng, max_top=4, max_dim=5)
        betti = homology(c).betti
        # rank and kernel are separate eliminations; they must add up
        for n in range(1, c.top + 1):
            assert rank(c.d(n)) + kernel_basis(c.d(n)).cols == c.dim(n)
        # homology by counting: cycles minus boundaries, degree by degree
        kdims = [c.dim(0)] + [kernel_basis(c.d(n)).cols for n in range(1, c.top + 1)]
        rks = [rank(c.d(n)) for n in range(1, c.top + 1)] + [0]
        for n in range(c.top + 1):
            assert betti[n] == kdims[n] - rks[n]
        euler_dims = sum((-1) ** n * c.dim(n) for n in range(c.top + 1))
        euler_betti = sum((-1) ** n * b for n, b in enumerate(betti))
        assert euler_dims == euler_betti


@gate("06 pointwise-extension transposes round-trip")
def test_06_kan_transposes():
    for seed in range(100):
        rng = random.Random(40_000 + seed)
        cat = rand_poset(rng, max_objects=4)
        family = {o: rand_complex(F101, rng, max_top=2, max_dim=2) for o in cat.objects}
        Phi = rand_diagram(cat, F101, rng, max_top=2, max_dim=2)
        # restriction -| pointwise right extension
        sigma = {o: rand_map(Phi.at[o], family[o], rng) for o in cat.objects}
        tau = ran_transpose_in(Phi, family, sigma)
        back = ran_transpose_out(tau, family)
        assert all(back[o] == sigma[o] for o in cat.objects)
        tau2 = rand_nat(Phi, ran_discrete(family, cat), rng)
        assert ran_transpose_in(Phi, family, ran_transpose_out(tau2, family)) == tau2
        # pointwise left extension -| restriction
        rho = {o: rand_map(family[o], Phi.at[o], rng) for o in cat.objects}
        up = lan_transpose_in(family, Phi, rho)
        out = lan_transpose_out(up, family)
        assert all(out[o] == rho[o] for o in cat.objects)
        up2 = rand_nat(lan_discrete(family, cat), Phi, rng)
        assert lan_transpose_in(family, Phi, lan_transpose_out(up2, family)) == up2
        # the comparison into the right extension of the restriction embeds
        eta = unit_ran(Phi)
        assert all(is_degreewise_mono(eta.comps[o]) for o in cat.objects)


@gate("07 hom-power generators classify objectwise")
def test_07_objectwise_generator_classes():
    for seed in range(100):
        rng = random.Random(50_000 + seed)
        cat = rand_poset(rng, max_objects=3)
        o = rng.choice(cat.objects)
        n = rng.randrange(1, 3)
        gp = diag_gen_nat(DiagGenRef("p", n, o), cat, F101)
        assert all(c.fibration for c in objectwise_classify(gp).per_object.values())
        gq = diag_gen_nat(DiagGenRef("q", n, o), cat, F101)
        assert all(c.acyclic_fibration for c in objectwise_classify(gq).per_object.values())
        certp = rand_diag_tower(cat, F101, rng, family="p")
        ver = verify_diag_postnikov_cert(certp)
        assert ver.ok, ver.reason
        comp = certp.claimed_composite
        assert all(c.fibration for c in objectwise_classify(comp).per_object.values())
        certq = rand_diag_tower(cat, F101, rng, family="q")
        ver = verify_diag_postnikov_cert(certq)
        assert ver.ok, ver.reason
        comp = certq.claimed_composite
        assert all(c.acyclic_fibration for c in objectwise_classify(comp).per_object.values())


@gate("08 objectwise-injective tower factorization")
def test_08_factor_injective_z_corpus():
    for seed in range(100):
        rng = random.Random(60_000 + seed)
        cat = rand_poset(rng, max_objects=4)
        Phi = rand_diagram(cat, F101, rng, max_top=2, max_dim=2)
        Psi = rand_diagram(cat, F101, rng, max_top=2, max_dim=2)
        tau = rand_nat(Phi, Psi, rng)
        res = factor_injective_z(tau)
        assert all(is_degreewise_mono(res.left.comps[o]) for o in cat.objects)
        ver = verify_diag_postnikov_cert(res.cert)
        assert ver.ok, ver.reason
        assert res.right @ res.left == tau


@gate("09 corner-transposed lifting agrees with direct lifting")
def test_09_corner_transposed_lifting():
    disagreements = 0
    for k in range(100):
        rng = random.Random(70_000 + k)
        if k % 3 == 0:
            cat = rand_poset(rng, max_objects=4)
            R = direct_reedy(cat, poset_degrees(cat))
        elif k % 3 == 1:
            cat = rand_poset(rng, max_objects=4)
            deg = poset_degrees(cat)
            top = max(deg.values(), default=0)
            R = inverse_reedy(cat, {o: top - d for o, d in deg.items()})
        else:
            R = delta_le1()
        r = rng.choice(R.cat.objects)
        Phi = rand_diagram(R.cat, F101, rng, max_top=2, max_dim=2)
        Psi = rand_diagram(R.cat, F101, rng, max_top=2, max_dim=2)
        tau = rand_nat(Phi, Psi, rng)
        rel = rel_matching(R, tau, r)
        i = gen_chain_map(GenRef("p", rng.randrange(1, 3)), F101)
        sq = rand_commuting_square(i, rel.map, rng)
        nat_sq, _, _ = reedy_transpose_square(R, tau, r, i, sq.top, sq.bottom, rel=rel)
        if (solve_lift(sq) is None) != (solve_lift_nat(nat_sq) is None):
            disagreements += 1
    assert disagreements == 0


def _const_p1() -> tuple:
    cat = chain_category(1)
    R = direct_reedy(cat, {"0": 0, "1": 1})
    p1 = gen_chain_map(GenRef("p", 1), F101)
    Phi = constant_diagram(cat, p1.source)
    Psi = constant_diagram(cat, p1.target)
    return R, NatTrans(Phi, Psi, {"0": p1, "1": p1})


@gate("10 canonical matching towers rebuild the input")
def test_10_canonical_towers():
    matching_fibrant = 0
    for k in range(100):
        rng = random.Random(80_000 + k)
        if k % 10 == 0:
            R, tau = _const_p1()
        else:
            R = rand_reedy(rng, max_objects=4)
            Phi = rand_diagram(R.cat, F101, rng, max_top=1, max_dim=2)
            Psi = rand_diagram(R.cat, F101, rng, max_top=1, max_dim=2)
            tau = rand_nat(Phi, Psi, rng)
        cert = reedy_canonical_tower(R, tau)
        ver = verify_diag_postnikov_cert(cert)
        assert ver.ok, ver.reason
        assert cert.claimed_composite == tau
        if reedy_classify(R, tau).fibration:
            matching_fibrant += 1
            for r in R.cat.objects:
                assert classify(rel_matching(R, tau, r).map).fibration
    # the planted instances keep the conditional branch non-vacuous
    assert matching_fibrant >= 10


def _rand_quasi_iso(rng: random.Random) -> ChainMap:
    """Generic quasi-iso: surjective one into, injective one out of a hub."""
    mid = rand_complex(F101, rng, max_top=3, max_dim=3)
    down = rand_acyclic_quotient(mid, rng)
    up = rand_acyclic_cofibration(mid, rng)
    return up @ down


@gate("11 base and cobase change preserve quasi-isos")
def test_11_properness():
    for seed in range(100):
        rng = random.Random(90_000 + seed)
        w = _rand_quasi_iso(rng)
        assert is_quasi_iso(w)
        m = rand_mono(w.source, rng)
        po = pushout(w, m)
        assert is_quasi_iso(po.leg2)
    for seed in range(100):
        rng = random.Random(91_000 + seed)
        w = _rand_quasi_iso(rng)
        p = rand_surjection_onto(w.target, rng)
        pb = pullback(w, p)
        assert is_quasi_iso(pb.leg2)


SHAPES: tuple[FinCat, ...] = (
    discrete_category(("a",)),
    discrete_category(("a", "b")),
    discrete_category(("a", "b", "c")),
    chain_category(1),
    chain_category(2),
    span_category(),
    cospan_category(),
    parallel_pair_category(),
)


def _brute_equalizer_rows(D: Diagram, n: int) -> Matrix:
    """Fresh constraint matrix: one row block per non-identity arrow, built
    directly from hstacked per-object blocks."""
    objs = list(D.cat.objects)
    width = sum(D.at[o].dim(n) for o in objs)
    rows = []
    for m in sorted(D.cat.nonidentity()):
        a, b = D.cat.src[m], D.cat.tgt[m]
        assert a != b
        nb = D.at[b].dim(n)
        blocks = []
        for o in objs:
            if o == a:
                blocks.append(D.arrow[m].comp(n))
            elif o == b:
                blocks.append(-Matrix.identity(D.field, nb))
            else:
                blocks.append(Matrix.zeros(D.field, nb, D.at[o].dim(n)))
        rows.append(hstack(blocks))
    if not rows:
        return Matrix.zeros(D.field, 0, width)
    return vstack(rows)


def _brute_relation_cols(D: Diagram, n: int) -> Matrix:
    """Fresh relation matrix: one column block per non-identity arrow."""
    objs = list(D.cat.objects)
    width = sum(D.at[o].dim(n) for o in objs)
    cols = []
    for m in sorted(D.cat.nonidentity()):
        a, b = D.cat.src[m], D.cat.tgt[m]
        assert a != b
        na = D.at[a].dim(n)
        blocks = []
        for o in objs:
            if o == b:
                blocks.append(D.arrow[m].comp(n))
            elif o == a:
                blocks.append(-Matrix.identity(D.field, na))
            else:
                blocks.append(Matrix.zeros(D.field, D.at[o].dim(n), na))
        cols.append(vstack(blocks))
    if not cols:
        return Matrix.zeros(D.field, width, 0)
    return hstack(cols)


def _np_mod3(M: Matrix) -> np.ndarray:
    rows = [[int(x) % 3 for x in row] for row in M.to_lists()]
    return np.array(rows, dtype=np.int64).reshape(M.rows, M.cols)


def _all_vectors_mod3(width: int) -> np.ndarray:
    """All 3**width column vectors over F_3 (just the zero vector at width 0)."""
    if width == 0:
        return np.zeros((0, 1), dtype=np.int64)
    idx = np.arange(3**width)
    return np.stack([(idx // 3**k) % 3 for k in range(width)], axis=0).reshape(width, 3**width)


def _solution_count(M: np.ndarray) -> int:
    """Number of F_3 vectors M sends to zero, by exhaustive enumeration."""
    assert M.shape[1] <= 12, "enumeration budget exceeded; shrink the corpus"
    vecs = _all_vectors_mod3(M.shape[1])
    return int(np.count_nonzero(np.all((M @ vecs) % 3 == 0, axis=0)))


def _image_count(M: np.ndarray) -> int:
    """Number of distinct F_3 vectors M reaches, by exhaustive enumeration."""
    assert M.shape[1] <= 12, "enumeration budget exceeded; shrink the corpus"
    vecs = _all_vectors_mod3(M.shape[1])
    return np.unique((M @ vecs) % 3, axis=1).shape[1]


def _check_limit_against_brute_force(D: Diagram) -> None:
    objs = list(D.cat.objects)
    lim = diagram_limit(D)
    for m in D.cat.nonidentity():
        a, b = D.cat.src[m], D.cat.tgt[m]
        assert D.arrow[m] @ lim.legs[a] == lim.legs[b]
    width = max([D.at[o].top for o in objs] + [lim.obj.top]) + 1
    for n in range(width):
        K = _np_mod3(_brute_equalizer_rows(D, n))
        joint = _np_mod3(vstack([lim.legs[o].comp(n) for o in objs]))
        # the legs embed the limit onto the compatible families, bijectively:
        # every leg image is compatible, legs are jointly injective, and the
        # counted solution set is no bigger than the limit
        assert np.all((K @ joint) % 3 == 0)
        assert _solution_count(joint) == 1
        assert _solution_count(K) == 3 ** lim.obj.dim(n)


def _check_colimit_against_brute_force(D: Diagram) -> None:
    objs = list(D.cat.objects)
    col = diagram_colimit(D)
    for m in D.cat.nonidentity():
        a, b = D.cat.src[m], D.cat.tgt[m]
        assert col.legs[b] @ D.arrow[m] == col.legs[a]
    width = max([D.at[o].top for o in objs] + [col.obj.top]) + 1
    for n in range(width):
        total = sum(D.at[o].dim(n) for o in objs)
        J = _np_mod3(_brute_relation_cols(D, n))
        joint = _np_mod3(hstack([col.legs[o].comp(n) for o in objs]))
        # the joint legs present the colimit as the quotient by the counted
        # relation image: relations die, the legs cover, and the kernel of
        # the presentation is exactly as large as the relation image
        assert np.all((joint @ J) % 3 == 0)
        assert _image_count(joint) == 3 ** col.obj.dim(n)
        assert _image_count(J) == 3 ** (total - col.obj.dim(n))


@gate("12 limits and colimits match exhaustive enumeration")
def test_12_limits_against_brute_force():
    for si, cat in enumerate(SHAPES):
        for seed in range(8):
            rng = random.Random(95_000 + 100 * si + seed)
            # family dims of 1 keep every objectwise dimension at most 3
            # (fan-in times family dim), so enumeration stays exhaustive
            D = rand_diagram(cat, F3, rng, max_top=3, max_dim=1)
            assert all(D.at[o].dim(n) <= 3 for o in cat.objects for n in range(D.at[o].top + 1))
            _check_limit_against_brute_force(D)
            _check_colimit_against_brute_force(D)
