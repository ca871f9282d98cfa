"""Degree-structured shapes: validation, factorizations, latching and
matching objects, corner classification, canonical towers and cell
chains, and the transposed lifting problems."""

from __future__ import annotations

import random

import pytest

from chaintower.categories import (
    FinCat,
    chain_category,
    discrete_category,
    parallel_pair_category,
    span_category,
)
from chaintower.certificates import GenRef, gen_chain_map
from chaintower.complexes import disc, identity_map, sphere, zero_complex, zero_map
from chaintower.diagrams import (
    Diagram,
    DiagPostnikovCert,
    NatTrans,
    constant_diagram,
    identity_nat,
    objectwise_classify,
    solve_lift_nat,
    verify_diag_cell_cert,
    verify_diag_postnikov_cert,
    zero_diagram,
    zero_nat,
)
from chaintower.errors import (
    DegreeViolation,
    FactorizationMissing,
    FactorizationNotUnique,
    NotACommutingSquare,
    NotReedy,
    ValidationFailure,
)
from chaintower.fields import F101, RATIONAL
from chaintower.lifting import classify, make_square, solve_lift
from chaintower.linalg import Matrix
from chaintower.randgen import (
    rand_commuting_square,
    rand_diagram,
    rand_map,
    rand_nat,
    rand_reedy,
)
from chaintower.reedy import (
    ReedyCat,
    boundary_representable,
    delta_le1,
    direct_reedy,
    inverse_reedy,
    latching,
    matching,
    poset_degrees,
    pullback_cotensor_gen,
    pushout_product_gen,
    reedy_canonical_cells,
    reedy_canonical_tower,
    reedy_classify,
    reedy_transpose_square,
    rel_latching,
    rel_matching,
)


def iso_pair_category() -> FinCat:
    # two objects joined by a pair of mutually inverse arrows
    return FinCat(
        ("e", "r"),
        ("ide", "idr", "up", "dn"),
        {"ide": "e", "idr": "r", "up": "e", "dn": "r"},
        {"ide": "e", "idr": "r", "up": "r", "dn": "e"},
        {"e": "ide", "r": "idr"},
        {
            ("ide", "ide"): "ide",
            ("up", "ide"): "up",
            ("idr", "idr"): "idr",
            ("dn", "idr"): "dn",
            ("idr", "up"): "up",
            ("dn", "up"): "ide",
            ("ide", "dn"): "dn",
            ("up", "dn"): "idr",
        },
    )


def const_p1():
    """Constant square-zero example: D^1 -> S^1 at every object of 0 -> 1."""
    cat = chain_category(1)
    R = direct_reedy(cat, {"0": 0, "1": 1})
    p1 = gen_chain_map(GenRef("p", 1), F101)
    Phi = constant_diagram(cat, p1.source)
    Psi = constant_diagram(cat, p1.target)
    tau = NatTrans(Phi, Psi, {"0": p1, "1": p1})
    return R, tau, p1


class TestReedyStructure:
    def test_delta_factorizations(self):
        R = delta_le1()
        assert R.factorization("e0") == ("s0", "d0")
        assert R.factorization("e1") == ("s0", "d1")
        assert R.factorization("id1") == ("id1", "id1")
        assert R.factorization("d0") == ("id0", "d0")
        assert R.factorization("s0") == ("s0", "id0")
        assert R.deg("[0]") == 0
        assert R.deg("[1]") == 1

    def test_op_swaps_classes(self):
        R = delta_le1()
        Rop = R.op()
        assert set(Rop.plus) == set(R.minus)
        assert set(Rop.minus) == set(R.plus)
        assert Rop.op() == R

    def test_poset_degrees(self):
        assert poset_degrees(chain_category(3)) == {"0": 0, "1": 1, "2": 2, "3": 3}
        assert poset_degrees(discrete_category(("x", "y"))) == {"x": 0, "y": 0}
        assert poset_degrees(span_category()) == {"a": 1, "b": 1, "c": 0}

    def test_poset_degrees_rejects_cycles(self):
        with pytest.raises(NotReedy, match="directed cycle"):
            poset_degrees(iso_pair_category())

    def test_degrees_must_cover_objects(self):
        cat = chain_category(1)
        with pytest.raises(NotReedy, match="cover the objects"):
            ReedyCat(cat, {"0": 0}, cat.morphs, tuple(cat.ids.values()))

    def test_raising_must_raise(self):
        cat = chain_category(1)
        with pytest.raises(DegreeViolation, match="0->1"):
            ReedyCat(cat, {"0": 1, "1": 0}, cat.morphs, tuple(cat.ids.values()))

    def test_lowering_must_lower(self):
        cat = chain_category(1)
        with pytest.raises(DegreeViolation, match="0->1"):
            ReedyCat(cat, {"0": 0, "1": 1}, tuple(cat.ids.values()), cat.morphs)

    def test_identities_required_in_both_classes(self):
        cat = chain_category(1)
        with pytest.raises(NotReedy, match="identity at"):
            ReedyCat(cat, {"0": 0, "1": 1}, ("0->0", "0->1"), tuple(cat.ids.values()))

    def test_classes_closed_under_composition(self):
        cat = chain_category(2)
        ids = tuple(cat.ids.values())
        with pytest.raises(NotReedy, match="not closed under composition"):
            ReedyCat(cat, {"0": 0, "1": 1, "2": 2}, ids + ("0->1", "1->2"), ids)

    def test_missing_factorization(self):
        cat = parallel_pair_category()
        ids = tuple(cat.ids.values())
        with pytest.raises(FactorizationMissing, match="u"):
            ReedyCat(cat, {"a": 0, "b": 0}, ids, ids)

    def test_ambiguous_factorization(self):
        # id_r decomposes trivially and through the lower object
        cat = iso_pair_category()
        with pytest.raises(FactorizationNotUnique):
            ReedyCat(
                cat,
                {"e": 0, "r": 1},
                ("ide", "idr", "up"),
                ("ide", "idr", "dn"),
            )

    def test_direct_and_inverse_builders(self):
        cat = chain_category(2)
        deg = poset_degrees(cat)
        Rd = direct_reedy(cat, deg)
        assert set(Rd.plus) == set(cat.morphs)
        assert set(Rd.minus) == set(cat.ids.values())
        Ri = inverse_reedy(cat, {o: 2 - d for o, d in deg.items()})
        assert set(Ri.minus) == set(cat.morphs)
        assert set(Ri.plus) == set(cat.ids.values())


class TestBoundaries:
    def test_delta_boundary_contra(self):
        R = delta_le1()
        S = boundary_representable(R, "[1]", "contra")
        assert S.elems["[0]"] == ("d0", "d1")
        assert S.elems["[1]"] == ("e0", "e1")

    def test_delta_boundary_co(self):
        R = delta_le1()
        S = boundary_representable(R, "[1]", "co")
        assert S.elems["[0]"] == ("s0",)
        assert S.elems["[1]"] == ("e0", "e1")

    def test_bottom_object_boundaries_empty(self):
        R = delta_le1()
        for variance in ("co", "contra"):
            S = boundary_representable(R, "[0]", variance)
            assert all(S.elems[o] == () for o in R.cat.objects)

    def test_direct_poset_boundaries(self):
        cat = chain_category(1)
        R = direct_reedy(cat, poset_degrees(cat))
        contra = boundary_representable(R, "1", "contra")
        assert contra.elems == {"0": ("0->1",), "1": ()}
        co = boundary_representable(R, "1", "co")
        assert all(co.elems[o] == () for o in cat.objects)


class TestLatchingMatching:
    def test_delta_latching_of_constant(self):
        R = delta_le1()
        Phi = constant_diagram(R.cat, sphere(F101, 1))
        ld = latching(R, Phi, "[1]")
        assert ld.obj.dims == (0, 2)
        assert ld.canonical.comp(1) == Matrix.build(F101, [[1, 1]])
        assert sum(latching(R, Phi, "[0]").obj.dims) == 0

    def test_delta_matching_of_constant(self):
        R = delta_le1()
        Phi = constant_diagram(R.cat, sphere(F101, 1))
        md = matching(R, Phi, "[1]")
        assert md.obj.dims == (0, 1)
        assert md.canonical.comp(1) == Matrix.build(F101, [[1]])
        assert md.shape.objects == ("s0",)
        assert sum(matching(R, Phi, "[0]").obj.dims) == 0

    def test_chain_latching_shape_and_value(self):
        cat = chain_category(2)
        R = direct_reedy(cat, poset_degrees(cat))
        Phi = constant_diagram(cat, sphere(F101, 0))
        ld = latching(R, Phi, "2")
        assert ld.shape.objects == ("0->2", "1->2")
        assert ld.shape.morphs == ("0->0@0->2", "0->1@1->2", "1->1@1->2")
        assert ld.obj.dims == (1,)
        assert ld.canonical.comp(0) == Matrix.build(F101, [[1]])


class TestRelativeCorners:
    def test_rel_matching_of_constant(self):
        R, tau, p1 = const_p1()
        for r in ("0", "1"):
            rm = rel_matching(R, tau, r)
            assert rm.corner.obj.dims in ((0, 1), (0, 1, 0))
            assert rm.map.comp(1) == p1.comp(1)
            cls = classify(rm.map)
            assert (cls.cofibration, cls.fibration, cls.weak_equivalence) == (
                False,
                True,
                False,
            )

    def test_rel_latching_of_constant(self):
        R, tau, p1 = const_p1()
        r0 = rel_latching(R, tau, "0")
        assert r0.corner.obj.dims == (1, 1)
        assert r0.map.comp(1) == p1.comp(1)
        cls0 = classify(r0.map)
        assert (cls0.cofibration, cls0.fibration, cls0.weak_equivalence) == (
            False,
            True,
            False,
        )
        r1 = rel_latching(R, tau, "1")
        assert r1.corner.obj.dims in ((0, 1), (0, 1, 0))
        cls1 = classify(r1.map)
        assert cls1.cofibration and cls1.fibration and cls1.weak_equivalence

    def test_cotensor_gen_of_constant(self):
        R, tau, p1 = const_p1()
        rm = rel_matching(R, tau, "1")
        gd = pullback_cotensor_gen(R, rm.map, "1")
        # at the top object the generator restricts to the stage map itself
        assert gd.map.comps["1"].comp(1) == p1.comp(1)
        low = gd.map.comps["0"]
        assert (low.source.dim(0), low.source.dim(1)) == (1, 1)
        lcls = classify(low)
        assert lcls.cofibration and lcls.fibration and lcls.weak_equivalence

    def test_tensor_gen_of_constant(self):
        R, tau, p1 = const_p1()
        rl = rel_latching(R, tau, "0")
        gd = pushout_product_gen(R, p1, "0")
        top = gd.map.comps["0"]
        assert top.comp(1) == p1.comp(1)
        assert (top.source.dim(0), top.source.dim(1)) == (1, 1)
        del rl


class TestReedyClassification:
    def test_constant_square_zero_map(self):
        R, tau, p1 = const_p1()
        cls = reedy_classify(R, tau)
        assert not cls.cofibration
        assert cls.fibration
        assert not cls.weak_equivalence
        assert not cls.acyclic_fibration
        d = cls.to_dict()
        assert set(d["rel_latching"]) == {"0", "1"}
        assert set(d["rel_matching"]) == {"0", "1"}
        assert d["fibration"] is True

    def test_identity_is_everything(self):
        R = delta_le1()
        Phi = constant_diagram(R.cat, sphere(F101, 1))
        cls = reedy_classify(R, identity_nat(Phi))
        assert cls.cofibration and cls.fibration and cls.weak_equivalence
        assert cls.acyclic_cofibration and cls.acyclic_fibration

    def test_objectwise_mono_need_not_be_reedy_cofibration(self):
        cat = chain_category(1)
        R = direct_reedy(cat, poset_degrees(cat))
        C = sphere(F101, 0)
        Z = zero_complex(F101)
        Psi = Diagram(
            cat,
            F101,
            {"0": C, "1": Z},
            {"0->0": identity_map(C), "1->1": identity_map(Z), "0->1": zero_map(C, Z)},
        )
        tau = zero_nat(zero_diagram(cat, F101), Psi)
        assert objectwise_classify(tau).cofibration
        cls = reedy_classify(R, tau)
        assert not cls.cofibration
        assert cls.rel_latching["0"].cofibration
        assert not cls.rel_latching["1"].cofibration
        rl = rel_latching(R, tau, "1")
        assert rl.corner.obj.dims == (1,)
        assert rl.map.comp(0).rows == 0
        assert rl.map.comp(0).cols == 1


class TestCanonicalTower:
    def test_constant_tower_and_cells(self):
        R, tau, p1 = const_p1()
        cert = reedy_canonical_tower(R, tau)
        assert len(cert.stages) == 2
        res = verify_diag_postnikov_cert(cert)
        assert res.ok, res.reason
        assert cert.claimed_composite == tau
        assert cert.stages[-1].obj == tau.source
        cell = reedy_canonical_cells(R, tau)
        assert len(cell.stages) == 2
        res = verify_diag_cell_cert(cell)
        assert res.ok, res.reason
        assert cell.stages[-1].obj == tau.target

    def test_fibration_has_fibration_layers(self):
        R, tau, p1 = const_p1()
        assert reedy_classify(R, tau).fibration
        cert = reedy_canonical_tower(R, tau)
        for st in cert.stages:
            for g in st.gens:
                assert g.family == "custom"
                assert objectwise_classify(g.custom).fibration

    def test_single_object_shape(self):
        cat = discrete_category(("x",))
        R = direct_reedy(cat, {"x": 0})
        p1 = gen_chain_map(GenRef("p", 1), F101)
        tau = NatTrans(
            constant_diagram(cat, p1.source),
            constant_diagram(cat, p1.target),
            {"x": p1},
        )
        cert = reedy_canonical_tower(R, tau)
        assert len(cert.stages) == 1
        res = verify_diag_postnikov_cert(cert)
        assert res.ok, res.reason

    def test_tampered_composite_rejected(self):
        R, tau, p1 = const_p1()
        cert = reedy_canonical_tower(R, tau)
        bad = DiagPostnikovCert(cert.base, cert.stages, identity_nat(tau.target))
        res = verify_diag_postnikov_cert(bad)
        assert not res.ok
        assert "claimed composite" in res.reason

    @pytest.mark.parametrize("seed", range(940, 950))
    def test_random_towers_and_cells(self, seed):
        rng = random.Random(seed)
        R = rand_reedy(rng)
        field = RATIONAL if seed % 4 == 0 else F101
        Phi = rand_diagram(R.cat, field, rng, max_top=2, max_dim=2)
        Psi = rand_diagram(R.cat, field, rng, max_top=2, max_dim=2)
        tau = rand_nat(Phi, Psi, rng)
        cert = reedy_canonical_tower(R, tau)
        res = verify_diag_postnikov_cert(cert)
        assert res.ok, res.reason
        cell = reedy_canonical_cells(R, tau)
        res = verify_diag_cell_cert(cell)
        assert res.ok, res.reason


class TestTransposedLifting:
    @pytest.mark.parametrize("seed", range(1300, 1308))
    def test_solvability_transposes(self, seed):
        rng = random.Random(seed)
        R = rand_reedy(rng)
        r = rng.choice(R.cat.objects)
        Phi = rand_diagram(R.cat, F101, rng, max_top=2, max_dim=2)
        Psi = rand_diagram(R.cat, F101, rng, max_top=2, max_dim=2)
        tau = rand_nat(Phi, Psi, rng)
        rel = rel_matching(R, tau, r)
        i = gen_chain_map(GenRef("p", rng.randrange(1, 3)), F101)
        sq = rand_commuting_square(i, rel.map, rng)
        nat_sq, gen, rel2 = reedy_transpose_square(
            R, tau, r, i, sq.top, sq.bottom, rel=rel
        )
        direct = solve_lift(sq)
        transposed = solve_lift_nat(nat_sq)
        assert (direct is None) == (transposed is None)

    def test_planted_square_lifts_both_ways(self):
        rng = random.Random(7)
        R, tau, p1 = const_p1()
        rel = rel_matching(R, tau, "1")
        i = gen_chain_map(GenRef("p", 2), F101)
        c = rand_map(i.target, rel.map.source, rng)
        sq = make_square(i, rel.map, c @ i, rel.map @ c)
        nat_sq, gen, rel2 = reedy_transpose_square(
            R, tau, "1", i, sq.top, sq.bottom, rel=rel
        )
        assert solve_lift(sq) is not None
        ell_nat = solve_lift_nat(nat_sq)
        assert ell_nat is not None
        # slice out the identity block: it solves the chain-level square
        full = gen.full.elems["1"]
        j = full.index(R.cat.ids["1"])
        B = i.target
        comps = []
        for n in range(max(B.top, tau.source.at["1"].top) + 1):
            block = ell_nat.comps["1"].comp(n)
            comps.append(block.col_slice(j * B.dim(n), (j + 1) * B.dim(n)))
        from chaintower.complexes import ChainMap

        ell = ChainMap(B, tau.source.at["1"], comps)
        assert ell @ i == sq.top
        assert rel.map @ ell == sq.bottom

    def test_noncommuting_input_rejected(self):
        R, tau, p1 = const_p1()
        rel = rel_matching(R, tau, "1")
        D = disc(F101, 1)
        i = identity_map(D)
        top = identity_map(D)
        bottom = zero_map(D, rel.map.target)
        # the stage map is nonzero on top, so this square cannot commute
        m1 = rel.map.comp(1)
        assert m1 != Matrix.zeros(F101, m1.rows, m1.cols)
        with pytest.raises(ValidationFailure):
            reedy_transpose_square(R, tau, "1", i, top, bottom, rel=rel)
