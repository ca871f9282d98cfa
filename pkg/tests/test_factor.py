from __future__ import annotations

import random

from chaintower.certificates import GenRef, gen_chain_map, verify_postnikov_cert
from chaintower.complexes import (
    disc,
    identity_map,
    is_degreewise_mono,
    is_quasi_iso,
    make_complex,
    make_map,
    sphere,
    zero_complex,
    zero_map,
)
from chaintower.factor import factor_acyclic_fibration, factor_fibration
from chaintower.fields import F101, RATIONAL, FieldSpec
from chaintower.lifting import classify
from chaintower.linalg import Matrix
from chaintower.randgen import rand_complex, rand_map, rand_mono

F = FieldSpec("prime", 5)


def _check_z(f):
    res = factor_acyclic_fibration(f)
    assert res.side == "z"
    assert verify_postnikov_cert(res.cert).ok
    assert (res.right @ res.left) == f
    assert is_degreewise_mono(res.left)
    cls = classify(res.right)
    assert cls.acyclic_fibration
    assert all(g.family == "q" for st in res.cert.stages for g in st.gens)
    return res


def _check_x(f):
    res = factor_fibration(f)
    assert res.side == "x"
    assert verify_postnikov_cert(res.cert).ok
    assert (res.right @ res.left) == f
    assert is_degreewise_mono(res.left)
    assert is_quasi_iso(res.left)
    assert classify(res.right).fibration
    assert all(g.family == "p" for st in res.cert.stages for g in st.gens)
    return res


# -- surjective-quasi-iso side, frozen cases -------------------------------


def test_z_sphere_to_zero():
    f = zero_map(sphere(F, 1), zero_complex(F))
    res = _check_z(f)
    assert len(res.cert.stages) == 1
    st = res.cert.stages[0]
    assert st.gens == (GenRef("q", 2),)
    assert st.obj.dims == (0, 1, 1)
    assert res.left.comp(1) == Matrix.build(F, [[1]])


def test_z_identity_on_zero_complex():
    f = identity_map(zero_complex(F))
    res = _check_z(f)
    assert res.cert.stages == ()
    assert res.left == f
    assert res.right == f


def test_z_identity_on_circle():
    f = identity_map(sphere(F, 1))
    res = _check_z(f)
    assert len(res.cert.stages) == 1
    st = res.cert.stages[0]
    assert st.obj.dims == (0, 2, 1)
    assert st.obj.d(2) == Matrix.build(F, [[0], [1]])
    assert res.left.comp(1) == Matrix.build(F, [[1], [1]])


def test_z_identity_on_point():
    f = identity_map(sphere(F, 0))
    res = _check_z(f)
    assert len(res.cert.stages) == 1
    assert res.cert.stages[0].gens == (GenRef("q", 1),)
    assert res.cert.stages[0].obj.dims == (2, 1)
    assert res.left.comp(0) == Matrix.build(F, [[1], [1]])


def test_z_collapse_of_disc():
    f = gen_chain_map(GenRef("p", 2), F)
    res = _check_z(f)
    # one two-step block per basis element of the source, degrees 1 and 2
    assert [st.gens for st in res.cert.stages] == [(GenRef("q", 2),), (GenRef("q", 3),)]
    assert res.cert.stages[-1].obj.dims == (0, 1, 3, 1)


# -- positive-surjection side, frozen cases --------------------------------


def test_x_zero_to_point():
    f = zero_map(zero_complex(F), sphere(F, 0))
    res = _check_x(f)
    assert len(res.cert.stages) == 1
    st = res.cert.stages[0]
    assert st.gens == (GenRef("p", 0),)
    assert st.obj.dims == (0,)
    assert res.right == gen_chain_map(GenRef("p", 0), F)


def test_x_identity_on_circle():
    f = identity_map(sphere(F, 1))
    res = _check_x(f)
    assert res.cert.stages == ()
    assert res.left == f
    assert res.right == f


def test_x_circle_to_zero():
    f = zero_map(sphere(F, 1), zero_complex(F))
    res = _check_x(f)
    assert len(res.cert.stages) == 1
    st = res.cert.stages[0]
    assert st.gens == (GenRef("p", 2),)
    assert st.obj.dims == (0, 1)
    assert res.left.comp(1) == Matrix.build(F, [[1]])


def test_x_interval_to_zero_reuses_injective_tower():
    # the source is contractible but has no injective map to the target,
    # so the two-step blocks get re-expressed as pairs of collapse stages
    f = zero_map(disc(F, 1), zero_complex(F))
    res = _check_x(f)
    assert [st.gens for st in res.cert.stages] == [
        (GenRef("p", 2),),
        (GenRef("p", 1),),
        (GenRef("p", 3),),
        (GenRef("p", 2),),
    ]
    assert res.left.target.dims == (1, 2, 1)


def test_x_point_inclusion_into_two_points():
    # two components in the target, only one reached: degree-0 classes drop
    two = make_complex(F, [2], [])
    f = make_map(sphere(F, 0), two, [Matrix.build(F, [[1], [0]])])
    res = _check_x(f)
    assert any(g == GenRef("p", 0) for st in res.cert.stages for g in st.gens)
    assert res.right.source.dims == (1,)


def test_x_kills_excess_top_homology():
    # identity-like inclusion into a target with an extra degree-2 class
    tgt = make_complex(F, [0, 0, 1], [Matrix.zeros(F, 0, 0), Matrix.zeros(F, 0, 1)])
    f = zero_map(zero_complex(F), tgt)
    res = _check_x(f)
    # the excess class becomes a boundary via one new degree-2 block
    assert res.cert.stages[-1].gens == (GenRef("p", 2),)
    assert res.right.source.dims == (0, 1, 1)


def test_x_rational_example():
    f = zero_map(sphere(RATIONAL, 2), zero_complex(RATIONAL))
    res = _check_x(f)
    assert res.cert.stages[0].gens == (GenRef("p", 3),)


def test_z_rational_example():
    f = identity_map(sphere(RATIONAL, 0))
    res = _check_z(f)
    assert res.cert.stages[0].obj.dims == (2, 1)


# -- seeded corpora ---------------------------------------------------------


def test_z_seeded_maps():
    for seed in range(40):
        rng = random.Random(1000 + seed)
        X = rand_complex(F101, rng, max_top=3, max_dim=3)
        Y = rand_complex(F101, rng, max_top=3, max_dim=3)
        _check_z(rand_map(X, Y, rng))


def test_x_seeded_maps():
    for seed in range(40):
        rng = random.Random(2000 + seed)
        X = rand_complex(F101, rng, max_top=3, max_dim=3)
        Y = rand_complex(F101, rng, max_top=3, max_dim=3)
        _check_x(rand_map(X, Y, rng))


def test_x_seeded_monos():
    for seed in range(10):
        rng = random.Random(3000 + seed)
        X = rand_complex(F101, rng, max_top=2, max_dim=3)
        _check_x(rand_mono(X, rng))


def test_x_seeded_zero_maps():
    for seed in range(10):
        rng = random.Random(4000 + seed)
        X = rand_complex(F101, rng, max_top=2, max_dim=3)
        Y = rand_complex(F101, rng, max_top=2, max_dim=3)
        _check_x(zero_map(X, Y))


def test_seeded_rational_maps():
    for seed in range(6):
        rng = random.Random(5000 + seed)
        X = rand_complex(RATIONAL, rng, max_top=2, max_dim=2)
        Y = rand_complex(RATIONAL, rng, max_top=2, max_dim=2)
        f = rand_map(X, Y, rng)
        _check_z(f)
        _check_x(f)


def test_factorizations_are_deterministic():
    rng = random.Random(99)
    X = rand_complex(F101, rng, max_top=3, max_dim=3)
    Y = rand_complex(F101, rng, max_top=3, max_dim=3)
    f = rand_map(X, Y, rng)
    a = factor_acyclic_fibration(f)
    b = factor_acyclic_fibration(f)
    assert a.left == b.left and a.cert == b.cert
    c = factor_fibration(f)
    d = factor_fibration(f)
    assert c.left == d.left and c.cert == d.cert
