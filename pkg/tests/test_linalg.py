"""Exact linear algebra: frozen small cases plus algebraic properties."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaintower.errors import BadField, DependentInput, Infeasible
from chaintower.fields import F101, RATIONAL, FieldSpec, field_from_label
from chaintower.linalg import (
    Matrix,
    block_diag,
    complement_basis,
    hstack,
    image_basis,
    inverse,
    is_invertible,
    kernel_basis,
    rank,
    rref,
    solve,
    try_solve,
    vstack,
)

F5 = FieldSpec("prime", 5)
F3 = FieldSpec("prime", 3)


def M(field, rows, cols=None):
    return Matrix.build(field, rows, cols)


class TestFields:
    def test_prime_validation(self):
        with pytest.raises(BadField):
            FieldSpec("prime", 4)
        with pytest.raises(BadField):
            FieldSpec("prime", 1)
        with pytest.raises(BadField):
            FieldSpec("prime", 2**31 + 11)
        assert FieldSpec("prime", 2).p == 2

    def test_labels(self):
        assert field_from_label("prime:101") == F101
        assert field_from_label("rational") == RATIONAL
        with pytest.raises(BadField):
            field_from_label("real")

    def test_canonical_scalars(self):
        assert F5.parse("7") == 2
        assert F5.fmt(F5.parse("-1")) == "4"
        assert RATIONAL.parse("3/2") == Fraction(3, 2)
        assert RATIONAL.fmt(Fraction(-6, 4)) == "-3/2"
        assert F5.inv(2) == 3
        assert RATIONAL.inv(Fraction(3, 2)) == Fraction(2, 3)


class TestRref:
    def test_identity_is_fixed(self):
        rr = rref(Matrix.identity(F5, 2))
        assert rr.R == Matrix.identity(F5, 2)
        assert rr.pivots == (0, 1)

    def test_rank_one_mod_5(self):
        # second row is 3 * first row mod 5: [1,2] doubled ... frozen by hand:
        # [[2,4],[1,2]] -> normalize row0 by 2^-1=3 -> [1,2]; row1 -= row0 -> 0
        rr = rref(M(F5, [[2, 4], [1, 2]]))
        assert rr.R == M(F5, [[1, 2], [0, 0]])
        assert rr.pivots == (0,)

    def test_zero_matrix(self):
        rr = rref(Matrix.zeros(F5, 3, 2))
        assert rr.pivots == ()
        assert rr.R == Matrix.zeros(F5, 3, 2)

    def test_transform_reproduces_rref(self):
        A = M(F5, [[2, 4, 1], [1, 2, 3], [0, 1, 1]])
        rr = rref(A)
        assert rr.T @ A == rr.R
        assert is_invertible(rr.T)

    def test_rational_pivot_normalization(self):
        A = M(RATIONAL, [["3/2", "1"], ["0", "0"]])
        rr = rref(A)
        assert rr.R == M(RATIONAL, [["1", "2/3"], ["0", "0"]])


class TestSolve:
    def test_identity_system(self):
        B = M(F5, [[1, 2], [3, 4]])
        assert solve(Matrix.identity(F5, 2), B) == B

    def test_infeasible(self):
        A = Matrix.zeros(F5, 1, 2)
        B = M(F5, [[3]])
        assert try_solve(A, B) is None
        with pytest.raises(Infeasible):
            solve(A, B)

    def test_free_variables_default_to_zero(self):
        A = M(F5, [[1, 1]])
        B = M(F5, [[3]])
        assert solve(A, B) == M(F5, [[3], [0]])

    def test_wide_rational(self):
        A = M(RATIONAL, [[2, 0, 1], [0, 3, 0]])
        B = M(RATIONAL, [[5], [6]])
        X = solve(A, B)
        assert A @ X == B
        assert X == M(RATIONAL, [["5/2"], ["2"], ["0"]])


class TestKernelImage:
    def test_kernel_of_identity_is_trivial(self):
        assert kernel_basis(Matrix.identity(F5, 3)).cols == 0

    def test_kernel_of_sum_functional(self):
        K = kernel_basis(M(RATIONAL, [[1, 1]]))
        assert K == M(RATIONAL, [[-1], [1]])

    def test_kernel_of_zero_map(self):
        K = kernel_basis(Matrix.zeros(F5, 1, 2))
        assert K == Matrix.identity(F5, 2)

    def test_image_identity(self):
        assert image_basis(Matrix.identity(F5, 2)) == Matrix.identity(F5, 2)

    def test_image_zero(self):
        assert image_basis(Matrix.zeros(F5, 2, 2)).cols == 0

    def test_image_keeps_original_columns(self):
        A = M(F5, [[1, 2], [2, 4]])
        assert image_basis(A) == M(F5, [[1], [2]])


class TestComplement:
    def test_extends_to_standard_basis(self):
        S = M(F5, [[1], [0]])
        assert complement_basis(S) == M(F5, [[0], [1]])

    def test_full_basis_needs_nothing(self):
        assert complement_basis(Matrix.identity(F5, 2)).cols == 0

    def test_prefers_lowest_index(self):
        S = M(F5, [[1], [1]])
        assert complement_basis(S) == M(F5, [[1], [0]])

    def test_dependent_input_rejected(self):
        with pytest.raises(DependentInput):
            complement_basis(M(F5, [[1, 2], [2, 4]]))

    def test_inside_restricts_candidates(self):
        S = M(RATIONAL, [[1], [1], [0]])
        inside = M(RATIONAL, [[1, 0], [1, 1], [0, 0]])
        C = complement_basis(S, inside=inside)
        assert C == M(RATIONAL, [[0], [1], [0]])
        assert rank(hstack([S, C])) == rank(inside)

    def test_inside_must_contain_s(self):
        S = M(RATIONAL, [[0], [0], [1]])
        inside = M(RATIONAL, [[1], [0], [0]])
        with pytest.raises(Exception):
            complement_basis(S, inside=inside)


class TestStacking:
    def test_block_diag(self):
        D = block_diag(F5, [Matrix.identity(F5, 1), M(F5, [[2, 3]])])
        assert D == M(F5, [[1, 0, 0], [0, 2, 3]])

    def test_stack_shapes(self):
        A = Matrix.zeros(F5, 2, 3)
        assert hstack([A, Matrix.zeros(F5, 2, 0)]).cols == 3
        assert vstack([A, Matrix.zeros(F5, 0, 3)]).rows == 2

    def test_inverse_roundtrip(self):
        A = M(F5, [[1, 2], [3, 4]])
        assert A @ inverse(A) == Matrix.identity(F5, 2)


def _matrices(field, max_dim=4):
    dims = st.tuples(st.integers(0, max_dim), st.integers(0, max_dim))
    if field.is_prime:
        scal = st.integers(0, field.p - 1)
    else:
        scal = st.fractions(min_value=-4, max_value=4, max_denominator=3)
    return dims.flatmap(
        lambda rc: st.lists(
            st.lists(scal, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]
        ).map(lambda rows: Matrix.build(field, rows, cols=rc[1]))
    )


@settings(max_examples=60, deadline=None)
@given(_matrices(F5))
def test_rank_nullity(A):
    assert rank(A) + kernel_basis(A).cols == A.cols


@settings(max_examples=60, deadline=None)
@given(_matrices(RATIONAL, max_dim=3))
def test_kernel_columns_are_killed(A):
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert rank(K) == K.cols


@settings(max_examples=60, deadline=None)
@given(_matrices(F3))
def test_solve_solves_or_is_truly_infeasible(A):
    # target built from A's columns is always solvable
    ones = Matrix.build(F3, [[1] for _ in range(A.cols)], cols=1) if A.cols else Matrix.zeros(F3, 0, 1)
    B = A @ ones
    X = solve(A, B)
    assert A @ X == B


@settings(max_examples=40, deadline=None)
@given(_matrices(F3, max_dim=3))
def test_infeasible_confirmed_by_enumeration(A):
    # brute force over all vectors of F_3^cols for a random-ish target
    B = Matrix.build(F3, [[1]] * A.rows, cols=1) if A.rows else Matrix.zeros(F3, 0, 1)
    X = try_solve(A, B)
    if X is not None:
        assert A @ X == B
        return
    vecs = [[]]
    for _ in range(A.cols):
        vecs = [v + [c] for v in vecs for c in range(3)]
    for v in vecs:
        cand = Matrix.build(F3, [[c] for c in v], cols=1)
        assert A @ cand != B


@settings(max_examples=40, deadline=None)
@given(_matrices(F5, max_dim=4))
def test_complement_completes_a_basis(A):
    img = image_basis(A)
    C = complement_basis(img)
    assert rank(hstack([img, C])) == A.rows
    assert img.cols + C.cols == A.rows
