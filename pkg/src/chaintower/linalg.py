"""Deterministic exact linear algebra over F_p and Q.

Matrices are dense, immutable, and carry their field. Over a prime field
with small modulus entries live in int64 numpy arrays reduced mod p
(residue * residue fits int64 for p <= 2^20, so dot products are exact);
larger moduli and rational matrices use object arrays of Python ints /
Fractions. Every basis-producing routine makes positional, greedy choices,
so identical inputs give identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BadShape, DependentInput, FieldMismatch, Infeasible
from .fields import FieldSpec

# residues below this bound multiply without overflowing int64 dot products
_INT64_MODULUS_LIMIT = 1 << 20


def _dtype_for(field: FieldSpec):
    if field.kind == "prime" and field.p <= _INT64_MODULUS_LIMIT:
        return np.int64
    return object


def _reduced(arr: np.ndarray, field: FieldSpec) -> np.ndarray:
    if field.kind == "prime":
        return arr % field.p
    return arr


class Matrix:
    """Immutable exact matrix with explicit shape, including zero dims."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data: np.ndarray):
        if not isinstance(data, np.ndarray) or data.ndim != 2:
            raise BadShape("matrix data must be a 2-d array")
        self.field = field
        self.data = data
        data.setflags(write=False)

    # -- constructors ------------------------------------------------

    @staticmethod
    def build(field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        """Build from nested scalar entries (ints, Fractions, or strings)."""
        nrows = len(rows)
        if nrows == 0:
            if cols is None:
                cols = 0
            return Matrix.zeros(field, 0, cols)
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise BadShape("ragged rows")
        ncols = widths.pop()
        if cols is not None and cols != ncols:
            raise BadShape(f"expected {cols} columns, got {ncols}")
        if ncols == 0:
            return Matrix.zeros(field, nrows, 0)
        arr = np.empty((nrows, ncols), dtype=_dtype_for(field))
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                arr[i, j] = field.parse(x)
        return Matrix(field, arr)

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Matrix":
        dt = _dtype_for(field)
        if dt == object:
            arr = np.zeros((rows, cols), dtype=object)
            arr[...] = 0
        else:
            arr = np.zeros((rows, cols), dtype=dt)
        return Matrix(field, arr)

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Matrix":
        m = Matrix.zeros(field, n, n)
        arr = np.array(m.data)
        for i in range(n):
            arr[i, i] = 1
        return Matrix(field, arr)

    # -- basic shape / access ----------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def entry(self, i: int, j: int):
        return self.data[i, j]

    def to_lists(self) -> list[list[str]]:
        return [[self.field.fmt(self.data[i, j]) for j in range(self.cols)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        if self.data.size == 0:
            return True
        return bool(np.all(self.data == 0))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T.copy())

    def take_rows(self, idx: Sequence[int]) -> "Matrix":
        idx = list(idx)
        if not idx:
            return Matrix.zeros(self.field, 0, self.cols)
        return Matrix(self.field, self.data[idx, :].copy())

    def take_cols(self, idx: Sequence[int]) -> "Matrix":
        idx = list(idx)
        if not idx:
            return Matrix.zeros(self.field, self.rows, 0)
        return Matrix(self.field, self.data[:, idx].copy())

    def row_slice(self, lo: int, hi: int) -> "Matrix":
        return Matrix(self.field, self.data[lo:hi, :].copy())

    def col_slice(self, lo: int, hi: int) -> "Matrix":
        return Matrix(self.field, self.data[:, lo:hi].copy())

    # -- arithmetic ---------------------------------------------------

    def _check_same_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field.label()} vs {other.field.label()}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.cols != other.rows:
            raise BadShape(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if self.cols == 0:
            # np.dot on empty object arrays would produce float zeros
            return Matrix.zeros(self.field, self.rows, other.cols)
        out = np.dot(self.data, other.data)
        return Matrix(self.field, _reduced(out, self.field))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.data.shape != other.data.shape:
            raise BadShape("shape mismatch in addition")
        return Matrix(self.field, _reduced(self.data + other.data, self.field))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.data.shape != other.data.shape:
            raise BadShape("shape mismatch in subtraction")
        return Matrix(self.field, _reduced(self.data - other.data, self.field))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, _reduced(-self.data, self.field))

    def scale(self, c) -> "Matrix":
        c = self.field.parse(c)
        return Matrix(self.field, _reduced(self.data * c, self.field))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.data.shape != other.data.shape:
            return False
        if self.data.size == 0:
            return True
        return bool(np.all(self.data == other.data))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Matrix({self.field.label()}, {self.rows}x{self.cols})"


# -- stacking ----------------------------------------------------------


def _common_field(mats: Sequence[Matrix]) -> FieldSpec:
    field = mats[0].field
    for m in mats[1:]:
        if m.field != field:
            raise FieldMismatch("mixed fields in stack")
    return field


def hstack(mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    if not mats:
        raise BadShape("hstack of nothing")
    field = _common_field(mats)
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise BadShape("hstack with differing row counts")
    cols = sum(m.cols for m in mats)
    out = Matrix.zeros(field, rows, cols)
    arr = np.array(out.data)
    at = 0
    for m in mats:
        if m.cols:
            arr[:, at : at + m.cols] = m.data
        at += m.cols
    return Matrix(field, arr)


def vstack(mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    if not mats:
        raise BadShape("vstack of nothing")
    field = _common_field(mats)
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise BadShape("vstack with differing column counts")
    rows = sum(m.rows for m in mats)
    out = Matrix.zeros(field, rows, cols)
    arr = np.array(out.data)
    at = 0
    for m in mats:
        if m.rows:
            arr[at : at + m.rows, :] = m.data
        at += m.rows
    return Matrix(field, arr)


def block_diag(field: FieldSpec, mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = Matrix.zeros(field, rows, cols)
    arr = np.array(out.data)
    r = c = 0
    for m in mats:
        if m.field != field:
            raise FieldMismatch("mixed fields in block_diag")
        if m.rows and m.cols:
            arr[r : r + m.rows, c : c + m.cols] = m.data
        r += m.rows
        c += m.cols
    return Matrix(field, arr)


# -- elimination --------------------------------------------------------


@dataclass(frozen=True)
class RrefResult:
    """Reduced row echelon form R = T @ M with T invertible."""

    R: Matrix
    pivots: tuple[int, ...]
    T: Matrix


def rref(M: Matrix) -> RrefResult:
    """Deterministic reduced row echelon form.

    Scans columns left to right; the pivot is the first nonzero entry at or
    below the current row. Pivot rows are normalized and every other row is
    cleared, so R is fully reduced.
    """
    field = M.field
    m, n = M.rows, M.cols
    R = np.array(M.data, copy=True)
    T = np.array(Matrix.identity(field, m).data, copy=True)
    pivots: list[int] = []
    pr = 0
    for col in range(n):
        if pr == m:
            break
        sel = None
        for r in range(pr, m):
            if R[r, col] != 0:
                sel = r
                break
        if sel is None:
            continue
        if sel != pr:
            R[[pr, sel], :] = R[[sel, pr], :]
            T[[pr, sel], :] = T[[sel, pr], :]
        piv = R[pr, col]
        if piv != 1:
            iv = field.inv(piv)
            R[pr, :] = _reduced(R[pr, :] * iv, field)
            T[pr, :] = _reduced(T[pr, :] * iv, field)
        colv = np.array(R[:, col], copy=True)
        colv[pr] = 0
        hit = np.flatnonzero(colv != 0)
        if hit.size:
            R[hit, :] = _reduced(R[hit, :] - np.outer(colv[hit], R[pr, :]), field)
            T[hit, :] = _reduced(T[hit, :] - np.outer(colv[hit], T[pr, :]), field)
        pivots.append(col)
        pr += 1
    return RrefResult(Matrix(field, R), tuple(pivots), Matrix(field, T))


def rank(M: Matrix) -> int:
    return len(rref(M).pivots)


def try_solve(A: Matrix, B: Matrix) -> Matrix | None:
    """One solution X of A @ X = B, or None; free variables are set to 0."""
    A._check_same_field(B)
    if A.rows != B.rows:
        raise BadShape(f"A has {A.rows} rows, B has {B.rows}")
    rr = rref(hstack([A, B]))
    for i, pc in enumerate(rr.pivots):
        if pc >= A.cols:
            return None
    X = np.array(Matrix.zeros(A.field, A.cols, B.cols).data)
    for i, pc in enumerate(rr.pivots):
        X[pc, :] = rr.R.data[i, A.cols :]
    return Matrix(A.field, X)


def solve(A: Matrix, B: Matrix) -> Matrix:
    """Like try_solve but raises Infeasible when no solution exists."""
    X = try_solve(A, B)
    if X is None:
        raise Infeasible(f"no solution to a {A.rows}x{A.cols} system")
    return X


def kernel_basis(A: Matrix) -> Matrix:
    """Basis of the null space, columns ordered by free column index."""
    rr = rref(A)
    pivset = set(rr.pivots)
    free = [c for c in range(A.cols) if c not in pivset]
    K = np.array(Matrix.zeros(A.field, A.cols, len(free)).data)
    one = A.field.parse(1)
    for k, fc in enumerate(free):
        K[fc, k] = one
        for i, pc in enumerate(rr.pivots):
            x = -rr.R.data[i, fc]
            K[pc, k] = x % A.field.p if A.field.kind == "prime" else x
    return Matrix(A.field, K)


def image_basis(A: Matrix) -> Matrix:
    """Basis of the column space: the original columns at pivot positions."""
    return A.take_cols(rref(A).pivots)


def complement_basis(S: Matrix, inside: Matrix | None = None) -> Matrix:
    """Greedy extension of independent columns S to a basis.

    Without `inside`, candidates are standard basis vectors in index order
    and the extension reaches the full ambient space. With `inside`, the
    candidates are its columns in order and the extension reaches
    span(inside), which must contain span(S).
    """
    field = S.field
    n = S.rows
    if rank(S) != S.cols:
        raise DependentInput("columns of S are dependent")
    if inside is None:
        cands = Matrix.identity(field, n)
        target = n
    else:
        S._check_same_field(inside)
        if inside.rows != n:
            raise BadShape("inside has wrong ambient dimension")
        if try_solve(inside, S) is None:
            raise BadShape("span(S) is not contained in span(inside)")
        cands = inside
        target = rank(inside)
    chosen: list[int] = []
    cur = S
    r = S.cols
    for j in range(cands.cols):
        if r == target:
            break
        trial = hstack([cur, cands.take_cols([j])])
        r2 = rank(trial)
        if r2 > r:
            cur = trial
            r = r2
            chosen.append(j)
    return cands.take_cols(chosen)


def is_invertible(M: Matrix) -> bool:
    return M.rows == M.cols and rank(M) == M.rows


def inverse(M: Matrix) -> Matrix:
    """Inverse of a square invertible matrix."""
    if M.rows != M.cols:
        raise BadShape("inverse of a non-square matrix")
    rr = rref(M)
    if len(rr.pivots) != M.rows:
        raise Infeasible("matrix is singular")
    return rr.T


def np_identity(field: FieldSpec, n: int) -> np.ndarray:
    """Identity as a raw array in this field's dtype (for kron assembly)."""
    return np.array(Matrix.identity(field, n).data)


def kron(field: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = np.kron(A, B)
    if out.size == 0:
        dt = _dtype_for(field)
        return np.zeros(out.shape, dtype=dt)
    return _reduced(out, field)
