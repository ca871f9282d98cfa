"""Map classification and lifting problems for commutative squares.

A lift for the square

        A --top--> X
        |          |
      left       right
        v          v
        B -bottom> Y

is a chain map c: B -> X with c . left = top and right . c = bottom. All
degreewise conditions plus the chain-map condition on c form one joint
linear system, solved exactly; inconsistency means no lift exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complexes import ChainComplex, ChainMap, homology_map, is_degreewise_mono
from .errors import BadShape, InternalCheckFailed, NotACommutingSquare
from .linalg import Matrix, is_invertible, kron, np_identity, rank, try_solve


@dataclass(frozen=True)
class Classification:
    cofibration: bool
    fibration: bool
    weak_equivalence: bool

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
        }


def classify(f: ChainMap) -> Classification:
    """Cofibration: degreewise injective. Fibration: surjective in degrees
    >= 1. Weak equivalence: induces isomorphisms on all homology."""
    cof = is_degreewise_mono(f)
    fib = all(rank(f.comp(n)) == f.target.dim(n) for n in range(1, f.target.top + 1))
    weq = all(is_invertible(m) for m in homology_map(f))
    return Classification(cof, fib, weq)


@dataclass(frozen=True)
class SquareProblem:
    left: ChainMap
    right: ChainMap
    top: ChainMap
    bottom: ChainMap


def make_square(left: ChainMap, right: ChainMap, top: ChainMap, bottom: ChainMap) -> SquareProblem:
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
    return SquareProblem(left, right, top, bottom)


def solve_lift(square: SquareProblem) -> ChainMap | None:
    """A diagonal for the square, or None when the joint system is infeasible.

    Unknowns are the entries of every component c_n: B_n -> X_n, stacked
    column-major degree by degree. Equations: c_n left_n = top_n,
    right_n c_n = bottom_n, and d^X c_n = c_{n-1} d^B.
    """
    B = square.left.target
    X = square.right.source
    field = B.field
    width = max(B.top, X.top) + 1
    sizes = [X.dim(n) * B.dim(n) for n in range(width)]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    total = offsets[-1]

    rows: list[np.ndarray] = []
    rhs_rows: list[np.ndarray] = []

    def emit(blocks: dict[int, np.ndarray], rhs: Matrix, nrows: int) -> None:
        if nrows == 0:
            return
        row = np.array(Matrix.zeros(field, nrows, total).data)
        for deg, blk in blocks.items():
            if blk.size:
                row[:, offsets[deg] : offsets[deg + 1]] = blk
        rows.append(row)
        rhs_rows.append(np.array(rhs.data).reshape((nrows, 1), order="F"))

    for n in range(width):
        a_n = square.top.comp(n)
        f_n = square.left.comp(n)
        g_n = square.right.comp(n)
        b_n = square.bottom.comp(n)
        xd, bd = X.dim(n), B.dim(n)
        ad = square.left.source.dim(n)
        yd = square.right.target.dim(n)
        # c_n . f_n = a_n
        if xd * ad:
            blk = kron(field, np.array(f_n.data.T), np_identity(field, xd))
            emit({n: blk}, a_n, xd * ad)
        # g_n . c_n = b_n
        if yd * bd:
            blk = kron(field, np_identity(field, bd), np.array(g_n.data))
            emit({n: blk}, b_n, yd * bd)
        # d^X c_n = c_{n-1} d^B
        if n >= 1:
            xprev = X.dim(n - 1)
            if xprev * bd:
                blocks: dict[int, np.ndarray] = {}
                blocks[n] = kron(field, np_identity(field, bd), np.array(X.d(n).data))
                if sizes[n - 1]:
                    blocks[n - 1] = -kron(field, np.array(B.d(n).data.T), np_identity(field, xprev))
                    if field.kind == "prime":
                        blocks[n - 1] %= field.p
                emit(blocks, Matrix.zeros(field, xprev, bd), xprev * bd)

    if not rows:
        sol = Matrix.zeros(field, total, 1)
    else:
        Amat = Matrix(field, np.vstack(rows)) if len(rows) > 1 else Matrix(field, rows[0])
        rhs = Matrix(field, np.vstack(rhs_rows)) if len(rhs_rows) > 1 else Matrix(field, rhs_rows[0])
        sol = try_solve(Amat, rhs)
        if sol is None:
            return None

    comps = []
    for n in range(width):
        xd, bd = X.dim(n), B.dim(n)
        seg = np.array(sol.data[offsets[n] : offsets[n + 1], 0]).reshape((xd, bd), order="F")
        comps.append(Matrix(field, seg))
    c = ChainMap(B, X, comps)
    if (c @ square.left) != square.top or (square.right @ c) != square.bottom:
        raise InternalCheckFailed("solver produced a non-lift")
    return c


def llp_against(f: ChainMap, squares: Sequence[SquareProblem]) -> bool:
    """True when f lifts on the left in every given square (f must be each
    square's left map)."""
    for sq in squares:
        if sq.left != f:
            raise BadShape("square's left map differs from f")
        if solve_lift(sq) is None:
            return False
    return True


def rlp_against(g: ChainMap, squares: Sequence[SquareProblem]) -> bool:
    """True when g lifts on the right in every given square (g must be each
    square's right map)."""
    for sq in squares:
        if sq.right != g:
            raise BadShape("square's right map differs from g")
        if solve_lift(sq) is None:
            return False
    return True
