"""Bounded nonnegatively graded chain complexes and chain maps.

A complex stores its dimension in each degree 0..top and the differentials
d_n: degree n -> degree n-1 for n = 1..top. Degrees outside that window are
zero. Homology data fixes, once per complex, a basis of cycles split into
chosen class representatives plus boundaries, and a complement of noncycles,
which later constructions reuse for coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadDegree,
    BadShape,
    FieldMismatch,
    InternalCheckFailed,
    NotAChainMap,
    NotAComplex,
)
from .fields import FieldSpec
from .linalg import (
    Matrix,
    block_diag,
    complement_basis,
    hstack,
    image_basis,
    inverse,
    is_invertible,
    kernel_basis,
    rank,
    solve,
    try_solve,
    vstack,
)


class ChainComplex:
    """Finite-dimensional complex concentrated in degrees 0..top."""

    __slots__ = ("field", "dims", "diff")

    def __init__(self, field: FieldSpec, dims: Sequence[int], diff: Sequence[Matrix]):
        dims = tuple(int(x) for x in dims)
        diff = tuple(diff)
        if not dims:
            raise NotAComplex("dims must cover at least degree 0")
        if any(d < 0 for d in dims):
            raise NotAComplex("negative dimension")
        if len(diff) != max(len(dims) - 1, 0):
            raise NotAComplex(f"expected {len(dims) - 1} differentials, got {len(diff)}")
        for n, m in enumerate(diff, start=1):
            if m.field != field:
                raise FieldMismatch("differential over the wrong field")
            if (m.rows, m.cols) != (dims[n - 1], dims[n]):
                raise NotAComplex(
                    f"d_{n} must be {dims[n - 1]}x{dims[n]}, got {m.rows}x{m.cols}"
                )
        for n in range(2, len(dims)):
            prod = diff[n - 2] @ diff[n - 1]
            if not prod.is_zero():
                raise NotAComplex(f"d_{n - 1} d_{n} != 0")
        self.field = field
        self.dims = dims
        self.diff = diff

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def dim(self, n: int) -> int:
        if 0 <= n <= self.top:
            return self.dims[n]
        return 0

    def d(self, n: int) -> Matrix:
        """Differential out of degree n, as a matrix of shape dim(n-1) x dim(n)."""
        if 1 <= n <= self.top:
            return self.diff[n - 1]
        return Matrix.zeros(self.field, self.dim(n - 1), self.dim(n))

    def total_dim(self) -> int:
        return sum(self.dims)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (
            self.field == other.field
            and self.dims == other.dims
            and all(a == b for a, b in zip(self.diff, other.diff))
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"ChainComplex({self.field.label()}, dims={self.dims})"


def make_complex(field: FieldSpec, dims: Sequence[int], diff: Sequence[Matrix]) -> ChainComplex:
    return ChainComplex(field, dims, diff)


def _pruned_top(dims: Sequence[int]) -> int:
    top = len(dims) - 1
    while top > 0 and dims[top] == 0:
        top -= 1
    return top


def zero_complex(field: FieldSpec) -> ChainComplex:
    return ChainComplex(field, (0,), ())


def disc(field: FieldSpec, n: int) -> ChainComplex:
    """Contractible two-step complex with identity differential from degree n."""
    if n < 1:
        raise BadDegree(f"disc needs degree >= 1, got {n}")
    dims = [0] * (n + 1)
    dims[n] = 1
    dims[n - 1] = 1
    diff = [Matrix.zeros(field, dims[k - 1], dims[k]) for k in range(1, n)]
    diff.append(Matrix.identity(field, 1))
    return ChainComplex(field, dims, diff)


def sphere(field: FieldSpec, n: int) -> ChainComplex:
    """One-dimensional complex concentrated in degree n."""
    if n < 0:
        raise BadDegree(f"sphere needs degree >= 0, got {n}")
    dims = [0] * (n + 1)
    dims[n] = 1
    diff = [Matrix.zeros(field, dims[k - 1], dims[k]) for k in range(1, n + 1)]
    return ChainComplex(field, dims, diff)


class ChainMap:
    """Degreewise linear map commuting with the differentials."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: ChainComplex, target: ChainComplex, comps: Sequence[Matrix]):
        if source.field != target.field:
            raise FieldMismatch("chain map between different fields")
        width = max(source.top, target.top) + 1
        comps = list(comps)
        if len(comps) > width:
            for m in comps[width:]:
                if m.data.size > 0:
                    raise NotAChainMap("component beyond both complexes carries entries")
            comps = comps[:width]
        while len(comps) < width:
            n = len(comps)
            comps.append(Matrix.zeros(source.field, target.dim(n), source.dim(n)))
        for n, m in enumerate(comps):
            if m.field != source.field:
                raise FieldMismatch("component over the wrong field")
            if (m.rows, m.cols) != (target.dim(n), source.dim(n)):
                raise NotAChainMap(
                    f"component {n} must be {target.dim(n)}x{source.dim(n)},"
                    f" got {m.rows}x{m.cols}"
                )
        for n in range(1, width + 1):
            lhs = target.d(n) @ comps[n] if n < width else Matrix.zeros(
                source.field, target.dim(n - 1), source.dim(n)
            )
            rhs = comps[n - 1] @ source.d(n)
            if lhs != rhs:
                raise NotAChainMap(f"square at degree {n} does not commute")
        self.source = source
        self.target = target
        self.comps = tuple(comps)

    def comp(self, n: int) -> Matrix:
        if 0 <= n < len(self.comps):
            return self.comps[n]
        return Matrix.zeros(self.source.field, self.target.dim(n), self.source.dim(n))

    @property
    def field(self) -> FieldSpec:
        return self.source.field

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composite self after other."""
        if other.target != self.source:
            raise BadShape("composition of non-composable chain maps")
        width = max(other.source.top, self.target.top) + 1
        comps = [self.comp(n) @ other.comp(n) for n in range(width)]
        return ChainMap(other.source, self.target, comps)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.source != other.source or self.target != other.target:
            raise BadShape("sum of maps with different ends")
        return ChainMap(self.source, self.target, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        if self.source != other.source or self.target != other.target:
            raise BadShape("difference of maps with different ends")
        return ChainMap(self.source, self.target, [a - b for a, b in zip(self.comps, other.comps)])

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and all(a == b for a, b in zip(self.comps, other.comps))
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"ChainMap({self.source.dims} -> {self.target.dims})"


def make_map(source: ChainComplex, target: ChainComplex, comps: Sequence[Matrix]) -> ChainMap:
    return ChainMap(source, target, comps)


def identity_map(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, [Matrix.identity(C.field, C.dim(n)) for n in range(C.top + 1)])


def zero_map(source: ChainComplex, target: ChainComplex) -> ChainMap:
    width = max(source.top, target.top) + 1
    return ChainMap(
        source, target, [Matrix.zeros(source.field, target.dim(n), source.dim(n)) for n in range(width)]
    )


def is_degreewise_mono(f: ChainMap) -> bool:
    return all(kernel_basis(f.comp(n)).cols == 0 for n in range(f.source.top + 1))


def is_degreewise_epi(f: ChainMap) -> bool:
    return all(rank(f.comp(n)) == f.target.dim(n) for n in range(f.target.top + 1))


# -- homology ------------------------------------------------------------


@dataclass(frozen=True)
class HomologyData:
    """Chosen bases: cycles, boundaries, class representatives, noncycles.

    reps extends boundaries to a basis of the cycles; noncycles extends
    cycles to a basis of the whole degree. betti[n] = reps[n].cols.
    """

    complex: ChainComplex
    cycles: tuple[Matrix, ...]
    boundaries: tuple[Matrix, ...]
    reps: tuple[Matrix, ...]
    noncycles: tuple[Matrix, ...]

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(m.cols for m in self.reps)

    def class_coords(self, n: int) -> Matrix:
        """Projection sending a chain to the coordinates of its homology class.

        Rows index the chosen representatives; boundaries and noncycles map
        to zero. Composing with reps[n] gives the identity.
        """
        C = self.complex
        basis = hstack([self.reps[n], self.boundaries[n], self.noncycles[n]])
        if basis.cols != C.dim(n):
            raise InternalCheckFailed("homology basis does not span")
        return inverse(basis).row_slice(0, self.reps[n].cols)


def homology(C: ChainComplex) -> HomologyData:
    cycles = []
    boundaries = []
    reps = []
    noncycles = []
    for n in range(C.top + 1):
        Z = kernel_basis(C.d(n)) if n > 0 else Matrix.identity(C.field, C.dim(0))
        B = image_basis(C.d(n + 1))
        R = complement_basis(B, inside=Z)
        N = complement_basis(Z)
        cycles.append(Z)
        boundaries.append(B)
        reps.append(R)
        noncycles.append(N)
    return HomologyData(C, tuple(cycles), tuple(boundaries), tuple(reps), tuple(noncycles))


def homology_map(
    f: ChainMap, hsrc: HomologyData | None = None, htgt: HomologyData | None = None
) -> tuple[Matrix, ...]:
    """Matrices of the induced maps on homology classes, degree by degree."""
    hsrc = hsrc if hsrc is not None else homology(f.source)
    htgt = htgt if htgt is not None else homology(f.target)
    width = max(f.source.top, f.target.top) + 1
    out = []
    for n in range(width):
        hs = hsrc.betti[n] if n <= f.source.top else 0
        ht = htgt.betti[n] if n <= f.target.top else 0
        if hs == 0 or ht == 0:
            out.append(Matrix.zeros(f.field, ht, hs))
            continue
        pushed = f.comp(n) @ hsrc.reps[n]
        X = try_solve(hstack([htgt.reps[n], htgt.boundaries[n]]), pushed)
        if X is None:
            raise InternalCheckFailed("image of a cycle failed to be a cycle")
        out.append(X.row_slice(0, ht))
    return tuple(out)


def is_quasi_iso(f: ChainMap) -> bool:
    return all(is_invertible(m) for m in homology_map(f))


# -- biproducts, pullbacks, pushouts --------------------------------------


@dataclass(frozen=True)
class Biproduct:
    obj: ChainComplex
    injections: tuple[ChainMap, ...]
    projections: tuple[ChainMap, ...]


def biproduct(field: FieldSpec, summands: Sequence[ChainComplex]) -> Biproduct:
    summands = list(summands)
    for s in summands:
        if s.field != field:
            raise FieldMismatch("biproduct over mixed fields")
    top = max((s.top for s in summands), default=0)
    dims = [sum(s.dim(n) for s in summands) for n in range(top + 1)]
    diff = [block_diag(field, [s.d(n) for s in summands]) for n in range(1, top + 1)]
    obj = ChainComplex(field, dims, diff)
    injections = []
    projections = []
    offsets = [[0] * (top + 1)]
    for s in summands:
        offsets.append([offsets[-1][n] + s.dim(n) for n in range(top + 1)])
    for i, s in enumerate(summands):
        inj = []
        proj = []
        for n in range(top + 1):
            block = Matrix.zeros(field, dims[n], s.dim(n))
            arr = np.array(block.data)
            for k in range(s.dim(n)):
                arr[offsets[i][n] + k, k] = field.parse(1)
            inj.append(Matrix(field, arr))
            proj.append(Matrix(field, arr.T.copy()))
        injections.append(ChainMap(s, obj, inj))
        projections.append(ChainMap(obj, s, proj))
    return Biproduct(obj, tuple(injections), tuple(projections))


def biproduct_map(field: FieldSpec, maps: Sequence[ChainMap]) -> tuple[ChainMap, Biproduct, Biproduct]:
    """Blockwise sum of maps, with the source and target biproducts."""
    maps = list(maps)
    src = biproduct(field, [f.source for f in maps])
    tgt = biproduct(field, [f.target for f in maps])
    width = max(src.obj.top, tgt.obj.top) + 1
    comps = [
        block_diag(field, [f.comp(n) for f in maps]) for n in range(width)
    ]
    # block_diag of components has the biproduct dims by construction
    return ChainMap(src.obj, tgt.obj, comps), src, tgt


@dataclass(frozen=True)
class PullbackResult:
    obj: ChainComplex
    leg1: ChainMap
    leg2: ChainMap

    def induce(self, u: ChainMap, v: ChainMap) -> ChainMap:
        """Map into the pullback from compatible u, v out of a common source."""
        if u.source != v.source:
            raise BadShape("induced map needs a common source")
        A = self.leg1.target
        width = self.obj.top + 1
        comps = []
        for n in range(max(width, u.source.top + 1)):
            K = vstack([self.leg1.comp(n), self.leg2.comp(n)])
            rhs = vstack([u.comp(n), v.comp(n)])
            comps.append(solve(K, rhs))
        return ChainMap(u.source, self.obj, comps)


def pullback(f: ChainMap, g: ChainMap) -> PullbackResult:
    """Pullback of f: A -> C against g: B -> C."""
    if f.target != g.target:
        raise BadShape("pullback needs a common target")
    A, B = f.source, g.source
    field = f.field
    kbases = []
    for n in range(max(A.top, B.top) + 1):
        M = hstack([f.comp(n), -(g.comp(n))])
        kbases.append(kernel_basis(M))
    top = _pruned_top([k.cols for k in kbases])
    dims = [k.cols for k in kbases[: top + 1]]
    diff = []
    for n in range(1, top + 1):
        dAB = block_diag(field, [A.d(n), B.d(n)])
        diff.append(solve(kbases[n - 1], dAB @ kbases[n]))
    obj = ChainComplex(field, dims, diff)
    leg1 = ChainMap(obj, A, [kbases[n].row_slice(0, A.dim(n)) for n in range(top + 1)])
    leg2 = ChainMap(obj, B, [kbases[n].row_slice(A.dim(n), A.dim(n) + B.dim(n)) for n in range(top + 1)])
    return PullbackResult(obj, leg1, leg2)


@dataclass(frozen=True)
class PushoutResult:
    obj: ChainComplex
    leg1: ChainMap
    leg2: ChainMap
    _section: tuple[Matrix, ...]

    def induce(self, u: ChainMap, v: ChainMap) -> ChainMap:
        """Map out of the pushout to the common target of u, v."""
        if u.target != v.target:
            raise BadShape("induced map needs a common target")
        width = max(self.obj.top, u.target.top) + 1
        comps = []
        for n in range(width):
            uv = hstack([u.comp(n), v.comp(n)])
            sec = self._section[n] if n < len(self._section) else Matrix.zeros(
                self.obj.field, uv.cols, self.obj.dim(n)
            )
            comps.append(uv @ sec)
        return ChainMap(self.obj, u.target, comps)


def pushout(f: ChainMap, g: ChainMap) -> PushoutResult:
    """Pushout of f: C -> A along g: C -> B."""
    if f.source != g.source:
        raise BadShape("pushout needs a common source")
    A, B = f.target, g.target
    field = f.field
    width = max(A.top, B.top) + 1
    sections = []
    quotients = []
    dims = []
    for n in range(width):
        span = vstack([f.comp(n), -(g.comp(n))])
        img = image_basis(span)
        comp = complement_basis(img)
        dims.append(comp.cols)
        basis = hstack([comp, img])
        q = inverse(basis).row_slice(0, comp.cols) if basis.cols else Matrix.zeros(field, 0, 0)
        if basis.cols != A.dim(n) + B.dim(n):
            raise InternalCheckFailed("pushout basis does not span")
        sections.append(comp)
        quotients.append(q)
    top = _pruned_top(dims)
    dims = dims[: top + 1]
    diff = []
    for n in range(1, top + 1):
        dAB = block_diag(field, [A.d(n), B.d(n)])
        diff.append(quotients[n - 1] @ dAB @ sections[n])
    obj = ChainComplex(field, dims, diff)
    leg1 = ChainMap(A, obj, [quotients[n].col_slice(0, A.dim(n)) for n in range(top + 1)])
    leg2 = ChainMap(
        B, obj, [quotients[n].col_slice(A.dim(n), A.dim(n) + B.dim(n)) for n in range(top + 1)]
    )
    return PushoutResult(obj, leg1, leg2, tuple(sections))
