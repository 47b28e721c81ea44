"""Caching matrices built from designs and their identity-submatrix covers.

A caching matrix has one row per user and one column per subfile; a 1 means
the user does *not* cache that subfile.  An identity submatrix is a set of
pivots ``(u_i, f_i)`` with ``C[u_i, f_i] = 1`` and ``C[u_i, f_j] = 0`` for
``i != j``; each one becomes a single XOR broadcast that every pivot user
can decode.  A cover is a list of identity submatrices hitting every 1.

Five schemes are provided, keyed ``bibd``, ``symm``, ``t1``, ``t2`` and
``td``.  Each has a ``*_caching_matrix`` builder and a ``*_cover`` function
that constructs the cover directly from the design structure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence, Union

import numpy as np

from .designs import Design, TransversalDesign, verify_t_design, verify_transversal_design
from .errors import (
    BlockSizeBelowGroupSize,
    InvalidDesign,
    InvalidMatrix,
    NotBIBD,
    NotLambda2,
    NotSteiner,
    NotSymmetric,
    RepeatedBlocks,
)

# ---------------------------------------------------------------------------
# Row / column labels


@dataclass(frozen=True, order=True)
class Point:
    point: int


@dataclass(frozen=True, order=True)
class BlockLabel:
    block: int


@dataclass(frozen=True, order=True)
class Subset:
    points: tuple[int, ...]

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise ValueError(f"subset {self.points} is not strictly increasing")


@dataclass(frozen=True, order=True)
class PointBlock:
    """Column ``(B, y)``: point ``y`` inside block number ``block``."""

    block: int
    point: int


@dataclass(frozen=True, order=True)
class BlockSubset:
    block: int
    subset: tuple[int, ...]

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.subset, self.subset[1:])):
            raise ValueError(f"subset {self.subset} is not strictly increasing")


Label = Union[Point, BlockLabel, Subset, PointBlock, BlockSubset]


# ---------------------------------------------------------------------------
# Matrix and cover containers


@dataclass(frozen=True, eq=False)
class CachingMatrix:
    """A labelled 0/1 matrix with constant row weight ``Q``.

    ``bits`` is stored as a read-only boolean array.
    """

    rows: tuple[Label, ...]
    cols: tuple[Label, ...]
    bits: np.ndarray
    scheme: str | None = None

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        if bits.shape != (len(self.rows), len(self.cols)):
            raise InvalidMatrix(f"bits shape {bits.shape} vs {len(self.rows)}x{len(self.cols)} labels")
        weights = np.unique(bits.sum(axis=1))
        if len(weights) > 1:
            raise InvalidMatrix(f"row weights are not constant: {weights.tolist()}")
        object.__setattr__(self, "_row_index", {lab: i for i, lab in enumerate(self.rows)})
        object.__setattr__(self, "_col_index", {lab: j for j, lab in enumerate(self.cols)})
        if len(self._row_index) != len(self.rows) or len(self._col_index) != len(self.cols):
            raise InvalidMatrix("row and column labels must be distinct")

    def __eq__(self, other):
        if not isinstance(other, CachingMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.bits, other.bits)
        )

    __hash__ = None

    @property
    def K(self) -> int:
        return len(self.rows)

    @property
    def F(self) -> int:
        return len(self.cols)

    @property
    def Q(self) -> int:
        return int(self.bits[0].sum()) if self.K else 0

    @property
    def uncached_fraction(self) -> Fraction:
        return Fraction(self.Q, self.F)

    @property
    def ones(self) -> int:
        return int(self.bits.sum())

    def column_weights(self) -> list[int]:
        return self.bits.sum(axis=0).tolist()

    def row_index(self, label: Label) -> int:
        return self._row_index[label]

    def col_index(self, label: Label) -> int:
        return self._col_index[label]


@dataclass(frozen=True)
class IdentitySubmatrix:
    """Pivot pairs ``(row, column)``; one coded transmission."""

    pivots: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pivots", tuple((int(u), int(f)) for u, f in self.pivots))

    @property
    def size(self) -> int:
        return len(self.pivots)

    @property
    def rows(self) -> tuple[int, ...]:
        return tuple(u for u, _ in self.pivots)

    @property
    def cols(self) -> tuple[int, ...]:
        return tuple(f for _, f in self.pivots)


@dataclass(frozen=True)
class Cover:
    submatrices: tuple[IdentitySubmatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "submatrices", tuple(self.submatrices))

    @property
    def S(self) -> int:
        return len(self.submatrices)

    def __len__(self):
        return len(self.submatrices)

    def __iter__(self):
        return iter(self.submatrices)


# ---------------------------------------------------------------------------
# Preconditions


def _require_design(d: Design, t: int, lam: int, exc: type) -> None:
    report = verify_t_design(d, t, lam)
    if not report.passed:
        raise exc(f"not a {t}-(v,k,{lam}) design: {report.status} {report.message}".rstrip())


def _lex_subsets(points: Sequence[int], size: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(sorted(points), size))


# ---------------------------------------------------------------------------
# (v, k, 1)-BIBD scheme: the incidence matrix itself


def bibd_caching_matrix(d: Design) -> CachingMatrix:
    """Rows are points, columns are blocks, 1 where the point lies in the block."""
    _require_design(d, 2, 1, NotBIBD)
    bits = np.zeros((d.v, d.b), dtype=bool)
    for j, blk in enumerate(d.blocks):
        bits[list(blk), j] = True
    return CachingMatrix(
        tuple(Point(x) for x in d.points),
        tuple(BlockLabel(j) for j in range(d.b)),
        bits,
        "bibd",
    )


def bibd_cover(d: Design, matrix: CachingMatrix) -> Cover:
    """One submatrix per point ``x``.

    Its columns are the blocks through ``x``; block ``A`` is paired with the
    row of the point that follows ``x`` cyclically inside the sorted block.
    """
    k = d.k
    subs = []
    for x in d.points:
        pivots = []
        for j in d.blocks_containing([x]):
            blk = d.blocks[j]
            succ = blk[(blk.index(x) + 1) % k]
            pivots.append((matrix.row_index(Point(succ)), matrix.col_index(BlockLabel(j))))
        subs.append(IdentitySubmatrix(tuple(pivots)))
    return Cover(tuple(subs))


# ---------------------------------------------------------------------------
# Symmetric (v, k, 2)-BIBD scheme


def _require_symmetric_biplane(d: Design) -> None:
    if d.b != d.v:
        raise NotSymmetric(f"b={d.b} differs from v={d.v}")
    if len(set(d.blocks)) != d.b:
        raise RepeatedBlocks("symmetric scheme needs distinct blocks")
    _require_design(d, 2, 2, NotLambda2)


def symm_caching_matrix(d: Design) -> CachingMatrix:
    """Rows are points; columns are pairs ``(B, j)`` with ``j`` in ``B``.

    Entry ``(i, (B, j))`` is 1 iff ``i`` is in ``B`` and ``i != j``.
    """
    _require_symmetric_biplane(d)
    cols = tuple(PointBlock(bi, j) for bi, blk in enumerate(d.blocks) for j in blk)
    bits = np.zeros((d.v, len(cols)), dtype=bool)
    for c, col in enumerate(cols):
        members = [i for i in d.blocks[col.block] if i != col.point]
        bits[members, c] = True
    return CachingMatrix(tuple(Point(x) for x in d.points), cols, bits, "symm")


def symm_cover(d: Design, matrix: CachingMatrix) -> Cover:
    """One submatrix ``M_{i,B}`` per incident pair, ordered by ``i`` then ``B``.

    Row ``x`` in ``B \\ i`` pairs with column ``(B', i)``, where ``B'`` is the
    other block containing both ``i`` and ``x``.
    """
    subs = []
    for i in d.points:
        through_i = d.blocks_containing([i])
        for bi in through_i:
            pivots = []
            for x in d.blocks[bi]:
                if x == i:
                    continue
                (other,) = [bj for bj in through_i if bj != bi and x in d.blocks[bj]]
                pivots.append((matrix.row_index(Point(x)), matrix.col_index(PointBlock(other, i))))
            subs.append(IdentitySubmatrix(tuple(pivots)))
    return Cover(tuple(subs))


# ---------------------------------------------------------------------------
# t-(v, k, 1) Scheme 1: rows are (t-1)-subsets


def t1_caching_matrix(d: Design, t: int) -> CachingMatrix:
    """Rows are (t-1)-subsets ``D``; columns are ``(y, B)`` with ``y`` in ``B``.

    Entry is 1 iff ``y`` is not in ``D`` and ``D + {y}`` lies inside ``B``.
    """
    _require_design(d, t, 1, NotSteiner)
    rows = tuple(Subset(s) for s in itertools.combinations(d.points, t - 1))
    row_index = {r.points: i for i, r in enumerate(rows)}
    cols = tuple(PointBlock(bi, y) for bi, blk in enumerate(d.blocks) for y in blk)
    bits = np.zeros((len(rows), len(cols)), dtype=bool)
    for c, col in enumerate(cols):
        rest = [x for x in d.blocks[col.block] if x != col.point]
        for sub in itertools.combinations(rest, t - 1):
            bits[row_index[sub], c] = True
    return CachingMatrix(rows, cols, bits, "t1")


def t1_cover(d: Design, matrix: CachingMatrix, t: int) -> Cover:
    """Submatrices ``T_{y,j}`` for each point ``y`` and ``j < C(k-1, t-1)``.

    The columns are ``(y, B)`` for the blocks through ``y``; block ``B`` is
    paired with the row of the j-th (t-1)-subset of ``B \\ y`` in
    lexicographic order.
    """
    per_block = comb(d.k - 1, t - 1)
    subs = []
    for y in d.points:
        through_y = d.blocks_containing([y])
        rests = {bi: _lex_subsets([x for x in d.blocks[bi] if x != y], t - 1) for bi in through_y}
        for j in range(per_block):
            pivots = tuple(
                (matrix.row_index(Subset(rests[bi][j])), matrix.col_index(PointBlock(bi, y)))
                for bi in through_y
            )
            subs.append(IdentitySubmatrix(pivots))
    return Cover(tuple(subs))


# ---------------------------------------------------------------------------
# t-(v, k, 1) Scheme 2: columns are t-subsets of blocks


def t2_caching_matrix(d: Design, t: int) -> CachingMatrix:
    """Rows are points; columns are ``(B, E)`` for every t-subset ``E`` of ``B``.

    Entry ``(i, (B, E))`` is 1 iff ``i`` is in ``E``.
    """
    _require_design(d, t, 1, NotSteiner)
    cols = tuple(
        BlockSubset(bi, e) for bi, blk in enumerate(d.blocks) for e in itertools.combinations(blk, t)
    )
    bits = np.zeros((d.v, len(cols)), dtype=bool)
    for c, col in enumerate(cols):
        bits[list(col.subset), c] = True
    return CachingMatrix(tuple(Point(x) for x in d.points), cols, bits, "t2")


def t2_cover(d: Design, matrix: CachingMatrix, t: int) -> Cover:
    """One submatrix ``T_D`` per (t-1)-subset ``D``, lexicographic order.

    For each block ``B`` through ``D`` and each ``x`` in ``B \\ D``, row ``x``
    pairs with column ``(B, D + {x})``.
    """
    subs = []
    for D in itertools.combinations(d.points, t - 1):
        pivots = []
        for bi in d.blocks_containing(D):
            for x in d.blocks[bi]:
                if x in D:
                    continue
                e = tuple(sorted(D + (x,)))
                pivots.append((matrix.row_index(Point(x)), matrix.col_index(BlockSubset(bi, e))))
        subs.append(IdentitySubmatrix(tuple(pivots)))
    return Cover(tuple(subs))


# ---------------------------------------------------------------------------
# Transversal design scheme: transpose of the incidence matrix


def td_caching_matrix(td: TransversalDesign) -> CachingMatrix:
    """Rows are blocks, columns are points."""
    if td.k < td.n:
        raise BlockSizeBelowGroupSize(f"TD({td.k},{td.n}) has k < n")
    report = verify_transversal_design(td)
    if not report.passed:
        raise InvalidDesign(f"not a TD({td.k},{td.n}): {report.message}")
    bits = np.zeros((len(td.blocks), td.v), dtype=bool)
    for i, blk in enumerate(td.blocks):
        bits[i, list(blk)] = True
    return CachingMatrix(
        tuple(BlockLabel(i) for i in range(len(td.blocks))),
        tuple(Point(x) for x in range(td.v)),
        bits,
        "td",
    )


def td_cover(td: TransversalDesign, matrix: CachingMatrix) -> Cover:
    """One submatrix per point ``x`` in group ``g``.

    Rows are the blocks through ``x``; each is paired with the column of its
    point in group ``g + 1 (mod k)``.
    """
    group_of = td.group_index
    subs = []
    for x in range(td.v):
        nxt = (group_of[x] + 1) % td.k
        pivots = tuple(
            (matrix.row_index(BlockLabel(i)), matrix.col_index(Point(td.blocks[i][nxt])))
            for i in td.blocks_containing(x)
        )
        subs.append(IdentitySubmatrix(pivots))
    return Cover(tuple(subs))


# ---------------------------------------------------------------------------
# Scheme registry


@dataclass(frozen=True)
class SchemeSpec:
    name: str
    title: str
    needs_t: bool
    transversal: bool
    build_matrix: Callable
    build_cover: Callable


SCHEMES: dict[str, SchemeSpec] = {
    "bibd": SchemeSpec("bibd", "BIBD (lambda=1)", False, False, bibd_caching_matrix, bibd_cover),
    "symm": SchemeSpec("symm", "Symmetric BIBD (lambda=2)", False, False, symm_caching_matrix, symm_cover),
    "t1": SchemeSpec("t1", "t-design (lambda=1) Scheme 1", True, False, t1_caching_matrix, t1_cover),
    "t2": SchemeSpec("t2", "t-design (lambda=1) Scheme 2", True, False, t2_caching_matrix, t2_cover),
    "td": SchemeSpec("td", "Transversal design (lambda=1)", False, True, td_caching_matrix, td_cover),
}


def scheme_t(scheme: str, design: Design | TransversalDesign, t: int | None = None) -> int | None:
    """Strength used by a t-design scheme: explicit ``t`` or the declared one."""
    if not SCHEMES[scheme].needs_t:
        return None
    if t is None:
        if getattr(design, "declared", None) is None:
            raise NotSteiner("t-design schemes need t (declared or explicit)")
        t = design.declared[0]
    return t


def build_scheme(
    scheme: str, design: Design | TransversalDesign, t: int | None = None
) -> tuple[CachingMatrix, Cover]:
    """Caching matrix and its constructed cover for the named scheme."""
    try:
        spec = SCHEMES[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}") from None
    if spec.transversal != isinstance(design, TransversalDesign):
        kind = "a transversal design" if spec.transversal else "a block design"
        raise InvalidDesign(f"scheme {scheme!r} needs {kind}")
    if spec.needs_t:
        t = scheme_t(scheme, design, t)
        matrix = spec.build_matrix(design, t)
        return matrix, spec.build_cover(design, matrix, t)
    matrix = spec.build_matrix(design)
    return matrix, spec.build_cover(design, matrix)


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class BadSubmatrix:
    submatrix: int
    pivot: int
    reason: str


@dataclass(frozen=True)
class CoverReport:
    """Result of :func:`verify_cover`; every problem is a field, never raised."""

    is_valid_cover: bool
    S: int
    ones_total: int
    ones_covered: int
    uncovered_ones: int
    first_uncovered: tuple[int, int] | None
    overlap_count: int
    bad_submatrix: BadSubmatrix | None = None
    bad_submatrix_count: int = 0


def _submatrix_problem(bits: np.ndarray, sub: IdentitySubmatrix) -> tuple[int, str] | None:
    K, F = bits.shape
    seen_rows: set[int] = set()
    seen_cols: set[int] = set()
    for p, (u, f) in enumerate(sub.pivots):
        if not (0 <= u < K and 0 <= f < F):
            return p, f"pivot ({u}, {f}) out of range"
        if u in seen_rows:
            return p, f"row {u} repeated"
        if f in seen_cols:
            return p, f"column {f} repeated"
        seen_rows.add(u)
        seen_cols.add(f)
    if not sub.pivots:
        return 0, "empty submatrix"
    block = bits[np.ix_(sub.rows, sub.cols)]
    for p in range(len(sub.pivots)):
        if not block[p, p]:
            return p, f"pivot entry {sub.pivots[p]} is 0"
        off = np.flatnonzero(block[p])
        off = off[off != p]
        if off.size:
            return p, f"row {sub.pivots[p][0]} has a 1 in pivot column {sub.cols[off[0]]}"
    return None


def verify_cover(matrix: CachingMatrix, cover: Cover) -> CoverReport:
    """Brute-force check of every submatrix and of the coverage of every 1.

    An entry counts as covered by a submatrix when its row and column are
    both among the submatrix's rows and columns.  Witnesses are the first
    failure in (submatrix, pivot) order and the first uncovered 1 in
    row-major order.
    """
    bits = matrix.bits
    K, F = bits.shape
    coverage = np.zeros((K, F), dtype=np.int64)
    bad = None
    bad_count = 0
    for s, sub in enumerate(cover):
        problem = _submatrix_problem(bits, sub)
        if problem is not None:
            bad_count += 1
            if bad is None:
                bad = BadSubmatrix(s, *problem)
            rows = [u for u in sub.rows if 0 <= u < K]
            cols = [f for f in sub.cols if 0 <= f < F]
            if not rows or not cols:
                continue
        else:
            rows, cols = list(sub.rows), list(sub.cols)
        coverage[np.ix_(rows, cols)] += bits[np.ix_(rows, cols)]
    covered = (coverage > 0) & bits
    uncovered = bits & ~covered
    idx = np.argwhere(uncovered)
    first_uncovered = (int(idx[0][0]), int(idx[0][1])) if len(idx) else None
    return CoverReport(
        is_valid_cover=bad is None and not len(idx),
        S=cover.S,
        ones_total=int(bits.sum()),
        ones_covered=int(covered.sum()),
        uncovered_ones=int(len(idx)),
        first_uncovered=first_uncovered,
        overlap_count=int((coverage > 1).sum()),
        bad_submatrix=bad,
        bad_submatrix_count=bad_count,
    )


# ---------------------------------------------------------------------------
# Greedy baseline


def greedy_cover(matrix: CachingMatrix) -> Cover:
    """Cover an arbitrary caching matrix by greedily grown identity submatrices.

    Each round seeds with the first uncovered 1 in row-major order, then
    repeatedly adds the lowest row-major uncovered 1 that keeps the pivot
    set an identity submatrix.  The result is always a valid cover; its size
    is not minimal in general.
    """
    bits = matrix.bits
    if not bits.any():
        raise InvalidMatrix("matrix has no 1-entries to cover")
    uncovered = bits.copy()
    subs = []
    while uncovered.any():
        # rows whose entries in the chosen columns are all 0, and vice versa
        row_ok = np.ones(bits.shape[0], dtype=bool)
        col_ok = np.ones(bits.shape[1], dtype=bool)
        pivots = []
        while True:
            cand = uncovered & row_ok[:, None] & col_ok[None, :]
            flat = int(np.argmax(cand))
            u, f = divmod(flat, bits.shape[1])
            if not cand[u, f]:
                break
            pivots.append((u, f))
            row_ok &= ~bits[:, f]
            col_ok &= ~bits[u, :]
        for u, f in pivots:
            uncovered[u, f] = False
        subs.append(IdentitySubmatrix(tuple(pivots)))
    return Cover(tuple(subs))
