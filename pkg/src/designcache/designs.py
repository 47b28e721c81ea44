"""Block designs: containers, constructions and brute-force verification.

Points are always the integers ``0..v-1``.  Every block is stored as an
ascending tuple and the block list itself is sorted lexicographically, so a
design has exactly one in-memory representation regardless of how it was
produced.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidDesign, NonIntegral, UnsupportedBlockSize
from .gf import gf

DEFAULT_SUBSET_BUDGET = 10**7
BUDGET_ENV_VAR = "DESIGNCACHE_BUDGET"

Block = tuple[int, ...]


def subset_budget() -> int:
    """Brute-force subset budget, overridable through ``DESIGNCACHE_BUDGET``."""
    raw = os.environ.get(BUDGET_ENV_VAR)
    return int(raw) if raw else DEFAULT_SUBSET_BUDGET


def _normalize_blocks(blocks: Iterable[Iterable[int]]) -> tuple[Block, ...]:
    out = []
    for b in blocks:
        block = tuple(sorted(b))
        if len(set(block)) != len(block):
            raise InvalidDesign(f"block {block} repeats a point")
        out.append(block)
    return tuple(sorted(out))


@dataclass(frozen=True)
class Design:
    """A set system on points ``0..v-1``.

    ``declared`` optionally records the ``(t, lambda)`` the design claims to
    satisfy; it is a claim, checked only by :func:`verify_t_design`.
    ``labels`` maps point index to the original symbol when the design was
    transcribed from a printed example.
    """

    v: int
    blocks: tuple[Block, ...]
    declared: tuple[int, int] | None = None
    labels: Mapping[int, str] | None = field(default=None, compare=False)

    def __post_init__(self):
        blocks = _normalize_blocks(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise InvalidDesign("a design needs at least one block")
        sizes = {len(b) for b in blocks}
        if len(sizes) != 1:
            raise InvalidDesign(f"blocks have differing sizes {sorted(sizes)}")
        if blocks[0][0] < 0 or max(b[-1] for b in blocks) >= self.v:
            raise InvalidDesign(f"block points must lie in 0..{self.v - 1}")
        if self.declared is not None:
            t, lam = self.declared
            if not (self.v > self.k >= t >= 1 and lam >= 1):
                raise InvalidDesign(f"declared t={t}, lambda={lam} needs v > k >= t")
        if self.labels is not None:
            object.__setattr__(self, "labels", dict(self.labels))

    @property
    def k(self) -> int:
        return len(self.blocks[0])

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def points(self) -> range:
        return range(self.v)

    def blocks_containing(self, points: Iterable[int]) -> list[int]:
        """Indices of the blocks that contain every given point, in block order."""
        pts = set(points)
        return [i for i, blk in enumerate(self.blocks) if pts.issubset(blk)]

    def replication(self) -> list[int]:
        """Number of blocks through each point."""
        counts = [0] * self.v
        for blk in self.blocks:
            for x in blk:
                counts[x] += 1
        return counts

    def label(self, point: int) -> str:
        if self.labels is None:
            return str(point)
        return self.labels[point]

    def relabel(self, perm: Sequence[int]) -> "Design":
        """Image of the design under the point permutation ``x -> perm[x]``."""
        if sorted(perm) != list(range(self.v)):
            raise ValueError("perm must be a permutation of the points")
        return Design(self.v, tuple(tuple(perm[x] for x in b) for b in self.blocks), self.declared)


@dataclass(frozen=True)
class TransversalDesign:
    """A TD(k, n) with index 1.

    Every block lists its points in group order, so ``block[i]`` is the
    block's point in group ``i``.  The constructors number points so that
    group order and ascending order coincide.
    """

    k: int
    n: int
    groups: tuple[Block, ...]
    blocks: tuple[Block, ...]
    labels: Mapping[int, str] | None = field(default=None, compare=False)

    def __post_init__(self):
        groups = tuple(tuple(sorted(g)) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        if len(groups) != self.k or any(len(g) != self.n for g in groups):
            raise InvalidDesign(f"need {self.k} groups of size {self.n}")
        if sorted(x for g in groups for x in g) != list(range(self.k * self.n)):
            raise InvalidDesign("groups must partition the points")
        group_of = self.group_index
        blocks = []
        for blk in self.blocks:
            if len(blk) != self.k:
                raise InvalidDesign(f"block {tuple(blk)} does not have size {self.k}")
            ordered = [None] * self.k
            for x in blk:
                g = group_of[x]
                if ordered[g] is not None:
                    raise InvalidDesign(f"block {tuple(blk)} meets group {g} twice")
                ordered[g] = x
            blocks.append(tuple(ordered))
        object.__setattr__(self, "blocks", tuple(sorted(blocks)))
        if self.labels is not None:
            object.__setattr__(self, "labels", dict(self.labels))

    @property
    def v(self) -> int:
        return self.k * self.n

    @property
    def group_index(self) -> dict[int, int]:
        return {x: g for g, grp in enumerate(self.groups) for x in grp}

    def blocks_containing(self, point: int) -> list[int]:
        return [i for i, blk in enumerate(self.blocks) if point in blk]

    def as_design(self) -> Design:
        return Design(self.v, self.blocks, None, self.labels)

    def label(self, point: int) -> str:
        if self.labels is None:
            return str(point)
        return self.labels[point]


# ---------------------------------------------------------------------------
# Parameter arithmetic


def design_params(t: int, v: int, k: int, lam: int, s: int) -> int:
    """Number of blocks through any ``s`` points of a t-(v, k, lam) design.

    Raises:
        NonIntegral: when the count is not an integer, i.e. no such design
            can exist.
    """
    if not 0 <= s <= t <= k < v:
        raise ValueError(f"need 0 <= s <= t <= k < v, got s={s} t={t} k={k} v={v}")
    value = Fraction(lam * comb(v - s, t - s), comb(k - s, t - s))
    if value.denominator != 1:
        raise NonIntegral(f"lambda_{s} = {value} for {t}-({v},{k},{lam})")
    return value.numerator


@dataclass(frozen=True)
class DesignParams:
    """Derived counts of a t-(v, k, lam) parameter set."""

    t: int
    v: int
    k: int
    lam: int

    def lambda_s(self, s: int) -> int:
        return design_params(self.t, self.v, self.k, self.lam, s)

    @property
    def b(self) -> int:
        return self.lambda_s(0)

    @property
    def r(self) -> int:
        return self.lambda_s(1)

    def is_admissible(self) -> bool:
        try:
            for s in range(self.t + 1):
                self.lambda_s(s)
        except NonIntegral:
            return False
        return True


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a brute-force design check.

    ``status`` is ``"pass"``, ``"fail"`` or ``"skipped"``.  ``lambda_table``
    maps each ``s`` to ``(measured counts, predicted count)`` where measured
    counts is the sorted set of values seen over all s-subsets.
    """

    status: str
    t: int
    lam: int
    b: int
    r: int | None
    witness: tuple[int, ...] | None = None
    witness_count: int | None = None
    lambda_table: Mapping[int, tuple[tuple[int, ...], Fraction]] = field(default_factory=dict)
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _subset_counts(blocks: Sequence[Block], s: int) -> Counter:
    counts: Counter = Counter()
    for blk in blocks:
        counts.update(itertools.combinations(blk, s))
    return counts


def verify_t_design(
    d: Design, t: int, lam: int, budget: int | None = None
) -> VerificationReport:
    """Check that every t-subset of points lies in exactly ``lam`` blocks.

    Every one of the C(v, t) subsets is visited in lexicographic order, so
    the witness is the first violating subset.  If C(v, t) exceeds the
    budget, the report says ``skipped`` instead of guessing.
    """
    budget = subset_budget() if budget is None else budget
    reps = d.replication()
    r = reps[0] if len(set(reps)) == 1 else None
    if t > d.k:
        return VerificationReport("fail", t, lam, d.b, r, message=f"t={t} exceeds k={d.k}")
    if comb(d.v, t) > budget:
        return VerificationReport(
            "skipped", t, lam, d.b, r,
            message=f"C({d.v},{t}) = {comb(d.v, t)} exceeds budget {budget}",
        )
    table = {}
    for s in range(t + 1):
        counts = _subset_counts(d.blocks, s)
        seen = {counts.get(sub, 0) for sub in itertools.combinations(d.points, s)}
        predicted = Fraction(lam * comb(d.v - s, t - s), comb(d.k - s, t - s))
        table[s] = (tuple(sorted(seen)), predicted)
    counts = _subset_counts(d.blocks, t)
    for sub in itertools.combinations(d.points, t):
        c = counts.get(sub, 0)
        if c != lam:
            return VerificationReport(
                "fail", t, lam, d.b, r, sub, c, table,
                f"{sub} lies in {c} blocks, expected {lam}",
            )
    return VerificationReport("pass", t, lam, d.b, r, lambda_table=table)


def verify_declared(d: Design, budget: int | None = None) -> VerificationReport | None:
    if d.declared is None:
        return None
    return verify_t_design(d, *d.declared, budget=budget)


def block_intersection_sizes(d: Design) -> Counter:
    """Histogram of ``|A1 & A2|`` over all unordered pairs of blocks."""
    sets = [set(b) for b in d.blocks]
    return Counter(len(a & c) for a, c in itertools.combinations(sets, 2))


def verify_transversal_design(td: TransversalDesign) -> VerificationReport:
    """Exhaustive TD axiom check over all point pairs.

    A pair inside one group must meet no block; a pair across groups must
    meet exactly one.
    """
    group_of = td.group_index
    counts = _subset_counts(td.blocks, 2)
    reps = td.as_design().replication()
    r = reps[0] if len(set(reps)) == 1 else None
    for pair in itertools.combinations(range(td.v), 2):
        same_group = group_of[pair[0]] == group_of[pair[1]]
        c = counts.get(pair, 0)
        if c != (0 if same_group else 1):
            return VerificationReport(
                "fail", 2, 1, len(td.blocks), r, pair, c,
                message=f"pair {pair} ({'same' if same_group else 'different'} groups) in {c} blocks",
            )
    if len(td.blocks) != td.n**2 or r != td.n:
        return VerificationReport(
            "fail", 2, 1, len(td.blocks), r,
            message=f"expected {td.n ** 2} blocks and replication {td.n}",
        )
    return VerificationReport("pass", 2, 1, len(td.blocks), r)


def incidence_matrix(d: Design) -> np.ndarray:
    """The ``v x b`` 0/1 matrix with ``M[x, j] = 1`` iff point x is in block j."""
    m = np.zeros((d.v, d.b), dtype=np.uint8)
    for j, blk in enumerate(d.blocks):
        m[list(blk), j] = 1
    return m


def blocks_from_incidence(m: np.ndarray) -> list[Block]:
    return [tuple(int(x) for x in np.flatnonzero(m[:, j])) for j in range(m.shape[1])]


# ---------------------------------------------------------------------------
# Constructions


def construct_affine_plane_bibd(n: int) -> Design:
    """AG(2, n) as an (n^2, n, 1)-BIBD.

    Point ``(x, y)`` gets label ``x * n + y``; the lines are ``y = a x + c``
    together with the verticals ``x = c``.
    """
    F = gf(n)
    blocks = []
    for a in F.elements:
        for c in F.elements:
            blocks.append([x * n + F.add(F.mul(a, x), c) for x in F.elements])
    for c in F.elements:
        blocks.append([c * n + y for y in F.elements])
    labels = {x * n + y: f"({x},{y})" for x in F.elements for y in F.elements}
    return Design(n * n, tuple(blocks), (2, 1), labels)


def _normalized_vectors(F, dim: int) -> list[tuple[int, ...]]:
    """One representative per 1-dimensional subspace (leading nonzero = 1)."""
    reps = []
    for vec in itertools.product(F.elements, repeat=dim):
        nz = next((c for c in vec if c), None)
        if nz == 1:
            reps.append(vec)
    return reps


def construct_projective_plane_bibd(n: int) -> Design:
    """PG(2, n) as a symmetric (n^2+n+1, n+1, 1)-BIBD.

    Points are the 1-dimensional subspaces of GF(n)^3, numbered in
    lexicographic order of their normalized representatives; each line is
    the set of points orthogonal to a normalized normal vector.
    """
    F = gf(n)
    reps = _normalized_vectors(F, 3)

    def dot(u, w):
        acc = 0
        for a, c in zip(u, w):
            acc = F.add(acc, F.mul(a, c))
        return acc

    blocks = [[i for i, p in enumerate(reps) if dot(p, normal) == 0] for normal in reps]
    labels = {i: "(" + ":".join(map(str, p)) + ")" for i, p in enumerate(reps)}
    return Design(len(reps), tuple(blocks), (2, 1), labels)


def construct_inversive_plane(q: int) -> Design:
    """Miquelian inversive plane, a 3-(q^2+1, q+1, 1) Steiner system.

    Points are GF(q^2) plus infinity (label ``q^2``).  The blocks are the
    images of the subline GF(q) + {inf} under all Moebius maps of GF(q^2),
    generated without enumerating the group:

    * blocks through infinity are the lines ``{a + b t : t in GF(q)} + {inf}``;
    * inverting ``z -> 1/z`` maps the lines missing 0 onto the blocks through
      0 that miss infinity;
    * translating those by every ``c`` gives every block missing infinity.
    """
    F = gf(q * q)
    inf = F.q
    sub = F.subfield(q)

    lines: set[Block] = set()
    for a in F.elements:
        for b in range(1, F.q):
            lines.add(tuple(sorted(F.add(a, F.mul(b, t)) for t in sub)))
    through_zero = [
        [0] + [F.inv(z) for z in line] for line in lines if 0 not in line
    ]
    blocks: set[Block] = {line + (inf,) for line in lines}
    for circle in through_zero:
        for c in F.elements:
            blocks.add(tuple(sorted(F.add(c, z) for z in circle)))
    labels = {x: str(x) for x in F.elements}
    labels[inf] = "inf"
    return Design(F.q + 1, tuple(blocks), (3, 1), labels)


def construct_transversal_design(k: int, q: int) -> TransversalDesign:
    """TD(k, q) for ``k`` in ``{q, q+1}`` from the linear orthogonal array.

    Group ``i < q`` holds the points ``i*q + y``.  Block ``(a, c)`` takes
    ``a * x_i + c`` from group ``i`` (``x_i`` the i-th field element) and,
    when ``k = q + 1``, the point ``q*q + a`` from the extra slope group.
    """
    F = gf(q)
    if k not in (q, q + 1):
        raise UnsupportedBlockSize(f"TD(k, {q}) is only constructed for k in {{{q}, {q + 1}}}")
    groups = [[i * q + y for y in F.elements] for i in range(k)]
    blocks = []
    for a in F.elements:
        for c in F.elements:
            blk = [i * q + F.add(F.mul(a, x), c) for i, x in enumerate(F.elements)]
            if k == q + 1:
                blk.append(q * q + a)
            blocks.append(blk)
    labels = {g * q + y: f"G{g}:{y}" for g in range(k) for y in range(q)}
    return TransversalDesign(k, q, tuple(map(tuple, groups)), tuple(map(tuple, blocks)), labels)


def complement_design(d: Design) -> Design:
    """Replace every block by its complement in the point set.

    A declared t-(v, k, lam) claim carries over as t-(v, v-k, lam') with
    ``lam' = sum_i (-1)^i C(t, i) lambda_i`` (so ``b - 2r + lam`` for t=2),
    provided ``v - k >= t``.
    """
    if d.k >= d.v:
        raise InvalidDesign("complement needs k < v")
    blocks = tuple(tuple(x for x in d.points if x not in set(blk)) for blk in d.blocks)
    declared = None
    if d.declared is not None:
        t, lam = d.declared
        params = DesignParams(t, d.v, d.k, lam)
        if d.v - d.k >= t and params.is_admissible():
            new_lam = sum((-1) ** i * comb(t, i) * params.lambda_s(i) for i in range(t + 1))
            if new_lam >= 1:
                declared = (t, new_lam)
    return Design(d.v, blocks, declared, d.labels)


def trivial_t_design(v: int, k: int) -> Design:
    """All k-subsets of ``v`` points: a k-(v, k, 1) design."""
    if not 0 < k < v:
        raise ValueError(f"need 0 < k < v, got k={k} v={v}")
    return Design(v, tuple(itertools.combinations(range(v), k)), (k, 1))
