"""Point sets in F_q^d: distance histograms, t-distance graphs, the
square-root-cancellation bound check, and G-distance sets.

Points are stored as an (n, d) array of packed element codes so the
O(|E|^2 d) pairwise-norm kernel runs through the field's cached numpy
operation tables.  All theorem-level comparisons are exact integer
arithmetic; floats appear only in report slack columns.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Optional, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    DimensionTooSmall,
    SizeTooLarge,
    SpecMismatch,
    TooLarge,
)
from .field import FieldElement, FieldSpec, Point
from .graphs import Graph, contains_subgraph

DEFAULT_MAX_POINTS = 5000
ENV_MAX_POINTS = "DISTGRAPHS_MAX_POINTS"

_CHUNK = 1 << 22  # target cells per pairwise block


def max_point_count() -> int:
    """Configured |E| cap; override with the DISTGRAPHS_MAX_POINTS env var."""
    return int(os.environ.get(ENV_MAX_POINTS, DEFAULT_MAX_POINTS))


class PointSet:
    """An ordered set of distinct points of F_q^d, d >= 2.

    codes is an (n, d) int32 array of packed element codes; row order is
    the set's canonical order.
    """

    def __init__(self, spec: FieldSpec, d: int, codes: np.ndarray):
        if d < 2:
            raise DimensionTooSmall(f"need d >= 2, got {d}")
        codes = np.asarray(codes, dtype=np.int32).reshape(-1, d)
        if codes.size and (codes.min() < 0 or codes.max() >= spec.q):
            raise ValueError("element code out of range")
        if len(np.unique(codes, axis=0)) != len(codes):
            raise ValueError("points must be distinct")
        self.spec = spec
        self.d = d
        self.codes = codes
        self.codes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.codes)

    def point(self, i: int) -> Point:
        return Point(self.spec.from_code(int(c)) for c in self.codes[i])

    def points(self) -> list[Point]:
        return [self.point(i) for i in range(len(self))]

    def translate(self, shift: Point) -> "PointSet":
        """The set E + z."""
        if shift.spec != self.spec or shift.d != self.d:
            raise SpecMismatch("shift from a different space")
        add = self.spec.add_table
        zc = np.array([c.code for c in shift.coords], dtype=np.int32)
        return PointSet(self.spec, self.d, add[self.codes, zc[None, :]])

    def permute_coordinates(self, perm: Sequence[int]) -> "PointSet":
        return PointSet(self.spec, self.d, self.codes[:, list(perm)])

    def __repr__(self):
        return f"PointSet(q={self.spec.q}, d={self.d}, n={len(self)})"


def all_points(spec: FieldSpec, d: int) -> PointSet:
    """All q^d points in lexicographic order (first coordinate varies
    slowest)."""
    total = spec.q**d
    cap = max_point_count()
    if total > cap:
        raise TooLarge(f"q^d = {total} exceeds the configured cap {cap}")
    idx = np.arange(total)
    cols = []
    for j in range(d - 1, -1, -1):
        idx, col = np.divmod(idx, spec.q)
        cols.append(col)
    codes = np.stack(cols[::-1], axis=1).astype(np.int32)
    return PointSet(spec, d, codes)


def _partial_fisher_yates(n: int, size: int, rng: np.random.Generator) -> list[int]:
    """First `size` entries of a Fisher-Yates shuffle of range(n); a
    uniform sample without replacement using O(size) memory."""
    swap: dict[int, int] = {}
    out = []
    for i in range(size):
        j = int(rng.integers(i, n))
        vi = swap.get(i, i)
        vj = swap.get(j, j)
        swap[i], swap[j] = vj, vi
        out.append(vj)
    return out


def random_subset(spec: FieldSpec, d: int, size: int, seed) -> PointSet:
    """Uniform random subset of F_q^d without replacement.

    Reproducible: PCG64 seeded from `seed` (an int or a numpy
    SeedSequence) drives a partial Fisher-Yates shuffle of the
    lexicographic point indices.
    """
    total = spec.q**d
    if size > total:
        raise SizeTooLarge(f"size {size} exceeds q^d = {total}")
    if size < 0:
        raise ValueError("size must be nonnegative")
    if d < 2:
        raise DimensionTooSmall(f"need d >= 2, got {d}")
    rng = np.random.default_rng(seed)
    picks = np.array(_partial_fisher_yates(total, size, rng), dtype=np.int64)
    cols = []
    idx = picks
    for j in range(d - 1, -1, -1):
        idx, col = np.divmod(idx, spec.q)
        cols.append(col)
    codes = np.stack(cols[::-1], axis=1).astype(np.int32) if size else np.empty((0, d), np.int32)
    return PointSet(spec, d, codes)


# -- pairwise norms and histograms ---------------------------------------


def _norm_block(E: PointSet, rows: slice) -> np.ndarray:
    """Norms ||x_i - x_j|| (as codes) for i in `rows`, all j."""
    spec = E.spec
    sub, sq, add = spec.sub_table, spec.square_table, spec.add_table
    diff = sub[E.codes[rows, None, :], E.codes[None, :, :]]
    sqd = sq[diff]
    acc = sqd[..., 0]
    for jj in range(1, E.d):
        acc = add[acc, sqd[..., jj]]
    return acc


def _row_chunk(E: PointSet) -> int:
    n = max(len(E), 1)
    return max(1, _CHUNK // (n * max(E.d, 1)))


def pairwise_norms(E: PointSet) -> np.ndarray:
    """Full (n, n) matrix of pairwise norm codes."""
    n = len(E)
    out = np.empty((n, n), dtype=np.int32)
    step = _row_chunk(E)
    for lo in range(0, n, step):
        rows = slice(lo, min(lo + step, n))
        out[rows] = _norm_block(E, rows)
    return out


@dataclass(frozen=True)
class DistanceHistogram:
    """Ordered-pair distance counts nu(t) over all of E x E, diagonal
    included (the diagonal contributes |E| to nu(0))."""

    spec: FieldSpec
    counts: np.ndarray  # length q, int64
    size: int  # |E|

    def nu(self, t) -> int:
        return int(self.counts[_t_code(self.spec, t)])

    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict[FieldElement, int]:
        return {self.spec.from_code(c): int(v) for c, v in enumerate(self.counts)}


def _t_code(spec: FieldSpec, t) -> int:
    if isinstance(t, FieldElement):
        if t.spec != spec:
            raise SpecMismatch("t from a different field")
        return t.code
    return int(t)


def distance_histogram(E: PointSet) -> DistanceHistogram:
    n = len(E)
    counts = np.zeros(E.spec.q, dtype=np.int64)
    step = _row_chunk(E)
    for lo in range(0, n, step):
        rows = slice(lo, min(lo + step, n))
        block = _norm_block(E, rows)
        counts += np.bincount(block.ravel(), minlength=E.spec.q)
    return DistanceHistogram(E.spec, counts, n)


def distance_graph(E: PointSet, t, norms: Optional[np.ndarray] = None) -> Graph:
    """Simple graph on E's index set: {i, j} is an edge iff
    ||x_i - x_j|| = t (i != j).

    t = 0 is permitted; the resulting graph records isotropic differences
    only, since loops are excluded.
    """
    code = _t_code(E.spec, t)
    if norms is None:
        norms = pairwise_norms(E)
    adj = norms == code
    return Graph.from_bool_matrix(adj)


# -- exact remainder-term bound check -------------------------------------


@dataclass(frozen=True)
class IRRecord:
    t: int  # element code, nonzero
    nu: int
    main: Fraction  # |E|^2 / q
    remainder: Fraction  # nu - main
    bound: float  # 2 q^{(d-1)/2} |E|, display only
    slack: float  # bound - |remainder|, display only
    ok: bool


@dataclass(frozen=True)
class IRReport:
    """Per-t decomposition nu(t) = |E|^2/q + R(t) with the exact check
    |R(t)| <= 2 q^{(d-1)/2} |E| for every t != 0.

    The comparison is the integer inequality
    (q nu - |E|^2)^2 <= 4 q^(d+1) |E|^2, so no floats are involved in
    the verdict.
    """

    spec: FieldSpec
    d: int
    size: int
    records: tuple[IRRecord, ...]
    passed: bool

    def worst_slack(self) -> float:
        return min((r.slack for r in self.records), default=float("inf"))


def ir_check(E: PointSet, hist: Optional[DistanceHistogram] = None) -> IRReport:
    if E.d < 2:
        raise DimensionTooSmall(f"need d >= 2, got {E.d}")
    if hist is None:
        hist = distance_histogram(E)
    q, d, n = E.spec.q, E.d, len(E)
    rhs = 4 * q ** (d + 1) * n * n
    bound = 2.0 * sqrt(float(q ** (d - 1))) * n
    records = []
    for t in range(1, q):
        nu = int(hist.counts[t])
        scaled = q * nu - n * n  # q R(t), an integer
        ok = scaled * scaled <= rhs
        rem = Fraction(scaled, q)
        records.append(
            IRRecord(
                t=t,
                nu=nu,
                main=Fraction(n * n, q),
                remainder=rem,
                bound=bound,
                slack=bound - abs(float(rem)),
                ok=ok,
            )
        )
    return IRReport(E.spec, d, n, tuple(records), all(r.ok for r in records))


# -- G-distance sets -------------------------------------------------------


@dataclass(frozen=True)
class GraphDistanceSet:
    """Delta_G(E): the t for which the t-distance graph contains the
    pattern.  Per-t budget exhaustion is recorded as indeterminate,
    never as absence."""

    spec: FieldSpec
    contained: frozenset[int]  # element codes
    indeterminate: frozenset[int]
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def covers_all_nonzero(self) -> bool:
        return all(t in self.contained for t in range(1, self.spec.q))

    def elements(self) -> set[FieldElement]:
        return {self.spec.from_code(t) for t in self.contained}


def graph_distance_set(
    E: PointSet,
    pattern: Graph,
    budget: Optional[int] = None,
    norms: Optional[np.ndarray] = None,
) -> GraphDistanceSet:
    """Test every t in F_q for pattern containment in the t-distance
    graph.  The pairwise norm matrix is computed once and shared."""
    if len(E) and norms is None:
        norms = pairwise_norms(E)
    contained = set()
    indeterminate = set()
    witnesses = {}
    for t in range(E.spec.q):
        if pattern.n > len(E):
            continue
        if pattern.edge_count and len(E) and not np.any(norms == t):
            continue
        g = distance_graph(E, t, norms=norms) if len(E) else Graph(0)
        try:
            w = contains_subgraph(g, pattern, budget=budget)
        except BudgetExceeded:
            indeterminate.add(t)
            continue
        if w is not None:
            contained.add(t)
            witnesses[t] = w
    return GraphDistanceSet(E.spec, frozenset(contained), frozenset(indeterminate), witnesses)


# -- file format -----------------------------------------------------------


def write_points_file(E: PointSet, path) -> None:
    """Header `p k d n`, one modulus-coefficient line, then n lines of
    d*k integers, coefficient-major (coefficient index is the outer
    loop: first the constant terms of all d coordinates, then the X
    coefficients, ...)."""
    spec = E.spec
    with open(path, "w") as fh:
        fh.write(f"{spec.p} {spec.k} {E.d} {len(E)}\n")
        fh.write(" ".join(str(c) for c in spec.modulus) + "\n")
        for row in E.codes:
            cells = []
            for c in range(spec.k):
                pc = spec.p**c
                cells.extend((int(code) // pc) % spec.p for code in row)
            fh.write(" ".join(str(c) for c in cells) + "\n")


def read_points_file(path) -> PointSet:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4:
            raise ValueError("points file header must be `p k d n`")
        p, k, d, n = map(int, header)
        modulus = tuple(int(c) for c in fh.readline().split())
        spec = FieldSpec(p, k, modulus)
        codes = np.empty((n, d), dtype=np.int32)
        for i in range(n):
            cells = fh.readline().split()
            if len(cells) != d * k:
                raise ValueError(f"point line {i} needs {d*k} integers")
            for j in range(d):
                code = 0
                for c in range(k - 1, -1, -1):
                    code = code * p + int(cells[c * d + j]) % p
                codes[i, j] = code
        return PointSet(spec, d, codes)
