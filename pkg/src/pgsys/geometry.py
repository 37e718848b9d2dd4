"""Linear algebra over FieldCtx: matrices, RREF, canonical subspaces of GF(q)^r.

Dimensions are algebraic throughout: points are 1-dimensional subspaces,
hyperplanes are (r-1)-dimensional.  A hyperplane is represented by its
normalized normal vector.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from . import field as F
from .field import FieldCtx


class MatrixQ:
    """Immutable row-major matrix over a FieldCtx."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: FieldCtx, rows: int, cols: int, entries: Sequence[int]):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        for e in entries:
            if not 0 <= e < ctx.q:
                raise ValueError(f"entry {e} out of range for {ctx}")
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, ctx: FieldCtx, row_list: Sequence[Sequence[int]], cols: int | None = None) -> "MatrixQ":
        row_list = [tuple(r) for r in row_list]
        if cols is None:
            cols = len(row_list[0]) if row_list else 0
        flat = []
        for r in row_list:
            if len(r) != cols:
                raise ValueError("ragged rows")
            flat.extend(r)
        return cls(ctx, len(row_list), cols, flat)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.row(i) for i in range(self.rows))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixQ)
            and self.ctx == other.ctx
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.ctx, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"MatrixQ({self.ctx}, {self.rows}x{self.cols})"


def _rref_rows(ctx: FieldCtx, rows: list[list[int]]) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """In-place Gaussian elimination; returns (nonzero RREF rows, pivot columns)."""
    mul, add, neg, inv = ctx.mul_fn, ctx.add_fn, ctx.neg_fn, ctx.inv_fn
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        lead = prow[col]
        if lead != 1:
            s = inv(lead)
            rows[rank] = prow = [mul(s, e) for e in prow]
        for i in range(nrows):
            if i != rank and rows[i][col]:
                c = neg(rows[i][col])
                ri = rows[i]
                rows[i] = [add(ri[j], mul(c, prow[j])) for j in range(ncols)]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return tuple(tuple(r) for r in rows[:rank]), tuple(pivots)


def rref(m: MatrixQ) -> MatrixQ:
    """Reduced row echelon form of m; zero rows are kept (row count preserved)."""
    work = [list(m.row(i)) for i in range(m.rows)]
    nz, _ = _rref_rows(m.ctx, work)
    flat: list[int] = []
    for r in nz:
        flat.extend(r)
    flat.extend([0] * ((m.rows - len(nz)) * m.cols))
    return MatrixQ(m.ctx, m.rows, m.cols, flat)


class Subspace:
    """Canonical subspace of GF(q)^r: basis in RREF with no zero rows.

    Canonicity makes == and hash structural: equal subspaces compare equal.
    """

    __slots__ = ("ctx", "r", "basis", "pivots")

    def __init__(self, ctx: FieldCtx, r: int, basis_rows: tuple[tuple[int, ...], ...], pivots: tuple[int, ...]):
        # trusted constructor: callers go through subspace_from_rows
        self.ctx = ctx
        self.r = r
        self.basis = MatrixQ.from_rows(ctx, basis_rows, cols=r)
        self.pivots = pivots

    @property
    def dim(self) -> int:
        return self.basis.rows

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self.basis.row_tuples()

    def contains_vector(self, v: Sequence[int]) -> bool:
        ctx = self.ctx
        red = _reduce_vector(ctx, list(v), self.rows(), self.pivots)
        return not any(red)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ctx == other.ctx
            and self.r == other.r
            and self.basis.entries == other.basis.entries
        )

    def __hash__(self) -> int:
        return hash((self.ctx, self.r, self.basis.entries))

    def __repr__(self) -> str:
        return f"Subspace({self.ctx}, r={self.r}, dim={self.dim})"


def _reduce_vector(ctx: FieldCtx, v: list[int], basis_rows: Sequence[Sequence[int]], pivots: Sequence[int]) -> list[int]:
    """Subtract basis multiples from v to clear its entries at the pivot positions."""
    mul, add, neg = ctx.mul_fn, ctx.add_fn, ctx.neg_fn
    for row, p in zip(basis_rows, pivots):
        c = v[p]
        if c:
            c = neg(c)
            v = [add(v[j], mul(c, row[j])) for j in range(len(v))]
    return v


def subspace_from_rows(ctx: FieldCtx, r: int, rows: Iterable[Sequence[int]]) -> Subspace:
    """Canonical subspace spanned by the given row vectors (zero rows dropped)."""
    work = []
    for row in rows:
        row = list(row)
        if len(row) != r:
            raise ValueError(f"row of width {len(row)} in ambient {r}")
        work.append(row)
    if not work:
        return Subspace(ctx, r, (), ())
    nz, piv = _rref_rows(ctx, work)
    return Subspace(ctx, r, nz, piv)


def _normalized_vectors(ctx: FieldCtx, r: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for lead in range(r - 1, -1, -1):
        prefix = (0,) * lead + (1,)
        for tail in itertools.product(range(ctx.q), repeat=r - 1 - lead):
            out.append(prefix + tail)
    return tuple(out)


@lru_cache(maxsize=None)
def _points_cache(ctx: FieldCtx, r: int) -> tuple[tuple[int, ...], ...]:
    return _normalized_vectors(ctx, r)


@lru_cache(maxsize=None)
def point_index_map(ctx: FieldCtx, r: int) -> dict[tuple[int, ...], int]:
    """Normalized point vector -> index in the canonical enumeration."""
    return {v: i for i, v in enumerate(_points_cache(ctx, r))}


def normalize_vector(ctx: FieldCtx, v: Sequence[int]) -> tuple[int, ...]:
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    for e in v:
        if e:
            if e == 1:
                return tuple(v)
            s = ctx.inv_fn(e)
            mul = ctx.mul_fn
            return tuple(mul(s, x) for x in v)
    raise ValueError("zero vector has no normalization")


def enumerate_points(ctx: FieldCtx, r: int) -> list[Subspace]:
    """All [r]_q projective points as dim-1 subspaces, in the canonical order."""
    out = []
    for v in _points_cache(ctx, r):
        lead = next(i for i, e in enumerate(v) if e)
        out.append(Subspace(ctx, r, (v,), (lead,)))
    return out


def enumerate_hyperplanes(ctx: FieldCtx, r: int) -> list[tuple[int, ...]]:
    """All [r]_q hyperplane normal vectors (normalized), in the canonical order."""
    return list(_points_cache(ctx, r))


def _dot(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> int:
    mul, add = ctx.mul_fn, ctx.add_fn
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = add(acc, mul(x, y))
    return acc


def in_hyperplane(s: Subspace, normal: Sequence[int]) -> bool:
    """True iff every basis row of s is orthogonal to the normal vector."""
    if len(normal) != s.r:
        raise ValueError("normal vector has wrong ambient dimension")
    ctx = s.ctx
    return all(_dot(ctx, row, normal) == 0 for row in s.rows())


def span_pair(a: Subspace, b: Subspace) -> Subspace:
    if a.ctx != b.ctx or a.r != b.r:
        raise ValueError("ambient mismatch")
    return subspace_from_rows(a.ctx, a.r, a.rows() + b.rows())


def intersect_dim(a: Subspace, b: Subspace) -> int:
    return a.dim + b.dim - span_pair(a, b).dim


def project_through(s: Subspace, u: Subspace) -> Subspace:
    """Image of s in the quotient by u, coordinatized on u's non-pivot columns."""
    if s.ctx != u.ctx or s.r != u.r:
        raise ValueError("ambient mismatch")
    ctx = s.ctx
    keep = [j for j in range(u.r) if j not in u.pivots]
    imgs = []
    for row in s.rows():
        red = _reduce_vector(ctx, list(row), u.rows(), u.pivots)
        imgs.append([red[j] for j in keep])
    return subspace_from_rows(ctx, len(keep), imgs)


def dual_space(s: Subspace) -> Subspace:
    """Annihilator of s: all v with basis . v = 0; dim = r - dim s."""
    ctx, r = s.ctx, s.r
    piv = s.pivots
    rows = s.rows()
    neg = ctx.neg_fn
    free = [j for j in range(r) if j not in piv]
    duals = []
    for f in free:
        v = [0] * r
        v[f] = 1
        for i, p in enumerate(piv):
            v[p] = neg(rows[i][f])
        duals.append(v)
    return subspace_from_rows(ctx, r, duals)


def subspace_points(s: Subspace) -> list[tuple[int, ...]]:
    """Normalized point vectors lying in s, each exactly once.

    Combinations of the RREF basis whose first nonzero coefficient is 1 are
    already normalized (the leading coordinate sits at that row's pivot).
    """
    ctx = s.ctx
    k = s.dim
    if k == 0:
        return []
    rows = s.rows()
    mul, add = ctx.mul_fn, ctx.add_fn
    q, r = ctx.q, s.r
    out = []
    for lead in range(k - 1, -1, -1):
        base = rows[lead]
        for coeffs in itertools.product(range(q), repeat=k - 1 - lead):
            v = list(base)
            for c, row in zip(coeffs, rows[lead + 1 :]):
                if c:
                    v = [add(v[j], mul(c, row[j])) for j in range(r)]
            out.append(tuple(v))
    return out


def gauss_point_count(q: int, t: int) -> int:
    """[t]_q = (q^t - 1)/(q - 1), the number of points of GF(q)^t."""
    if t < 0:
        raise ValueError("negative dimension")
    return (q**t - 1) // (q - 1)


def enumerate_subspaces(ctx: FieldCtx, r: int, h: int) -> Iterator[Subspace]:
    """All dim-h subspaces of GF(q)^r, lazily, grouped by pivot pattern."""
    if not 0 <= h <= r:
        return
    if h == 0:
        yield Subspace(ctx, r, (), ())
        return
    q = ctx.q
    for piv in itertools.combinations(range(r), h):
        pivset = set(piv)
        # free cells: (row i, col j) with j > piv[i] and j not a pivot column
        cells = [(i, j) for i in range(h) for j in range(piv[i] + 1, r) if j not in pivset]
        template = [[0] * r for _ in range(h)]
        for i, p in enumerate(piv):
            template[i][p] = 1
        for vals in itertools.product(range(q), repeat=len(cells)):
            rows = [row[:] for row in template]
            for (i, j), v in zip(cells, vals):
                rows[i][j] = v
            yield Subspace(ctx, r, tuple(tuple(row) for row in rows), piv)


def mat_mul(ctx: FieldCtx, a: MatrixQ, b: MatrixQ) -> MatrixQ:
    if a.cols != b.rows:
        raise ValueError("shape mismatch")
    mul, add = ctx.mul_fn, ctx.add_fn
    brows = b.row_tuples()
    out = []
    for i in range(a.rows):
        arow = a.row(i)
        for j in range(b.cols):
            acc = 0
            for k in range(a.cols):
                if arow[k] and brows[k][j]:
                    acc = add(acc, mul(arow[k], brows[k][j]))
            out.append(acc)
    return MatrixQ(ctx, a.rows, b.cols, out)


def mat_inv(ctx: FieldCtx, a: MatrixQ) -> MatrixQ:
    """Inverse via elimination on [a | I]; raises ValueError if singular."""
    if a.rows != a.cols:
        raise ValueError("not square")
    n = a.rows
    work = [list(a.row(i)) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    nz, piv = _rref_rows(ctx, work)
    if len(nz) < n or piv != tuple(range(n)):
        raise ValueError("singular matrix")
    return MatrixQ.from_rows(ctx, [row[n:] for row in nz], cols=n)


def identity(ctx: FieldCtx, n: int) -> MatrixQ:
    return MatrixQ(ctx, n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])
