"""Semilinear symmetry groups acting on subspaces, and orbit listings.

Action convention (fixed project-wide): a semilinear map (M, e) sends a row
vector v to sigma^e(v) . M -- the field automorphism sigma: x -> x^(p^e) is
applied entrywise first, then the matrix acts on the right.  Appendix-style
orbit annotations in the bundled datasets reproduce exactly under this
convention, which is the evidence that pins it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import field as F
from . import geometry as G
from .field import FieldCtx
from .geometry import MatrixQ, Subspace
from .projsys import ProjSystem

_ORDER_CAP = 10**5


class SemilinearMap:
    """Invertible matrix combined with a field-automorphism power."""

    __slots__ = ("mat", "frob", "_key")

    def __init__(self, mat: MatrixQ, frob: int = 0):
        if mat.rows != mat.cols:
            raise ValueError("matrix must be square")
        G.mat_inv(mat.ctx, mat)  # raises ValueError when singular
        self.mat = mat
        self.frob = frob % mat.ctx.l
        self._key = (mat.entries, self.frob)

    @property
    def ctx(self) -> FieldCtx:
        return self.mat.ctx

    @property
    def r(self) -> int:
        return self.mat.rows

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SemilinearMap)
            and self.ctx == other.ctx
            and self._key == other._key
        )

    def __hash__(self) -> int:
        return hash((self.ctx, self._key))

    def __repr__(self) -> str:
        return f"SemilinearMap({self.ctx}, r={self.r}, frob={self.frob})"


def identity_map(ctx: FieldCtx, r: int) -> SemilinearMap:
    return SemilinearMap(G.identity(ctx, r), 0)


def _frob_mat(m: MatrixQ, e: int) -> MatrixQ:
    if e % m.ctx.l == 0:
        return m
    ctx = m.ctx
    return MatrixQ(ctx, m.rows, m.cols, [F.frob(ctx, a, e) for a in m.entries])


def compose(first: SemilinearMap, second: SemilinearMap) -> SemilinearMap:
    """The map 'apply first, then second': (sigma^e2(M1) . M2, e1 + e2)."""
    if first.ctx != second.ctx or first.r != second.r:
        raise ValueError("map mismatch")
    mat = G.mat_mul(first.ctx, _frob_mat(first.mat, second.frob), second.mat)
    return SemilinearMap(mat, first.frob + second.frob)


def inverse(m: SemilinearMap) -> SemilinearMap:
    inv = G.mat_inv(m.ctx, m.mat)
    return SemilinearMap(_frob_mat(inv, -m.frob), -m.frob)


def apply_vector(m: SemilinearMap, v: Sequence[int]) -> tuple[int, ...]:
    ctx = m.ctx
    r = m.r
    if len(v) != r:
        raise ValueError("vector ambient mismatch")
    if m.frob:
        v = [F.frob(ctx, a, m.frob) for a in v]
    mul, add = ctx.mul_fn, ctx.add_fn
    mat = m.mat
    out = [0] * r
    for k in range(r):
        c = v[k]
        if c:
            row = mat.row(k)
            out = [add(out[j], mul(c, row[j])) for j in range(r)]
    return tuple(out)


def apply(m: SemilinearMap, s: Subspace) -> Subspace:
    """Canonical image subspace spanned by {sigma^e(row) . M}."""
    if s.ctx != m.ctx or s.r != m.r:
        raise ValueError("ambient mismatch")
    return G.subspace_from_rows(s.ctx, s.r, [apply_vector(m, row) for row in s.rows()])


@dataclass(frozen=True)
class GroupCtx:
    generators: tuple[SemilinearMap, ...]
    elements: tuple[SemilinearMap, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def trivial_group(ctx: FieldCtx, r: int) -> GroupCtx:
    e = identity_map(ctx, r)
    return GroupCtx(generators=(), elements=(e,))


def closure(generators: Iterable[SemilinearMap], cap: int = _ORDER_CAP) -> GroupCtx:
    """Full element set generated by the given maps (BFS over right products)."""
    gens = tuple(generators)
    if not gens:
        raise ValueError("closure needs at least one generator (use trivial_group)")
    ident = identity_map(gens[0].ctx, gens[0].r)
    elements = {ident: None}  # dict for deterministic insertion order
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                f = compose(e, g)
                if f not in elements:
                    if len(elements) >= cap:
                        raise ArithmeticError(f"group order exceeds cap {cap}")
                    elements[f] = None
                    nxt.append(f)
        frontier = nxt
    return GroupCtx(generators=gens, elements=tuple(elements))


def orbit(group: GroupCtx, s: Subspace) -> set[Subspace]:
    maps = group.generators or group.elements
    seen = {s}
    frontier = [s]
    while frontier:
        nxt = []
        for x in frontier:
            for g in maps:
                y = apply(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _orbit_sorted(group: GroupCtx, s: Subspace) -> list[Subspace]:
    return sorted(orbit(group, s), key=lambda x: x.basis.entries)


@dataclass(frozen=True)
class OrbitListing:
    """Sequence of (subspace, declared orbit size or None) entries.

    A flagged entry (size given) starts a segment; unflagged entries directly
    after it, if any, are read as the explicitly listed remaining orbit
    members.  A listing without any flags is a plain multiset.
    """

    entries: tuple[tuple[Subspace, Optional[int]], ...]

    def has_flags(self) -> bool:
        return any(size is not None for _, size in self.entries)


class ListingError(ValueError):
    pass


def expand_listing(group: GroupCtx, listing: OrbitListing, h: int | None = None) -> ProjSystem:
    """Union (as a multiset) of the orbits of all flagged representatives.

    Explicitly listed orbit members are cross-checked against the computed
    orbit; declared sizes must match exactly.
    """
    entries = listing.entries
    if not entries:
        raise ListingError("empty listing")
    ctx = entries[0][0].ctx
    r = entries[0][0].r
    if h is None:
        h = max(e.dim for e, _ in entries)

    out: list[Subspace] = []
    if not listing.has_flags():
        out = [e for e, _ in entries]
        return ProjSystem(ctx, r, h, out)

    i = 0
    while i < len(entries):
        rep, size = entries[i]
        if size is None:
            raise ListingError(f"entry {i}: unflagged element outside any orbit segment")
        orb = orbit(group, rep)
        if len(orb) != size:
            raise ListingError(
                f"entry {i}: declared orbit size {size}, computed {len(orb)}"
            )
        j = i + 1
        followers = []
        while j < len(entries) and entries[j][1] is None:
            followers.append(entries[j][0])
            j += 1
        if followers:
            listed = Counter(followers)
            listed[rep] += 1
            if listed != Counter(orb):
                raise ListingError(
                    f"entry {i}: listed orbit members differ from the computed orbit"
                )
        out.extend(sorted(orb, key=lambda x: x.basis.entries))
        i = j
    return ProjSystem(ctx, r, h, out)


def stabilizer_invariance_check(group: GroupCtx, sys: ProjSystem) -> bool:
    """True iff the multiset of elements is permuted by the group.

    Checking the generators suffices: they generate every element.
    """
    maps = group.generators or group.elements
    base = Counter(sys.elements)
    for g in maps:
        if Counter(apply(g, e) for e in sys.elements) != base:
            return False
    return True
