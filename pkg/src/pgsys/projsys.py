"""Projective h-(n,r,s)_q systems: multisets of subspaces and their invariants.

A system is verified by exact incidence counting.  Hyperplane counts use the
dual trick: the hyperplanes containing a subspace S are exactly the points of
dual(S), so one pass over the elements fills the whole incidence table in
O(n * [r-h]_q) instead of O(n * [r]_q) subspace tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import field as F
from . import geometry as G
from .field import FieldCtx
from .geometry import MatrixQ, Subspace


class ProjSystem:
    """Multiset of subspaces of GF(q)^r with declared maximum dimension h."""

    __slots__ = ("ctx", "r", "h", "elements")

    def __init__(self, ctx: FieldCtx, r: int, h: int, elements: Iterable[Subspace],
                 allow_degenerate: bool = False):
        elements = tuple(elements)
        if not 1 <= h <= r:
            raise ValueError(f"need 1 <= h <= r, got h={h}, r={r}")
        for s in elements:
            if s.ctx != ctx or s.r != r:
                raise ValueError("element ambient mismatch")
            if s.dim > h:
                raise ValueError(f"element of dim {s.dim} exceeds h={h}")
            if s.dim == 0 and not allow_degenerate:
                raise ValueError("degenerate dim-0 element (pass allow_degenerate=True)")
        self.ctx = ctx
        self.r = r
        self.h = h
        self.elements = elements

    @property
    def n(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"ProjSystem({self.ctx}, r={self.r}, h={self.h}, n={self.n})"


@dataclass(frozen=True)
class SystemReport:
    n: int
    s: int
    s_min: int
    mu: int
    faithful: bool
    spanning: bool
    hyperplane_counts: tuple[int, ...]

    @property
    def histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.hyperplane_counts:
            out[c] = out.get(c, 0) + 1
        return out


@dataclass(frozen=True)
class PointMultiset:
    ctx: FieldCtx
    r: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class MultispreadReport:
    ok: bool
    k: int
    h: int
    lam: int
    mu: int
    s: int
    witness: tuple[int, ...] | None = None  # point with deviating coverage, if any


def _hyperplane_counts(sys: ProjSystem) -> list[int]:
    idx = G.point_index_map(sys.ctx, sys.r)
    counts = [0] * len(idx)
    for s in sys.elements:
        for normal in G.subspace_points(G.dual_space(s)):
            counts[idx[normal]] += 1
    return counts


def _point_counts(sys: ProjSystem) -> list[int]:
    idx = G.point_index_map(sys.ctx, sys.r)
    counts = [0] * len(idx)
    for s in sys.elements:
        for v in G.subspace_points(s):
            counts[idx[v]] += 1
    return counts


def verify(sys: ProjSystem) -> SystemReport:
    """Exact s (max hyperplane incidence), s_min, and mu (max point coverage)."""
    hc = _hyperplane_counts(sys)
    pc = _point_counts(sys)
    n = sys.n
    s = max(hc) if hc else 0
    s_min = min(hc) if hc else 0
    mu = max(pc) if pc else 0
    if n == 0:
        s = s_min = mu = 0
    faithful = all(e.dim == sys.h for e in sys.elements)
    return SystemReport(
        n=n, s=s, s_min=s_min, mu=mu,
        faithful=faithful, spanning=s < n,
        hyperplane_counts=tuple(hc),
    )


def _basis_alpha(big: FieldCtx) -> int:
    return 2 if big.q > 2 else 1


def additive_construct(gen: MatrixQ, small: FieldCtx) -> ProjSystem:
    """System of column-block spans from an r x n matrix over GF(q^h).

    Row t of gen is expanded entrywise over the basis (1, alpha, ..., alpha^(h-1))
    into h small-field rows of the subfield generator matrix; element c is the
    span of the h columns coming from column c.
    """
    big = gen.ctx
    h = F._extension_degree(big, small)
    r, n = gen.rows, gen.cols
    expand = F.expand_coords
    elements = []
    for c in range(n):
        col = [gen.entries[t * n + c] for t in range(r)]
        coords = [expand(big, small, e) for e in col]
        rows = [[coords[t][m] for t in range(r)] for m in range(h)]
        elements.append(G.subspace_from_rows(small, r, rows))
    return ProjSystem(small, r, h, elements)


def subfield_construct(code_gen: MatrixQ, small: FieldCtx) -> ProjSystem:
    """Theorem-2 subfield construction from a k x n big-field generator matrix.

    The k big rows g_j are replaced by the k*h rows alpha^i * g_j, so the
    resulting system lives in GF(q)^(k*h).
    """
    big = code_gen.ctx
    h = F._extension_degree(big, small)
    alpha = _basis_alpha(big)
    k, n = code_gen.rows, code_gen.cols
    mul, power = F.mul, F.power
    rows = []
    for j in range(k):
        gj = code_gen.row(j)
        for i in range(h):
            a = power(big, alpha, i)
            rows.append([mul(big, a, e) for e in gj])
    stacked = MatrixQ.from_rows(big, rows, cols=n)
    return additive_construct(stacked, small)


def additive_generator(sys: ProjSystem) -> MatrixQ:
    """r x n big-field matrix whose column c packs element c's basis rows.

    Entry (t, c) is sum_m embed(b_m[t]) * alpha^m over the basis rows b_m of
    element c, so additive_construct inverts this exactly.
    """
    ctx, r, h = sys.ctx, sys.r, sys.h
    big = F.make_field(ctx.p, ctx.l * h)
    alpha = _basis_alpha(big)
    embed = F.embed_subfield
    mul, add, power = F.mul, F.add, F.power
    n = sys.n
    entries = [0] * (r * n)
    for c, s in enumerate(sys.elements):
        for m, brow in enumerate(s.rows()):
            am = power(big, alpha, m)
            for t in range(r):
                if brow[t]:
                    term = mul(big, embed(big, ctx, brow[t]), am)
                    entries[t * n + c] = add(big, entries[t * n + c], term)
    return MatrixQ(big, r, n, entries)


def expand_points(sys: ProjSystem) -> PointMultiset:
    """Replace each element by its [h]_q points (faithful systems only)."""
    for e in sys.elements:
        if e.dim != sys.h:
            raise ValueError("expand_points requires a faithful system")
    return PointMultiset(sys.ctx, sys.r, tuple(_point_counts(sys)))


@dataclass(frozen=True)
class WeightReport:
    weights: dict[int, int]  # hyperplane weight -> number of hyperplanes
    d_min: int
    w_max: int


def weight_distribution(pm: PointMultiset, full_spectrum: bool = False) -> WeightReport:
    """Hyperplane weights of the expanded code: w(H) = total - (points on H).

    With full_spectrum=True each hyperplane is counted q-1 times (one per
    nonzero functional with that kernel).
    """
    ctx, r = pm.ctx, pm.r
    idx = G.point_index_map(ctx, r)
    points = G._points_cache(ctx, r)
    incidence = [0] * len(idx)
    for i, c in enumerate(pm.counts):
        if c:
            pt = G.subspace_from_rows(ctx, r, [points[i]])
            for normal in G.subspace_points(G.dual_space(pt)):
                incidence[idx[normal]] += c
    total = pm.total
    weights: dict[int, int] = {}
    mult = ctx.q - 1 if full_spectrum else 1
    for inc in incidence:
        w = total - inc
        weights[w] = weights.get(w, 0) + mult
    return WeightReport(weights=weights, d_min=min(weights), w_max=max(weights))


def divisibility_check(pm: PointMultiset, delta: int) -> bool:
    """True iff every hyperplane weight of pm is divisible by delta."""
    return all(w % delta == 0 for w in weight_distribution(pm).weights)


def multispread_check(sys: ProjSystem, h: int | None = None) -> MultispreadReport:
    """Certify constant weighted point coverage (dim-t elements weigh q^(h-t)).

    Cross-checks the derived s against exact hyperplane counts via
    s = n - q^(k-h) mu, (q^h - 1) s = (q^(k-h) - 1) mu + lambda, and the
    congruence lambda = -mu (q^k - 1) mod (q^h - 1); a multispread also has
    to be one-weight (every hyperplane contains exactly s elements).
    """
    if h is None:
        h = sys.h
    ctx, k = sys.ctx, sys.r
    q = ctx.q
    idx = G.point_index_map(ctx, k)
    cov = [0] * len(idx)
    lam = 0
    for s_el in sys.elements:
        w = q ** (h - s_el.dim)
        lam += w - 1
        for v in G.subspace_points(s_el):
            cov[idx[v]] += w
    mu = cov[0] if cov else 0
    for i, c in enumerate(cov):
        if c != mu:
            points = G._points_cache(ctx, k)
            return MultispreadReport(ok=False, k=k, h=h, lam=lam, mu=mu, s=0,
                                     witness=points[i])
    n = sys.n
    qkh = q ** (k - h)
    s = n - qkh * mu
    if (q**h - 1) * s != (qkh - 1) * mu + lam:
        return MultispreadReport(ok=False, k=k, h=h, lam=lam, mu=mu, s=-1)
    if (lam + mu * (q**k - 1)) % (q**h - 1) != 0:
        return MultispreadReport(ok=False, k=k, h=h, lam=lam, mu=mu, s=s)
    rep = verify(sys)
    if rep.s != s or rep.s_min != s:
        return MultispreadReport(ok=False, k=k, h=h, lam=lam, mu=mu, s=s)
    return MultispreadReport(ok=True, k=k, h=h, lam=lam, mu=mu, s=s)


def code_params(sys: ProjSystem) -> tuple[int, Fraction, int]:
    """Additive-code parameters [n, r/h, n-s] of a verified system."""
    rep = verify(sys)
    return sys.n, Fraction(sys.r, sys.h), sys.n - rep.s
