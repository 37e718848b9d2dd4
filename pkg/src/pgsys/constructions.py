"""Generative constructions: ovals, line spreads, projected ovals and
extended-Reed-Solomon systems, and the commuting-unipotent-pair construction.

Every nontrivial builder verifies its output before returning and raises
ConstructionError when the advertised parameters are not met.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import field as F
from . import geometry as G
from . import groups as GR
from . import projsys as P
from .field import FieldCtx
from .geometry import MatrixQ, Subspace
from .projsys import ProjSystem


class ConstructionError(RuntimeError):
    pass


# ---------------------------------------------------------------- ovals

@dataclass(frozen=True)
class OvalSpec:
    ctx: FieldCtx
    kind: str  # "conic" | "hyperoval"
    points: tuple[Subspace, ...]


def _check_arc(ctx: FieldCtx, points: Sequence[Subspace]) -> None:
    """No three of the given points of GF(q)^3 on a common line."""
    for normal in G.enumerate_hyperplanes(ctx, 3):
        inc = sum(1 for p in points if G.in_hyperplane(p, normal))
        if inc > 2:
            raise ConstructionError(f"three points collinear on {normal}")


def _conic_points(ctx: FieldCtx) -> list[Subspace]:
    pts = []
    for t in ctx.elements():
        t2 = F.mul(ctx, t, t)
        pts.append(G.subspace_from_rows(ctx, 3, [(1, t, t2)]))
    pts.append(G.subspace_from_rows(ctx, 3, [(0, 0, 1)]))
    return pts


def make_conic(ctx: FieldCtx) -> OvalSpec:
    """The q+1 points (1,t,t^2) plus (0,0,1); an oval for every q."""
    pts = _conic_points(ctx)
    _check_arc(ctx, pts)
    return OvalSpec(ctx, "conic", tuple(pts))


def make_hyperoval(ctx: FieldCtx) -> OvalSpec:
    """Conic plus nucleus (0,1,0): q+2 points, even q only."""
    if ctx.p != 2:
        raise ConstructionError("hyperovals require even q")
    pts = _conic_points(ctx) + [G.subspace_from_rows(ctx, 3, [(0, 1, 0)])]
    _check_arc(ctx, pts)
    return OvalSpec(ctx, "hyperoval", tuple(pts))


# ------------------------------------------------- subfield expansion helpers

def expand_vector(big: FieldCtx, small: FieldCtx, v: Sequence[int]) -> tuple[int, ...]:
    """Concatenated coordinate expansion: GF(q^h)^R -> GF(q)^(R h)."""
    out: list[int] = []
    for e in v:
        out.extend(F.expand_coords(big, small, e))
    return tuple(out)


def expand_subspace(big: FieldCtx, small: FieldCtx, rows: Sequence[Sequence[int]], ambient: int) -> Subspace:
    """GF(q)-span of {alpha^m . w : w in rows}, as a subspace of GF(q)^(ambient h)."""
    h = F._extension_degree(big, small)
    alpha = 2 if big.q > 2 else 1
    small_rows = []
    for w in rows:
        if len(w) != ambient:
            raise ValueError("row width mismatch")
        for m in range(h):
            am = F.power(big, alpha, m)
            small_rows.append(expand_vector(big, small, [F.mul(big, am, e) for e in w]))
    return G.subspace_from_rows(small, ambient * h, small_rows)


# ---------------------------------------------------------------- line spread

def line_spread(ctx_small: FieldCtx, ctx_big: FieldCtx) -> ProjSystem:
    """The q^2+1 pairwise-disjoint lines of GF(q)^4 from the points of GF(q^2)^2."""
    if ctx_big.p != ctx_small.p or ctx_big.l != 2 * ctx_small.l:
        raise ValueError("big field must be the quadratic extension of the small one")
    points = G.enumerate_hyperplanes(ctx_big, 2)  # normalized vectors of GF(q^2)^2
    gen = MatrixQ.from_rows(ctx_big, list(zip(*points)), cols=len(points))
    sys = P.subfield_construct(gen, ctx_small)
    if sys.n != ctx_small.q**2 + 1:
        raise ConstructionError("unexpected spread size")
    return sys


# ------------------------------------------------------- greedy space picking

def _extend_in(base: Subspace, within: Subspace, target: int) -> Subspace:
    """Extend base to dimension target using canonical-order points of within."""
    cur = base
    for v in G.subspace_points(within):
        if cur.dim == target:
            break
        cand = G.subspace_from_rows(cur.ctx, cur.r, cur.rows() + (v,))
        if cand.dim == cur.dim + 1:
            cur = cand
    if cur.dim != target:
        raise ConstructionError("could not extend subspace to the target dimension")
    return cur


def _extend_pair(base: Subspace, within: Subspace, target: int, partner: Subspace) -> Subspace:
    """Extend base to dimension target so that the result spans `within`
    together with partner; points are taken in canonical order."""
    cur = base
    joint = G.span_pair(partner, base)
    for v in G.subspace_points(within):
        if joint.dim == within.dim:
            break
        jcand = G.subspace_from_rows(cur.ctx, cur.r, joint.rows() + (v,))
        if jcand.dim == joint.dim + 1:
            cur = G.subspace_from_rows(cur.ctx, cur.r, cur.rows() + (v,))
            joint = jcand
    if joint.dim != within.dim:
        raise ConstructionError("could not reach the required joint span")
    return _extend_in(cur, within, target)


# ------------------------------------------------- projected oval construction

def construct_projected_oval(ctx_small: FieldCtx, h: int) -> ProjSystem:
    """Faithful h-(q^h+2, floor(2.5h), 2)_q system from an oval over GF(q^h).

    Steps: oval minus a point P, subfield expansion, projection through a
    ceil(h/2)-subspace of P', then two h-spaces through P'' spanning L''
    (L = the tangent at P).
    """
    if h < 2:
        raise ValueError("need h >= 2")
    small = ctx_small
    big = F.make_field(small.p, small.l * h)
    qh = big.q

    # oval = conic; P = (0,0,1); remaining points are (1,t,t^2), t in GF(q^h)
    affine = []
    for t in big.elements():
        t2 = F.mul(big, t, t)
        affine.append(expand_subspace(big, small, [(1, t, t2)], 3))
    p_exp = expand_subspace(big, small, [(0, 0, 1)], 3)
    tangent_exp = expand_subspace(big, small, [(0, 0, 1), (0, 1, 0)], 3)

    u = G.subspace_from_rows(small, 3 * h, p_exp.rows()[: (h + 1) // 2])
    elems = [G.project_through(x, u) for x in affine]
    p2 = G.project_through(p_exp, u)
    l2 = G.project_through(tangent_exp, u)

    a1 = _extend_in(p2, l2, h)
    a2 = _extend_pair(p2, l2, h, a1)
    sys = ProjSystem(small, 3 * h - (h + 1) // 2, h, elems + [a1, a2])

    rep = P.verify(sys)
    if not (rep.n == qh + 2 and rep.s == 2 and rep.faithful):
        raise ConstructionError(f"projected oval verification failed: {rep}")
    return sys


# ------------------------------------------- extended Reed-Solomon construction

def _rs_columns(big: FieldCtx, s: int) -> list[tuple[int, ...]]:
    cols = [tuple([1] + [0] * s)]
    for x in range(1, big.q):
        cols.append(tuple(F.power(big, x, e) for e in range(s + 1)))
    return cols


def _check_vandermonde(big: FieldCtx, cols: Sequence[Sequence[int]], s: int, trials: int = 20) -> None:
    """Sampled check: any s+1-i columns span an (s+1-i)-space disjoint from S_i."""
    import random

    rng = random.Random(2025)
    for _ in range(trials):
        i = rng.randint(1, s)
        subset = rng.sample(range(len(cols)), s + 1 - i)
        span = G.subspace_from_rows(big, s + 1, [cols[c] for c in subset])
        if span.dim != s + 1 - i:
            raise ConstructionError(f"columns {subset} are dependent")
        s_i = G.subspace_from_rows(
            big, s + 1, [[1 if t == s + 1 - i + m else 0 for t in range(s + 1)] for m in range(i)]
        )
        if G.intersect_dim(span, s_i) != 0:
            raise ConstructionError(f"columns {subset} meet the tail space S_{i}")


def construct_projected_rs(ctx_small: FieldCtx, h: int, s: int) -> ProjSystem:
    """Faithful h-(q^h+2, hs+floor(h/2), s)_q system from the extended
    Reed-Solomon arc of GF(q^h)^(s+1)."""
    if h < 2 or s < 2:
        raise ValueError("need h >= 2 and s >= 2")
    small = ctx_small
    big = F.make_field(small.p, small.l * h)
    qh = big.q

    cols = _rs_columns(big, s)
    _check_vandermonde(big, cols, s)

    ambient_big = s + 1
    arcs = [expand_subspace(big, small, [c], ambient_big) for c in cols]
    e_last = [0] * ambient_big
    e_last[-1] = 1
    e_prev = [0] * ambient_big
    e_prev[-2] = 1
    s1_exp = expand_subspace(big, small, [e_last], ambient_big)
    s2_exp = expand_subspace(big, small, [e_prev, e_last], ambient_big)

    u = G.subspace_from_rows(small, ambient_big * h, s1_exp.rows()[: (h + 1) // 2])
    elems = [G.project_through(a, u) for a in arcs]
    pi_s1 = G.project_through(s1_exp, u)
    pi_s2 = G.project_through(s2_exp, u)

    b = _extend_in(pi_s1, pi_s2, h)
    b2 = _extend_pair(pi_s1, pi_s2, h, b)
    sys = ProjSystem(small, h * s + h // 2, h, elems + [b, b2])

    rep = P.verify(sys)
    if not (rep.n == qh + 2 and rep.s == s and rep.faithful):
        raise ConstructionError(f"projected RS verification failed: {rep}")
    return sys


# --------------------------------------- commuting unipotent pair (ambient 5)

@dataclass(frozen=True)
class UnipotentPairFrame:
    q: int
    beta: int  # non-square residue
    a: GR.SemilinearMap
    b: GR.SemilinearMap
    z: int
    zp: int


def _smallest_non_square(q: int) -> int:
    squares = {pow(x, 2, q) for x in range(1, q)}
    for b in range(2, q):
        if b not in squares:
            return b
    raise ConstructionError(f"no non-square residue for q={q}")


def make_unipotent_pair_frame(q: int, z: int = 0, zp: int = 0) -> UnipotentPairFrame:
    """The two commuting order-q matrices acting on GF(q)^5 (odd prime q)."""
    if q % 2 == 0 or not F._is_prime(q):
        raise ConstructionError("odd prime q required")
    ctx = F.make_field(q)
    beta = _smallest_non_square(q)

    def mat(extra: dict[tuple[int, int], int]) -> MatrixQ:
        ent = [[1 if i == j else 0 for j in range(5)] for i in range(5)]
        for (i, j), res in extra.items():
            ent[i][j] = F.from_int(ctx, res)
        return MatrixQ.from_rows(ctx, ent)

    a = mat({(0, 2): 1, (1, 3): 1, (2, 4): 1})
    b = mat({(0, 3): beta, (1, 2): 1, (3, 4): 1})
    if G.mat_mul(ctx, a, b) != G.mat_mul(ctx, b, a):
        raise ConstructionError("generators do not commute")
    for m in (a, b):
        power = m
        for _ in range(q - 1):
            power = G.mat_mul(ctx, m, power)
        if power != G.identity(ctx, 5):
            raise ConstructionError("generator order is not q")
    return UnipotentPairFrame(q, beta, GR.SemilinearMap(a), GR.SemilinearMap(b), z % q, zp % q)


def unipotent_pair_invariant_lines(q: int) -> list[Subspace]:
    """The q+1 lines fixed by both generators: <e4,e5> and <(0,0,1,y,0),e5>."""
    frame = make_unipotent_pair_frame(q)
    ctx = frame.a.ctx
    lines = [G.subspace_from_rows(ctx, 5, [(0, 0, 0, 1, 0), (0, 0, 0, 0, 1)])]
    for y in range(q):
        lines.append(
            G.subspace_from_rows(ctx, 5, [(0, 0, 1, F.from_int(ctx, y), 0), (0, 0, 0, 0, 1)])
        )
    for line in lines:
        if GR.apply(frame.a, line) != line or GR.apply(frame.b, line) != line:
            raise ConstructionError(f"line {line.rows()} is not invariant")
    return lines


def construct_unipotent_pair(q: int, z: int = 0, zp: int = 0,
                             extras: Optional[Sequence[Subspace]] = None) -> ProjSystem:
    """Orbit (size q^2) of the line [(1,0,1/2,0,z), (0,1,-1/2,0,z')] under the
    commuting pair, plus up to two invariant lines (default <e4,e5>, <e3,e5>).

    With both default extras the result is a faithful 2-(q^2+2, 5, 2)_q system;
    with a single extra, point multiplicity stays 1 (n = q^2+1).
    """
    frame = make_unipotent_pair_frame(q, z, zp)
    ctx = frame.a.ctx
    group = GR.closure([frame.a, frame.b])
    if group.order != q * q:
        raise ConstructionError(f"group order {group.order}, expected {q * q}")

    half = (q + 1) // 2  # the residue 1/2
    rep = G.subspace_from_rows(
        ctx, 5,
        [
            [1, 0, F.from_int(ctx, half), 0, F.from_int(ctx, frame.z)],
            [0, 1, F.from_int(ctx, q - half), 0, F.from_int(ctx, frame.zp)],
        ],
    )
    orb = sorted(GR.orbit(group, rep), key=lambda x: x.basis.entries)
    if len(orb) != q * q:
        raise ConstructionError(f"orbit size {len(orb)}, expected {q * q}")

    if extras is None:
        extras = [
            G.subspace_from_rows(ctx, 5, [(0, 0, 0, 1, 0), (0, 0, 0, 0, 1)]),
            G.subspace_from_rows(ctx, 5, [(0, 0, 1, 0, 0), (0, 0, 0, 0, 1)]),
        ]
    extras = list(extras)
    for e in extras:
        if GR.apply(frame.a, e) != e or GR.apply(frame.b, e) != e:
            raise ConstructionError("extra line is not group-invariant")

    sys = ProjSystem(ctx, 5, 2, orb + extras)
    rep_report = P.verify(sys)
    if not (rep_report.n == q * q + len(extras) and rep_report.s == 2 and rep_report.faithful):
        raise ConstructionError(f"verification failed: {rep_report}")
    if not GR.stabilizer_invariance_check(group, sys):
        raise ConstructionError("system is not group-invariant")
    return sys
