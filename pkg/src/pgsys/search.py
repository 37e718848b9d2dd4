"""Maximization of projective systems by branch and bound over group orbits,
and exact-cover completion of partial systems to multispreads.

Solutions are unions of whole orbits of h-spaces under the prescribed group
(the trivial group gives the unrestricted search).  Branching is deterministic:
orbits in order of their lexicographically smallest representative, higher
multiplicities first.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import bounds as B
from . import geometry as G
from . import groups as GR
from . import projsys as P
from .field import FieldCtx
from .geometry import Subspace
from .groups import GroupCtx
from .projsys import ProjSystem


@dataclass
class SearchProblem:
    ctx: FieldCtx
    r: int
    h: int
    s: int
    group: Optional[GroupCtx] = None  # None = trivial
    faithful_only: bool = True
    mu_cap: Optional[int] = None
    node_limit: int = 50_000_000
    time_limit: Optional[float] = None
    seed: Optional[ProjSystem] = None
    target_n: Optional[int] = None  # stop as soon as a system this large is found
    # Branch only on trees containing the first h-space in enumeration order,
    # and (with mu_cap=1) also the first feasible second h-space.  Sound for
    # the maximum value: the collineation group permutes the h-spaces
    # transitively, and the stabilizer of one h-space is transitive on the
    # h-spaces disjoint from it, while every constraint is collineation-
    # invariant.  Requires the trivial group and no seed.
    fix_first_element: bool = False

    def __post_init__(self):
        if not (self.r > self.h >= 1) or self.s < 1:
            raise ValueError("need r > h >= 1 and s >= 1")
        if self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.mu_cap is not None and self.mu_cap < 1:
            raise ValueError("mu_cap must be positive")
        if self.target_n is not None and self.target_n < 1:
            raise ValueError("target_n must be positive")
        if self.fix_first_element and (self.seed is not None or (
                self.group is not None and self.group.order != 1)):
            raise ValueError("fix_first_element needs the trivial group and no seed")


@dataclass(frozen=True)
class SearchOutcome:
    best: ProjSystem
    n_best: int
    exhaustive: bool  # True = proven maximum under the problem's constraints
    nodes: int
    elapsed: float
    feasible: bool = True  # complete_multispread: False = proven infeasible


@dataclass(frozen=True)
class _Orbit:
    elements: tuple[Subspace, ...]
    hyp: tuple[tuple[int, int], ...]  # (hyperplane index, incidences per copy)
    pts: tuple[tuple[int, int], ...]
    size: int


def _element_hyp_indices(sub: Subspace, pidx: dict) -> tuple[int, ...]:
    """Indices of the hyperplanes containing sub (= points of its dual)."""
    return tuple(pidx[v] for v in G.subspace_points(G.dual_space(sub)))


def _candidate_spaces(ctx: FieldCtx, r: int, h: int, faithful_only: bool) -> list[Subspace]:
    dims = [h] if faithful_only else list(range(h, 0, -1))
    out: list[Subspace] = []
    for d in dims:
        out.extend(G.enumerate_subspaces(ctx, r, d))
    return out


def _build_orbits(problem: SearchProblem, group: GroupCtx, pidx: dict) -> list[_Orbit]:
    from collections import Counter

    orbits: list[_Orbit] = []
    seen: set[Subspace] = set()
    for sub in _candidate_spaces(problem.ctx, problem.r, problem.h, problem.faithful_only):
        if sub in seen:
            continue
        orb = sorted(GR.orbit(group, sub), key=lambda x: x.basis.entries)
        seen.update(orb)
        hyp: Counter = Counter()
        pts: Counter = Counter()
        for e in orb:
            for t in _element_hyp_indices(e, pidx):
                hyp[t] += 1
            for v in G.subspace_points(e):
                pts[pidx[v]] += 1
        orbits.append(_Orbit(tuple(orb), tuple(sorted(hyp.items())), tuple(sorted(pts.items())), len(orb)))
    return orbits


def search_max(problem: SearchProblem) -> SearchOutcome:
    t0 = time.monotonic()
    ctx, r, h, s = problem.ctx, problem.r, problem.h, problem.s
    group = problem.group or GR.trivial_group(ctx, r)
    pidx = G.point_index_map(ctx, r)
    n_hyp = len(pidx)

    ub_global = B.min_upper_bound(ctx.q, r, h, s).value
    dual_units = G.gauss_point_count(ctx.q, r - h)  # hyperplanes through one h-space
    pts_per = G.gauss_point_count(ctx.q, h)

    res_h = [s] * n_hyp
    res_p = [problem.mu_cap] * n_hyp if problem.mu_cap is not None else None
    seed_elems: list[Subspace] = []
    if problem.seed is not None:
        seed = problem.seed
        if seed.ctx != ctx or seed.r != r:
            raise ValueError("seed ambient mismatch")
        rep = P.verify(seed)
        if rep.s > s:
            raise ValueError(f"seed violates the hyperplane cap: s={rep.s} > {s}")
        if problem.mu_cap is not None and rep.mu > problem.mu_cap:
            raise ValueError(f"seed violates mu_cap: mu={rep.mu}")
        seed_elems = list(seed.elements)
        for e in seed_elems:
            for t in _element_hyp_indices(e, pidx):
                res_h[t] -= 1
            if res_p is not None:
                for v in G.subspace_points(e):
                    res_p[pidx[v]] -= 1

    if group.order == 1 and problem.mu_cap == 1 and problem.faithful_only:
        return _search_single(problem, res_h, seed_elems, ub_global, t0)

    orbits = [o for o in _build_orbits(problem, group, pidx)
              if _orbit_max(o, res_h, res_p) > 0]
    m_root = [_orbit_max(o, res_h, res_p) for o in orbits]
    suffix = [0] * (len(orbits) + 1)
    for i in range(len(orbits) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + orbits[i].size * m_root[i]

    res_h_total = sum(res_h)
    res_p_total = sum(res_p) if res_p is not None else 0

    best_n = -1
    best_sel: dict[int, int] = {}
    sel: dict[int, int] = {}
    nodes = 0
    aborted = False
    stop = False
    proved = False
    node_limit, time_limit, target = problem.node_limit, problem.time_limit, problem.target_n

    sys.setrecursionlimit(max(sys.getrecursionlimit(), len(orbits) + 1000))

    def dfs(i: int, cur_n: int) -> None:
        nonlocal best_n, best_sel, nodes, aborted, stop, proved, res_h_total, res_p_total
        nodes += 1
        if nodes >= node_limit or (
            time_limit is not None and nodes % 1024 == 0 and time.monotonic() - t0 > time_limit
        ):
            aborted = True
            stop = True
        if cur_n > best_n:
            best_n = cur_n
            best_sel = dict(sel)
            if best_n >= ub_global:
                proved = True
                stop = True
            if target is not None and best_n >= target:
                stop = True
        if stop or i == len(orbits):
            return
        slack = res_h_total // dual_units
        if res_p is not None:
            slack = min(slack, res_p_total // pts_per)
        if cur_n + min(suffix[i], slack, ub_global - cur_n) <= best_n:
            return
        o = orbits[i]
        m = min(_orbit_max(o, res_h, res_p), m_root[i])
        for x in range(m, -1, -1):
            if x:
                for t, c in o.hyp:
                    res_h[t] -= x * c
                res_h_total -= x * o.size * dual_units
                if res_p is not None:
                    for t, c in o.pts:
                        res_p[t] -= x * c
                    res_p_total -= x * o.size * pts_per
                sel[i] = x
            dfs(i + 1, cur_n + x * o.size)
            if x:
                for t, c in o.hyp:
                    res_h[t] += x * c
                res_h_total += x * o.size * dual_units
                if res_p is not None:
                    for t, c in o.pts:
                        res_p[t] += x * c
                    res_p_total += x * o.size * pts_per
                del sel[i]
            if stop:
                return

    dfs(0, len(seed_elems))

    elems = list(seed_elems)
    for i, x in sorted(best_sel.items()):
        elems.extend(orbits[i].elements * x)
    best = ProjSystem(ctx, r, h, elems)
    exhaustive = proved or not (aborted or (target is not None and best_n >= target))
    return SearchOutcome(best, best_n, exhaustive, nodes, time.monotonic() - t0)


def _orbit_max(o: _Orbit, res_h: list[int], res_p: Optional[list[int]]) -> int:
    m = min(res_h[t] // c for t, c in o.hyp)
    if res_p is not None and m > 0:
        m = min(m, min(res_p[t] // c for t, c in o.pts))
    return m


def _search_single(problem: SearchProblem, res_h: list[int], seed_elems: list[Subspace],
                   ub_global: int, t0: float) -> SearchOutcome:
    """Bitmask packing search: trivial group, mu_cap=1, h-spaces only.

    Every h-space carries one mask: its point bits in the low half and its
    hyperplane bits shifted above them; the search state is (used points) |
    (saturated hyperplanes << n), so feasibility is a single AND.
    """
    ctx, r, h, s = problem.ctx, problem.r, problem.h, problem.s
    pidx = G.point_index_map(ctx, r)
    n_pts = len(pidx)
    spaces = list(G.enumerate_subspaces(ctx, r, h))
    combo = []
    pts_mask = []
    hyp_idx = []
    for sub in spaces:
        pm = 0
        for v in G.subspace_points(sub):
            pm |= 1 << pidx[v]
        idxs = _element_hyp_indices(sub, pidx)
        hm = 0
        for t in idxs:
            hm |= 1 << t
        pts_mask.append(pm)
        combo.append(pm | (hm << n_pts))
        hyp_idx.append(idxs)

    state = 0
    for e in seed_elems:
        pm = 0
        for v in G.subspace_points(e):
            pm |= 1 << pidx[v]
        if pm & state:
            raise ValueError("seed violates mu_cap=1")
        state |= pm
    for t, rcap in enumerate(res_h):
        if rcap == 0:
            state |= 1 << (n_pts + t)

    best_n = -1
    best_sel: list[int] = []
    stack: list[int] = []
    nodes = 0
    aborted = False
    stop = False
    proved = False
    node_limit, time_limit, target = problem.node_limit, problem.time_limit, problem.target_n

    def dfs(cands: list[int], cur_n: int, state: int, fix_levels: int) -> None:
        nonlocal best_n, best_sel, nodes, aborted, stop, proved
        nodes += 1
        if nodes >= node_limit or (
            time_limit is not None and nodes % 1024 == 0 and time.monotonic() - t0 > time_limit
        ):
            aborted = True
            stop = True
        if cur_n > best_n:
            best_n = cur_n
            best_sel = stack.copy()
            if best_n >= ub_global:
                proved = True
                stop = True
            if target is not None and best_n >= target:
                stop = True
        if stop:
            return
        cmb = combo
        hix = hyp_idx
        res = res_h
        ncand = len(cands)
        for pos in range(ncand):
            if cur_n + (ncand - pos) <= best_n:
                break
            j = cands[pos]
            state2 = state | pts_mask[j]
            for t in hix[j]:
                res[t] -= 1
                if res[t] == 0:
                    state2 |= 1 << (n_pts + t)
            nxt = [k for k in cands[pos + 1:] if not (cmb[k] & state2)]
            stack.append(j)
            dfs(nxt, cur_n + 1, state2, fix_levels - 1 if fix_levels else 0)
            stack.pop()
            for t in hix[j]:
                res[t] += 1
            if stop or fix_levels:
                return

    root = [j for j in range(len(spaces)) if not (combo[j] & state)]
    dfs(root, len(seed_elems), state, 2 if problem.fix_first_element else 0)

    elems = list(seed_elems) + [spaces[j] for j in best_sel]
    best = ProjSystem(ctx, r, h, elems)
    exhaustive = proved or not (aborted or (target is not None and best_n >= target))
    return SearchOutcome(best, best_n, exhaustive, nodes, time.monotonic() - t0)


def complete_multispread(partial: ProjSystem, target: tuple[int, int, int],
                         node_limit: int = 10_000_000,
                         time_limit: Optional[float] = None) -> SearchOutcome:
    """Add dim-h subspaces (duplicates allowed) until every point of GF(q)^k
    has weighted coverage mu; target = (k, h, mu)."""
    t0 = time.monotonic()
    k, h, mu = target
    ctx = partial.ctx
    if partial.r != k:
        raise ValueError("partial system lives in the wrong ambient space")
    q = ctx.q
    pidx = G.point_index_map(ctx, k)
    n_pts = len(pidx)

    deficit = [mu] * n_pts
    for e in partial.elements:
        if e.dim > h:
            raise ValueError("partial system has an element above the block dimension")
        w = q ** (h - e.dim)
        for v in G.subspace_points(e):
            deficit[pidx[v]] -= w
    if min(deficit) < 0:
        raise ValueError("partial system overcovers a point")

    if max(deficit) == 0:
        return SearchOutcome(partial, partial.n, True, 0, time.monotonic() - t0)

    planes = list(G.enumerate_subspaces(ctx, k, h))
    plane_pts = [tuple(pidx[v] for v in G.subspace_points(T)) for T in planes]
    through: list[list[int]] = [[] for _ in range(n_pts)]
    for ti, tp in enumerate(plane_pts):
        for pt in tp:
            through[pt].append(ti)

    chosen: list[int] = []
    found: Optional[list[int]] = None
    nodes = 0
    aborted = False

    def dfs() -> bool:
        nonlocal found, nodes, aborted
        nodes += 1
        if nodes >= node_limit or (
            time_limit is not None and nodes % 256 == 0 and time.monotonic() - t0 > time_limit
        ):
            aborted = True
            return False
        # branch on a point with the smallest positive deficit
        pt = -1
        low = mu + 1
        for i in range(n_pts):
            d = deficit[i]
            if 0 < d < low:
                low = d
                pt = i
                if d == 1:
                    break
        if pt == -1:
            found = chosen.copy()
            return True
        for ti in through[pt]:
            tp = plane_pts[ti]
            if all(deficit[p] > 0 for p in tp):
                for p in tp:
                    deficit[p] -= 1
                chosen.append(ti)
                if dfs():
                    return True
                chosen.pop()
                for p in tp:
                    deficit[p] += 1
                if aborted:
                    return False
        return False

    sys.setrecursionlimit(max(sys.getrecursionlimit(), sum(deficit) + 1000))
    ok = dfs()
    if ok and found is not None:
        best = ProjSystem(ctx, k, h, list(partial.elements) + [planes[ti] for ti in found])
        return SearchOutcome(best, best.n, True, nodes, time.monotonic() - t0, feasible=True)
    return SearchOutcome(partial, partial.n, not aborted, nodes, time.monotonic() - t0,
                         feasible=False)


def extendability_check(sys_: ProjSystem, budget: int = 1, s: Optional[int] = None) -> bool:
    """True iff `budget` h-spaces can be added without pushing any hyperplane
    count above s (default: the system's own maximum)."""
    rep = P.verify(sys_)
    cap = rep.s if s is None else s
    pidx = G.point_index_map(sys_.ctx, sys_.r)
    res = [cap - c for c in rep.hyperplane_counts]
    spaces = list(G.enumerate_subspaces(sys_.ctx, sys_.r, sys_.h))
    hyps = [_element_hyp_indices(T, pidx) for T in spaces]

    def dfs(depth: int) -> bool:
        for ti, hy in enumerate(hyps):
            if all(res[t] >= 1 for t in hy):
                if depth == 1:
                    return True
                for t in hy:
                    res[t] -= 1
                ok = dfs(depth - 1)
                for t in hy:
                    res[t] += 1
                if ok:
                    return True
        return False

    if budget < 1:
        raise ValueError("budget must be at least 1")
    return dfs(budget)
