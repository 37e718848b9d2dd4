"""Closed-form upper/lower bound calculators for projective systems.

n_q(r, h; s) below always means: the maximum n such that a projective
h-(n, r, s)_q system exists.  All non-integer bound expressions are floored,
since n is an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Callable, Optional

# scan guard for the monotone bound searches
_SCAN_CAP = 10**6


@dataclass(frozen=True)
class BoundResult:
    value: int
    kind: str  # "upper" | "lower" | "exact"
    source: str

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("negative bound value")
        if self.kind not in ("upper", "lower", "exact"):
            raise ValueError(f"bad bound kind {self.kind!r}")


def gauss_count(q: int, t: int) -> int:
    """[t]_q = (q^t - 1)/(q - 1), the number of points of GF(q)^t."""
    if t < 0:
        raise ValueError("negative dimension")
    return (q**t - 1) // (q - 1)


def griesmer(q: int, k: int, d: int) -> int:
    """g_q(k,d) = sum of ceil(d/q^i) for i < k: minimum length of an [n,k,d]_q code."""
    if k < 1 or d < 1:
        raise ValueError("need k >= 1 and d >= 1")
    return sum(-(-d // q**i) for i in range(k))


def additive_griesmer_min_n(q: int, r: int, h: int, d: int) -> int:
    """Minimum length of an additive code: d + ceil((g_q(r-h+1,d) - d)/[h]_q)."""
    if d < 1:
        raise ValueError("need d >= 1")
    g = griesmer(q, r - h + 1, d)
    return d + -(-(g - d) // gauss_count(q, h))


def griesmer_max_n(q: int, r: int, h: int, s: int) -> BoundResult:
    """Largest n with n >= additive_griesmer_min_n(q, r, h, n - s).

    The feasibility predicate is monotone (min_n grows at least as fast as d),
    so a forward scan is exact.
    """
    if s < 1:
        raise ValueError("need s >= 1")
    n = s
    while n - s < _SCAN_CAP:
        if additive_griesmer_min_n(q, r, h, n + 1 - s) > n + 1:
            return BoundResult(n, "upper", "additive-griesmer")
        n += 1
    raise ArithmeticError("bound scan did not terminate")


def arc_projection_bound(q: int, h: int, j: int, s: int, t: int) -> BoundResult:
    """Upper bound for n_q(th+j, h; s): floor((s-t+1) [h+j]_q / [j]_q + t - 1).

    Obtained by projecting through t-1 elements in a common (t-1)h-space and
    counting hyperplanes, generalizing the arc bound in a projective plane.
    """
    if not (s >= t >= 2 and h >= 1 and j >= 1):
        raise ValueError("need s >= t >= 2 and h, j >= 1")
    num = (s - t + 1) * gauss_count(q, h + j) + (t - 1) * gauss_count(q, j)
    return BoundResult(num // gauss_count(q, j), "upper", "arc-projection")


def arc_projection_bound_refined(q: int, h: int, j: int, s: int, t: int, i: int) -> BoundResult:
    """Conditional bound: if some (th-i)-space contains >= t elements, then
    n <= floor(((s-t+1) [h+j]_q - [i+j]_q)/[j]_q + t).

    The i = 1 case gives the threshold above which every t elements must span
    a th-space (hence the system is faithful with point multiplicity 1).
    """
    if not (s >= t >= 2 and h >= 1 and j >= 1 and 0 <= i <= h):
        raise ValueError("parameter out of range")
    num = (s - t + 1) * gauss_count(q, h + j) - gauss_count(q, i + j) + t * gauss_count(q, j)
    return BoundResult(num // gauss_count(q, j), "upper", "arc-projection-refined")


def _has_coprime_factor(s: int, q: int) -> bool:
    # strip the characteristic: q is a prime power p^l, and gcd-ing with q
    # repeatedly removes exactly the p-part of s
    from math import gcd

    while True:
        g = gcd(s, q)
        if g == 1:
            return s > 1
        while s % g == 0:
            s //= g


def coprime_factor_bound(q: int, h: int, j: int, s: int) -> Optional[BoundResult]:
    """Strict bound n_q(2h+j, h; s) < (s-1) [h+j]_q / [j]_q + 1, valid only
    when s has a prime factor coprime to q; returns None otherwise.
    """
    if s < 2 or h < 1 or j < 1:
        raise ValueError("need s >= 2 and h, j >= 1")
    if not _has_coprime_factor(s, q):
        return None
    num = (s - 1) * gauss_count(q, h + j)
    den = gauss_count(q, j)
    # n < num/den + 1, so the maximum integer n is ceil(num/den + 1) - 1
    return BoundResult(-(-num // den), "upper", "coprime-factor")


def griesmer_feasible(n_prime: int, r: int, d_prime: int, q: int) -> bool:
    """Default linear-code existence oracle: Griesmer feasibility only."""
    return n_prime >= griesmer(q, r, d_prime)


def coding_bound(q: int, r: int, h: int, s: int,
                 linear_oracle: Callable[[int, int, int], bool] | None = None) -> BoundResult:
    """Largest n whose expanded point code [n [h]_q, r, q^(h-1)(n-s)]_q passes
    the supplied linear-code existence oracle(n', r, d').

    The default oracle is Griesmer feasibility, reproducing griesmer_max_n.
    """
    if s < 1:
        raise ValueError("need s >= 1")
    if linear_oracle is None:
        linear_oracle = lambda np_, r_, dp_: griesmer_feasible(np_, r_, dp_, q)
    hq = gauss_count(q, h)
    n = s
    while n - s < _SCAN_CAP:
        n_prime = (n + 1) * hq
        d_prime = q ** (h - 1) * (n + 1 - s)
        if not linear_oracle(n_prime, r, d_prime):
            return BoundResult(n, "upper", "coding-oracle")
        n += 1
    raise ArithmeticError("bound scan did not terminate")


def min_upper_bound(q: int, r: int, h: int, s: int) -> BoundResult:
    """Best unconditional upper bound available for n_q(r, h; s).

    Combines the additive Griesmer bound with every applicable ambient
    decomposition r = th + j (t >= 2, j >= 1) of the projection bounds.
    """
    best = griesmer_max_n(q, r, h, s)
    t = 2
    while t * h < r and t <= s:
        j = r - t * h
        cand = arc_projection_bound(q, h, j, s, t)
        if cand.value < best.value:
            best = cand
        if t == 2:
            strict = coprime_factor_bound(q, h, j, s) if s >= 2 else None
            if strict is not None and strict.value < best.value:
                best = strict
        t += 1
    return best
