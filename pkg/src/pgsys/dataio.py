"""Dataset text format: parser, canonical serializer, certification against
recomputed invariants, and access to the bundled corpus.

Grammar (UTF-8, LF, `#` starts a comment):

    field p=<p> l=<l>
    ambient r=<r>
    blockdim h=<h>
    claim n=<n> s=<s> [mu=<mu>] [faithful=<0|1>]
    claim multispread lambda=<lam> mu=<mu>
    gen frob=<0|1>        # followed by r rows of r element tokens
    elem [orbit=<size>]   # followed by the basis rows of one subspace

A flagged `elem orbit=k` is an orbit representative; unflagged `elem` blocks
directly after it are the explicitly listed orbit members.  Claimed values are
assertions to be rechecked, never trusted inputs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from . import field as F
from . import geometry as G
from . import groups as GR
from . import projsys as P
from .field import FieldCtx
from .geometry import MatrixQ, Subspace
from .groups import OrbitListing, SemilinearMap
from .projsys import MultispreadReport, ProjSystem, SystemReport


class DataFormatError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class Dataset:
    ctx: FieldCtx
    r: int
    h: int
    listing: OrbitListing
    generators: tuple[SemilinearMap, ...] = ()
    claim_n: Optional[int] = None
    claim_s: Optional[int] = None
    claim_mu: Optional[int] = None
    claim_faithful: Optional[bool] = None
    claim_multispread: Optional[tuple[int, int]] = None  # (lambda, mu)


_DIRECTIVES = {"field", "ambient", "blockdim", "claim", "gen", "elem"}


def _split_kv(parts: list[str], line: int, allowed: dict[str, bool]) -> dict[str, int]:
    """Parse key=value tokens; `allowed` maps key -> required?"""
    out: dict[str, int] = {}
    for tok in parts:
        if "=" not in tok:
            raise DataFormatError(line, f"expected key=value, got {tok!r}")
        key, _, val = tok.partition("=")
        if key not in allowed:
            raise DataFormatError(line, f"unknown field {key!r}")
        if key in out:
            raise DataFormatError(line, f"duplicate field {key!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise DataFormatError(line, f"non-integer value in {tok!r}") from None
    for key, required in allowed.items():
        if required and key not in out:
            raise DataFormatError(line, f"missing field {key!r}")
    return out


def parse(text: str) -> Dataset:
    items: list[tuple[int, list[str]]] = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            items.append((i, body.split()))

    ctx: Optional[FieldCtx] = None
    r = h = None
    claim: dict[str, int] = {}
    claim_ms: Optional[tuple[int, int]] = None
    gens: list[SemilinearMap] = []
    entries: list[tuple[Subspace, Optional[int]]] = []

    def parse_row(line: int, parts: list[str]) -> tuple[int, ...]:
        if len(parts) != r:
            raise DataFormatError(line, f"expected {r} tokens, got {len(parts)}")
        try:
            return tuple(F.parse_token(ctx, t) for t in parts)
        except ValueError as e:
            raise DataFormatError(line, str(e)) from None

    pos = 0
    while pos < len(items):
        line, parts = items[pos]
        word = parts[0]
        if word not in _DIRECTIVES:
            raise DataFormatError(line, f"unexpected row outside gen/elem block: {word!r}")
        if word == "field":
            if ctx is not None:
                raise DataFormatError(line, "duplicate field line")
            kv = _split_kv(parts[1:], line, {"p": True, "l": True})
            try:
                ctx = F.make_field(kv["p"], kv["l"])
            except ValueError as e:
                raise DataFormatError(line, str(e)) from None
            pos += 1
        elif word == "ambient":
            kv = _split_kv(parts[1:], line, {"r": True})
            r = kv["r"]
            if r < 1:
                raise DataFormatError(line, "ambient dimension must be positive")
            pos += 1
        elif word == "blockdim":
            kv = _split_kv(parts[1:], line, {"h": True})
            h = kv["h"]
            pos += 1
        elif word == "claim":
            if len(parts) > 1 and parts[1] == "multispread":
                if claim_ms is not None:
                    raise DataFormatError(line, "duplicate multispread claim")
                kv = _split_kv(parts[2:], line, {"lambda": True, "mu": True})
                claim_ms = (kv["lambda"], kv["mu"])
            else:
                if claim:
                    raise DataFormatError(line, "duplicate claim line")
                claim = _split_kv(parts[1:], line,
                                  {"n": True, "s": True, "mu": False, "faithful": False})
            pos += 1
        elif word == "gen":
            if ctx is None or r is None:
                raise DataFormatError(line, "gen before field/ambient")
            kv = _split_kv(parts[1:], line, {"frob": False})
            frob = kv.get("frob", 0)
            rows = []
            pos += 1
            for _ in range(r):
                if pos >= len(items) or items[pos][1][0] in _DIRECTIVES:
                    raise DataFormatError(line, f"generator needs {r} rows")
                rows.append(parse_row(items[pos][0], items[pos][1]))
                pos += 1
            try:
                gens.append(SemilinearMap(MatrixQ.from_rows(ctx, rows), frob))
            except ValueError as e:
                raise DataFormatError(line, str(e)) from None
        else:  # elem
            if ctx is None or r is None or h is None:
                raise DataFormatError(line, "elem before field/ambient/blockdim")
            kv = _split_kv(parts[1:], line, {"orbit": False})
            size = kv.get("orbit")
            if size is not None and size < 1:
                raise DataFormatError(line, "orbit size must be positive")
            rows = []
            pos += 1
            while pos < len(items) and items[pos][1][0] not in _DIRECTIVES:
                rows.append(parse_row(items[pos][0], items[pos][1]))
                pos += 1
            if not rows:
                raise DataFormatError(line, "elem block without rows")
            sub = G.subspace_from_rows(ctx, r, rows)
            if sub.dim != len(rows):
                raise DataFormatError(line, "element rows are linearly dependent")
            if sub.dim > h:
                raise DataFormatError(line, f"element dimension {sub.dim} exceeds h={h}")
            entries.append((sub, size))

    if ctx is None or r is None or h is None:
        raise DataFormatError(0, "missing field/ambient/blockdim header")
    if not 1 <= h <= r:
        raise DataFormatError(0, f"blockdim h={h} out of range for r={r}")
    return Dataset(
        ctx=ctx, r=r, h=h,
        listing=OrbitListing(tuple(entries)),
        generators=tuple(gens),
        claim_n=claim.get("n"),
        claim_s=claim.get("s"),
        claim_mu=claim.get("mu"),
        claim_faithful=None if "faithful" not in claim else bool(claim["faithful"]),
        claim_multispread=claim_ms,
    )


def serialize(ds: Dataset) -> str:
    ctx = ds.ctx
    out = [f"field p={ctx.p} l={ctx.l}", f"ambient r={ds.r}", f"blockdim h={ds.h}"]
    if ds.claim_n is not None or ds.claim_s is not None:
        parts = [f"claim n={ds.claim_n} s={ds.claim_s}"]
        if ds.claim_mu is not None:
            parts.append(f"mu={ds.claim_mu}")
        if ds.claim_faithful is not None:
            parts.append(f"faithful={int(ds.claim_faithful)}")
        out.append(" ".join(parts))
    if ds.claim_multispread is not None:
        lam, mu = ds.claim_multispread
        out.append(f"claim multispread lambda={lam} mu={mu}")
    for g in ds.generators:
        out.append(f"gen frob={g.frob}")
        for row in g.mat.row_tuples():
            out.append(" ".join(F.render(ctx, e) for e in row))
    for sub, size in ds.listing.entries:
        out.append("elem" if size is None else f"elem orbit={size}")
        for row in sub.rows():
            out.append(" ".join(F.render(ctx, e) for e in row))
    return "\n".join(out) + "\n"


def digest(ds: Dataset) -> str:
    return hashlib.sha256(serialize(ds).encode()).hexdigest()


def expand(ds: Dataset) -> ProjSystem:
    """Materialize the full multiset of elements (orbits expanded)."""
    if not ds.listing.entries:
        return ProjSystem(ds.ctx, ds.r, ds.h, [])
    group = GR.closure(ds.generators) if ds.generators else GR.trivial_group(ds.ctx, ds.r)
    return GR.expand_listing(group, ds.listing, h=ds.h)


# ----------------------------------------------------------------- certify

@dataclass(frozen=True)
class CheckResult:
    name: str
    claimed: object
    computed: object
    ok: bool
    witness: str = ""


@dataclass(frozen=True)
class Certificate:
    digest: str
    checks: tuple[CheckResult, ...]
    report: Optional[SystemReport] = None
    ms_report: Optional[MultispreadReport] = None

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    def records(self) -> list[str]:
        lines = [f"digest={self.digest}"]
        for c in self.checks:
            rec = f"check={c.name} claimed={c.claimed} computed={c.computed} ok={int(c.ok)}"
            if c.witness:
                rec += f" witness={c.witness}"
            lines.append(rec)
        lines.append(f"pass={int(self.passed)}")
        return lines


def _vec_str(v: tuple[int, ...], ctx: FieldCtx) -> str:
    return ",".join(F.render(ctx, e) for e in v)


def certify(ds: Dataset) -> Certificate:
    """Recheck every claim from scratch; failures are data, not exceptions."""
    dig = digest(ds)
    checks: list[CheckResult] = []
    try:
        sys_ = expand(ds)
    except (GR.ListingError, ValueError) as e:
        checks.append(CheckResult("listing", "expandable", f"error: {e}", False))
        return Certificate(dig, tuple(checks))

    rep = P.verify(sys_)
    pts = G._points_cache(ds.ctx, ds.r)

    if ds.claim_n is not None:
        checks.append(CheckResult("n", ds.claim_n, rep.n, rep.n == ds.claim_n))
    if ds.claim_s is not None:
        ok = rep.s == ds.claim_s
        witness = ""
        if not ok:
            worst = max(range(len(rep.hyperplane_counts)),
                        key=lambda i: rep.hyperplane_counts[i])
            witness = f"hyperplane={_vec_str(pts[worst], ds.ctx)}"
        checks.append(CheckResult("s", ds.claim_s, rep.s, ok, witness))
    if ds.claim_mu is not None:
        ok = rep.mu == ds.claim_mu
        witness = ""
        if not ok:
            counts = P._point_counts(sys_)
            worst = max(range(len(counts)), key=lambda i: counts[i])
            witness = f"point={_vec_str(pts[worst], ds.ctx)}"
        checks.append(CheckResult("mu", ds.claim_mu, rep.mu, ok, witness))
    if ds.claim_faithful is not None:
        checks.append(CheckResult("faithful", ds.claim_faithful, rep.faithful,
                                  rep.faithful == ds.claim_faithful))

    ms = None
    if ds.claim_multispread is not None:
        lam, mu = ds.claim_multispread
        ms = P.multispread_check(sys_, h=ds.h)
        witness = "" if ms.witness is None else f"point={_vec_str(ms.witness, ds.ctx)}"
        checks.append(CheckResult("multispread", True, ms.ok, ms.ok, witness))
        checks.append(CheckResult("lambda", lam, ms.lam, ms.lam == lam))
        checks.append(CheckResult("mu_spread", mu, ms.mu, ms.mu == mu))

    if not checks:
        checks.append(CheckResult("parse", "no claims", "nothing to check", True))
    return Certificate(dig, tuple(checks), rep, ms)


# ------------------------------------------------------------ bundled corpus

def data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"


def bundled_paths(extended: bool = False) -> list[Path]:
    base = data_dir()
    paths = sorted(base.glob("*.txt"))
    if extended:
        paths += sorted((base / "extended").glob("*.txt"))
    return paths


def load(path: Union[str, Path]) -> Dataset:
    return parse(Path(path).read_text(encoding="utf-8"))


def certify_all(paths) -> list[tuple[Path, Certificate]]:
    return [(Path(p), certify(load(p))) for p in paths]
