"""Command-line interface: dataset verification, bounds, constructions,
search, point expansion, and multispread checks.

Output is line-oriented key=value records; exit code 0 means every check
passed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import bounds as B
from . import constructions as C
from . import dataio as D
from . import field as F
from . import groups as GR
from . import projsys as P
from . import search as S
from .projsys import ProjSystem


def _field_for(q: int):
    p, l = F.factor_prime_power(q)
    return F.make_field(p, l)


def _system_dataset(sys_: ProjSystem, generators=()) -> D.Dataset:
    rep = P.verify(sys_)
    return D.Dataset(
        ctx=sys_.ctx, r=sys_.r, h=sys_.h,
        listing=GR.OrbitListing(tuple((e, None) for e in sys_.elements)),
        generators=tuple(generators),
        claim_n=rep.n, claim_s=rep.s, claim_mu=rep.mu, claim_faithful=rep.faithful,
    )


def _emit_system(sys_: ProjSystem, out: Optional[str], generators=()) -> None:
    if out:
        Path(out).write_text(D.serialize(_system_dataset(sys_, generators)), encoding="utf-8")
        print(f"written={out}")


def cmd_verify(args) -> int:
    cert = D.certify(D.load(args.file))
    print(f"file={args.file}")
    for line in cert.records():
        print(line)
    return 0 if cert.passed else 1


def cmd_certify_all(args) -> int:
    base = Path(args.dir) if args.dir else D.data_dir()
    if args.dir:
        paths = sorted(Path(args.dir).rglob("*.txt") if args.recursive
                       else Path(args.dir).glob("*.txt"))
    else:
        paths = D.bundled_paths(extended=args.extended)
    if not paths:
        print(f"error=no datasets under {base}", file=sys.stderr)
        return 2
    failures = 0
    for path, cert in D.certify_all(paths):
        status = "pass" if cert.passed else "FAIL"
        print(f"file={path.name} pass={int(cert.passed)}")
        if not cert.passed:
            failures += 1
            for line in cert.records():
                print(f"  {line}")
        del status
    print(f"total={len(paths)} failed={failures}")
    return 0 if failures == 0 else 1


def cmd_bound(args) -> int:
    op = args.op
    v = args.params
    if op == "gauss":
        print(f"value={B.gauss_count(v[0], v[1])}")
        return 0
    if op == "griesmer":
        print(f"value={B.griesmer(v[0], v[1], v[2])}")
        return 0
    table = {
        "additive-min-n": (B.additive_griesmer_min_n, 4),
        "griesmer-max-n": (B.griesmer_max_n, 4),
        "coprime": (B.coprime_factor_bound, 4),
        "best": (B.min_upper_bound, 4),
    }
    if op == "arc":
        if len(v) == 5:
            res = B.arc_projection_bound(*v)
        elif len(v) == 6:
            res = B.arc_projection_bound_refined(*v)
        else:
            print("error=arc needs q h j s t [i]", file=sys.stderr)
            return 2
    elif op in table:
        fn, want = table[op]
        if len(v) != want:
            print(f"error={op} needs {want} parameters", file=sys.stderr)
            return 2
        res = fn(*v)
    else:
        print(f"error=unknown bound op {op!r}", file=sys.stderr)
        return 2
    if res is None:
        print("value=none")
    else:
        print(f"value={res.value} kind={res.kind} source={res.source}")
    return 0


def cmd_construct(args) -> int:
    name = args.name
    v = args.params
    if name in ("conic", "hyperoval"):
        ctx = _field_for(v[0])
        oval = C.make_conic(ctx) if name == "conic" else C.make_hyperoval(ctx)
        print(f"kind={oval.kind} points={len(oval.points)}")
        for pt in oval.points:
            print(" ".join(F.render(ctx, e) for e in pt.rows()[0]))
        return 0
    if name == "line-spread":
        q = v[0]
        p, l = F.factor_prime_power(q)
        sys_ = C.line_spread(F.make_field(p, l), F.make_field(p, 2 * l))
    elif name == "projected-oval":
        sys_ = C.construct_projected_oval(_field_for(v[0]), v[1])
    elif name == "rs":
        sys_ = C.construct_projected_rs(_field_for(v[0]), v[1], v[2])
    elif name == "unipotent-pair":
        z, zp = (v[1], v[2]) if len(v) >= 3 else (0, 0)
        extras = None
        if args.one_extra:
            extras = C.unipotent_pair_invariant_lines(v[0])[:1]
        sys_ = C.construct_unipotent_pair(v[0], z, zp, extras=extras)
    else:
        print(f"error=unknown construction {name!r}", file=sys.stderr)
        return 2
    rep = P.verify(sys_)
    print(f"n={rep.n} r={sys_.r} h={sys_.h} s={rep.s} mu={rep.mu} "
          f"faithful={int(rep.faithful)}")
    _emit_system(sys_, args.output)
    return 0


def cmd_search(args) -> int:
    ctx = _field_for(args.q)
    group = None
    gens = ()
    if args.group:
        ds = D.load(args.group)
        if ds.ctx != ctx or ds.r != args.r:
            print("error=group file field/ambient mismatch", file=sys.stderr)
            return 2
        if not ds.generators:
            print("error=group file has no generators", file=sys.stderr)
            return 2
        gens = ds.generators
        group = GR.closure(gens)
    problem = S.SearchProblem(
        ctx, args.r, args.h, args.s, group=group,
        mu_cap=args.mu_cap, target_n=args.target,
        node_limit=args.node_limit, time_limit=args.time_limit,
        fix_first_element=args.fix_first,
    )
    out = S.search_max(problem)
    print(f"n_best={out.n_best} exhaustive={int(out.exhaustive)} "
          f"nodes={out.nodes} elapsed={out.elapsed:.2f}")
    _emit_system(out.best, args.output, generators=gens)
    return 0


def cmd_expand(args) -> int:
    ds = D.load(args.file)
    sys_ = D.expand(ds)
    pm = P.expand_points(sys_)
    wd = P.weight_distribution(pm)
    div = P.divisibility_check(pm, ds.ctx.q ** (ds.h - 1))
    print(f"n={sys_.n} n_prime={pm.total} d_min={wd.d_min} w_max={wd.w_max} "
          f"divisible={int(div)}")
    for w in sorted(wd.weights):
        print(f"weight={w} count={wd.weights[w]}")
    return 0


def cmd_multispread(args) -> int:
    ds = D.load(args.file)
    sys_ = D.expand(ds)
    ms = P.multispread_check(sys_, h=ds.h)
    rec = (f"ok={int(ms.ok)} k={ms.k} h={ms.h} lambda={ms.lam} mu={ms.mu} s={ms.s}")
    if ms.witness is not None:
        rec += " witness=" + ",".join(F.render(ds.ctx, e) for e in ms.witness)
    print(rec)
    return 0 if ms.ok else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="pgsys")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("verify", help="certify one dataset file")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("certify-all", help="certify every dataset in a directory")
    sp.add_argument("dir", nargs="?", default=None,
                    help="directory of .txt datasets (default: bundled corpus)")
    sp.add_argument("--extended", action="store_true",
                    help="include the bundled extended corpus")
    sp.add_argument("--recursive", action="store_true")
    sp.set_defaults(fn=cmd_certify_all)

    sp = sub.add_parser("bound", help="evaluate a bound")
    sp.add_argument("op", help="gauss | griesmer | additive-min-n | griesmer-max-n"
                               " | arc | coprime | best")
    sp.add_argument("params", nargs="+", type=int)
    sp.set_defaults(fn=cmd_bound)

    sp = sub.add_parser("construct", help="run a named construction")
    sp.add_argument("name", help="conic | hyperoval | line-spread | projected-oval"
                                 " | rs | unipotent-pair")
    sp.add_argument("params", nargs="+", type=int)
    sp.add_argument("-o", "--output", default=None, help="write dataset file")
    sp.add_argument("--one-extra", action="store_true",
                    help="unipotent-pair: add a single invariant line")
    sp.set_defaults(fn=cmd_construct)

    sp = sub.add_parser("search", help="maximize n by branch and bound")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--h", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--group", default=None, help="dataset file providing generators")
    sp.add_argument("--mu-cap", type=int, default=None)
    sp.add_argument("--target", type=int, default=None)
    sp.add_argument("--node-limit", type=int, default=50_000_000)
    sp.add_argument("--time-limit", type=float, default=None)
    sp.add_argument("--fix-first", action="store_true",
                    help="symmetry reduction (trivial group only)")
    sp.add_argument("-o", "--output", default=None, help="write incumbent dataset")
    sp.set_defaults(fn=cmd_search)

    sp = sub.add_parser("expand", help="point expansion and weight distribution")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_expand)

    sp = sub.add_parser("multispread", help="check the multispread property")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_multispread)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
