"""``linspec`` command line.

Every command prints one JSON document (or CSV with ``--csv``).  Exit codes:
0 ok, 1 internal assertion or failed check, 2 usage, 3 size cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .baselocus import base_locus, check_conditions, strict_transform
from .cohomology import NotApplicable, cohomology_table, recursion_check
from .cremona import CremonaStepCapError, apply_raw, cremona_reduce, is_valid_move
from .dimension import dimension_report
from .lattice import EnumerationCapError, LinearSystemSpec, MultSpecError, PicardClass
from .modp import MERSENNE61
from .oracle import (
    DegenerateConfiguration,
    OracleCapError,
    OracleConfig,
    containment_profile,
    default_cap,
    h0_interpolation,
)
from .scan import ScanJob, run_scan
from .star import (
    StarSpec,
    StarSpecError,
    only_pair_terms,
    star_cohomology,
    star_h0_formula,
    star_h0_oracle,
    star_h0_parent,
    star_terms,
)

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _labels(text):
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise UsageError(f"expected comma-separated labels, got {text!r}")


def _range(text):
    parts = text.split(":")
    if len(parts) == 1:
        return int(parts[0]), int(parts[0])
    if len(parts) == 2:
        return int(parts[0]), int(parts[1])
    raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")


def _spec(args) -> LinearSystemSpec:
    return LinearSystemSpec.parse(args.n, args.d, args.m or "")


def _oracle_cfg(args, **extra) -> OracleConfig:
    return OracleConfig(prime=args.prime, seed=args.seed, cap=args.cap,
                        trials=getattr(args, "trials", 3), **extra)


def cmd_dim(args):
    return dimension_report(_spec(args), budget=args.budget).to_json()


def cmd_baselocus(args):
    spec = _spec(args)
    out = base_locus(spec).to_json()
    out["conditions"] = check_conditions(spec).to_json()
    return out


def cmd_transform(args):
    spec = _spec(args)
    r = spec.n - 1 if args.r is None else args.r
    cls = strict_transform(spec, r, expand=not args.no_expand)
    return {"r": r, "class": cls.to_json(), "text": str(cls)}


def cmd_cohomology(args):
    spec = _spec(args)
    table = cohomology_table(spec)
    out = table.to_json()
    if table.guaranteed:
        ok, bad = recursion_check(spec, table)
        out["recursion_ok"] = ok
        if bad:
            out["recursion_violations"] = bad
    return out


def cmd_cremona(args):
    spec = _spec(args)
    if args.reduce:
        final, moves = cremona_reduce(spec, max_steps=args.max_steps)
        return {"start": spec.to_json(), "final": final.to_json(), "moves": [m.to_json() for m in moves]}
    base = _labels(args.base) or tuple(sorted(spec.order[: spec.n + 1]))
    d, mults, c = apply_raw(spec, base)
    return {"base": list(base), "c": c, "d": d, "mults": list(mults), "b": sum(mults) - spec.n * d,
            "valid": is_valid_move(spec, base)}


def cmd_oracle(args):
    spec = _spec(args)
    points = None
    mode = args.points_mode
    if args.points:
        with open(args.points) as fh:
            points = tuple(tuple(int(x) for x in pt) for pt in json.load(fh))
        mode = "explicit"
    cfg = _oracle_cfg(args, point_mode=mode, points=points)
    index = _labels(args.containment)
    if index:
        prof = containment_profile(spec, index, cfg, draws=args.draws)
        return {"I": list(prof.index), "multiplicity": prof.multiplicity, "orders": prof.orders,
                "constant": prof.constant, "draws": prof.draws, "prime": cfg.prime, "seed": cfg.seed}
    return h0_interpolation(spec, cfg).to_json()


def cmd_star(args):
    spec = StarSpec.parse(args.n, args.d, args.m or "")
    out = spec.to_json()
    out["formula"] = star_h0_formula(spec)
    out["only_pair_terms"] = only_pair_terms(spec)
    try:
        out["parent"] = star_h0_parent(spec)
    except StarSpecError:
        out["parent"] = None
    if not args.no_oracle:
        out["oracle"] = star_h0_oracle(spec, _oracle_cfg(args))
    out["terms"] = [{"I": list(t.index), "r": t.r, "k": t.k, "term": t.value} for t in star_terms(spec)]
    out["levels"] = [{"r": r, "h": star_cohomology(spec, r)} for r in range(1, spec.n)]
    return out


def cmd_scan(args):
    job = ScanJob(n_range=args.n_range, d_range=args.d_range, s_range=args.s_range, policy=args.policy,
                  count=args.count, regime=args.regime, seed=args.seed, width=args.width, output=args.out,
                  prime=args.prime, trials=args.trials, cap=args.cap)
    summary = run_scan(job, resume=args.resume)
    out = summary.to_json()
    out["exit"] = EXIT_OK if summary.ok else EXIT_INTERNAL
    return out


def selftest_checks() -> list[tuple[str, bool]]:
    cfg = OracleConfig()
    big = LinearSystemSpec(4, 10, (6,) * 7)
    rep = dimension_report(big, budget=0)
    toric = cohomology_table(LinearSystemSpec(2, 1, (2, 2, 2)))
    spec = LinearSystemSpec(3, 5, (4, 3, 2, 2, 1))
    d, mults, _ = apply_raw(spec, (1, 2, 3, 4))
    back = LinearSystemSpec(3, d, tuple(max(m, 0) for m in mults))
    twice = apply_raw(back, (1, 2, 3, 4))
    return [
        ("dim L_{4,10}(6^7): vdim 119, ldim 140", rep.vdim == 119 and rep.ldim == 140),
        ("oracle L_{3,4}(2^9): h0 1", h0_interpolation(LinearSystemSpec(3, 4, (2,) * 9), cfg).h0 == 1),
        ("oracle L_{2,2}(1^5): h0 1", h0_interpolation(LinearSystemSpec(2, 2, (1,) * 5), cfg).h0 == 1),
        ("toric L_{2,1}(2^3): top level (0,0,3)", toric.levels[1] == [0, 0, 3]),
        ("star n=2 d=2 (2,1,1,1): 3", star_h0_formula(StarSpec(2, 2, (2, 1, 1, 1))) == 3
         and star_h0_oracle(StarSpec(2, 2, (2, 1, 1, 1)), cfg) == 3),
        ("cremona involution", (twice[0], twice[1]) == (spec.d, spec.mults)),
    ]


def cmd_selftest(args):
    checks = selftest_checks()
    ok = all(flag for _, flag in checks)
    return {"ok": ok, "checks": [{"name": name, "ok": flag} for name, flag in checks],
            "exit": EXIT_OK if ok else EXIT_INTERNAL}


def _global_flags(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default=default("json"))
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv", default=default("json"))
    parser.add_argument("--seed", type=int, default=default(0))
    parser.add_argument("--prime", type=int, default=default(MERSENNE61))
    parser.add_argument("--cap", type=int, default=default(None), help="matrix entry cap (env LINSPEC_CAP)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linspec", description="Linear systems through general fat points.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    system = argparse.ArgumentParser(add_help=False)
    system.add_argument("--n", type=int, required=True)
    system.add_argument("--d", type=int, required=True)
    system.add_argument("--m", default="", help='multiplicities, e.g. "6^7" or "3,2^4"')

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("dim", parents=[common, system])
    p.add_argument("--budget", type=int, default=10_000)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("baselocus", parents=[common, system])
    p.set_defaults(func=cmd_baselocus)

    p = sub.add_parser("transform", parents=[common, system])
    p.add_argument("--r", type=int)
    p.add_argument("--no-expand", action="store_true")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("cohomology", parents=[common, system])
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("cremona", parents=[common, system])
    p.add_argument("--base", help="n+1 comma-separated labels")
    p.add_argument("--reduce", action="store_true")
    p.add_argument("--max-steps", type=int, default=1000)
    p.set_defaults(func=cmd_cremona)

    p = sub.add_parser("oracle", parents=[common, system])
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--points-mode", choices=["general", "coordinate_pinned", "star"], default="general")
    p.add_argument("--points", help="JSON file with homogeneous coordinates, one list per point")
    p.add_argument("--containment", help="labels of the span to measure, e.g. 1,2")
    p.add_argument("--draws", type=int, default=3)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("star", parents=[common, system])
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--no-oracle", action="store_true")
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("scan", parents=[common])
    p.add_argument("--n", dest="n_range", type=_range, default=(2, 4))
    p.add_argument("--d", dest="d_range", type=_range, default=(0, 8))
    p.add_argument("--s", dest="s_range", type=_range, default=(0, 8))
    p.add_argument("--policy", choices=["random", "exhaustive"], default="random")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--regime", choices=["any", "guaranteed", "outside", "effective"], default="any")
    p.add_argument("--width", type=int, default=1)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--out", help="findings file (JSON lines)")
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("selftest", parents=[common])
    p.set_defaults(func=cmd_selftest)
    return parser


def _flatten(doc: dict) -> dict:
    return {k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in doc.items()}


def render(doc: dict, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        row = _flatten(doc)
        writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
        writer.writeheader()
        writer.writerow(row)
        return buf.getvalue()
    return json.dumps(doc, indent=2) + "\n"


def _error(kind: str, exc: BaseException, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": str(exc)}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is None:
        args.cap = default_cap()
    try:
        doc = args.func(args)
    except (OracleCapError, EnumerationCapError, CremonaStepCapError) as exc:
        return _error("cap", exc, EXIT_CAP)
    except (UsageError, MultSpecError, StarSpecError, NotApplicable, ValueError) as exc:
        return _error("usage", exc, EXIT_USAGE)
    except DegenerateConfiguration as exc:
        return _error("degenerate", exc, EXIT_INTERNAL)
    except AssertionError as exc:
        return _error("assertion", exc, EXIT_INTERNAL)
    code = doc.pop("exit", EXIT_OK)
    sys.stdout.write(render(doc, args.fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
