"""Command line entry point.

Exit codes: 0 success, 1 not conjugate / not in the simple case / order
violations, 2 malformed input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from .exact import parse
from .harness import ExperimentConfig, VerificationFailure, rows_to_csv, run_experiment
from .liealg import chevalley_basis, constants_report
from .reduce import conjugate
from .rootsys import RootSystemKind, build_root_system, builtin_order, search_order, verify_order
from .unipotent import UnipotentCoords

log = logging.getLogger("conjforge")


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise InputError(f"{path}: invalid UTF-8 at byte {e.start}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[:e.pos].encode("utf-8"))
        raise InputError(f"{path}: malformed JSON at byte {offset}: {e.msg}")


def _kind(text: str) -> RootSystemKind:
    try:
        return RootSystemKind.parse(text)
    except ValueError as e:
        raise InputError(str(e))


def _emit(obj, out: Optional[str] = None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_roots(args) -> int:
    _emit(build_root_system(_kind(args.kind)).to_json())
    return 0


def cmd_order(args) -> int:
    rs = build_root_system(_kind(args.kind))
    order = search_order(rs) if args.search else builtin_order(rs)
    if args.action == "show":
        _emit(order.to_json(rs))
        return 0
    bad = verify_order(rs, order)
    print(f"{len(rs.positives)} positive roots, {len(order.witnesses)} witnesses, {len(bad)} violations")
    for v in bad:
        print(f"  {v}")
    return 1 if bad else 0


def cmd_constants(args) -> int:
    cb = chevalley_basis(build_root_system(_kind(args.kind)))
    _emit(constants_report(cb))
    return 0


def _load_unipotent(path: str):
    doc = _load_json(path)
    try:
        return UnipotentCoords.from_json(doc)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"{path}: not a unipotent-coordinates document ({e})")


def cmd_conjugate(args) -> int:
    ku, u = _load_unipotent(args.u)
    kv, v = _load_unipotent(args.v)
    if ku != kv:
        raise InputError(f"kinds differ: {ku} vs {kv}")
    rs = build_root_system(ku)
    bad = [r for x in (u, v) for r in x.coords if r not in rs.positive_set]
    if bad:
        raise InputError(f"coordinates at non-roots of {ku}: {bad[:3]}")
    cb = chevalley_basis(rs)
    order = search_order(rs) if args.search else builtin_order(rs)
    res = conjugate(cb, order, u, v)
    _emit(res.to_json(rs), args.out)
    return 0 if res.status == "conjugate" and res.verified else 1


def _config(args) -> ExperimentConfig:
    doc = _load_json(args.config) if args.config else {}
    if not isinstance(doc, dict):
        raise InputError(f"{args.config}: config must be a JSON object")
    if args.kind:
        k = _kind(args.kind) if any(c.isdigit() for c in args.kind) else None
        if k:
            doc["family"], doc["rank"] = k.family, k.rank
            doc.pop("kind", None)
        else:
            doc["family"] = args.kind.upper()
            doc.pop("kind", None)
    flags = {"rank": args.rank, "trials": args.trials, "seed": args.seed, "delta_min": args.delta_min,
             "coeff_bound": args.coeff_bound, "scramble_len": args.scramble_len}
    doc.update({k: v for k, v in flags.items() if v is not None})
    try:
        return ExperimentConfig.from_json(doc)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad experiment config: {e}")


def cmd_experiment(args) -> int:
    cfg = _config(args)
    try:
        rows, agg = run_experiment(cfg, workers=args.workers, dump_dir=args.dump_dir)
    except VerificationFailure as e:
        log.error("%s", e)
        return 1
    if args.format == "csv":
        _emit(rows_to_csv(rows), args.out)
    else:
        _emit({"config": cfg.to_json(), "aggregate": agg, "rows": rows}, args.out)
    print(json.dumps(agg), file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conjforge", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("roots", help="list positive roots")
    s.add_argument("kind")
    s.set_defaults(fn=cmd_roots)

    s = sub.add_parser("order", help="show or verify the reduction order")
    s.add_argument("action", choices=["verify", "show"])
    s.add_argument("kind")
    s.add_argument("--search", action="store_true", help="use the searched order instead of the built-in one")
    s.set_defaults(fn=cmd_order)

    s = sub.add_parser("constants", help="c0^2, c1^2, S_Lambda and root-vector norms")
    s.add_argument("kind")
    s.set_defaults(fn=cmd_constants)

    s = sub.add_parser("conjugate", help="build a conjugator between two unipotents")
    s.add_argument("u")
    s.add_argument("v")
    s.add_argument("--search", action="store_true")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_conjugate)

    s = sub.add_parser("experiment", help="run generated-conjugate trials")
    s.add_argument("config", nargs="?")
    s.add_argument("--kind", help="e.g. F4, or a family letter together with --rank")
    s.add_argument("--rank", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--delta-min", type=Fraction)
    s.add_argument("--coeff-bound", type=Fraction)
    s.add_argument("--scramble-len", type=int)
    s.add_argument("--out")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--workers", type=int, help="defaults to CONJFORGE_THREADS or the CPU count")
    s.add_argument("--dump-dir", default=".")
    s.set_defaults(fn=cmd_experiment)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
