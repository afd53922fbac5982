"""Command-line front end.

Slopes are always the unsigned pair ``p/q`` and mean -p/q surgery.  V/H data
must be that of the mirrored knot.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import acceptance
from .changemaker import enumerate_changemakers, is_changemaker
from .deficiency import (
    KnotDataError,
    deficiency_rational,
    integral_minimisers,
    sum_identity_check,
    symmetry_check,
    validate_vh,
    vanishing_hypothesis,
)
from .embedding import DEFAULT_MAX_RANK, FormBlock, SearchBoundError, Verdict, obstruct
from .numeric import Slope, SlopeError, fraction_str, word_to_json
from .plumbing import enumerate_K, enumerate_K_prime, family_to_json

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected a comma-separated integer list, got {text!r}") from None


def _load_qx(text: str) -> list[list[int]]:
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as e:
            raise InputError(f"cannot read {text[1:]}: {e}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"bad Q_X JSON: {e}") from None
    if isinstance(obj, dict):
        obj = obj.get("matrix")
    if not isinstance(obj, list) or not all(
        isinstance(row, list) and all(isinstance(v, int) for v in row) for row in obj
    ):
        raise InputError('Q_X must be a JSON integer matrix or {"matrix": [[...]]}')
    return obj


def _slope(args) -> Slope:
    text = getattr(args, "slope_pos", None) or args.slope
    if text is None:
        raise InputError("a slope is required")
    return Slope.parse(text)


def _data(args, required: bool = True):
    if args.V is None:
        if required:
            raise InputError("--V is required")
        return None
    H = _int_list(args.H) if args.H is not None else None
    return validate_vh(_int_list(args.V), H)


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print("\n".join(lines))


def cmd_hj(args) -> int:
    s = _slope(args)
    _emit(args, {"slope": str(s), "a": list(s.a), "n": s.n, "r": s.r}, [word_to_json(s.a)])
    return EXIT_OK


def cmd_dinv(args) -> int:
    s = _slope(args)
    family = enumerate_K_prime(s) if args.prime else enumerate_K(s)
    payload = family_to_json(family)
    lines = [f"d-invariants of S^3_-{s}(U), HJ word {word_to_json(s.a)}"]
    lines += [f"  ({k})  {d}" for k, d in payload["d"]]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_deficiency(args) -> int:
    s = _slope(args)
    data = _data(args)
    table = deficiency_rational(data, s)
    mins = integral_minimisers(data, s.n)
    hyp, count = vanishing_hypothesis(data, s)
    payload = table.to_json() | {
        "minimisers": list(mins.indices),
        "hypothesis": hyp.value,
        "vanishing": count,
    }
    lines = [
        f"slope {s}  n={s.n}  r={s.r}",
        f"D^(p/q): {list(table.values)}",
        f"D^n:     {list(table.integral_values)}",
        f"min D^n = {table.min}  attained at {list(mins.indices)}",
        f"vanishing hypothesis: {hyp.value} ({count} vanishing)",
    ]
    _emit(args, payload, lines)
    return EXIT_FAILED if args.assert_ and not hyp.satisfied else EXIT_OK


def cmd_symmetry(args) -> int:
    s = _slope(args)
    data = _data(args)
    sym = symmetry_check(data, s)
    tot = sum_identity_check(data, s)
    payload = {
        "slope": str(s),
        "symmetry": sym.holds,
        "rational": {str(k): v for k, v in sym.rational.items()},
        "integral": {str(k): v for k, v in sym.integral.items()},
        "copies": sym.copies,
        "removed": [sym.removed_value, sym.removed_count],
        "sum_identity": tot.holds,
        "sum_lhs": tot.lhs,
        "sum_rhs": tot.rhs,
    }
    lines = [
        f"multiset symmetry: {'holds' if sym.holds else 'FAILS'}",
        f"  D^(p/q) multiset {sym.rational} = {sym.copies} x {sym.integral}"
        f" minus {sym.removed_count} x {{{sym.removed_value}}}",
        f"sum identity: {tot.lhs} = {tot.rhs}  ({'holds' if tot.holds else 'FAILS'})",
    ]
    _emit(args, payload, lines)
    ok = sym.holds and tot.holds
    return EXIT_FAILED if args.assert_ and not ok else EXIT_OK


def cmd_changemaker(args) -> int:
    if args.check is not None:
        sigma = _int_list(args.check)
        try:
            ok = is_changemaker(sigma)
        except ValueError as e:
            raise InputError(str(e)) from None
        _emit(args, {"sigma": sigma, "changemaker": ok}, [f"{sigma}: {'changemaker' if ok else 'not a changemaker'}"])
        return EXIT_FAILED if args.assert_ and not ok else EXIT_OK
    if args.norm is None:
        raise InputError("give --norm N or --check LIST")
    vecs = enumerate_changemakers(args.norm, args.max_len)
    _emit(args, {"norm": args.norm, "vectors": [list(v) for v in vecs]}, [json.dumps(list(v)) for v in vecs])
    return EXIT_OK


def cmd_obstruct(args) -> int:
    s = _slope(args)
    if args.qx is None:
        raise InputError("--qx is required")
    try:
        block = FormBlock(tuple(map(tuple, _load_qx(args.qx))), s)
    except ValueError as e:
        raise InputError(str(e)) from None
    data = _data(args, required=False)
    verdict = obstruct(data, block, max_rank=args.max_rank, workers=args.workers)
    payload = {"slope": str(s), "qx": [list(r) for r in block.qx]} | verdict.to_json(timing=args.timing)
    lines = [
        f"Y = S^3_-{s}(C), HJ word {word_to_json(s.a)}, b2(X) = {block.b}",
        f"hypothesis: {payload['hypothesis']}"
        + ("" if verdict.vanishing_count is None else f" ({verdict.vanishing_count} vanishing)"),
        f"verdict: {verdict.verdict.value}",
    ]
    if verdict.certificate is not None:
        lines.append(f"sigma: {list(verdict.search.sigma)}")
        lines.append("certificate A:")
        lines += ["  " + " ".join(f"{v:3d}" for v in row) for row in verdict.certificate]
    if verdict.search is not None:
        lines.append(f"search nodes: {verdict.search.nodes}")
    if args.timing:
        lines.append(f"time: {verdict.seconds:.3f}s")
    _emit(args, payload, lines)
    failed = verdict.verdict is Verdict.OBSTRUCTED
    return EXIT_FAILED if args.assert_ and failed else EXIT_OK


def cmd_selftest(args) -> int:
    results = acceptance.run_all(echo=not args.json)
    if args.json:
        print(json.dumps({r.name: r.passed for r in results}, sort_keys=True))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--assert", dest="assert_", action="store_true",
                        help="exit 1 when a check fails or the surgery is obstructed")
    slope = argparse.ArgumentParser(add_help=False)
    slope.add_argument("slope_pos", nargs="?", metavar="SLOPE", help="p/q, meaning -p/q surgery")
    slope.add_argument("--slope")
    vh = argparse.ArgumentParser(add_help=False)
    vh.add_argument("--V", help="V_0,V_1,... (zero beyond the list)")
    vh.add_argument("--H", help="H_0,H_-1,H_-2,... (default H_i = V_-i)")

    parser = argparse.ArgumentParser(prog="rationalsurgery", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("hj", parents=[common, slope], help="Hirzebruch-Jung expansion").set_defaults(func=cmd_hj)
    p = sub.add_parser("dinv", parents=[common, slope], help="d-invariants of S^3_{-p/q}(U)")
    p.add_argument("--prime", action="store_true", help="list the nudged family K' instead of K")
    p.set_defaults(func=cmd_dinv)
    sub.add_parser("deficiency", parents=[common, slope, vh], help="deficiency tables").set_defaults(func=cmd_deficiency)
    sub.add_parser("symmetry", parents=[common, slope, vh], help="deficiency symmetry checks").set_defaults(func=cmd_symmetry)
    p = sub.add_parser("changemaker", parents=[common], help="changemaker predicate / enumeration")
    p.add_argument("--norm", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--check")
    p.set_defaults(func=cmd_changemaker)
    p = sub.add_parser("obstruct", parents=[common, slope, vh], help="changemaker embedding obstruction")
    p.add_argument("--qx", help="Q_X as inline JSON or @file")
    p.add_argument("--max-rank", type=int, default=DEFAULT_MAX_RANK)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="report wall time (not bit-stable)")
    p.set_defaults(func=cmd_obstruct)
    sub.add_parser("selftest", parents=[common], help="run the acceptance criteria").set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, SlopeError, KnotDataError, SearchBoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
