"""Command-line interface.

Subcommands: dim | classify | chi | oracle | verify | sweep | report.
Exit codes: 0 ok, 1 formula/oracle mismatch, 2 usage error, 3 internal
diagnostic (an invariant the theory guarantees failed, or sampling gave up).
"""

from __future__ import annotations

import argparse
import json
import sys

from .classify import InvariantViolation, case_label, classification_to_json, classify
from .dimension import dimension
from .reduction import reduce_to_standard
from .systems import FatPointSystem, parse_multiplicities

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _system_from_args(args) -> FatPointSystem:
    return FatPointSystem(args.d, parse_multiplicities(args.m))


def _add_system_flags(parser: argparse.ArgumentParser):
    parser.add_argument("-d", type=int, required=True, help="degree of the surfaces")
    parser.add_argument(
        "-m",
        default="",
        help='multiplicities, comma list with repetition shorthand, e.g. "5,1x19"',
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")


def _emit(args, payload: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _cmd_dim(args) -> int:
    res = dimension(_system_from_args(args))
    payload = res.to_json_dict(include_trace=args.trace)
    _emit(
        args,
        payload,
        f"{res.system}: dim = {res.dim}, vdim = {res.vdim}, edim = {res.edim}, "
        f"speciality = {res.speciality}, cases = {'->'.join(res.case_path)}",
    )
    return EXIT_OK


def _cmd_classify(args) -> int:
    sys_in = _system_from_args(args).normalize()
    if sys_in.degree < 0:
        payload: dict = {"case": "empty"}
    else:
        reduced, trace = reduce_to_standard(sys_in)
        if trace.empty:
            payload = {"case": "empty", "reason": trace.empty_reason}
        elif reduced.r == 0:
            payload = {"case": "one", "defects": []}
        else:
            payload = classification_to_json(classify(reduced))
        payload["reduced"] = reduced.to_json_dict()
        if args.trace:
            payload["reduction"] = trace.to_json_list()
    _emit(args, payload, json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _parse_lines(text: str) -> dict[int, int]:
    out: dict[int, int] = {}
    if not text:
        return out
    for chunk in text.split(","):
        try:
            idx, mult = chunk.split(":")
            out[int(idx)] = int(mult)
        except ValueError as exc:
            raise ValueError(f'bad --lines chunk {chunk!r}, expected "i:t"') from exc
    return out


def _cmd_chi(args) -> int:
    from .chow import AmbientSpace, euler_characteristic, linear_system_class, rr_bracket

    mults = parse_multiplicities(args.m)
    r = args.r if args.r is not None else len(mults)
    line_mults = _parse_lines(args.lines)
    amb = AmbientSpace(
        r,
        frozenset(line_mults),
        curve_blown=args.curve is not None,
    )
    div = linear_system_class(amb, args.d, mults, line_mults, curve_mult=args.curve or 0)
    products, c2d = rr_bracket(div)
    chi = euler_characteristic(div)
    payload = {"chi": chi, "bracket": products + c2d, "c2_dot_d": c2d}
    _emit(args, payload, f"chi = {chi} (bracket {products + c2d}, c2.D = {c2d})")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    from .oracle import oracle_dimension

    seeds = tuple(range(args.seed, args.seed + args.trials))
    report = oracle_dimension(_system_from_args(args), primes=(args.prime,), seeds=seeds)
    _emit(
        args,
        report.to_json_dict(),
        f"oracle dim = {report.dim} over {len(report.trials)} trials"
        f" ({'stable' if report.stable else 'UNSTABLE'})",
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_verification

    primes = (args.prime, args.prime2) if args.prime2 else (args.prime,)
    seeds = tuple(range(args.seed, args.seed + args.trials))
    record = run_verification(_system_from_args(args), primes=primes, seeds=seeds)
    status = "ok" if record.match and record.stable else "MISMATCH"
    _emit(
        args,
        record.to_json_dict(),
        f"formula = {record.formula_dim}, oracle = {record.oracle_dim}, "
        f"speciality = {record.speciality}, cases = {'->'.join(record.case_path)} [{status}]",
    )
    if record.error is not None:
        print(record.error, file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK if record.match and record.stable else EXIT_MISMATCH


def _cmd_sweep(args) -> int:
    from .verify import SweepConfig, run_sweep

    with open(args.config, encoding="utf-8") as fh:
        data = json.load(fh)
    if args.workers is not None:
        data["workers"] = args.workers
    config = SweepConfig.from_json_dict(data)
    with open(args.out, "w", encoding="utf-8") as out:
        summary = run_sweep(config, out)
    print(json.dumps(summary, sort_keys=True))
    ok = summary["mismatches"] == 0 and summary["errors"] == 0
    return EXIT_OK if ok else EXIT_MISMATCH


def _cmd_report(args) -> int:
    from .report import build_report

    summary = build_report(args.input, args.outdir)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpdim",
        description="Exact dimensions of fat-point surface systems through points "
        "on an elliptic quartic curve, with a finite-field oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="dimension of one system via the formulas")
    _add_system_flags(p)
    p.add_argument("--trace", action="store_true", help="include the reduction/case trace")
    p.set_defaults(func=_cmd_dim)

    p = sub.add_parser("classify", help="reduce a system and report its case")
    _add_system_flags(p)
    p.add_argument("--trace", action="store_true", help="include the reduction trace")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("chi", help="Euler characteristic of a divisor class")
    p.add_argument("--d", type=int, required=True, help="coefficient of H")
    p.add_argument("--m", default="", dest="m", help="point multiplicities (shorthand ok)")
    p.add_argument("--r", type=int, default=None, help="number of points (default: len(m))")
    p.add_argument("--lines", default="", help='blown-up line multiplicities as "2:1,5:2"')
    p.add_argument("--curve", type=int, default=None, help="curve multiplicity t (blows up the curve)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_chi)

    p = sub.add_parser("oracle", help="finite-field interpolation dimension")
    _add_system_flags(p)
    p.add_argument("--prime", type=int, default=2147483647)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=3)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("verify", help="formula vs oracle on one system")
    _add_system_flags(p)
    p.add_argument("--prime", type=int, default=2147483647)
    p.add_argument("--prime2", type=int, default=None, help="optional second prime")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=3)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", help="batch verification over a grid")
    p.add_argument("--config", required=True, help="JSON config path (see README)")
    p.add_argument("--out", required=True, help="JSONL output path")
    p.add_argument("--workers", type=int, default=None, help="override config workers")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("report", help="CSV + figures from a sweep JSONL")
    p.add_argument("--in", dest="input", required=True, help="sweep JSONL path")
    p.add_argument("--outdir", required=True, help="output directory")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # InvariantViolation, CurveSamplingError, bugs
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
