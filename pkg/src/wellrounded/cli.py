"""Command-line front end.

Exit status: 0 on success, 1 on input or usage errors, 2 when a
verification does not come out as expected.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .enumeration import minimal_vectors
from .exact import format_rational, to_rational
from .io import InputError, load_lattice
from .paperlab import DimensionTooSmall, run_suite
from .retraction import AlreadyWellRounded, OutOfRange, flow_at, event, retract_to_X
from .sampling import DEFAULT_SEED
from .strata import classify, exhaustion_value

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str):
    return load_lattice(_read(path))


def _pretty_matrix(rows: list[list[str]]) -> str:
    width = max(len(x) for r in rows for x in r)
    return "\n".join("  [" + "  ".join(x.rjust(width) for x in r) + "]" for r in rows)


def _pretty(payload: dict) -> str:
    lines = []
    for key, val in payload.items():
        if isinstance(val, list) and val and isinstance(val[0], list) and all(isinstance(x, str) for x in val[0]):
            lines.append(f"{key}:")
            lines.append(_pretty_matrix(val))
        elif isinstance(val, list) and val and isinstance(val[0], list):
            lines.append(f"{key}:")
            lines.extend("  " + " ".join(f"{x:>3}" for x in v) for v in val)
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{key}:")
            for i, item in enumerate(val):
                lines.append(f"  [{i}]")
                lines.extend("    " + ln for ln in _pretty(item).splitlines())
        elif isinstance(val, dict):
            lines.append(f"{key}:")
            lines.extend("  " + ln for ln in _pretty(val).splitlines())
        else:
            lines.append(f"{key:<22} {val}")
    return "\n".join(lines)


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "pretty":
        print(_pretty(payload))
    else:
        print(json.dumps(payload))


def cmd_systole(args) -> int:
    lat = _load(args.input)
    mv = minimal_vectors(lat.form)
    _emit(
        {
            "systole_sq": format_rational(mv.systole_sq),
            "vectors": [list(v) for v in mv.vectors],
            "count": len(mv.vectors),
            "count_with_signs": mv.count_with_signs,
        },
        args.format,
    )
    return EXIT_OK


def cmd_classify(args) -> int:
    lat = _load(args.input)
    _emit(classify(lat.form).to_json(), args.format)
    return EXIT_OK


def cmd_retract(args) -> int:
    lat = _load(args.input)
    trace = retract_to_X(lat.form)
    payload = {
        "steps": len(trace.steps),
        "ratios": [format_rational(r) for r in trace.ratios],
        "final_gram": trace.final.to_json(),
    }
    if args.trace:
        payload["trace"] = trace.to_json()
    _emit(payload, args.format)
    return EXIT_OK


def cmd_flow_at(args) -> int:
    lat = _load(args.input)
    try:
        t = to_rational(args.t)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"--t: {exc}") from None
    try:
        ev = event(lat.form)
        gram = flow_at(lat.form, t)
    except (AlreadyWellRounded, OutOfRange) as exc:
        raise UsageError(str(exc)) from None
    _emit({"t": format_rational(t), "r": format_rational(ev.r), "gram": gram.to_json()}, args.format)
    return EXIT_OK


def cmd_exhaustion(args) -> int:
    lat = _load(args.input)
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    _emit(exhaustion_value(lat.form, args.tol).to_json(), args.format)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    try:
        reports = run_suite(args.n, seed=args.seed, samples=args.samples)
    except DimensionTooSmall as exc:
        raise UsageError(str(exc)) from None
    ok = all(r.as_expected for r in reports)
    payload = {"seed": args.seed, "ok": ok, "reports": [r.to_json() for r in reports]}
    if args.format == "pretty":
        for r in reports:
            j = r.to_json()
            print(f"n={r.params.get('n')!s:<3} {r.claim:<15} {j['status']}")
            if not r.passed and "extra_vectors" in r.witness:
                for v in r.witness["extra_vectors"]:
                    print(f"      extra minimal vector {v}")
        print("OK" if ok else "MISMATCH")
    else:
        print(json.dumps(payload))
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "pretty"], default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="wellrounded", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("systole", parents=[common], help="squared systole and minimal vectors")
    p.add_argument("input", help="lattice JSON file, or - for stdin")
    p.set_defaults(func=cmd_systole)

    p = sub.add_parser("classify", parents=[common], help="rank k, membership in X and Y")
    p.add_argument("input")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("retract", parents=[common], help="flow the lattice into the well-rounded retract")
    p.add_argument("input")
    p.add_argument("--trace", action="store_true", help="include every flow event")
    p.set_defaults(func=cmd_retract)

    p = sub.add_parser("flow-at", parents=[common], help="rescaled Gram form at flow parameter t in [1, r]")
    p.add_argument("input")
    p.add_argument("--t", required=True, help='exact rational such as "3/2"')
    p.set_defaults(func=cmd_flow_at)

    p = sub.add_parser("exhaustion", parents=[common], help="the exhaustion function F with a tail bound")
    p.add_argument("input")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_exhaustion)

    p = sub.add_parser("verify-paper", parents=[common], help="check the counterexample and supporting lemmas")
    p.add_argument("--n", type=int, nargs="+", default=[5, 6, 7, 8])
    p.add_argument("--samples", type=int, default=20, help="random draws per sampled claim")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.format = getattr(args, "format", "json")
    args.seed = getattr(args, "seed", DEFAULT_SEED)
    try:
        return args.func(args)
    except (InputError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
