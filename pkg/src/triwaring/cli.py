"""Command-line front end.

Exit codes: 0 ok, 1 verification failed, 2 input error, 3 order cap
exceeded, 4 method not applicable, 5 target outside the band J^r.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    DimensionMismatch,
    NonzeroConstantTerm,
    OrderExceedsCap,
    OrderMismatch,
    OrderOutOfRange,
    PolySyntaxError,
    TargetNotInBand,
    ZeroOnRDiagonal,
    ZeroPolynomial,
)
from .ncpoly import parse_ncpoly
from .structure import DEFAULT_ORDER_CAP, compute_order
from .triangular import UTMatrix
from .witness import WitnessBundle, bundle_diff, decompose_sum, find_single_witness, verify_bundle

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_INAPPLICABLE = 4
EXIT_BAND = 5


class CliError(Exception):
    def __init__(self, code: int, message: str, payload: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triwaring",
        description="Orders and exact Waring decompositions of polynomial images on T_n(Q).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_target):
        p.add_argument("--poly", required=True, help='noncommutative polynomial, e.g. "[x1,x2]^2"')
        p.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP)
        if needs_target:
            p.add_argument("--target", required=True, help="target matrix JSON file")
            p.add_argument("--n", type=int, help="matrix size (defaults to the target's)")
            p.add_argument("--out", help="write the bundle here instead of stdout")
            p.add_argument("--seed", type=int, default=0)

    common(sub.add_parser("order", help="compute the order of a polynomial"), False)
    common(sub.add_parser("witness", help="single preimage p(u) = A"), True)
    common(sub.add_parser("decompose", help="two-term decomposition p(u) + p(v) = A"), True)
    verify = sub.add_parser("verify", help="re-check a bundle file")
    verify.add_argument("bundle", help="bundle JSON file")
    selftest = sub.add_parser("selftest", help="run the acceptance checks")
    selftest.add_argument("--trials", type=int, help="cap on random cases per check")
    return parser


def _load_poly(text: str):
    try:
        return parse_ncpoly(text)
    except (PolySyntaxError, NonzeroConstantTerm, ZeroPolynomial) as exc:
        raise CliError(EXIT_INPUT, f"bad polynomial: {exc}") from None


def _order(p, cap):
    try:
        return compute_order(p, cap)
    except OrderExceedsCap as exc:
        raise CliError(EXIT_CAP, str(exc)) from None


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"{path} is not valid JSON: {exc}") from None


def _load_target(args) -> UTMatrix:
    try:
        target = UTMatrix.from_json(_read_json(args.target))
    except ValueError as exc:
        raise CliError(EXIT_INPUT, f"bad target matrix: {exc}") from None
    if args.n is not None and args.n != target.n:
        raise CliError(EXIT_INPUT, f"--n {args.n} disagrees with target size {target.n}")
    return target


def _emit_bundle(bundle: WitnessBundle, out: str | None, stdout):
    text = bundle.dumps()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _inapplicable(reason: str, exc: Exception) -> CliError:
    return CliError(
        EXIT_INAPPLICABLE,
        str(exc),
        {"error": "inapplicable", "reason": reason, "detail": str(exc), "suggestion": "decompose"},
    )


def cmd_order(args, stdout) -> int:
    p = _load_poly(args.poly)
    report = _order(p, args.order_cap)
    stdout.write(json.dumps(report.to_json()) + "\n")
    return EXIT_OK


def cmd_witness(args, stdout) -> int:
    p = _load_poly(args.poly)
    target = _load_target(args)
    report = _order(p, args.order_cap)
    try:
        bundle = find_single_witness(p, target.n, target, args.seed, report)
    except ZeroOnRDiagonal as exc:
        raise _inapplicable("zero-on-r-diagonal", exc) from None
    except (OrderOutOfRange, OrderMismatch) as exc:
        raise _inapplicable("order-out-of-range", exc) from None
    except TargetNotInBand as exc:
        raise CliError(EXIT_BAND, str(exc)) from None
    _emit_bundle(bundle, args.out, stdout)
    return EXIT_OK


def cmd_decompose(args, stdout) -> int:
    p = _load_poly(args.poly)
    target = _load_target(args)
    report = _order(p, args.order_cap)
    try:
        bundle = decompose_sum(p, target.n, target, args.seed, report)
    except OrderOutOfRange as exc:
        raise CliError(
            EXIT_INAPPLICABLE,
            str(exc),
            {"error": "inapplicable", "reason": "order-out-of-range", "detail": str(exc)},
        ) from None
    except TargetNotInBand as exc:
        raise CliError(EXIT_BAND, str(exc)) from None
    _emit_bundle(bundle, args.out, stdout)
    return EXIT_OK


def cmd_verify(args, stdout) -> int:
    data = _read_json(args.bundle)
    try:
        bundle = WitnessBundle.from_json(data)
    except (ValueError, PolySyntaxError, NonzeroConstantTerm, ZeroPolynomial, DimensionMismatch) as exc:
        raise CliError(EXIT_INPUT, f"bad bundle: {exc}") from None
    if verify_bundle(bundle):
        stdout.write("verified\n")
        return EXIT_OK
    stdout.write("verification failed; entries (row, col): got != expected\n")
    for i, j, got, want in bundle_diff(bundle):
        stdout.write(f"  ({i},{j}): {got} != {want}\n")
    return EXIT_VERIFY_FAILED


def cmd_selftest(args, stdout) -> int:
    from .acceptance import CHECKS, run_check

    failed = 0
    for check in CHECKS:
        result = run_check(check, args.trials)
        stdout.write(result.line() + "\n")
        stdout.flush()
        failed += not result.passed
    stdout.write(f"{len(CHECKS) - failed}/{len(CHECKS)} checks passed\n")
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


COMMANDS = {
    "order": cmd_order,
    "witness": cmd_witness,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


def main(argv=None, quiet: bool = False) -> int:
    """Run one command and return its exit code; ``quiet`` silences all output."""
    stdout = open("/dev/null", "w") if quiet else sys.stdout
    stderr = stdout if quiet else sys.stderr
    try:
        try:
            args = _build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        try:
            return COMMANDS[args.command](args, stdout)
        except CliError as exc:
            if exc.payload is not None:
                stdout.write(json.dumps(exc.payload) + "\n")
            stderr.write(f"error: {exc}\n")
            return exc.code
    finally:
        if quiet:
            stdout.close()


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
