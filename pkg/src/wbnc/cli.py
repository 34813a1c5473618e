"""Command-line front end.

    wbnc validate INPUT
    wbnc a INPUT [--method m] [--max-delta n]
    wbnc report INPUT [--delta d] [--epsilon p/q] [--format json|text]
    wbnc dot INPUT
    wbnc fixtures [NAME]

INPUT is a configuration JSON file, or the name of a built-in fixture.  A
missing file whose stem names a fixture (``fixtures/fig1.json``) resolves to
that fixture, so the examples work without any data files on disk.

Exit codes: 0 success, 1 invalid configuration, 2 usage error, 3 computation
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .bounds import BoundEntry, RegimeError, full_report
from .cone import NonSpanningError, ThresholdError
from .config import (
    ConfigError,
    Configuration,
    consistency_warnings,
    export_dot,
    p2_to_f1,
    parse_configuration,
    serialize,
    validate,
)
from .fixtures import FIXTURES, fig3_prior_bound, get_fixture
from .formulas import HypothesisNotMet, Method, MethodDisagreement, compute_a

log = logging.getLogger("wbnc")

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer; decimals are refused to keep arithmetic exact."""
    s = text.strip()
    if any(ch in s.lower() for ch in ".e") or not s:
        raise argparse.ArgumentTypeError(f"{text!r}: expected an integer or p/q (no decimals)")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r}: expected an integer or p/q") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return value


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wbnc", description="Effective-cone threshold and negativity bounds "
                                 "for blow-ups of Hirzebruch surfaces and the projective plane.")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = ap.add_subparsers(dest="verb", required=True)

    def with_input(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", help="configuration JSON file or fixture name (fig1, fig2, fig3)")
        p.add_argument("--r", type=int, default=3, help="branch length for fig3 (default 3)")
        p.add_argument("--n", type=int, default=1, help="number of branches for fig3 (default 1)")
        p.add_argument("-o", "--output", help="write output to this file instead of stdout")

    def with_compute(p: argparse.ArgumentParser) -> None:
        p.add_argument("--method", default="auto", choices=["auto", "cone", "closed-form"])
        p.add_argument("--max-delta", type=_positive_int, default=None,
                       help="cap for the delta scan (default: $WBNC_MAX_DELTA or 10N+10)")
        p.add_argument("--format", default="text", choices=["text", "json"])

    p = sub.add_parser("validate", help="check a configuration and list violations")
    with_input(p)
    p.add_argument("--format", default="text", choices=["text", "json"])

    p = sub.add_parser("a", help="print the threshold a(APG)")
    with_input(p)
    with_compute(p)

    p = sub.add_parser("report", help="threshold, alpha, beta, omega and the applicable bounds")
    with_input(p)
    with_compute(p)
    p.add_argument("--delta", type=_nonneg_int, default=None, help="value of delta for a symbolic base")
    p.add_argument("--epsilon", type=parse_rational, default=None, help="positive rational, e.g. 1/2")

    p = sub.add_parser("dot", help="Graphviz export of the arrowed proximity graph")
    with_input(p)

    p = sub.add_parser("fixtures", help="list the built-in fixtures or print one as JSON")
    p.add_argument("name", nargs="?")
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("-o", "--output")
    return ap


def _fixture(name: str, r: int, n: int) -> Configuration:
    try:
        return get_fixture(name, r, n)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def load_input(spec: str, r: int = 3, n: int = 1) -> tuple[Configuration, str | None]:
    """The configuration named by ``spec`` and the fixture name, if it was one."""
    path = Path(spec)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {spec}: {exc}") from None
        return parse_configuration(text), None
    for name in (spec, path.stem):
        if name in FIXTURES:
            return _fixture(name, r, n), name
    raise UsageError(f"{spec}: no such file or fixture (fixtures: {', '.join(FIXTURES)})")


def _method(args) -> Method:
    return Method(args.method.replace("-", "_"))


def _cmd_validate(args) -> tuple[int, str]:
    c, _ = load_input(args.input, args.r, args.n)
    violations = validate(c)
    warnings = consistency_warnings(c) if not violations else []
    if args.format == "json":
        out = json.dumps({"valid": not violations, "violations": violations, "warnings": warnings}, indent=2) + "\n"
    else:
        lines = ["INVALID"] + [f"- {v}" for v in violations] if violations else ["VALID"]
        lines += [f"warning: {w}" for w in warnings]
        out = "\n".join(lines) + "\n"
    return (EXIT_INVALID if violations else EXIT_OK), out


def _cmd_a(args) -> tuple[int, str]:
    c, _ = load_input(args.input, args.r, args.n)
    if c.base.is_p2:
        c = p2_to_f1(c)
    elif c.base.is_f0:
        raise RegimeError("a is not defined over F_0; its delta = 0 analogues are in `wbnc report`")
    res = compute_a(c, _method(args), args.max_delta)
    if args.format == "json":
        return EXIT_OK, json.dumps({"a": res.value, "method": res.method}) + "\n"
    return EXIT_OK, f"{res.value}\n"


def _prior_entry(r: int, n: int) -> BoundEntry:
    return BoundEntry("prior", f"r = {r}, n = {n} (earlier general bound, for comparison)",
                      Fraction(fig3_prior_bound(r, n)), "every integral curve C: C^2/(L*.C)^2 >= value")


def _cmd_report(args) -> tuple[int, str]:
    c, fixture = load_input(args.input, args.r, args.n)
    extra = [_prior_entry(args.r, args.n)] if fixture == "fig3" else []
    rep = full_report(c, args.delta, args.epsilon, _method(args), args.max_delta, extra)
    if args.format == "json":
        return EXIT_OK, json.dumps(rep.to_json(), indent=2) + "\n"
    return EXIT_OK, rep.to_text()


def _cmd_dot(args) -> tuple[int, str]:
    c, _ = load_input(args.input, args.r, args.n)
    return EXIT_OK, export_dot(c)


def _cmd_fixtures(args) -> tuple[int, str]:
    if args.name is None:
        return EXIT_OK, "".join(f"{name}\n" for name in FIXTURES)
    if args.name not in FIXTURES:
        raise UsageError(f"unknown fixture {args.name!r}")
    return EXIT_OK, serialize(_fixture(args.name, args.r, args.n))


_COMMANDS = {
    "validate": _cmd_validate,
    "a": _cmd_a,
    "report": _cmd_report,
    "dot": _cmd_dot,
    "fixtures": _cmd_fixtures,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with exit 2
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        code, out = _COMMANDS[args.verb](args)
    except UsageError as exc:
        print(f"wbnc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"wbnc: invalid configuration: {exc}", file=sys.stderr)
        for v in exc.violations:
            print(f"- {v}", file=sys.stderr)
        return EXIT_INVALID
    except (ThresholdError, RegimeError, HypothesisNotMet, MethodDisagreement, NonSpanningError) as exc:
        print(f"wbnc: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except ValueError as exc:
        print(f"wbnc: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE

    output = getattr(args, "output", None)
    if output:
        try:
            Path(output).write_text(out, encoding="utf-8")
        except OSError as exc:
            print(f"wbnc: error: cannot write {output}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(out)
    return code


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
