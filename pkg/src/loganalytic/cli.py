"""Command-line interface.

Usage::

    loganalytic prepare  "y - 1/log(y)" [--order R] [--upper D|max] [--trunc K]
    loganalytic classify "y^^(5/2)"
    loganalytic verify   "1/(1-y)" --op taylor

Every invocation prints JSON reports (one per expression) on stdout.  Exit
codes: 0 success, 1 internal error, 2 syntax error, 3 preparation or analysis
error, 4 numeric oracle disagreement, 64 bad command-line usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

import mpmath

from . import __version__
from .calculus import classify, series_derivative, series_limit, taylor_split
from .coeffs import to_mpf
from .errors import LogAnalyticError, ParseError, SymbolicCoefficient
from .monomial import LimitKind, dominates
from .normalize import PrepEnv, eval_ast, log_depth, parse, prepare
from .numeric import PrecisionCtx, classify_trend, fd_derivative, series_evaluator, tail_magnitude
from .scale import ExponentTuple, SimpleCell, as_mpf, exp_tower
from .serialize import (
    SCHEMA,
    cell_to_json,
    float_str,
    limit_to_json,
    series_to_json,
    smoothness_to_json,
    taylor_to_json,
)
from .series import DEFAULT_TRUNC, factor_prepared, format_series

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_SYNTAX = 2
EXIT_ANALYSIS = 3
EXIT_ORACLE = 4
EXIT_USAGE = 64

#: relative tolerance for the derivative and Taylor oracles
ORACLE_TOL = Fraction(1, 10**8)
#: first sampling index used by the oracles; deeper points make truncation errors negligible
FIRST_SAMPLE = 4
#: highest Taylor degree cross-checked by finite differences
TAYLOR_CHECK_DEGREE = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _param(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name.isidentifier() or name == "y":
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name, Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"parameter value {value!r} is not a rational") from None


def _upper(text: str) -> str:
    if text != "max":
        try:
            if Fraction(text) <= 0:
                raise ValueError
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"--upper expects a positive rational or 'max', got {text!r}") from None
    return text


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("expr", nargs="?", help="expression in the germ DSL")
    common.add_argument("--order", type=_nonneg, help="scale order r (default: log-nesting depth)")
    common.add_argument("--upper", type=_upper, help="cell upper bound: a rational or 'max'")
    common.add_argument("--trunc", type=_nonneg, default=DEFAULT_TRUNC, help="truncation degree K")
    common.add_argument("--digits", type=int, default=100, help="working precision in decimal digits")
    common.add_argument("--pretty", action="store_true", help="indent and add human-readable math")
    common.add_argument("--oracle-samples", type=int, default=5, help="number of sample points for oracles")
    common.add_argument("--batch", metavar="FILE", help="read one expression per line from FILE")
    common.add_argument(
        "--param", type=_param, action="append", default=[], metavar="NAME=VALUE", help="bind a parameter"
    )

    parser = _Parser(prog="loganalytic", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("prepare", parents=[common], help="normalize into a generalized series")
    sub.add_parser("classify", parents=[common], help="limit, smoothness order and analyticity at 0")
    verify = sub.add_parser("verify", parents=[common], help="check a symbolic result against its numeric oracle")
    verify.add_argument("--op", choices=["diff", "limit", "taylor"], required=True)
    return parser


# -- helpers ------------------------------------------------------------------


def _sample_points(cell: SimpleCell, n: int, ctx: PrecisionCtx, first: int = 1) -> list[mpmath.mpf]:
    """``n`` schedule points ``exp(-e_{r-1} - exp(k))`` inside the cell, from ``k = first`` on."""
    points = []
    with ctx.work():
        shift = exp_tower(cell.r - 1) if cell.r >= 1 else mpmath.mpf(0)
        k = first
        while len(points) < n:
            y = mpmath.exp(-shift - mpmath.exp(k))
            if cell.contains(y):
                points.append(y)
            k += 1
    return points


def _rel(a, b) -> mpmath.mpf:
    return abs(a - b) / max(1, abs(b))


def _max_deviation(pairs) -> mpmath.mpf:
    return max((_rel(a, b) for a, b in pairs), default=mpmath.mpf(0))


class Session:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.params = dict(args.param)
        self.ctx = PrecisionCtx(digits=max(50, args.digits))

    def prepared(self, text: str):
        e = parse(text)
        r = log_depth(e) if self.args.order is None else self.args.order
        upper = self.args.upper
        if upper is not None and upper != "max":
            upper = Fraction(upper)
        env = PrepEnv.create(r, upper, self.args.trunc, self.params)
        return e, prepare(e, env)

    def base_report(self, text: str) -> dict[str, Any]:
        return {"schema": SCHEMA, "command": self.args.command, "input": text}

    def series_block(self, f) -> dict[str, Any]:
        block = {"cell": cell_to_json(f.cell), "series": series_to_json(f)}
        if self.args.pretty:
            block["pretty"] = format_series(f)
        return block

    def round_trip(self, e, f) -> dict[str, Any]:
        points = _sample_points(f.cell, self.args.oracle_samples, self.ctx, FIRST_SAMPLE)
        with self.ctx.work():
            pairs = [(series_evaluator(f, self.params)(y), eval_ast(e, y, self.params)) for y in points]
            tails = [tail_magnitude(f, y, self.ctx) for y in points]
        dev = _max_deviation(pairs)
        worst_tail = max((t for t in tails if t is not None), default=None)
        return {
            "oracle": "direct evaluation",
            "samples": len(points),
            "max_rel_deviation": float_str(dev, 6),
            "tail_magnitude": None if worst_tail is None else float_str(worst_tail, 6),
        }

    # -- commands ---------------------------------------------------------------

    def cmd_prepare(self, text: str) -> tuple[int, dict[str, Any]]:
        e, f = self.prepared(text)
        report = self.base_report(text)
        report["order"] = f.r
        report.update(self.series_block(f))
        if not f.free_params():
            report["check"] = self.round_trip(e, f)
        return EXIT_OK, report

    def cmd_classify(self, text: str) -> tuple[int, dict[str, Any]]:
        e, f = self.prepared(text)
        rep = classify(f, self.params)
        report = self.base_report(text)
        report["order"] = f.r
        report.update(self.series_block(f))
        report["classification"] = smoothness_to_json(rep)
        if not f.free_params():
            report["check"] = self.limit_check(e, f, rep.limit_at_0)
        return EXIT_OK, report

    def limit_check(self, e, f, lim) -> dict[str, Any]:
        n = max(3, self.args.oracle_samples)
        points = _sample_points(f.cell, n, self.ctx)
        with self.ctx.work():
            values = [eval_ast(e, y, self.params) for y in points]
        trend = classify_trend(values)
        value = None
        if lim.kind is LimitKind.FINITE:
            with self.ctx.work():
                value = to_mpf(lim.value, self.params)
        agrees = _trend_agrees(lim.kind, trend, values, value)
        return {
            "oracle": "sampling",
            "samples": len(points),
            "trend": trend,
            "last_value": float_str(values[-1], 12),
            "verdict": "pass" if agrees else "fail",
        }

    def cmd_verify(self, text: str) -> tuple[int, dict[str, Any]]:
        e, f = self.prepared(text)
        report = self.base_report(text)
        report["op"] = self.args.op
        report.update(self.series_block(f))
        if f.free_params():
            raise SymbolicCoefficient(
                f"bind parameters {sorted(f.free_params())} with --param to run the oracles"
            )
        if self.args.op == "diff":
            result = self.verify_diff(e, f)
        elif self.args.op == "limit":
            lim = series_limit(f, self.params)
            result = {"limit": limit_to_json(lim), **self.limit_check(e, f, lim)}
        else:
            result = self.verify_taylor(e, f)
        report["result"] = result
        code = EXIT_ORACLE if result.get("verdict") == "fail" else EXIT_OK
        return code, report

    def verify_diff(self, e, f) -> dict[str, Any]:
        df = series_derivative(f)
        points = _sample_points(f.cell, self.args.oracle_samples, self.ctx, FIRST_SAMPLE)
        fn = lambda y: eval_ast(e, y, self.params)  # noqa: E731
        with self.ctx.work():
            pairs = [(fd_derivative(fn, y, 1, self.ctx), series_evaluator(df, self.params)(y)) for y in points]
        dev = _max_deviation(pairs)
        return {
            "derivative": series_to_json(df),
            "oracle": "central finite difference",
            "samples": len(points),
            "max_rel_deviation": float_str(dev, 6),
            "tolerance": float_str(float(ORACLE_TOL), 3),
            "verdict": "pass" if dev <= as_mpf(ORACLE_TOL) else "fail",
        }

    def verify_taylor(self, e, f) -> dict[str, Any]:
        form = factor_prepared(f, self.params)
        split = taylor_split(form, _taylor_degree(f, self.args.trunc))
        result = {"taylor": taylor_to_json(split)}
        if split.singular_part.terms:
            result.update(verdict="skipped", reason="germ has singular terms; derivatives at 0 do not exist")
            return result
        y0 = _sample_points(f.cell, 1, self.ctx, FIRST_SAMPLE)[0]
        fn = lambda y: eval_ast(e, y, self.params)  # noqa: E731
        top = min(self.args.trunc, TAYLOR_CHECK_DEGREE)
        devs = []
        with self.ctx.work():
            for k in range(top + 1):
                expected = to_mpf(split.d(k), self.params) * mpmath.factorial(k)
                devs.append(_rel(fd_derivative(fn, y0, k, self.ctx), expected))
        dev = max(devs)
        result.update(
            oracle="finite differences near 0",
            checked_degree=top,
            max_rel_deviation=float_str(dev, 6),
            tolerance=float_str(float(ORACLE_TOL), 3),
            verdict="pass" if dev <= as_mpf(ORACLE_TOL) else "fail",
        )
        return result


def _taylor_degree(f, K: int) -> int:
    """Largest degree ``<= K`` whose power of ``y`` is not hidden by the remainder."""
    if f.tail is None:
        return K
    k = K
    while k > 0 and not dominates(ExponentTuple.unit(f.r, 0, k), f.tail):
        k -= 1
    return k


def _trend_agrees(kind: LimitKind, trend: str, values, value) -> bool:
    if kind is LimitKind.ZERO:
        return trend == "zero" or (trend == "plateau" and abs(values[-1]) < mpmath.mpf(10) ** -10)
    if kind is LimitKind.POS_INF:
        return trend == "+inf"
    if kind is LimitKind.NEG_INF:
        return trend == "-inf"
    if kind is LimitKind.FINITE:
        d = [abs(v - value) for v in values[-3:]]
        return d[-1] <= mpmath.mpf(10) ** -6 * max(1, abs(value)) or d[0] > d[1] > d[2]
    return False


# -- entry point ------------------------------------------------------------------


def _error_report(command: str, text: str, exc: Exception) -> tuple[int, dict]:
    report = {"schema": SCHEMA, "command": command, "input": text}
    if isinstance(exc, ParseError):
        report["error"] = {"name": exc.name, "message": str(exc), "position": exc.pos}
        return EXIT_SYNTAX, report
    if isinstance(exc, LogAnalyticError):
        report["error"] = {"name": exc.name, "message": str(exc)}
        return EXIT_ANALYSIS, report
    report["error"] = {"name": "InternalError", "message": f"{type(exc).__name__}: {exc}"}
    return EXIT_INTERNAL, report


def run_one(session: Session, text: str) -> tuple[int, dict[str, Any]]:
    handler = {
        "prepare": session.cmd_prepare,
        "classify": session.cmd_classify,
        "verify": session.cmd_verify,
    }[session.args.command]
    try:
        return handler(text)
    except Exception as exc:  # every failure becomes a machine-readable report
        return _error_report(session.args.command, text, exc)


def _dump(report: dict, pretty: bool) -> str:
    return json.dumps(report, indent=2 if pretty else None, sort_keys=False, ensure_ascii=False)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if (args.expr is None) == (args.batch is None):
            raise UsageError("give exactly one of an expression or --batch FILE")
        if args.oracle_samples < 1:
            raise UsageError("--oracle-samples must be positive")
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.batch is not None:
        try:
            with open(args.batch, encoding="utf-8") as fh:
                texts = [line.strip() for line in fh if line.strip() and not line.lstrip().startswith("#")]
        except OSError as exc:
            print(f"{parser.prog}: error: cannot read {args.batch}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        texts = [args.expr]
    session = Session(args)
    worst = EXIT_OK
    for text in texts:
        code, report = run_one(session, text)
        report["exit_code"] = code
        print(_dump(report, args.pretty))
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
