# This file is part of mlexp
# See file LICENSE.txt for license information.

import argparse
import contextlib
import csv
import json
import logging
import math
import sys
from collections.abc import Iterator
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any

import numpy as np

from mlexp.acceptance import SUITES, run_suite
from mlexp.analysis import StudyReport, study
from mlexp.errors import DomainError, MLExpError, UsageError
from mlexp.representation import ReprParams, h_exp
from mlexp.series import (
    DEFAULT_POLICY,
    RationalOrder,
    SeriesValue,
    TruncationPolicy,
    h_series,
    h_via_decomposition,
)
from mlexp.special import principal_root

logger = logging.getLogger(__name__)

METHODS = ("series", "decomposition", "repr")
FORMATS = ("text", "csv", "json")
MAX_GRID_POINTS = 10**6

EVAL_COLUMNS = [
    "x",
    "x0",
    "n",
    "m",
    "lambda_re",
    "lambda_im",
    "method",
    "value_re",
    "value_im",
    "terms_used",
    "converged",
]
STUDY_COLUMNS = [
    "x",
    "x0",
    "series_re",
    "series_im",
    "repr_re",
    "repr_im",
    "abs_err",
    "rel_err",
    "converged",
]
CHECK_COLUMNS = ["name", "passed", "worst", "tolerance", "points", "detail"]


@dataclass(frozen=True)
class CliRequest:
    command: str
    order: RationalOrder | None = None
    lam: complex | None = None
    rho: complex | None = None
    x: float | None = None
    xs: tuple[float, ...] = ()
    x0: float | None = None
    x0s: tuple[float, ...] = ()
    method: str = "series"
    output_format: str = "text"
    out: Path | None = None
    policy: TruncationPolicy = DEFAULT_POLICY
    suites: tuple[str, ...] = field(default=("all",))
    verbosity: int = 0

    @property
    def effective_rho(self) -> complex:
        """rho as given, or the principal m-th root of lambda (default 1)."""
        if self.rho is not None:
            return self.rho
        assert self.order is not None
        lam = 1 + 0j if self.lam is None else self.lam
        return principal_root(lam, self.order.m)

    @property
    def effective_lambda(self) -> complex:
        if self.lam is not None:
            return self.lam
        if self.rho is not None:
            assert self.order is not None
            return self.rho**self.order.m
        return 1 + 0j


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex(text: str) -> complex:
    """Accept "1", "-0.5", "1+2i" and "1+2j"."""
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from e


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a comma-separated list: {text!r}") from e


def _grid(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    try:
        start, end, points = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError) as e:
        raise argparse.ArgumentTypeError(
            f"expected start:end:points, got {text!r}"
        ) from e
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:end:points, got {text!r}")
    if not start < end:
        raise argparse.ArgumentTypeError(f"grid start must be below end: {text!r}")
    if not 2 <= points <= MAX_GRID_POINTS:
        raise argparse.ArgumentTypeError(
            f"grid points must lie in [2, {MAX_GRID_POINTS}]: {text!r}"
        )
    return tuple(float(x) for x in np.linspace(start, end, points))


def _add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=FORMATS, default="text", dest="fmt")
    parser.add_argument(
        "--out", metavar="FILE", default=None, help="Write to FILE, not stdout."
    )
    parser.add_argument(
        "--rel-tol", type=float, default=DEFAULT_POLICY.rel_tol, dest="rel_tol"
    )
    parser.add_argument(
        "--max-terms", type=int, default=DEFAULT_POLICY.max_terms, dest="max_terms"
    )


def _add_function_args(parser: argparse.ArgumentParser, *, method: bool) -> None:
    order = parser.add_mutually_exclusive_group(required=True)
    order.add_argument("--n", type=int)
    order.add_argument(
        "--order",
        metavar="M/N",
        default=None,
        help="Derivative order as one reduced fraction, e.g. 2/3.",
    )
    parser.add_argument("--m", type=int, default=None, help="Numerator (default 1).")
    source = parser.add_mutually_exclusive_group()
    source.add_argument(
        "--lambda",
        type=_complex,
        default=None,
        dest="lam",
        help="Eigenvalue lambda, e.g. 2 or 1+0.5i (default 1).",
    )
    source.add_argument("--rho", type=_complex, default=None)
    if method:
        parser.add_argument("--method", choices=METHODS, default="series")
        parser.add_argument(
            "--x0",
            type=float,
            default=None,
            help="Lower limit of the representation (needed by --method repr).",
        )


def _make_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for progress, -vv for debugging output.",
    )
    _add_output_args(common)

    parser = _ArgumentParser(
        prog="mlexp",
        description="Evaluate and check the shifted Mittag-Leffler function.",
    )
    parser.add_argument("--version", action="version", version=_version())
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("eval", parents=[common], help="Evaluate at one x.")
    _add_function_args(p, method=True)
    p.add_argument("--x", type=float, required=True)

    p = commands.add_parser("table", parents=[common], help="Evaluate on a grid.")
    _add_function_args(p, method=True)
    p.add_argument("--grid", type=_grid, required=True, metavar="START:END:POINTS")

    p = commands.add_parser(
        "study", parents=[common], help="Representation error as x0 shrinks."
    )
    _add_function_args(p, method=False)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--x0-seq", type=_float_list, required=True, dest="x0_seq")

    p = commands.add_parser(
        "validate", parents=[common], help="Run the validation suite."
    )
    p.add_argument(
        "--suite",
        choices=[*SUITES, "all"],
        action="append",
        default=None,
        help="Check to run; repeat for several (default all).",
    )
    return parser


def _version() -> str:
    from mlexp import __version__

    return f"mlexp {__version__}"


def _policy(args: argparse.Namespace) -> TruncationPolicy:
    try:
        return TruncationPolicy(rel_tol=args.rel_tol, max_terms=args.max_terms)
    except DomainError as e:
        raise UsageError(f"--rel-tol/--max-terms: {e}") from e


def _order(args: argparse.Namespace) -> RationalOrder:
    if args.order is not None:
        if args.m is not None:
            raise UsageError("--m cannot be combined with --order")
        try:
            return RationalOrder.from_string(args.order)
        except DomainError as e:
            raise UsageError(f"--order: {e}") from e
    try:
        return RationalOrder(1 if args.m is None else args.m, args.n)
    except DomainError as e:
        raise UsageError(f"--m/--n: {e}") from e


def parse_args(argv: list[str]) -> CliRequest:
    args = _make_parser().parse_args(argv)
    common: dict[str, Any] = {
        "command": args.command,
        "output_format": args.fmt,
        "out": Path(args.out) if args.out else None,
        "policy": _policy(args),
        "verbosity": args.verbose,
    }
    if args.command == "validate":
        return CliRequest(suites=tuple(args.suite or ["all"]), **common)

    common.update(order=_order(args), lam=args.lam, rho=args.rho)
    if args.command == "study":
        if any(not x0 > 0 for x0 in args.x0_seq):
            raise UsageError("--x0-seq: every x0 must be > 0")
        return CliRequest(x=args.x, xs=(args.x,), x0s=args.x0_seq, **common)

    if args.method == "repr":
        if args.x0 is None:
            raise UsageError("--x0 is required with --method repr")
        if not args.x0 > 0:
            raise UsageError(f"--x0 must be > 0, got {args.x0!r}")
    xs = (args.x,) if args.command == "eval" else args.grid
    x = args.x if args.command == "eval" else None
    return CliRequest(method=args.method, x=x, xs=xs, x0=args.x0, **common)


def evaluate(request: CliRequest, x: float) -> SeriesValue:
    assert request.order is not None
    n, rho, policy = request.order.n, request.effective_rho, request.policy
    if request.method == "series":
        return h_series(x, rho, n, policy)
    if request.method == "decomposition":
        return h_via_decomposition(x, rho, n, policy)
    assert request.x0 is not None
    if request.lam is not None:
        return ReprParams(request.x0, request.order, request.lam, policy).evaluate(x)
    return h_exp(x, request.x0, rho, n, policy)


def _number(value: float) -> str:
    # repr is the shortest string that round-trips a double
    return repr(float(value))


def _complex_text(value: complex) -> str:
    if value.imag == 0:
        return _number(value.real)
    sign = "-" if value.imag < 0 else "+"
    return f"{_number(value.real)}{sign}{_number(abs(value.imag))}j"


def _params(request: CliRequest) -> dict[str, Any]:
    params: dict[str, Any] = {
        "command": request.command,
        "rel_tol": request.policy.rel_tol,
        "max_terms": request.policy.max_terms,
    }
    if request.order is not None:
        lam = request.effective_lambda
        params.update(
            n=request.order.n,
            m=request.order.m,
            alpha=request.order.alpha,
            lambda_re=lam.real,
            lambda_im=lam.imag,
            x0=request.x0,
        )
        if request.command != "study":
            params["method"] = request.method
    if request.x0s:
        params["x0_seq"] = list(request.x0s)
    if request.command == "validate":
        params["suites"] = list(request.suites)
    return params


def _eval_row(request: CliRequest, x: float, value: SeriesValue) -> dict[str, Any]:
    assert request.order is not None
    lam = request.effective_lambda
    return {
        "x": x,
        "x0": "" if request.x0 is None else request.x0,
        "n": request.order.n,
        "m": request.order.m,
        "lambda_re": lam.real,
        "lambda_im": lam.imag,
        "method": request.method,
        "value_re": value.value.real,
        "value_im": value.value.imag,
        "terms_used": value.terms_used,
        "converged": value.converged,
    }


def _study_rows(report: StudyReport) -> list[dict[str, Any]]:
    return [
        {
            "x": row.x,
            "x0": row.x0,
            "series_re": row.series_value.real,
            "series_im": row.series_value.imag,
            "repr_re": row.repr_value.real,
            "repr_im": row.repr_value.imag,
            "abs_err": row.abs_err,
            "rel_err": row.rel_err,
            "converged": row.converged,
        }
        for row in report.rows
    ]


@contextlib.contextmanager
def _output(request: CliRequest) -> Iterator[IO[str]]:
    if request.out is None:
        yield sys.stdout
    else:
        with request.out.open("w", newline="", encoding="utf-8") as f:
            yield f


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return _number(value)
    return str(value)


def _plain(value: Any) -> Any:
    """Strict-JSON copy: numpy scalars unwrapped, NaN and infinities as null."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _write(
    request: CliRequest,
    columns: list[str],
    rows: list[dict[str, Any]],
    diagnostics: dict[str, Any],
) -> None:
    with _output(request) as f:
        if request.output_format == "json":
            document = {
                "params": _params(request),
                "rows": rows,
                "diagnostics": diagnostics,
            }
            json.dump(_plain(document), f, indent=4, allow_nan=False)
            f.write("\n")
        elif request.output_format == "csv":
            writer = csv.DictWriter(f, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _cell(v) for k, v in row.items()})
        else:
            f.write(" ".join(columns) + "\n")
            for row in rows:
                f.write(" ".join(_cell(row[c]) for c in columns) + "\n")
            for key, value in diagnostics.items():
                f.write(f"{key}: {_cell(value)}\n")


def _run_eval(request: CliRequest) -> int:
    assert request.x is not None
    value = evaluate(request, request.x)
    if request.output_format == "text":
        with _output(request) as f:
            f.write(_complex_text(value.value) + "\n")
            f.write(f"terms_used: {value.terms_used}\n")
            f.write(f"last_term: {_number(value.last_term_mag)}\n")
            f.write(f"converged: {value.converged}\n")
    else:
        _write(
            request,
            EVAL_COLUMNS,
            [_eval_row(request, request.x, value)],
            {"last_term": value.last_term_mag, "condition": value.condition},
        )
    return 0 if value.converged else 1


def _run_table(request: CliRequest) -> int:
    logger.debug("table: %d points", len(request.xs))
    values = [(x, evaluate(request, x)) for x in request.xs]
    rows = [_eval_row(request, x, value) for x, value in values]
    unconverged = sum(not value.converged for _, value in values)
    _write(request, EVAL_COLUMNS, rows, {"unconverged": unconverged})
    return 0 if unconverged == 0 else 1


def _run_study(request: CliRequest) -> int:
    assert request.order is not None and request.x is not None
    report = study(
        request.order.n,
        request.effective_rho,
        request.x,
        request.x0s,
        request.policy,
    )
    diagnostics = {
        "estimated_order": report.estimated_order,
        "monotone": report.monotone,
        "failures": [row.failure for row in report.rows if row.failure],
    }
    _write(request, STUDY_COLUMNS, _study_rows(report), diagnostics)
    ok = all(row.converged for row in report.rows)
    return 0 if ok else 1


def _run_validate(request: CliRequest) -> int:
    results = run_suite(request.suites, request.policy)
    failed = [r.name for r in results if not r.passed]
    _write(
        request,
        CHECK_COLUMNS,
        [r.as_dict() for r in results],
        {"passed": not failed, "failed": failed},
    )
    if failed:
        print(f"mlexp: failed checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


_COMMANDS = {
    "eval": _run_eval,
    "table": _run_table,
    "study": _run_study,
    "validate": _run_validate,
}


def run(request: CliRequest) -> int:
    return _COMMANDS[request.command](request)


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def cli(argv: list[str] | None = None):
    if argv is None:
        argv = sys.argv[1:]

    try:
        request = parse_args(argv)
    except UsageError as e:
        print(f"mlexp: error: {e}", file=sys.stderr)
        sys.exit(UsageError.exit_code)

    _configure_logging(request.verbosity)
    try:
        code = run(request)
    except (MLExpError, OverflowError) as e:
        print(f"mlexp: {e}", file=sys.stderr)
        sys.exit(1)
    sys.exit(code)


if __name__ == "__main__":
    cli()
