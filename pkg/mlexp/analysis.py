# This file is part of mlexp
# See file LICENSE.txt for license information.

"""Measured comparison of the exponential representation with the series.

`h_series` is the definition of h, so it is the reference throughout; the
representation is the quantity under test.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from mlexp.errors import DomainError, MLExpError
from mlexp.fractional import sequential_deriv
from mlexp.representation import alpha_one_reference, h_exp, h_exp_lambda
from mlexp.series import (
    DEFAULT_POLICY,
    RationalOrder,
    SeriesValue,
    TruncationPolicy,
    h_series,
)
from mlexp.special import principal_root, recip_gamma

logger = logging.getLogger(__name__)

TINY = 1e-300
NOISE_FACTOR = 100.0

_NAN = complex(math.nan, math.nan)


@dataclass(frozen=True)
class DiscrepancyRow:
    x: float
    x0: float
    series_value: complex
    repr_value: complex
    abs_err: float
    rel_err: float
    converged: bool = True
    failure: str | None = None

    @classmethod
    def compare(cls, x: float, x0: float, series: SeriesValue, rep: SeriesValue):
        abs_err = abs(series.value - rep.value)
        return cls(
            x=x,
            x0=x0,
            series_value=series.value,
            repr_value=rep.value,
            abs_err=abs_err,
            rel_err=abs_err / max(abs(series.value), TINY),
            converged=series.converged and rep.converged,
        )

    @classmethod
    def failed(cls, x: float, x0: float, reason: str):
        return cls(x, x0, _NAN, _NAN, math.inf, math.inf, False, reason)


@dataclass(frozen=True)
class StudyReport:
    rows: list[DiscrepancyRow]
    estimated_order: float | None
    monotone: bool


def _row(
    n: int, rho: complex, x: float, x0: float, policy: TruncationPolicy
) -> DiscrepancyRow:
    try:
        series = h_series(x, rho, n, policy)
        rep = h_exp(x, x0, rho, n, policy)
    except (MLExpError, OverflowError) as e:
        logger.warning("row x=%r x0=%r failed: %s", x, x0, e)
        return DiscrepancyRow.failed(x, x0, str(e))
    return DiscrepancyRow.compare(x, x0, series, rep)


def discrepancy_table(
    n: int,
    rho: complex,
    xs: Sequence[float],
    x0s: Sequence[float],
    policy: TruncationPolicy = DEFAULT_POLICY,
    *,
    max_workers: int = 1,
) -> list[DiscrepancyRow]:
    """h_series against h_exp on every (x, x0) pair.

    Rows come ordered by x ascending, then x0 descending.  A pair that cannot
    be evaluated still yields a row, with `failure` set.
    """
    pairs = [
        (x, x0)
        for x in sorted(xs)
        for x0 in sorted(x0s, reverse=True)
    ]
    logger.debug("discrepancy table: %d rows, %d workers", len(pairs), max_workers)
    rho = complex(rho)
    if max_workers <= 1:
        return [_row(n, rho, x, x0, policy) for x, x0 in pairs]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        # map() yields in submission order
        return list(pool.map(lambda p: _row(n, rho, p[0], p[1], policy), pairs))


def convergence_order(rows: Sequence[DiscrepancyRow]) -> float:
    """Slope of ln(abs_err) against ln(x0) by least squares."""
    if len(rows) < 3:
        raise DomainError(f"need at least 3 rows, got {len(rows)}")
    if len({row.x for row in rows}) != 1:
        raise DomainError("rows must share a single x")
    x0s = np.array([row.x0 for row in rows])
    errs = np.array([row.abs_err for row in rows])
    if np.any(np.diff(x0s) >= 0):
        raise DomainError("x0 must be strictly decreasing")
    if not np.all(np.isfinite(errs)):
        raise DomainError("rows contain failed evaluations")
    if np.any(errs <= 0):
        raise DomainError("zero discrepancy: the order is undefined")
    slope, _ = np.polyfit(np.log(x0s), np.log(errs), 1)
    return float(slope)


def study(
    n: int,
    rho: complex,
    x: float,
    x0s: Sequence[float],
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> StudyReport:
    rows = discrepancy_table(n, rho, [x], x0s, policy)
    errs = [row.abs_err for row in rows]
    monotone = all(a > b for a, b in zip(errs, errs[1:], strict=False))

    usable = [
        row
        for row in rows
        if row.failure is None
        and row.abs_err >= NOISE_FACTOR * policy.rel_tol * abs(row.series_value)
    ]
    order = None
    if len(usable) >= 3:
        order = convergence_order(usable)
    else:
        logger.info(
            "only %d rows above the noise floor, order not estimated", len(usable)
        )
    return StudyReport(rows=rows, estimated_order=order, monotone=monotone)


def leading_coefficient(x: float, rho: complex, n: int) -> complex:
    """c with h_exp - h_series = c * x0**2 + O(x0**3)."""
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x!r}")
    rho = complex(rho)
    total = 0j
    for s in range(n):
        beta = (s + 1) / n
        total += (
            rho ** (s + n) * (beta - 1) * x ** (beta - 2) * recip_gamma(beta) / 2
        )
    return total


def eigen_residual(
    x: float,
    lam: complex,
    order: RationalOrder,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> float:
    """|D^{m/n} h - lam h| / |lam h| with h = h_{1/n}(x, lam^{1/m})."""
    lam = complex(lam)
    if lam == 0:
        raise DomainError("eigen residual is undefined at lambda = 0")
    rho = principal_root(lam, order.m)
    expected = lam * h_series(x, rho, order.n, policy).value
    derived = sequential_deriv(x, lam, order, policy).value
    return abs(derived - expected) / max(abs(expected), TINY)


def alpha_one_check(
    x: float,
    x0: float,
    lam: complex,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> float:
    exact = alpha_one_reference(x, lam)
    value = h_exp_lambda(x, x0, lam, RationalOrder(1, 1), policy).value
    return abs(value - exact) / max(abs(exact), TINY)
