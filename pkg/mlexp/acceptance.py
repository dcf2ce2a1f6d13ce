# This file is part of mlexp
# See file LICENSE.txt for license information.

"""The validation suite run by `mlexp validate`.

Each check evaluates a fixed grid and reports the worst measured quantity
against its tolerance.
"""

import itertools
import logging
import math
import sys
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np

from mlexp.analysis import alpha_one_check, eigen_residual, study
from mlexp.fractional import rl_integral_exp, rl_integral_quadrature
from mlexp.series import (
    DEFAULT_POLICY,
    RationalOrder,
    TruncationPolicy,
    h_half_closed_form,
    h_series,
    h_via_decomposition,
)
from mlexp.special import gamma

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon

STUDY_X0S = (0.4, 0.2, 0.1, 0.05, 0.025)
# Leading representation error is quadratic in x0.
ORDER_BAND = (1.8, 2.3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    points: int
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "worst": float(self.worst),
            "tolerance": float(self.tolerance),
            "points": int(self.points),
            "detail": self.detail,
        }


def _rel(value: complex, reference: complex) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def _result(name: str, errors: list[float], tolerance: float, detail: str = ""):
    worst = float(max(errors))
    return CheckResult(
        name=name,
        passed=bool(worst <= tolerance),
        worst=worst,
        tolerance=tolerance,
        points=len(errors),
        detail=detail,
    )


def check_gamma(policy: TruncationPolicy = DEFAULT_POLICY) -> CheckResult:
    exact = {
        1.0: 1.0,
        0.5: math.sqrt(math.pi),
        5.0: 24.0,
        -0.5: -2 * math.sqrt(math.pi),
    }
    errors = [_rel(gamma(z), value) for z, value in exact.items()]
    errors += [
        _rel(z * gamma(z), gamma(z + 1)) for z in np.linspace(0.1, 20.0, 200)
    ]
    return _result("gamma", errors, 1e-12, "exact values and Gamma(z+1) = z Gamma(z)")


def check_alpha_one(policy: TruncationPolicy = DEFAULT_POLICY) -> CheckResult:
    errors = [
        alpha_one_check(float(x), x0, lam, policy)
        for lam in (-1.0, 0.5, 1.0, 2.0)
        for x0 in (0.1, 0.5, 1.0)
        for x in np.linspace(x0, 5.0, 20)
    ]
    return _result("alpha-one", errors, 1e-9, "order 1 reproduces exp(lambda x)")


def check_decomposition(policy: TruncationPolicy = DEFAULT_POLICY) -> CheckResult:
    # Both sides regroup the same terms, so the gap is rounding; it is measured
    # against the sum of term magnitudes where the series cancels.
    ratios = []
    for n, rho, x in itertools.product(
        range(1, 6), (0.5, 1.0, -0.7, 1 + 0.5j), (0.5, 1.0, 2.0, 5.0)
    ):
        direct = h_series(x, rho, n, policy)
        regrouped = h_via_decomposition(x, rho, n, policy)
        bound = 1e-12 * abs(direct.value) + 256 * EPS * direct.abs_sum
        ratios.append(abs(regrouped.value - direct.value) / bound)
    return _result(
        "decomposition",
        ratios,
        1.0,
        "error / (1e-12 |h| + 256 eps sum|term|)",
    )


def check_eigen(policy: TruncationPolicy = DEFAULT_POLICY) -> CheckResult:
    errors = [
        eigen_residual(x, lam, RationalOrder(m, n), policy)
        for (m, n) in ((1, 2), (1, 3), (2, 3), (3, 4), (2, 5), (3, 5), (5, 6))
        for lam in (0.5, 1.0, 2.0)
        for x in (1.0, 2.0)
    ]
    return _result("eigen", errors, 10 * policy.rel_tol, "D^{m/n} h = lambda h")


def check_closed_form(policy: TruncationPolicy = DEFAULT_POLICY) -> CheckResult:
    errors = [
        _rel(h_series(x, rho, 2, policy).value, h_half_closed_form(x, rho))
        for rho in (0.5, 1.0)
        for x in (0.5, 1.0, 2.0)
    ]
    return _result("closed-form", errors, 1e-8, "n = 2 against erfcx")


def check_integral(policy: TruncationPolicy = DEFAULT_POLICY) -> CheckResult:
    errors = [
        _rel(
            rl_integral_exp(alpha, a, x0, x, policy).value,
            rl_integral_quadrature(alpha, a, x0, x),
        )
        for alpha in (0.25, 0.5, 0.75, 1.0)
        for a in (-1.0, 0.0, 1.0, 2.0)
        for x0, x in ((0.1, 1.0), (0.5, 2.0), (1.0, 3.0))
    ]
    return _result("integral", errors, 1e-8, "series against Gauss-Legendre")


def check_study(policy: TruncationPolicy = DEFAULT_POLICY) -> CheckResult:
    low, high = ORDER_BAND
    centre, half_width = (low + high) / 2, (high - low) / 2
    passed = True
    worst = 0.0
    notes = []
    for n in (2, 3):
        report = study(n, 1.0, 2.0, STUDY_X0S, policy)
        order = report.estimated_order
        notes.append(f"n={n}: order={order}, monotone={report.monotone}")
        if order is None or not report.monotone:
            passed = False
            worst = math.inf
            continue
        worst = max(worst, float(abs(order - centre)))
        passed = passed and bool(low <= order <= high)
    return CheckResult(
        name="study",
        passed=passed,
        worst=worst,
        tolerance=half_width,
        points=2 * len(STUDY_X0S),
        detail="; ".join(notes),
    )


SUITES: dict[str, Callable[[TruncationPolicy], CheckResult]] = {
    "gamma": check_gamma,
    "alpha-one": check_alpha_one,
    "decomposition": check_decomposition,
    "eigen": check_eigen,
    "closed-form": check_closed_form,
    "integral": check_integral,
    "study": check_study,
}


def run_suite(
    names: Iterable[str], policy: TruncationPolicy = DEFAULT_POLICY
) -> list[CheckResult]:
    names = list(names)
    if "all" in names:
        names = list(SUITES)
    results = []
    for name in names:
        check = SUITES[name]
        start = time.perf_counter()
        try:
            result = check(policy)
        except (ArithmeticError, ValueError) as e:
            result = CheckResult(name, False, math.inf, math.nan, 0, f"raised: {e}")
        logger.info(
            "%s: %s (worst %.3g, tolerance %.3g, %.2fs)",
            name,
            "pass" if result.passed else "FAIL",
            result.worst,
            result.tolerance,
            time.perf_counter() - start,
        )
        results.append(result)
    return results
