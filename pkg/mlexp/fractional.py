# This file is part of mlexp
# See file LICENSE.txt for license information.

"""Riemann-Liouville operators acting on power terms and on the exponential.

Derivatives are only ever taken term by term with the power rule

    D^alpha x**beta = Gamma(beta + 1) / Gamma(beta + 1 - alpha) x**(beta - alpha)

so a term whose new gamma argument is a pole is annihilated exactly
(1/(-1)! = 0).  Fractional integrals of e^{a t} are evaluated both from their
alternating series and, independently, by quadrature.
"""

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from mlexp.errors import DomainError
from mlexp.series import (
    DEFAULT_POLICY,
    RationalOrder,
    SeriesValue,
    TruncationPolicy,
    scaled_powers,
    sum_terms,
)
from mlexp.special import (
    complex_exp,
    gamma_ratio,
    is_pole,
    log_gamma,
    principal_root,
    recip_gamma,
)

logger = logging.getLogger(__name__)

GAUSS_ORDER = 16
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)


@dataclass(frozen=True)
class PowerTerm:
    """coeff * x**exponent

    With a Fraction exponent (and a Fraction order) the power rule finds the
    poles of Gamma exactly; float exponents pick up rounding at every step.
    """

    coeff: complex
    exponent: Fraction | float

    def evaluate(self, x: float) -> complex:
        if self.coeff == 0:
            return 0j
        return self.coeff * x ** float(self.exponent)


def _check_alpha(alpha: Fraction | float) -> None:
    if not 0 < alpha <= 1:
        raise DomainError(f"order must lie in (0, 1], got {alpha!r}")


def _check_integrable(term: PowerTerm) -> None:
    if not term.exponent > -1:
        raise DomainError(f"x**{term.exponent!r} is not locally integrable")


def rl_deriv_power(term: PowerTerm, alpha: Fraction | float) -> PowerTerm:
    _check_alpha(alpha)
    exponent = term.exponent - alpha
    if term.coeff == 0:
        return PowerTerm(0j, exponent)
    _check_integrable(term)
    if is_pole(exponent + 1):
        return PowerTerm(0j, exponent)
    factor = gamma_ratio(float(term.exponent + 1), float(exponent + 1))
    return PowerTerm(complex(term.coeff) * factor, exponent)


def rl_integral_power(term: PowerTerm, alpha: Fraction | float) -> PowerTerm:
    """I^alpha x**beta = Gamma(beta+1) / Gamma(beta+1+alpha) x**(beta+alpha)"""
    _check_alpha(alpha)
    exponent = term.exponent + alpha
    if term.coeff == 0:
        return PowerTerm(0j, exponent)
    _check_integrable(term)
    factor = gamma_ratio(float(term.exponent + 1), float(exponent + 1))
    return PowerTerm(complex(term.coeff) * factor, exponent)


def _derived_terms(x: float, rho: complex, n: int, times: int) -> Iterator[complex]:
    """Terms of D^{1/n} applied `times` times to the series of h_{1/n}(x, rho)."""
    alpha = Fraction(1, n)
    for k, (power, log_scale) in enumerate(scaled_powers(rho)):
        if power == 0:
            yield 0j
            continue
        g = Fraction(k + 1, n)
        term = PowerTerm(power * math.exp(log_scale - log_gamma(float(g))), g - 1)
        for _ in range(times):
            term = rl_deriv_power(term, alpha)
        if term.coeff == 0:
            # annihilated by 1/Gamma(pole) = 0, drop it from the stream
            continue
        yield term.evaluate(x)


def termwise_deriv_h(
    x: float, rho: complex, n: int, policy: TruncationPolicy = DEFAULT_POLICY
) -> SeriesValue:
    """D^{1/n} h_{1/n}(x, rho), differentiated term by term; equals rho * h."""
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x!r}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    return sum_terms(_derived_terms(x, complex(rho), n, 1), policy)


def sequential_deriv(
    x: float,
    lam: complex,
    order: RationalOrder,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """(D^{1/n})^m h_{1/n}(x, lam^{1/m}); equals lam * h_{1/n}(x, lam^{1/m}).

    A single derivative of order m/n would not annihilate the leading m - 1
    terms, so the order is built as m sequential steps of 1/n.
    """
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x!r}")
    rho = principal_root(lam, order.m)
    return sum_terms(_derived_terms(x, rho, order.n, order.m), policy)


def exp_integral_terms(alpha: float, a: complex, d: float) -> Iterator[complex]:
    """(-a)**k / k! * d**(alpha + k) / (alpha + k)"""
    log_d = math.log(d)
    for k, (power, log_scale) in enumerate(scaled_powers(-a)):
        if power == 0:
            yield 0j
            continue
        yield power * math.exp(
            log_scale
            + (alpha + k) * log_d
            - log_gamma(k + 1)
            - math.log(alpha + k)
        )


def rl_integral_exp(
    alpha: float,
    a: complex,
    x0: float,
    x: float,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """I^alpha_{x0}[e^{a t}](x) from its series.

    For real a > 0 the series alternates, and once its terms decrease the first
    omitted term bounds the remainder; `last_term_mag` reports it.
    """
    _check_alpha(alpha)
    if x < x0:
        raise DomainError(f"x = {x!r} lies below the lower limit {x0!r}")
    a = complex(a)
    if x == x0:
        return SeriesValue(0j, 0, 0.0, True)
    prefactor = complex_exp(a * x) * recip_gamma(alpha)
    series = sum_terms(exp_integral_terms(alpha, a, x - x0), policy)
    return series.shifted(0, prefactor)


def _gauss_legendre(alpha: float, a: complex, x: float, upper: float, panels: int):
    edges = np.linspace(0.0, upper, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    u = mid[:, np.newaxis] + half[:, np.newaxis] * _GAUSS_NODES[np.newaxis, :]
    values = np.exp(a * (x - u ** (1 / alpha)))
    return complex(np.sum(half[:, np.newaxis] * _GAUSS_WEIGHTS * values))


def rl_integral_quadrature(
    alpha: float,
    a: complex,
    x0: float,
    x: float,
    panels: int | None = None,
    *,
    rtol: float = 1e-10,
    max_panels: int = 2**10,
) -> complex:
    """I^alpha_{x0}[e^{a t}](x) by composite Gauss-Legendre quadrature.

    The substitution u = (x - t)**alpha turns the weakly singular kernel into

        1/(alpha Gamma(alpha)) * int_0^{(x - x0)**alpha} e^{a (x - u**(1/alpha))} du

    whose integrand is smooth.  With `panels` given the rule is applied once;
    otherwise the panel count doubles until two successive results agree to
    `rtol` (at most `max_panels`).
    """
    _check_alpha(alpha)
    if not x > x0:
        raise DomainError(f"x = {x!r} must exceed the lower limit {x0!r}")
    a = complex(a)
    scale = recip_gamma(alpha) / alpha
    upper = (x - x0) ** alpha
    if panels is not None:
        if panels < 1:
            raise DomainError(f"panels must be >= 1, got {panels!r}")
        return scale * _gauss_legendre(alpha, a, x, upper, panels)

    count = 1
    previous = _gauss_legendre(alpha, a, x, upper, count)
    while count < max_panels:
        count *= 2
        current = _gauss_legendre(alpha, a, x, upper, count)
        if abs(current - previous) <= rtol * abs(current):
            return scale * current
        previous = current
    logger.warning(
        "quadrature did not settle to rtol=%g within %d panels", rtol, max_panels
    )
    return scale * previous
