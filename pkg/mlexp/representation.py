# This file is part of mlexp
# See file LICENSE.txt for license information.

"""Exponential-function representation of the shifted Mittag-Leffler function.

Each column sum is rebuilt from its fractional derivative
D^{(s+1)/n} J_s = a e^{a x} (a = rho**n) by fractional integration from x0:

    J_s(x, a) = a I^{beta}_{x0}[e^{a t}](x) + e^{a x0} x**(beta-1) / Gamma(beta)

with beta = (s+1)/n, and h = sum_s rho**s J_s.  The integral is expanded into
its alternating series, so the result holds no integrals.  It reproduces e^{a x}
exactly for n = 1; for n > 1 it differs from the defining series by a term that
vanishes as x0 -> 0 (measured in `mlexp.analysis`).
"""

from dataclasses import dataclass

from mlexp.errors import DomainError
from mlexp.fractional import exp_integral_terms, rl_integral_exp
from mlexp.series import (
    DEFAULT_POLICY,
    RationalOrder,
    SeriesValue,
    TruncationPolicy,
    sum_terms,
)
from mlexp.special import complex_exp, principal_power, principal_root, recip_gamma


@dataclass(frozen=True)
class ReprParams:
    x0: float
    order: RationalOrder
    lam: complex
    policy: TruncationPolicy = DEFAULT_POLICY

    def __post_init__(self):
        if not self.x0 > 0:
            raise DomainError(f"x0 must be > 0, got {self.x0!r}")

    def evaluate(self, x: float) -> SeriesValue:
        return h_exp_lambda(x, self.x0, self.lam, self.order, self.policy)


def _check_limits(x: float, x0: float) -> None:
    if not x0 > 0:
        raise DomainError(f"x0 must be > 0, got {x0!r}")
    if x < x0:
        raise DomainError(f"x = {x!r} lies below x0 = {x0!r}")


def _check_column(s: int, n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    if not 0 <= s <= n - 1:
        raise DomainError(f"s must lie in [0, {n - 1}], got {s!r}")


def homogeneous_term(s: int, x: float, x0: float, rho: complex, n: int) -> complex:
    """e^{rho**n x0} x**(beta-1) / Gamma(beta), annihilated by D^beta."""
    _check_column(s, n)
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x!r}")
    beta = (s + 1) / n
    return complex_exp(complex(rho) ** n * x0) * x ** (beta - 1) * recip_gamma(beta)


def j_exp(
    s: int,
    x: float,
    x0: float,
    rho: complex,
    n: int,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    _check_column(s, n)
    _check_limits(x, x0)
    a = complex(rho) ** n
    integral = rl_integral_exp((s + 1) / n, a, x0, x, policy)
    return integral.shifted(homogeneous_term(s, x, x0, rho, n), scale=a)


def h_exp(
    x: float,
    x0: float,
    rho: complex,
    n: int,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    _check_limits(x, x0)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    rho = complex(rho)
    return SeriesValue.combine(
        [(rho**s, j_exp(s, x, x0, rho, n, policy)) for s in range(n)]
    )


def h_exp_lambda(
    x: float,
    x0: float,
    lam: complex,
    order: RationalOrder,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """h_{1/n}(x, lam^{1/m}) through its exponential representation.

    Only the principal root rho = lam^{1/m} is used.
    """
    return h_exp(x, x0, principal_root(lam, order.m), order.n, policy)


def h_exp_lambda_direct(
    x: float,
    x0: float,
    lam: complex,
    order: RationalOrder,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """The same representation written with principal powers of lam.

        sum_s lam^{(s+n)/m} e^{lam^{n/m} x} / Gamma(beta)
              * sum_k (-1)^k / k! lam^{nk/m} (x - x0)^{beta+k} / (beta + k)
        + sum_s lam^{s/m} e^{lam^{n/m} x0} x^{beta-1} / Gamma(beta)

    Kept as a cross-check of `h_exp_lambda`; both must agree to rounding.
    """
    _check_limits(x, x0)
    m, n = order.m, order.n
    a = principal_power(lam, n, m)
    grow, settle = complex_exp(a * x), complex_exp(a * x0)
    parts = []
    for s in range(n):
        beta = (s + 1) / n
        if x == x0:
            inner = SeriesValue(0j, 0, 0.0, True)
        else:
            inner = sum_terms(exp_integral_terms(beta, a, x - x0), policy)
        weight = principal_power(lam, s + n, m) * grow * recip_gamma(beta)
        offset = principal_power(lam, s, m) * settle * x ** (beta - 1)
        parts.append((1 + 0j, inner.shifted(offset * recip_gamma(beta), weight)))
    return SeriesValue.combine(parts)


def alpha_one_reference(x: float, lam: complex) -> complex:
    """e^{lam x}: what the representation collapses to at order 1."""
    return complex_exp(complex(lam) * x)
