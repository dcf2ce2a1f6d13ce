# This file is part of mlexp
# See file LICENSE.txt for license information.

"""Power-series evaluation of the shifted Mittag-Leffler function.

    h_{1/n}(x, rho) = sum_k rho**k x**(-1 + (k+1)/n) / Gamma((k+1)/n)

and of the column sums J_s(x, a), a = rho**n, which regroup it as

    h_{1/n}(x, rho) = sum_{s=0}^{n-1} rho**s J_s(x, rho**n).
"""

import itertools
import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from scipy import special as sc

from mlexp.errors import DomainError
from mlexp.special import log_gamma

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RationalOrder:
    """Derivative order alpha = m/n, reduced, with m <= n."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DomainError(f"order {self.m}/{self.n}: m and n must be >= 1")
        if math.gcd(self.m, self.n) != 1:
            raise DomainError(f"order {self.m}/{self.n} is not reduced")
        if self.m > self.n:
            raise DomainError(f"order {self.m}/{self.n} exceeds 1")

    @property
    def alpha(self) -> float:
        return self.m / self.n

    @classmethod
    def from_string(cls, text: str) -> "RationalOrder":
        # Not Fraction(text): that would silently reduce 2/4 instead of
        # rejecting it.
        num, sep, den = text.partition("/")
        try:
            m, n = int(num), int(den) if sep else 1
        except ValueError as e:
            raise DomainError(f"cannot parse order {text!r}") from e
        return cls(m, n)

    def __str__(self):
        return f"{self.m}/{self.n}"


@dataclass(frozen=True)
class TruncationPolicy:
    rel_tol: float = 1e-14
    abs_tol: float = 1e-300
    max_terms: int = 600
    consecutive_below: int = 3

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol!r}")
        if self.abs_tol < 0:
            raise DomainError(f"abs_tol must be >= 0, got {self.abs_tol!r}")
        if self.max_terms < 10:
            raise DomainError(f"max_terms must be >= 10, got {self.max_terms!r}")
        if self.consecutive_below < 1:
            raise DomainError(
                f"consecutive_below must be >= 1, got {self.consecutive_below!r}"
            )


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    terms_used: int
    last_term_mag: float
    converged: bool
    # Sum of term magnitudes: the scale of the rounding error in `value`.
    abs_sum: float = field(default=0.0, compare=False)

    @property
    def condition(self) -> float:
        mag = abs(self.value)
        if mag == 0:
            return math.inf if self.abs_sum > 0 else 1.0
        return max(self.abs_sum / mag, 1.0)

    @classmethod
    def combine(
        cls, weighted: Sequence[tuple[complex, "SeriesValue"]]
    ) -> "SeriesValue":
        """sum(w * v) over (w, v) pairs; converged only if every part is."""
        products = [w * v.value for w, v in weighted]
        return cls(
            value=_fsum(products),
            terms_used=max((v.terms_used for _, v in weighted), default=0),
            last_term_mag=max(
                (abs(w) * v.last_term_mag for w, v in weighted), default=0.0
            ),
            converged=all(v.converged for _, v in weighted),
            abs_sum=math.fsum(abs(w) * v.abs_sum for w, v in weighted),
        )

    def shifted(self, offset: complex, scale: complex = 1) -> "SeriesValue":
        """scale * value + offset, keeping the diagnostics."""
        return SeriesValue(
            value=scale * self.value + offset,
            terms_used=self.terms_used,
            last_term_mag=abs(scale) * self.last_term_mag,
            converged=self.converged,
            abs_sum=abs(scale) * self.abs_sum + abs(offset),
        )


def _fsum(values: Iterable[complex]) -> complex:
    values = list(values)
    return complex(
        math.fsum(v.real for v in values), math.fsum(v.imag for v in values)
    )


def sum_terms(terms: Iterable[complex], policy: TruncationPolicy) -> SeriesValue:
    """Sum a series until `consecutive_below` successive terms are negligible.

    A term is negligible when |term| <= rel_tol * |partial sum| + abs_tol.  A
    single small term is not enough: Mittag-Leffler terms are not monotone while
    |rho**n x| > 1.  A stream that ends before `max_terms` is an exact sum.
    """
    collected: list[complex] = []
    partial = 0j
    abs_sum = 0.0
    last = 0.0
    below = 0
    converged = False
    for term in itertools.islice(terms, policy.max_terms):
        term = complex(term)
        collected.append(term)
        partial += term
        last = abs(term)
        abs_sum += last
        if not (math.isfinite(partial.real) and math.isfinite(partial.imag)):
            raise OverflowError(f"series overflowed after {len(collected)} terms")
        if last <= policy.rel_tol * abs(partial) + policy.abs_tol:
            below += 1
            if below >= policy.consecutive_below:
                converged = True
                break
        else:
            below = 0
    else:
        converged = len(collected) < policy.max_terms

    if not converged:
        logger.warning(
            "series not converged after %d terms (last |term| = %.3g)",
            len(collected),
            last,
        )
    return SeriesValue(
        value=_fsum(collected),
        terms_used=len(collected),
        last_term_mag=last,
        converged=converged,
        abs_sum=abs_sum,
    )


# Renormalise accumulated powers outside this magnitude window.
_POWER_RESCALE = 1e100


def scaled_powers(ratio: complex) -> Iterator[tuple[complex, float]]:
    """Yield (p_k, L_k) with ratio**k == p_k * exp(L_k), k = 0, 1, 2, ...

    Powers are built by one multiplication per step; the log-scale keeps
    |ratio|**k from overflowing long before the series terms themselves do.
    """
    power = 1 + 0j
    log_scale = 0.0
    while True:
        yield power, log_scale
        power *= ratio
        mag = abs(power)
        if mag != 0 and not (1 / _POWER_RESCALE < mag < _POWER_RESCALE):
            power /= mag
            log_scale += math.log(mag)


def _ml_terms(
    ratio: complex, x: float, offset: int, step: int, n: int
) -> Iterator[complex]:
    """Terms ratio**k x**(g - 1) / Gamma(g), g = (offset + k*step)/n.

    Gamma overflows near g = 171, so each term is exponentiated from its
    logarithm.
    """
    log_x = math.log(x)
    for k, (power, log_scale) in enumerate(scaled_powers(ratio)):
        if power == 0:
            yield 0j
            continue
        g = (offset + k * step) / n
        yield power * math.exp(log_scale + (g - 1.0) * log_x - log_gamma(g))


def _check_x(x: float) -> None:
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x!r}")


def _check_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")


def h_series(
    x: float, rho: complex, n: int, policy: TruncationPolicy = DEFAULT_POLICY
) -> SeriesValue:
    _check_x(x)
    _check_n(n)
    return sum_terms(_ml_terms(complex(rho), x, 1, 1, n), policy)


def j_series(
    s: int,
    x: float,
    a: complex,
    n: int,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> SeriesValue:
    """J_s(x, a) = sum_k a**k x**(k - 1 + (s+1)/n) / Gamma(k + (s+1)/n)."""
    _check_x(x)
    _check_n(n)
    if not 0 <= s <= n - 1:
        raise DomainError(f"s must lie in [0, {n - 1}], got {s!r}")
    return sum_terms(_ml_terms(complex(a), x, s + 1, n, n), policy)


def h_via_decomposition(
    x: float, rho: complex, n: int, policy: TruncationPolicy = DEFAULT_POLICY
) -> SeriesValue:
    _check_x(x)
    _check_n(n)
    rho = complex(rho)
    a = rho**n
    return SeriesValue.combine(
        [(rho**s, j_series(s, x, a, n, policy)) for s in range(n)]
    )


def h_half_closed_form(x: float, rho: complex) -> complex:
    """h_{1/2}(x, rho) = x**(-1/2) / sqrt(pi) + rho * erfcx(-rho sqrt(x))."""
    _check_x(x)
    rho = complex(rho)
    root_x = math.sqrt(x)
    return 1 / (math.sqrt(math.pi) * root_x) + rho * complex(sc.erfcx(-rho * root_x))
