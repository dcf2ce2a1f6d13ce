# This file is part of mlexp
# See file LICENSE.txt for license information.

"""Gamma machinery and the complex helpers every series in the package uses.

The factorials of the shifted Mittag-Leffler series are written as (q)! with
q = -1 + (k+1)/n, i.e. Gamma(q + 1).  At the poles of Gamma the series
convention is 1/(-1)! = 0, so `recip_gamma` is the primitive used wherever a
factorial sits in a denominator; `gamma` itself refuses to evaluate at a pole.
"""

import cmath
import math
from fractions import Fraction

from scipy import special as sc

from mlexp.errors import DomainError, PoleError

# Gamma(171.62...) is the largest value representable as a double.
GAMMA_MAX_ARG = 171.0
EXP_MAX_ARG = 700.0


def is_pole(z: float | Fraction) -> bool:
    """True at 0, -1, -2, ...; exact when `z` is a Fraction."""
    return z <= 0 and z == math.floor(z)


def gamma(z: float) -> float:
    if is_pole(z):
        raise PoleError(f"gamma has a pole at {z!r}")
    if z > GAMMA_MAX_ARG:
        raise OverflowError(f"gamma({z!r}) overflows a double")
    value = float(sc.gamma(z))
    if not math.isfinite(value):
        raise OverflowError(f"gamma({z!r}) is not representable")
    return value


def recip_gamma(z: float) -> float:
    """1/Gamma(z), exactly 0.0 at the poles."""
    if is_pole(z):
        return 0.0
    return float(sc.rgamma(z))


def log_gamma(z: float) -> float:
    if z <= 0:
        raise DomainError(f"log_gamma needs z > 0, got {z!r}")
    return float(sc.gammaln(z))


def gamma_ratio(b: float, c: float) -> float:
    """Gamma(b) / Gamma(c), zero when c is a pole of Gamma."""
    if is_pole(c):
        return 0.0
    if b < GAMMA_MAX_ARG and c < GAMMA_MAX_ARG:
        return gamma(b) * recip_gamma(c)
    if b > 0 and c > 0:
        return math.exp(log_gamma(b) - log_gamma(c))
    raise OverflowError(f"gamma({b!r}) / gamma({c!r}) is not representable")


def _principal_polar(lam: complex) -> tuple[float, float]:
    r, phi = cmath.polar(complex(lam))
    # cmath.phase(-1-0j) is -pi; the principal argument lives in (-pi, pi].
    if phi == -math.pi:
        phi = math.pi
    return r, phi


def principal_root(lam: complex, m: int) -> complex:
    """The m-th root of `lam` with argument in (-pi/m, pi/m]."""
    return principal_power(lam, 1, m)


def principal_power(lam: complex, p: int, m: int) -> complex:
    """lam**(p/m) on the principal branch; lam**0 is 1 even for lam == 0."""
    if m < 1:
        raise DomainError(f"root index must be >= 1, got {m!r}")
    if p < 0:
        raise DomainError(f"power must be >= 0, got {p!r}")
    if p == 0:
        return 1 + 0j
    if lam == 0:
        return 0j
    r, phi = _principal_polar(lam)
    return cmath.rect(r ** (p / m), phi * p / m)


def complex_exp(z: complex) -> complex:
    z = complex(z)
    if z.real > EXP_MAX_ARG:
        raise OverflowError(f"exp({z!r}) overflows a double")
    return cmath.exp(z)
