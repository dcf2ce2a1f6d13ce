import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from mlexp.errors import DomainError, PoleError
from mlexp.special import (
    complex_exp,
    gamma,
    gamma_ratio,
    is_pole,
    log_gamma,
    principal_power,
    principal_root,
    recip_gamma,
)


@pytest.mark.parametrize(
    ("z", "expected"),
    [
        (1.0, 1.0),
        (0.5, math.sqrt(math.pi)),
        (5.0, 24.0),
        (-0.5, -2 * math.sqrt(math.pi)),
        (1.5, math.sqrt(math.pi) / 2),
    ],
)
def test_gamma_exact_values(z, expected):
    assert gamma(z) == pytest.approx(expected, rel=1e-12)


class TestGammaDomain:
    @pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
    def test_pole_raises(self, z):
        with pytest.raises(PoleError):
            gamma(z)

    def test_pole_is_a_value_error(self):
        with pytest.raises(ValueError):
            gamma(-2.0)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            gamma(172.0)

    @pytest.mark.parametrize("z", [0.0, -1.0, -3.0])
    def test_recip_gamma_vanishes_at_poles(self, z):
        assert recip_gamma(z) == 0.0

    def test_log_gamma_needs_positive_argument(self):
        with pytest.raises(DomainError):
            log_gamma(-0.5)


@pytest.mark.parametrize("z", [0.1, 0.37, 1.0, 2.5, 7.3, 19.9])
def test_recurrence(z):
    assert z * gamma(z) == pytest.approx(gamma(z + 1), rel=1e-12)


@pytest.mark.parametrize("z", [0.25, 3.7, 150.0, 400.0])
def test_log_gamma_against_mpmath(z):
    with mpmath.workdps(30):
        expected = float(mpmath.loggamma(z))
    assert log_gamma(z) == pytest.approx(expected, rel=1e-13)


class TestGammaRatio:
    def test_small_arguments(self):
        assert gamma_ratio(1.5, 1.0) == pytest.approx(math.sqrt(math.pi) / 2)

    def test_pole_in_denominator(self):
        assert gamma_ratio(1.0 / 3.0, 0.0) == 0.0

    def test_large_arguments_use_logs(self):
        with mpmath.workdps(30):
            expected = float(mpmath.gamma(200.5) / mpmath.gamma(200.0))
        assert gamma_ratio(200.5, 200.0) == pytest.approx(expected, rel=1e-11)


class TestPrincipalRoot:
    @pytest.mark.parametrize(
        ("lam", "m", "expected"),
        [
            (4.0, 2, 2.0),
            (-1.0, 2, 1j),
            (-8.0, 3, 1 + 1j * math.sqrt(3)),
            (1j, 2, cmath.exp(1j * math.pi / 4)),
            (2.0, 1, 2.0),
        ],
    )
    def test_values(self, lam, m, expected):
        assert principal_root(lam, m) == pytest.approx(expected, rel=1e-14)

    def test_negative_real_axis_has_positive_argument(self):
        # -1-0j carries phase -pi in cmath; the principal branch uses +pi.
        assert principal_root(complex(-1.0, -0.0), 2).imag > 0

    def test_argument_range(self):
        for lam in (-1 + 1e-3j, -1 - 1e-3j, 3 - 4j, -2.5):
            phase = cmath.phase(principal_root(lam, 3))
            assert -math.pi / 3 < phase <= math.pi / 3

    def test_zero(self):
        assert principal_root(0, 3) == 0

    def test_bad_index(self):
        with pytest.raises(DomainError):
            principal_root(2.0, 0)


class TestPrincipalPower:
    def test_zeroth_power_is_one(self):
        assert principal_power(0, 0, 3) == 1

    def test_matches_root(self):
        lam = 0.3 + 0.4j
        assert principal_power(lam, 1, 3) == principal_root(lam, 3)

    def test_power_of_root(self):
        lam = -2 + 1j
        assert principal_power(lam, 5, 3) == pytest.approx(
            principal_root(lam, 3) ** 5, rel=1e-13
        )

    def test_negative_power_rejected(self):
        with pytest.raises(DomainError):
            principal_power(1.0, -1, 2)


def test_complex_exp():
    assert complex_exp(1j * math.pi) == pytest.approx(-1, abs=1e-15)
    with pytest.raises(OverflowError):
        complex_exp(800)


@pytest.mark.parametrize("z", np.arange(-5, 30) + 0.3)
def test_recip_gamma_inverts_gamma(z):
    assert recip_gamma(z) * gamma(z) == pytest.approx(1.0, rel=1e-13)


def test_is_pole_with_fractions():
    assert is_pole(Fraction(1, 3) - Fraction(1, 3))
    assert is_pole(Fraction(-6, 3))
    assert not is_pole(Fraction(-1, 3))


@pytest.mark.parametrize("m", range(1, 13))
@pytest.mark.parametrize("r", [1e-3, 0.7, 1.0, 1e3])
@pytest.mark.parametrize("phi", [-3.0, -1.0, 0.0, 0.4, 2.5, math.pi])
def test_root_power_recovers_lambda(m, r, phi):
    lam = cmath.rect(r, phi)
    assert principal_root(lam, m) ** m == pytest.approx(lam, rel=1e-13)


@pytest.mark.parametrize(
    ("z1", "z2"), [(1.0, 2.0), (0.5j, -1.5 + 2j), (-3 + 1j, 40 - 7j), (300.0, 350.0)]
)
def test_exp_adds_exponents(z1, z2):
    assert complex_exp(z1 + z2) == pytest.approx(
        complex_exp(z1) * complex_exp(z2), rel=1e-13
    )
