import mpmath
import pytest

from mlexp.series import DEFAULT_POLICY, TruncationPolicy


@pytest.fixture
def policy() -> TruncationPolicy:
    return DEFAULT_POLICY


def mp_h(x, rho, n, dps=40):
    """h_{1/n}(x, rho) summed in extended precision."""
    with mpmath.workdps(dps):
        x, rho = mpmath.mpf(x), mpmath.mpc(rho)
        total = mpmath.mpc(0)
        k = 0
        while True:
            g = mpmath.mpf(k + 1) / n
            term = rho**k * x ** (g - 1) / mpmath.gamma(g)
            total += term
            if k > 10 and abs(term) < mpmath.mpf(10) ** (-dps) * abs(total):
                return complex(total)
            k += 1


def mp_j(s, x, a, n, dps=40):
    with mpmath.workdps(dps):
        x, a = mpmath.mpf(x), mpmath.mpc(a)
        total = mpmath.mpc(0)
        k = 0
        while True:
            g = k + mpmath.mpf(s + 1) / n
            term = a**k * x ** (g - 1) / mpmath.gamma(g)
            total += term
            if k > 10 and abs(term) < mpmath.mpf(10) ** (-dps) * abs(total):
                return complex(total)
            k += 1


@pytest.fixture
def h_oracle():
    return mp_h


@pytest.fixture
def j_oracle():
    return mp_j
