import logging
import math

import pytest

from mlexp.errors import DomainError
from mlexp.series import (
    RationalOrder,
    SeriesValue,
    TruncationPolicy,
    h_half_closed_form,
    h_series,
    h_via_decomposition,
    j_series,
    scaled_powers,
    sum_terms,
)


class TestRationalOrder:
    @pytest.mark.parametrize(("m", "n"), [(1, 1), (1, 2), (2, 3), (3, 4)])
    def test_valid(self, m, n):
        order = RationalOrder(m, n)
        assert order.alpha == m / n
        assert str(order) == f"{m}/{n}"

    @pytest.mark.parametrize(("m", "n"), [(2, 2), (2, 4), (0, 3), (1, 0), (3, 2)])
    def test_invalid(self, m, n):
        with pytest.raises(DomainError):
            RationalOrder(m, n)

    def test_from_string(self):
        assert RationalOrder.from_string("2/3") == RationalOrder(2, 3)
        assert RationalOrder.from_string("1") == RationalOrder(1, 1)

    @pytest.mark.parametrize("text", ["2/4", "a/b", "1/", "3/2"])
    def test_from_string_rejects(self, text):
        with pytest.raises(DomainError):
            RationalOrder.from_string(text)


class TestTruncationPolicy:
    def test_defaults(self):
        policy = TruncationPolicy()
        assert policy.rel_tol == 1e-14
        assert policy.max_terms == 600
        assert policy.consecutive_below == 3

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rel_tol": 0.0},
            {"abs_tol": -1.0},
            {"max_terms": 5},
            {"consecutive_below": 0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            TruncationPolicy(**kwargs)


class TestSumTerms:
    def test_finite_stream_is_exact(self, policy):
        result = sum_terms([1.0, 2.0, 3.0], policy)
        assert result.value == 6
        assert result.terms_used == 3
        assert result.converged

    def test_geometric(self, policy):
        result = sum_terms((0.5**k for k in range(10_000)), policy)
        assert result.value.real == pytest.approx(2.0, rel=1e-14)
        assert result.converged
        assert result.terms_used < 100

    def test_single_small_term_does_not_stop(self, policy):
        terms = [1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 5.0]
        result = sum_terms(terms, policy)
        assert result.terms_used == 6
        assert result.value == 2

    def test_cap_reached_is_flagged(self, caplog):
        policy = TruncationPolicy(max_terms=20)
        with caplog.at_level(logging.WARNING, logger="mlexp.series"):
            result = sum_terms((1.0 for _ in range(100)), policy)
        assert not result.converged
        assert result.terms_used == 20
        assert "not converged" in caplog.text

    def test_overflow(self, policy):
        with pytest.raises(OverflowError):
            sum_terms([1e308, 1e308], policy)

    def test_abs_sum(self, policy):
        result = sum_terms([1.0, -1.0, 0.5], policy)
        assert result.abs_sum == 2.5
        assert result.condition == 5.0


class TestSeriesValue:
    def test_combine(self):
        a = SeriesValue(1 + 0j, 10, 1e-16, True, abs_sum=1.0)
        b = SeriesValue(2 + 0j, 20, 1e-17, False, abs_sum=3.0)
        combined = SeriesValue.combine([(2, a), (1j, b)])
        assert combined.value == 2 + 2j
        assert combined.terms_used == 20
        assert not combined.converged
        assert combined.abs_sum == 5.0

    def test_shifted(self):
        value = SeriesValue(2 + 0j, 5, 1e-3, True, abs_sum=2.0).shifted(1, scale=-3)
        assert value.value == -5
        assert value.last_term_mag == pytest.approx(3e-3)
        assert value.abs_sum == 7.0


def test_scaled_powers_stay_finite():
    powers = scaled_powers(1e30)
    for k, (power, log_scale) in zip(range(50), powers, strict=False):
        assert abs(power) < 1e101
        assert log_scale + math.log(abs(power)) == pytest.approx(
            k * math.log(1e30), rel=1e-12, abs=1e-9
        )


class TestHSeries:
    @pytest.mark.parametrize(
        ("x", "rho"), [(1.0, 1.0), (2.0, -0.5), (0.5, 2.0), (1.0, 0.3 + 0.7j)]
    )
    def test_order_one_is_exponential(self, policy, x, rho):
        result = h_series(x, rho, 1, policy)
        assert result.converged
        assert result.value == pytest.approx(complex(math.e) ** (rho * x), rel=1e-13)

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_zero_rho(self, policy, n):
        x = 1.7
        expected = x ** (1 / n - 1) / math.gamma(1 / n)
        assert h_series(x, 0, n, policy).value == pytest.approx(expected, rel=1e-14)

    def test_half_at_one(self, policy):
        result = h_series(1.0, 1.0, 2, policy)
        expected = 1 / math.sqrt(math.pi) + math.e * math.erfc(-1.0)
        assert result.value == pytest.approx(expected, rel=1e-13)
        assert result.value.real == pytest.approx(5.573170, abs=1e-6)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    @pytest.mark.parametrize("rho", [0.5, -0.7, 1 + 0.5j, 1.5])
    @pytest.mark.parametrize("x", [0.5, 2.0, 5.0])
    def test_against_extended_precision(self, policy, h_oracle, n, rho, x):
        result = h_series(x, rho, n, policy)
        expected = h_oracle(x, rho, n)
        assert result.converged
        bound = 1e-12 * abs(expected) + 64 * 2.2e-16 * result.abs_sum
        assert abs(result.value - expected) <= bound

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_domain(self, policy, x):
        with pytest.raises(DomainError):
            h_series(x, 1.0, 2, policy)

    def test_non_convergence_is_a_flag(self):
        result = h_series(50.0, 1.0, 1, TruncationPolicy(max_terms=10))
        assert not result.converged
        assert result.terms_used == 10


class TestJSeries:
    def test_value(self, policy):
        assert j_series(0, 1.0, 1.0, 2, policy).value.real == pytest.approx(
            2.85489, abs=1e-5
        )

    @pytest.mark.parametrize(("s", "n"), [(0, 3), (2, 3), (1, 4)])
    def test_against_extended_precision(self, policy, j_oracle, s, n):
        result = j_series(s, 1.5, 0.8 - 0.2j, n, policy)
        assert result.value == pytest.approx(j_oracle(s, 1.5, 0.8 - 0.2j, n), rel=1e-13)

    def test_last_column_at_zero_a(self, policy):
        # x**0 / 0! = 1
        assert j_series(2, 3.3, 0, 3, policy).value == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("s", [-1, 3])
    def test_column_range(self, policy, s):
        with pytest.raises(DomainError):
            j_series(s, 1.0, 1.0, 3, policy)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("rho", [0.5, 1.0, -0.7])
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_decomposition_matches_series(policy, n, rho, x):
    direct = h_series(x, rho, n, policy)
    regrouped = h_via_decomposition(x, rho, n, policy)
    assert regrouped.converged
    assert regrouped.value == pytest.approx(direct.value, rel=1e-12)


@pytest.mark.parametrize("rho", [0.5, 1.0, -1.0, 0.5 + 0.5j])
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_half_closed_form(policy, rho, x):
    assert h_series(x, rho, 2, policy).value == pytest.approx(
        h_half_closed_form(x, rho), rel=1e-12
    )


@pytest.mark.parametrize(("x", "n"), [(1.0, 0), (1.0, -2), (0.0, 2), (-1.0, 3)])
def test_decomposition_domain(policy, x, n):
    with pytest.raises(DomainError):
        h_via_decomposition(x, 1.0, n, policy)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("rho", [0.5, -0.7, 1 + 0.5j])
@pytest.mark.parametrize("x", [0.5, 2.0])
def test_more_terms_do_not_move_converged_value(n, rho, x):
    short = h_series(x, rho, n, TruncationPolicy(max_terms=600))
    longer = h_series(x, rho, n, TruncationPolicy(max_terms=1200))
    assert short.converged
    assert longer.value == short.value
    assert longer.terms_used == short.terms_used
