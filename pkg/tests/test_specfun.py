"""Tests for the Gamma and Mittag-Leffler functions."""

import math

import numpy as np
import pytest
from mpmath import mp

from fracstab.models.exceptions import (
    DomainError,
    GammaPoleError,
    MittagLefflerDomainError,
    SeriesConvergenceError,
)
from fracstab.numerics.specfun import MLParams, gamma_fn, log_gamma, mittag_leffler, ml_exp_ratio


class TestGamma:
    """Tests for gamma_fn and log_gamma."""

    @pytest.mark.parametrize(
        ("x", "expected"),
        [(0.5, 1.7724538509055160), (5.0, 24.0), (1.0, 1.0)],
    )
    def test_known_values(self, x: float, expected: float) -> None:
        assert gamma_fn(x) == pytest.approx(expected, rel=1e-14)

    def test_power_rule_constant(self) -> None:
        assert 2.0 / gamma_fn(7.0 / 3.0) == pytest.approx(1.68, abs=0.005)

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0])
    def test_poles(self, x: float) -> None:
        with pytest.raises(GammaPoleError):
            gamma_fn(x)

    def test_negative_non_integer(self) -> None:
        # Gamma(-0.5) = -2 sqrt(pi)
        assert gamma_fn(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-13)

    def test_overflow(self) -> None:
        with pytest.raises(DomainError):
            gamma_fn(200.0)

    def test_recurrence(self) -> None:
        for x in np.arange(0.1, 20.0 + 1e-9, 0.1):
            lhs = gamma_fn(float(x) + 1.0)
            assert abs(lhs - x * gamma_fn(float(x))) <= 1e-11 * lhs

    @pytest.mark.parametrize(
        ("x", "expected"),
        [(1.0, 0.0), (2.0, 0.0), (11.0, math.log(3628800.0))],
    )
    def test_log_gamma(self, x: float, expected: float) -> None:
        assert log_gamma(x) == pytest.approx(expected, abs=1e-12)

    def test_log_gamma_domain(self) -> None:
        with pytest.raises(DomainError):
            log_gamma(0.0)

    def test_log_gamma_large_argument(self) -> None:
        assert math.isfinite(log_gamma(1e6))


class TestMittagLeffler:
    """Tests for the series evaluation of E_{alpha,beta}."""

    def test_reduces_to_exp(self) -> None:
        params = MLParams(alpha=1.0)
        for z in np.linspace(-10.0, 10.0, 41):
            value = mittag_leffler(params, float(z)).value
            assert abs(value - math.exp(z)) <= 1e-10 * math.exp(z)

    def test_e(self) -> None:
        assert mittag_leffler(MLParams(1.0, 1.0), 1.0).value == pytest.approx(math.e, rel=1e-14)

    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, 3.5])
    def test_zero_argument(self, beta: float) -> None:
        report = mittag_leffler(MLParams(0.7, beta), 0.0)
        assert report.value == pytest.approx(1.0 / gamma_fn(beta), rel=1e-15)
        assert report.terms_used == 1

    def test_cosh(self) -> None:
        assert mittag_leffler(MLParams(2.0, 1.0), 4.0).value == pytest.approx(math.cosh(2.0), rel=1e-12)

    def test_half_order_closed_form(self) -> None:
        # E_{1/2}(-x) = exp(x^2) erfc(x)
        for x in [0.1, 0.5, 1.0, 2.0, 4.0]:
            with mp.workdps(40):
                expected = float(mp.exp(mp.mpf(x) ** 2) * mp.erfc(x))
            assert mittag_leffler(MLParams(0.5), -x).value == pytest.approx(expected, rel=1e-12)

    def test_recurrence_spot_value(self) -> None:
        lhs = mittag_leffler(MLParams(0.5, 0.5), 0.3).value
        rhs = 0.3 * mittag_leffler(MLParams(0.5, 1.0), 0.3).value + 1.0 / gamma_fn(0.5)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    def test_recurrence_identity(self, alpha: float, beta: float) -> None:
        for z in np.linspace(-3.0, 3.0, 13):
            z = float(z)
            lhs = mittag_leffler(MLParams(alpha, beta), z).value
            shifted = mittag_leffler(MLParams(alpha, alpha + beta), z).value
            free = 1.0 / gamma_fn(beta)
            scale = abs(lhs) + abs(z * shifted) + abs(free)
            assert abs(lhs - (z * shifted + free)) <= 1e-10 * scale

    @pytest.mark.parametrize("alpha", [0.5, 0.7, 0.9])
    def test_monotone_on_positive_axis(self, alpha: float) -> None:
        values = [mittag_leffler(MLParams(alpha), float(z)).value for z in np.linspace(0.0, 10.0, 21)]
        assert all(later >= earlier for earlier, later in zip(values, values[1:]))

    def test_truncation_bound_reported(self) -> None:
        report = mittag_leffler(MLParams(0.5), 2.0)
        assert report.terms_used > 1
        assert 0.0 <= report.truncation_bound <= 1e-12 * report.value

    @pytest.mark.parametrize("z", [100.0, -50.5, math.inf, math.nan])
    def test_domain_cap(self, z: float) -> None:
        with pytest.raises(MittagLefflerDomainError):
            mittag_leffler(MLParams(0.5), z)

    def test_term_cap(self) -> None:
        with pytest.raises(SeriesConvergenceError):
            mittag_leffler(MLParams(0.5), 40.0, max_terms=10)

    def test_tail_above_tolerance_at_cap(self) -> None:
        # peak near 1e3 at r = 18, last term below the cap still near 3e-4
        with pytest.raises(SeriesConvergenceError) as exc_info:
            mittag_leffler(MLParams(0.5), 3.0, max_terms=60)
        assert "tolerance" in exc_info.value.reason

    @pytest.mark.parametrize(("alpha", "z"), [(0.3, -50.0), (0.1, -50.0), (0.3, 50.0), (0.5, -50.0)])
    def test_unreachable_peak_fails_fast(self, alpha: float, z: float) -> None:
        with pytest.raises(SeriesConvergenceError) as exc_info:
            mittag_leffler(MLParams(alpha), z)
        assert exc_info.value.terms == 1000
        assert "beyond the cap" in exc_info.value.reason

    def test_precision_ceiling(self) -> None:
        # E_{1/2}(-10) peaks near 1e42 and cancels down to 0.056
        with mp.workdps(60):
            expected = float(mp.exp(100) * mp.erfc(10))
        report = mittag_leffler(MLParams(0.5), -10.0)
        assert report.value == pytest.approx(expected, rel=1e-12)
        assert report.terms_used < 1000
        with pytest.raises(SeriesConvergenceError) as exc_info:
            mittag_leffler(MLParams(0.5), -22.5, max_terms=4000)
        assert "digits" in exc_info.value.reason

    def test_gronwall_argument_within_default_cap(self) -> None:
        # Gamma(0.3) * 2^0.3 is the largest argument the Gronwall oracle uses
        report = mittag_leffler(MLParams(0.3), gamma_fn(0.3) * 2.0**0.3)
        assert report.terms_used < 1000

    @pytest.mark.parametrize(("alpha", "beta"), [(0.0, 1.0), (-1.0, 1.0), (0.5, 0.0)])
    def test_invalid_params(self, alpha: float, beta: float) -> None:
        with pytest.raises(DomainError):
            MLParams(alpha, beta)


class TestMlExpRatio:
    """Tests for the Mittag-Leffler versus exponential diagnostic."""

    def test_exponential_case(self) -> None:
        assert ml_exp_ratio(1.0, -1.0, [0.0, 0.5, 1.0, 3.0]) == pytest.approx(1.0, rel=1e-12)

    def test_zero_rate(self) -> None:
        assert ml_exp_ratio(0.5, 0.0, range(11)) == pytest.approx(1.0, rel=1e-14)

    def test_half_order_against_closed_form(self) -> None:
        with mp.workdps(40):
            expected = max(float(mp.exp(2 * mp.mpf(t)) * mp.erfc(mp.sqrt(t))) for t in range(11))
        assert ml_exp_ratio(0.5, -1.0, range(11)) == pytest.approx(expected, rel=1e-10)

    def test_rejects_bad_input(self) -> None:
        with pytest.raises(DomainError):
            ml_exp_ratio(1.5, -1.0, [1.0])
        with pytest.raises(DomainError):
            ml_exp_ratio(0.5, -1.0, [])
        with pytest.raises(DomainError):
            ml_exp_ratio(0.5, -1.0, [-1.0])
