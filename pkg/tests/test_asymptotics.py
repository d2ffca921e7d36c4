import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from putboundary import (
    AsymptoticMethod,
    DomainError,
    MarketParams,
    chen_chadam_alpha,
    eta_lowest_order,
    rho_asymptotic,
    rho_chen_chadam,
    rho_ekk,
    rho_kk,
    rho_ssc_analytic,
    rho_zhu_asymptote,
)

_P = MarketParams(r=0.1, sigma=0.3, strike=100.0)

# near-expiry reference values for the benchmark parameter set
NEAR_EXPIRY_TABLE = {
    # tau: (ekk, ssc_analytic)
    1e-5: (99.69, 99.69),
    5e-5: (99.37, 99.37),
    1e-4: (99.14, 99.15),
    5e-4: (98.28, 98.29),
    1e-3: (97.70, 97.72),
    0.04: (91.12, 91.31),
    0.1: (89.29, 89.42),
}


class TestTableValues:
    @pytest.mark.parametrize("tau", sorted(NEAR_EXPIRY_TABLE))
    def test_ekk(self, params, tau):
        want = NEAR_EXPIRY_TABLE[tau][0]
        assert rho_ekk(tau, params) == pytest.approx(want, abs=0.01)

    @pytest.mark.parametrize("tau", sorted(NEAR_EXPIRY_TABLE))
    def test_ssc_analytic(self, params, tau):
        want = NEAR_EXPIRY_TABLE[tau][1]
        assert rho_ssc_analytic(tau, params) == pytest.approx(want, abs=0.01)

    def test_kk_in_cluster(self, params):
        # tracks the other near-expiry formulas to within a tenth
        assert rho_kk(1e-4, params) == pytest.approx(99.14, abs=0.1)

    def test_kk_against_direct_evaluation_oracle(self, params):
        # frozen from an arbitrary-precision evaluation of the printed formula
        assert rho_kk(1e-3, params) == pytest.approx(97.8639076819305, abs=1e-10)


class TestLimits:
    @pytest.mark.parametrize(
        "fn", [rho_kk, rho_ekk, rho_ssc_analytic, rho_zhu_asymptote, rho_chen_chadam]
    )
    def test_expiry_limit_is_strike(self, params, fn):
        assert fn(1e-30, params) == pytest.approx(params.strike, abs=1e-8)

    def test_common_limit_ratio(self, params):
        """The three sqrt-log formulas share (E - rho)/(sqrt(tau) sqrt(-ln tau))
        -> E sigma, approached monotonically from below."""
        target = params.strike * params.sigma
        for fn in (rho_kk, rho_ekk, rho_ssc_analytic):
            ratios = []
            for tau in (1e-6, 1e-8, 1e-10, 1e-12):
                r = (params.strike - fn(tau, params)) / (
                    math.sqrt(tau) * math.sqrt(-math.log(tau))
                )
                ratios.append(r)
            assert all(b > a for a, b in zip(ratios, ratios[1:])), fn.__name__
            assert abs(ratios[-1] - target) / target < 0.05, fn.__name__

    @given(st.floats(min_value=1e-12, max_value=0.99))
    @settings(max_examples=60)
    def test_zhu_asymptote_algebraic_ratio(self, tau):
        p = _P
        ratio = (p.strike - rho_zhu_asymptote(tau, p)) / (
            math.sqrt(tau) * (-math.log(tau))
        )
        assert ratio == pytest.approx(
            p.strike * p.sigma / math.sqrt(2 * math.pi), rel=1e-9
        )

    def test_undershoot_scaling(self, params):
        """The full-log asymptote sits deeper below the strike than the
        sqrt-log cluster by a factor sqrt(-ln tau)/sqrt(2 pi); the rescaled
        ratio converges to sqrt(2 pi)."""
        tau = 1e-12
        ratio = (
            (params.strike - rho_ssc_analytic(tau, params))
            / (params.strike - rho_zhu_asymptote(tau, params))
            * math.sqrt(-math.log(tau))
        )
        assert ratio == pytest.approx(math.sqrt(2 * math.pi), rel=0.10)


class TestValidityDomains:
    @pytest.mark.parametrize(
        "fn,bad_tau",
        [
            (rho_kk, 10.0),
            (rho_ekk, 10.0),
            (rho_ssc_analytic, 10.0),
            (rho_zhu_asymptote, 1.0),
            (rho_chen_chadam, 0.05),
        ],
    )
    def test_raises_outside_domain(self, params, fn, bad_tau):
        with pytest.raises(DomainError):
            fn(bad_tau, params)

    @pytest.mark.parametrize(
        "fn", [rho_kk, rho_ekk, rho_ssc_analytic, rho_zhu_asymptote, rho_chen_chadam]
    )
    def test_values_in_range_on_domain(self, params, fn):
        for tau in (1e-8, 1e-6, 1e-4, 1e-3):
            v = fn(tau, params)
            assert 0.0 < v <= params.strike

    def test_eta_lowest_order_domain(self, params):
        with pytest.raises(DomainError):
            eta_lowest_order(10.0, params)


class TestSeriesExpansion:
    def test_alpha_term_by_term_at_minus_ten(self):
        # exact rational evaluation of the printed series at xi = -10
        xi = Fraction(-10)
        want = (
            -xi
            - Fraction(1, 2) / xi
            + Fraction(1, 8) / xi**2
            + Fraction(17, 24) / xi**3
            - Fraction(51, 64) / xi**4
            - Fraction(287, 120) / xi**5
            + Fraction(199, 32) / xi**6
        )
        assert chen_chadam_alpha(-10.0) == pytest.approx(float(want), rel=1e-14)

    def test_alpha_leading_terms(self):
        # at xi = -10 the first three contributions are 10, +0.05, +0.00125
        assert chen_chadam_alpha(-10.0) == pytest.approx(
            10.0 + 0.05 + 0.00125, abs=2e-3
        )

    def test_matches_lowest_order_near_expiry(self, params):
        a = rho_chen_chadam(1e-4, params)
        b = rho_ssc_analytic(1e-4, params)
        assert abs(a - b) < 0.05

    def test_alpha_domain(self):
        with pytest.raises(DomainError):
            chen_chadam_alpha(-0.5)


def test_dispatch_covers_all_tags(params):
    for method in AsymptoticMethod:
        assert 0 < rho_asymptotic(method, 1e-5, params) <= params.strike
