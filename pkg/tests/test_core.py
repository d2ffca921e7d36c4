import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from putboundary import (
    BoundaryCurve,
    BracketError,
    DomainError,
    MarketParams,
    MaxIterationsError,
    QuadratureConfig,
    QuadratureNodeError,
    TailTooHeavyError,
    TauGrid,
    find_root_bracketed,
    integrate_newton_cotes,
    integrate_semi_infinite,
    interp_linear,
    norm_cdf,
)

import oracles

CFG = QuadratureConfig()


class TestNormCdf:
    def test_symmetry_point(self):
        assert norm_cdf(0.0) == 0.5

    def test_saturation(self):
        assert abs(norm_cdf(40.0) - 1.0) <= 1e-15
        assert norm_cdf(-40.0) <= 1e-300

    def test_against_series_oracle(self):
        # frozen from oracles.norm_cdf_series(1.0)
        assert abs(norm_cdf(1.0) - 0.8413447460685429) < 1e-14

    @given(st.floats(min_value=-10, max_value=10))
    def test_complement_identity(self, x):
        assert abs(norm_cdf(x) + norm_cdf(-x) - 1.0) < 1e-15

    def test_monotone_and_bounded_on_sweep(self):
        xs = np.linspace(-10, 10, 10_000)
        vals = np.array([norm_cdf(x) for x in xs])
        assert np.all(np.diff(vals) >= 0)
        assert vals.min() >= 0.0 and vals.max() <= 1.0


class TestNewtonCotes:
    def test_linear_exact(self):
        assert integrate_newton_cotes(lambda x: x, 0.0, 1.0, CFG) == pytest.approx(
            0.5, abs=1e-15
        )

    def test_quintic_exact_single_panel(self):
        cfg = QuadratureConfig(finite_subintervals=4)
        got = integrate_newton_cotes(lambda x: x**5, 0.0, 1.0, cfg)
        assert got == pytest.approx(1.0 / 6.0, abs=1e-15)

    def test_sine_closed_form(self):
        got = integrate_newton_cotes(np.sin, 0.0, math.pi, CFG)
        assert got == pytest.approx(2.0, abs=1e-10)

    def test_gaussian_against_refinement_oracle(self):
        # frozen from oracles.refine_integral(exp(-x^2), 0, 1) at ~1e6 subintervals
        got = integrate_newton_cotes(lambda x: np.exp(-(x**2)), 0.0, 1.0, CFG)
        assert got == pytest.approx(0.7468241328124270, abs=1e-12)

    def test_nonfinite_node_reported_with_abscissa(self):
        def reciprocal(x):
            with np.errstate(divide="ignore"):
                return 1.0 / x

        with pytest.raises(QuadratureNodeError) as err:
            integrate_newton_cotes(reciprocal, 0.0, 1.0, CFG)
        assert err.value.abscissa == 0.0

    def test_interval_order_checked(self):
        with pytest.raises(DomainError):
            integrate_newton_cotes(lambda x: x, 1.0, 0.0, CFG)

    def test_empirical_order_on_exponential(self):
        exact = math.e - 1.0
        errs = []
        for n in (8, 16, 32):
            cfg = QuadratureConfig(finite_subintervals=n)
            errs.append(abs(integrate_newton_cotes(np.exp, 0.0, 1.0, cfg) - exact))
        order = math.log2(errs[0] / errs[1])
        assert order >= 3.5
        assert math.log2(errs[1] / errs[2]) >= 3.5


class TestSemiInfinite:
    def test_exponential(self):
        cfg = QuadratureConfig(semi_inf_truncation=30.0)
        got = integrate_semi_infinite(lambda z: np.exp(-z), cfg)
        assert got == pytest.approx(1.0, abs=1e-8)

    def test_gaussian_moment(self):
        cfg = QuadratureConfig(semi_inf_truncation=50.0)
        got = integrate_semi_infinite(lambda z: z * np.exp(-(z**2)), cfg)
        assert got == pytest.approx(0.5, abs=1e-8)

    def test_heavy_tail_rejected(self):
        with pytest.raises(TailTooHeavyError):
            integrate_semi_infinite(lambda z: 1.0 / (1.0 + z**2), CFG)

    def test_nondecaying_rejected(self):
        with pytest.raises(TailTooHeavyError):
            integrate_semi_infinite(lambda z: np.ones_like(np.asarray(z, dtype=float)), CFG)


class TestRootFinding:
    def test_parabola(self):
        got = find_root_bracketed(lambda x: x * x - 4.0, 0.0, 10.0, CFG)
        assert got == pytest.approx(2.0, abs=CFG.root_tol)

    def test_identity(self):
        got = find_root_bracketed(lambda x: x, -1.0, 1.0, CFG)
        assert got == pytest.approx(0.0, abs=CFG.root_tol)

    def test_dottie_against_fixed_point_oracle(self):
        # frozen from oracles.dottie_fixed_point()
        got = find_root_bracketed(lambda x: math.cos(x) - x, 0.0, 1.0, CFG)
        assert got == pytest.approx(0.7390851332151607, abs=1e-9)
        assert abs(got - oracles.dottie_fixed_point()) < 1e-9

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            find_root_bracketed(lambda x: x * x + 1.0, 0.0, 1.0, CFG)

    def test_iteration_cap(self):
        cfg = QuadratureConfig(root_tol=1e-14, max_iter=3)
        with pytest.raises(MaxIterationsError):
            find_root_bracketed(lambda x: x - 1e-7, 0.0, 1e6, cfg)

    def test_residual_small_at_root(self):
        g = lambda x: math.cos(x) - x
        root = find_root_bracketed(g, 0.0, 1.0, CFG)
        # |g| at the root is bounded by |g'| times the final bracket width
        assert abs(g(root)) <= 2.0 * CFG.root_tol


class TestInterpolation:
    def test_midpoint(self):
        grid = TauGrid(np.array([0.0, 1.0]))
        assert interp_linear(grid, [0.0, 2.0], 0.5) == pytest.approx(1.0, abs=1e-15)

    def test_flat_segment(self):
        grid = TauGrid(np.array([0.0, 1.0, 2.0]))
        assert interp_linear(grid, [1.0, 3.0, 3.0], 1.5) == 3.0

    @given(st.integers(min_value=0, max_value=7))
    @settings(max_examples=8)
    def test_nodes_bit_exact(self, idx):
        taus = np.concatenate([[0.0], np.cumsum(np.linspace(0.1, 0.9, 7))])
        vals = np.sin(np.arange(8) * 1.7) + 2.0
        grid = TauGrid(taus)
        assert interp_linear(grid, vals, float(taus[idx])) == vals[idx]

    def test_out_of_range(self):
        grid = TauGrid(np.array([0.0, 1.0]))
        with pytest.raises(DomainError):
            interp_linear(grid, [0.0, 1.0], 1.5)
        with pytest.raises(DomainError):
            interp_linear(grid, [0.0, 1.0], -0.1)


class TestTypes:
    @given(
        st.floats(min_value=1e-4, max_value=1.0),
        st.floats(min_value=1e-3, max_value=3.0),
    )
    @settings(max_examples=50)
    def test_derived_constants(self, r, sigma):
        p = MarketParams(r=r, sigma=sigma, strike=100.0)
        assert p.gamma > 0
        assert p.a - p.b == pytest.approx(p.gamma, rel=1e-12)
        assert p.a + p.b == pytest.approx(1.0, rel=1e-12)

    def test_param_validation(self):
        for bad in (
            dict(r=-0.1, sigma=0.3, strike=100.0),
            dict(r=0.1, sigma=0.0, strike=100.0),
            dict(r=0.1, sigma=0.3, strike=-1.0),
        ):
            with pytest.raises(DomainError):
                MarketParams(**bad)

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            TauGrid(np.array([0.1, 0.2]))  # must start at 0
        with pytest.raises(DomainError):
            TauGrid(np.array([0.0, 0.2, 0.2]))  # strictly increasing

    def test_curve_validation_and_eval(self):
        grid = TauGrid(np.array([0.0, 0.5, 1.0]))
        curve = BoundaryCurve(grid, np.array([100.0, 90.0, 85.0]))
        assert curve.value(0.0) == 100.0
        assert curve.value(0.75) == pytest.approx(87.5)
        with pytest.raises(DomainError):
            curve.value(1.5)
        with pytest.raises(DomainError):
            BoundaryCurve(grid, np.array([100.0, -5.0, 85.0]))

    def test_quadrature_config_validation(self):
        with pytest.raises(DomainError):
            QuadratureConfig(finite_subintervals=6)  # not a multiple of 4
        with pytest.raises(DomainError):
            QuadratureConfig(root_tol=0.0)
