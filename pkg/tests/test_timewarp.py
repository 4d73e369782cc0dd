import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from timecone import (
    SampledRate,
    SampledSpeed,
    build_warp,
    eval_rate,
    eval_speed,
    invert_warp,
    scenario_1d,
    scenario_invsqrt_speed,
    warped_source,
)
from timecone.fields import GridSpec


def unit_speed(n=16, horizon=1.0):
    t = np.linspace(0.0, horizon, n + 1)
    return SampledSpeed(t, np.ones(n + 1))


class TestBuildWarp:
    def test_unit_speed_is_identity(self):
        w = build_warp(unit_speed(), 8)
        assert w.total == pytest.approx(1.0, rel=0, abs=1e-15)
        assert np.allclose(w.t_hat, w.tau_knots, rtol=0, atol=1e-15)

    def test_inverse_sqrt_antiderivative(self):
        # rho = 1/(2 sqrt(t+1)) integrates to sqrt(t+1) - 1
        t = np.linspace(0.0, 1.0, 2001)
        sp = SampledSpeed(t, 1.0 / (2.0 * np.sqrt(t + 1.0)))
        w = build_warp(sp, 8)
        # composite trapezoid error bound ~ h^2/12 * total |rho''| mass
        assert w.total == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-7)

    def test_surge_speed_matches_closed_form(self):
        # rho = (t+0.01)^(-1/2) integrates to 2(sqrt(t+0.01) - 0.1)
        sp = scenario_invsqrt_speed(512, 1.0)
        w = build_warp(sp, 64)
        ts = np.linspace(0.0, 1.0, 2001)
        exact = 2.0 * (np.sqrt(ts + 0.01) - 0.1)
        assert np.max(np.abs(w.r_hat(ts) - exact)) < 1e-4

    def test_exact_when_speed_piecewise_linear(self):
        # trapezoid integrates linear speeds exactly at the knots
        t = np.linspace(0.0, 2.0, 9)
        sp = SampledSpeed(t, 1.0 + 0.5 * t)
        w = build_warp(sp, 4)
        exact = t + 0.25 * t**2
        assert np.allclose(w.cumulative, exact, rtol=0, atol=1e-15)

    def test_partition_covers_total(self):
        sp = scenario_invsqrt_speed(64, 1.0)
        w = build_warp(sp, 32)
        assert w.tau_knots[-1] == w.total
        assert w.n_tau * w.dtau == pytest.approx(w.total, rel=1e-15)

    def test_monotone(self):
        sp = scenario_invsqrt_speed(128, 1.0)
        w = build_warp(sp, 32)
        assert np.all(np.diff(w.cumulative) > 0)
        assert np.all(np.diff(w.t_hat) > 0)

    def test_needs_two_tau_panels(self):
        with pytest.raises(ValueError):
            build_warp(unit_speed(), 1)


class TestInvertWarp:
    def test_zero_maps_to_zero(self):
        w = build_warp(unit_speed(), 8)
        assert invert_warp(w, 0.0) == 0.0

    def test_constant_speed_two(self):
        t = np.linspace(0.0, 1.0, 5)
        w = build_warp(SampledSpeed(t, np.full(5, 2.0)), 8)
        assert invert_warp(w, 0.6) == pytest.approx(0.3, rel=0, abs=1e-15)

    def test_out_of_range(self):
        w = build_warp(unit_speed(), 8)
        with pytest.raises(ValueError):
            invert_warp(w, 1.5)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_roundtrip_machine_precision(self, frac):
        sp = scenario_invsqrt_speed(128, 1.0)
        w = build_warp(sp, 32)
        t_star = frac * w.horizon
        tau = w.r_hat(t_star)
        assert w.r_hat(invert_warp(w, tau)) == pytest.approx(tau, rel=0, abs=1e-13)

    def test_self_adaptive_spacing(self):
        # (t_hat[n+1]-t_hat[n]) * average slope over the interval = dtau,
        # the average computed independently by segment-overlap integration
        sp = scenario_invsqrt_speed(128, 1.0)
        w = build_warp(sp, 32)
        bp, cum = w.breakpoints, w.cumulative
        slopes = np.diff(cum) / np.diff(bp)
        for n in range(w.n_tau):
            a, b = w.t_hat[n], w.t_hat[n + 1]
            mass = 0.0
            for i in range(bp.size - 1):
                lo, hi = max(a, bp[i]), min(b, bp[i + 1])
                if hi > lo:
                    mass += slopes[i] * (hi - lo)
            rho_bar = mass / (b - a)
            assert (b - a) * rho_bar == pytest.approx(w.dtau, rel=1e-10)

    def test_knots_accumulate_where_speed_large(self):
        sp = scenario_invsqrt_speed(512, 1.0)
        w = build_warp(sp, 64)
        gaps = np.diff(w.t_hat)
        assert np.all(np.diff(gaps) > 0)  # speed decreasing => gaps increasing


class TestWarpedSource:
    def test_zero_rate_gives_zero(self):
        g = GridSpec(1, (8,), 0.5)
        sp = unit_speed(4)
        rate = SampledRate(g, sp.knots, np.zeros((5, 8)))
        F = warped_source(rate, sp, build_warp(sp, 8))
        assert np.all(F.levels == 0.0)

    def test_constant_ratio(self):
        g = GridSpec(2, (4, 4), 0.5)
        t = np.linspace(0.0, 1.0, 5)
        sp = SampledSpeed(t, np.full(5, 2.0))
        rate = SampledRate(g, t, np.ones((5, 4, 4)))
        F = warped_source(rate, sp, build_warp(sp, 8))
        assert np.allclose(F.levels, 0.5, rtol=0, atol=1e-15)

    def test_matches_pointwise_evaluation(self):
        # level n must equal alpha(x, t_hat_n) / rho(t_hat_n) exactly
        rate, speed = scenario_1d(n_points=32, n_knots=64)
        w = build_warp(speed, 16)
        F = warped_source(rate, speed, w)
        x = rate.grid.axis_points(0)
        for n in (0, 5, 16):
            th = float(w.t_hat[n])
            expect = eval_rate(rate, x[:, None], th) / eval_speed(speed, th)
            assert np.allclose(F.levels[n], expect, rtol=1e-14, atol=0)

    def test_analytic_substitution(self):
        # alpha = g(x) e^{1-t/10}, rho = 1/(2 sqrt(t+1)): level n equals
        # g(x) e^{1-t_hat/10} 2 sqrt(t_hat+1)
        rate, speed = scenario_1d(n_points=32, n_knots=2048)
        w = build_warp(speed, 16)
        F = warped_source(rate, speed, w)
        x = rate.grid.axis_points(0)
        g = np.exp(-((x - math.pi / 2) ** 2) / 2.0) * (1.0 - np.cos(10.0 * x))
        for n in (4, 9, 16):
            th = float(w.t_hat[n])
            expect = g * math.exp(1.0 - th / 10.0) * 2.0 * math.sqrt(th + 1.0)
            # rho is sampled data: piecewise-linear error only
            assert np.allclose(F.levels[n], expect, rtol=1e-6)

    def test_rejects_mismatched_knots(self):
        g = GridSpec(1, (8,), 0.5)
        sp = unit_speed(4)
        other = unit_speed(8)
        rate = SampledRate(g, sp.knots, np.zeros((5, 8)))
        with pytest.raises(ValueError):
            warped_source(rate, other, build_warp(other, 8))
