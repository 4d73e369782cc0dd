import math

import numpy as np
import pytest

from timecone import (
    BracketSpec,
    ConeQuadSpec,
    FieldSeries,
    check_laplace_identity,
    check_time_identities,
    constant_field,
    eval_bracket,
    lateral_source_2d,
    perturbed_constant_field,
    plane_wave_field,
    quadratic_field,
    separable_field,
    verify_gov_U1_3d,
)
from timecone.fields import GridSpec

QUAD = ConeQuadSpec(48, 48, 48)
X2 = np.array([0.4, 0.2])
X3 = np.array([0.4, 0.2, 0.1])


class TestBracketSpec:
    def test_surface_k_range(self):
        BracketSpec("S", 2, 0, 3)
        with pytest.raises(ValueError):
            BracketSpec("S", 3, 0, 3)

    def test_ball_k_range(self):
        BracketSpec("B", 3, 0, 3)
        with pytest.raises(ValueError):
            BracketSpec("B", 4, 0, 3)

    def test_dim_guard(self):
        with pytest.raises(ValueError):
            BracketSpec("S", 0, 0, 1)


class TestEvalBracket:
    def test_zero_field(self):
        f = constant_field(3, 0.0)
        assert eval_bracket(BracketSpec("S", 1, 0, 3), f, X3, 0.8, QUAD) == 0.0

    def test_vanishes_at_tau_zero_exactly(self):
        f = plane_wave_field(3)
        assert eval_bracket(BracketSpec("B", 2, 1, 3), f, X3, 0.0, QUAD) == 0.0

    def test_lateral_surface_constant_3d(self):
        # [1,S_3] of 1 = int_0^tau 4 pi (tau-z) dz = 2 pi tau^2
        f = constant_field(3)
        v = eval_bracket(BracketSpec("S", 1, 0, 3), f, X3, 0.8, QUAD)
        assert v == pytest.approx(2.0 * math.pi * 0.64, rel=1e-12)

    def test_cone_volume_constant_3d(self):
        # [0,B_3] of 1 = int_0^tau (4/3) pi (tau-z)^3 dz = pi tau^4 / 3
        f = constant_field(3)
        v = eval_bracket(BracketSpec("B", 0, 0, 3), f, X3, 0.8, QUAD)
        assert v == pytest.approx(math.pi * 0.8**4 / 3.0, rel=2e-3)

    def test_surface_closed_forms_2d(self):
        # [1,S_2] of 1 = 2 pi tau ; [0,S_2] of 1 = pi tau^2
        f = constant_field(2)
        tau = 0.7
        v1 = eval_bracket(BracketSpec("S", 1, 0, 2), f, X2, tau, QUAD)
        v0 = eval_bracket(BracketSpec("S", 0, 0, 2), f, X2, tau, QUAD)
        assert v1 == pytest.approx(2.0 * math.pi * tau, rel=1e-12)
        assert v0 == pytest.approx(math.pi * tau**2, rel=1e-12)

    def test_linearity_in_field(self):
        f1 = plane_wave_field(2)
        f3 = lambda y, z, j=0: 3.0 * f1(y, z, j)
        spec = BracketSpec("B", 1, 0, 2)
        a = eval_bracket(spec, f1, X2, 0.6, QUAD)
        b = eval_bracket(spec, f3, X2, 0.6, QUAD)
        assert b == pytest.approx(3.0 * a, rel=1e-13)


class TestLaplaceIdentity:
    def test_constant_field_trivial(self):
        f = constant_field(3)
        r = check_laplace_identity(BracketSpec("S", 1, 0, 3), f, X3, 0.7, 0.1, QUAD)
        assert r < 1e-10

    def test_plane_wave_richardson_ratio(self):
        # residual drops ~4x when h halves with panels doubled in lockstep
        f = plane_wave_field(3)
        resids = []
        for i, h in enumerate((0.2, 0.1, 0.05)):
            q = ConeQuadSpec(24 * 2**i, 24 * 2**i, 24 * 2**i)
            resids.append(
                check_laplace_identity(BracketSpec("S", 1, 0, 3), f, X3, 0.7, h, q)
            )
        assert resids[0] / resids[1] > 3.0
        assert resids[1] / resids[2] > 3.0

    def test_quadratic_field_ball_2d(self):
        # |y|^2 has Laplacian 4 in d=2; both sides analytic and smooth
        f = quadratic_field(2)
        r = check_laplace_identity(
            BracketSpec("B", 0, 0, 2), f, np.array([0.2, 0.1]), 0.6, 0.05,
            ConeQuadSpec(64, 64, 64),
        )
        assert r < 1e-10


class TestTimeIdentities:
    def test_zero_field(self):
        f = constant_field(2, 0.0)
        r = check_time_identities(BracketSpec("S", 1, 0, 2), f, X2, 0.7, 0.05, QUAD)
        assert r == pytest.approx(0.0, abs=1e-14)

    def test_top_k_branch_constant_3d(self):
        # d/dtau [2,S_3] of 1: lhs = 4 pi, rhs = sigma_3 + [2,B_3,lap] = 4 pi
        f = constant_field(3)
        r = check_time_identities(BracketSpec("S", 2, 0, 3), f, X3, 0.7, 0.05, QUAD)
        assert r < 1e-10

    def test_low_k_branch_smooth_3d(self):
        f = separable_field(3)
        resids = [
            check_time_identities(
                BracketSpec("S", 1, 0, 3), f, X3, 0.7, h,
                ConeQuadSpec(32 * 2**i, 32 * 2**i, 32 * 2**i),
            )
            for i, h in enumerate((0.2, 0.1))
        ]
        assert resids[1] < resids[0] / 3.0

    def test_ball_identity_constant_2d(self):
        # d/dtau [0,B_2] = [0,S_2] (the k factor vanishes); both are pi tau^2.
        # The residual is the centered-difference term pi h^2/3 plus the
        # tau-derivative of the zeta-trapezoid bias, pi tau^2 / (2 n_s^2).
        f = constant_field(2)
        tau = 0.7
        floor = math.pi * tau**2 / (2.0 * QUAD.n_s**2)
        for h in (0.1, 0.05):
            r = check_time_identities(BracketSpec("B", 0, 0, 2), f, X2, tau, h, QUAD)
            assert abs(r - math.pi * h**2 / 3.0) < 2.0 * floor

    def test_ball_identity_needs_k_below_dim(self):
        f = constant_field(2)
        with pytest.raises(ValueError):
            check_time_identities(BracketSpec("B", 2, 0, 2), f, X2, 0.7, 0.05, QUAD)


class TestGoverningEquation3d:
    def test_constant_source(self):
        # U1 = 2 pi tau^2: box operator gives exactly 4 pi = 4 pi F
        f = constant_field(3)
        r = verify_gov_U1_3d(f, X3, 0.8, 0.05, QUAD)
        assert r < 1e-6

    def test_zero_source(self):
        f = constant_field(3, 0.0)
        assert verify_gov_U1_3d(f, X3, 0.8, 0.05, QUAD) == pytest.approx(0.0, abs=1e-12)

    def test_perturbed_source_refinement(self):
        f = perturbed_constant_field(3, eps=0.2)
        resids = [
            verify_gov_U1_3d(
                f, X3, 0.8, h, ConeQuadSpec(24 * 2**i, 24 * 2**i, 24 * 2**i)
            )
            for i, h in enumerate((0.2, 0.1, 0.05))
        ]
        assert resids[0] / resids[1] > 3.0
        assert resids[1] / resids[2] > 3.0


class TestLateralSourceCrossCheck:
    def test_bracket_matches_fft_quadrature(self):
        # two independent code paths for U1 in d=2: analytic-callback
        # quadrature vs FFT ring kernels on sampled frames
        grid = GridSpec(2, (64, 64), 1.0 / 64)
        n_tau = 32
        times = np.linspace(0.0, 0.4, n_tau + 1)
        two_pi = 2.0 * math.pi

        def f(y, z, j=0):
            return np.exp(
                0.4 * np.sin(two_pi * y[..., 0]) + 0.3 * np.cos(two_pi * y[..., 1])
            ) * (1.0 + 0.5 * z)

        lat_pts = np.stack(grid.meshgrid(), axis=-1)
        levels = np.stack([f(lat_pts, float(t)) for t in times])
        series = FieldSeries(grid, levels, "F", times)
        u1 = lateral_source_2d(series, None, n_theta=64)
        i, j = 14, 37
        x = np.array([i, j]) / 64.0
        for n in (8, 16, 32):
            b = eval_bracket(
                BracketSpec("S", 1, 0, 2), f, x, float(times[n]),
                ConeQuadSpec(128, 64, 256),
            )
            assert u1.levels[n, i, j] == pytest.approx(b, rel=2e-3)
