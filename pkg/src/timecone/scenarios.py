"""Preset inputs: closed-form speed/rate pairs sampled onto lattices.

Every generator is deterministic given its arguments (including the seed
for the noisy 2-D preset), so identical requests produce bit-identical
inputs.  CLI-visible names: ``const``, ``pulse-1d``, ``hexagon-2d``,
``bump-3d``, ``invsqrt-speed``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import AnalyticRate, GridSpec, SampledRate, SampledSpeed


@dataclass(frozen=True)
class ScenarioSpec:
    """Identification of a preset run: name, lattice, horizon, resolution,
    seed.  Equal specs generate bit-identical inputs."""

    name: str
    n_points: int
    n_knots: int
    horizon: float
    seed: int = 0
    alpha0: float = 1.0
    rho0: float = 1.0


def _uniform_knots(horizon: float, n_knots: int) -> np.ndarray:
    return np.linspace(0.0, horizon, n_knots + 1)


def scenario_constant(
    alpha0: float,
    rho0: float,
    dim: int,
    n_points: int = 16,
    n_knots: int = 8,
    horizon: float = 1.0,
) -> tuple[SampledRate, SampledSpeed]:
    """Constant alpha and rho: the closed-form validation pair."""
    if alpha0 < 0:
        raise ValueError("alpha0 must be nonnegative")
    if rho0 <= 0:
        raise ValueError("rho0 must be positive")
    grid = GridSpec(dim, (n_points,) * dim, 1.0 / n_points)
    knots = _uniform_knots(horizon, n_knots)
    frames = np.full((knots.size, *grid.counts), float(alpha0))
    rate = SampledRate(grid, knots, frames)
    speed = SampledSpeed(knots, np.full(knots.size, float(rho0)))
    return rate, speed


def scenario_1d(
    n_points: int = 256, n_knots: int = 512
) -> tuple[AnalyticRate, SampledSpeed]:
    """Gaussian-envelope cosine pulse with a slowing growth front.

    rho(t) = 1 / (2 sqrt(t+1)),
    alpha(x, t) = exp(-(x - pi/2)^2 / 2) (1 - cos(10 x)) exp(1 - t/10),
    on [0, pi) x [0, 1].  alpha vanishes with its derivative at the domain
    edge, so the periodic continuation is smooth enough for second-order
    solves.  The rate is analytic (scenario mode): lattice frames for the
    solvers, exact pointwise values for the oracle.
    """
    horizon = 1.0
    grid = GridSpec(1, (n_points,), math.pi / n_points)
    knots = _uniform_knots(horizon, n_knots)

    def alpha(pts: np.ndarray, t: float) -> np.ndarray:
        x = np.mod(pts[..., 0], math.pi)
        envelope = np.exp(-((x - math.pi / 2.0) ** 2) / 2.0)
        return envelope * (1.0 - np.cos(10.0 * x)) * math.exp(1.0 - t / 10.0)

    rate = AnalyticRate(grid, knots, alpha)
    speed = SampledSpeed(knots, 1.0 / (2.0 * np.sqrt(knots + 1.0)))
    return rate, speed


def hexagon_pattern(n_points: int, seed: int) -> np.ndarray:
    """Unit-square periodic honeycomb motif with heavy-tailed speckle.

    Deterministic part: three plane-wave cosines whose integer wave vectors
    sum to zero and sit near 120 degrees apart, thresholded so only the
    bright interference spots survive (normalized to [0, 1], scaled to 0.3)
    on a 0.05 base, a low-amplitude background.  Noise: standard Cauchy
    scaled by 0.01, truncated at +/-100, so its tail contributes the few
    outstanding pixels; negatives of the sum are clipped to zero to keep
    the rate admissible.
    """
    u = np.arange(n_points) / n_points
    X, Y = np.meshgrid(u, u, indexing="ij")
    two_pi = 2.0 * math.pi
    g = (
        np.cos(two_pi * (4.0 * X))
        + np.cos(two_pi * (-2.0 * X + 3.0 * Y))
        + np.cos(two_pi * (-2.0 * X - 3.0 * Y))
    )
    thresh = 1.0
    hexes = np.clip(g - thresh, 0.0, None) / (3.0 - thresh)
    rng = np.random.default_rng(seed)
    noise = np.clip(0.01 * rng.standard_cauchy(hexes.shape), -100.0, 100.0)
    return np.clip(0.05 + 0.3 * hexes + noise, 0.0, None)


def scenario_2d(
    seed: int, n_points: int = 64, n_knots: int = 512
) -> tuple[SampledRate, SampledSpeed]:
    """Hexagonal nucleation sites with Cauchy speckle, slow growth front.

    rho(t) = 1 / (50 sqrt(t+1)), alpha(x, t) = f(x) (1 - exp(-t/10)) on the
    unit square with T = 50; f is ``hexagon_pattern``.  alpha(., 0) = 0.
    """
    horizon = 50.0
    grid = GridSpec(2, (n_points, n_points), 1.0 / n_points)
    knots = _uniform_knots(horizon, n_knots)
    f = hexagon_pattern(n_points, seed)
    temporal = 1.0 - np.exp(-knots / 10.0)
    frames = f[None, :, :] * temporal[:, None, None]
    rate = SampledRate(grid, knots, frames)
    speed = SampledSpeed(knots, 1.0 / (50.0 * np.sqrt(knots + 1.0)))
    return rate, speed


def scenario_bump_3d(
    n_points: int = 32, n_knots: int = 16, horizon: float = 0.5
) -> tuple[AnalyticRate, SampledSpeed]:
    """Smooth periodic bump on the unit cube with unit growth speed.

    alpha(x) = exp(sum_a kappa (cos(2 pi (x_a - 1/2)) - 1)) with kappa = 3/2:
    a C-infinity periodic analogue of a Gaussian bump centred in the cube.
    Time-independent; rho = 1.  Analytic scenario mode.
    """
    grid = GridSpec(3, (n_points,) * 3, 1.0 / n_points)
    knots = _uniform_knots(horizon, n_knots)
    kappa = 1.5

    def alpha(pts: np.ndarray, t: float) -> np.ndarray:
        expo = sum(
            kappa * (np.cos(2.0 * math.pi * (pts[..., a] - 0.5)) - 1.0)
            for a in range(3)
        )
        return np.exp(expo)

    rate = AnalyticRate(grid, knots, alpha)
    speed = SampledSpeed(knots, np.ones(knots.size))
    return rate, speed


def scenario_invsqrt_speed(
    n_knots: int = 512, horizon: float = 1.0
) -> SampledSpeed:
    """Sharply decaying speed rho(t) = (t + 0.01)^(-1/2).

    Sampled on quadratically graded knots t_i = T (i/N)^2: the curvature of
    rho is concentrated near t = 0, and uniform knots at this count would
    leave a trapezoid error above 1e-4 in the cumulative warp.
    """
    i = np.arange(n_knots + 1) / n_knots
    knots = horizon * i**2
    return SampledSpeed(knots, (knots + 0.01) ** -0.5)
