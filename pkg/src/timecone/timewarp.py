"""Cumulative-speed change of variable tau = R(t) and its exact inverse.

R(t) = integral of rho from 0 to t is approximated by composite-trapezoid
partial sums over the speed knots, giving a piecewise-linear, strictly
increasing R-hat.  A uniform partition of [0, R_hat(T)] in tau then induces
the nonuniform "self-adaptive" knots t_hat with R_hat(t_hat_n) = tau_n:
they accumulate where rho is large and spread out where it is small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import FieldSeries, SampledSpeed, _freeze, eval_speed


@dataclass(frozen=True)
class TimeWarp:
    """Piecewise-linear R-hat with its uniform tau partition.

    ``breakpoints`` are the speed knots, ``cumulative`` the trapezoid partial
    sums R_hat(t_n); ``tau_knots[n] = n*dtau`` with ``n_tau*dtau =
    R_hat(T)``, and ``t_hat`` solves R_hat(t_hat_n) = tau_n exactly
    (segment-wise linear inversion).
    """

    breakpoints: np.ndarray
    cumulative: np.ndarray
    dtau: float
    tau_knots: np.ndarray
    t_hat: np.ndarray

    def __post_init__(self):
        for name in ("breakpoints", "cumulative", "tau_knots", "t_hat"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))

    @property
    def total(self) -> float:
        """R_hat(T), the length of the warped time interval."""
        return float(self.cumulative[-1])

    @property
    def horizon(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def n_tau(self) -> int:
        return self.tau_knots.size - 1

    def r_hat(self, t):
        """Evaluate the piecewise-linear R-hat at time(s) in [0, T]."""
        ta = np.asarray(t, dtype=np.float64)
        if np.any(ta < 0.0) or np.any(ta > self.horizon):
            raise ValueError(f"t out of range [0, {self.horizon}]")
        out = np.interp(ta, self.breakpoints, self.cumulative)
        return float(out) if np.ndim(t) == 0 else out


def build_warp(speed: SampledSpeed, n_tau: int) -> TimeWarp:
    """Build the warp from sampled speed data.

    Cumulative values are composite-trapezoid partial sums, exact whenever
    rho really is piecewise linear between its knots.
    """
    if n_tau < 2:
        raise ValueError("n_tau must be at least 2")
    t = speed.knots
    rho = speed.values
    seg = 0.5 * (rho[:-1] + rho[1:]) * np.diff(t)
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    total = float(cum[-1])
    tau_knots = np.linspace(0.0, total, n_tau + 1)
    t_hat = np.interp(tau_knots, cum, t)
    t_hat[0] = 0.0
    t_hat[-1] = t[-1]
    return TimeWarp(
        breakpoints=t,
        cumulative=cum,
        dtau=total / n_tau,
        tau_knots=tau_knots,
        t_hat=t_hat,
    )


def invert_warp(warp: TimeWarp, tau):
    """The unique t with R_hat(t) = tau, for tau in [0, R_hat(T)].

    Piecewise-linear inversion is closed form: locate the segment, solve the
    linear equation.  No iteration is involved.
    """
    ta = np.asarray(tau, dtype=np.float64)
    if np.any(ta < 0.0) or np.any(ta > warp.total):
        raise ValueError(f"tau out of range [0, {warp.total}]")
    out = np.interp(ta, warp.cumulative, warp.breakpoints)
    return float(out) if np.ndim(tau) == 0 else out


def warped_source(rate, speed: SampledSpeed, warp: TimeWarp) -> FieldSeries:
    """Source stack F(., tau_n) = alpha(., t_hat_n) / rho(t_hat_n).

    The rate and speed must share knots and the warp must have been built
    from the same speed; level n holds the warped source on the grid.
    """
    if not np.array_equal(rate.knots, speed.knots):
        raise ValueError("rate and speed must share time knots")
    if not np.array_equal(warp.breakpoints, speed.knots):
        raise ValueError("warp was not built from this speed")
    levels = np.empty((warp.t_hat.size, *rate.grid.counts))
    for n, th in enumerate(warp.t_hat):
        levels[n] = rate.frame_at(float(th)) / eval_speed(speed, float(th))
    return FieldSeries(
        grid=rate.grid, levels=levels, label="F", times=warp.tau_knots
    )
