"""Brute-force evaluation of the time-cone integral and its closed forms.

The expected number of generation events covering (x, t) is

    u(x, t) = int_0^t int_{B_d(x, r(t,s))} alpha(y, s) dy ds,
    r(t, s) = R(t) - R(s),

with the ball parametrized in polar/spherical coordinates and alpha
evaluated through the same periodic interpolation the solvers' source
construction uses.  Every integral here is composite trapezoid; nothing is
shared with the finite-difference path, which is exactly what makes this
module usable as the independent reference for solver tests.

For d = 3 the polar angle is integrated in the variable c = cos(phi), which
absorbs the sin(phi) surface Jacobian exactly; constants are then integrated
without angular bias in every dimension.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fields import GridSpec, SampledSpeed
from .timewarp import TimeWarp

#: unit-sphere surface areas sigma_d for the supported dimensions
SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}

#: unit-ball volumes omega_d
BALL_VOLUME = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}


class ConeWrapWarning(UserWarning):
    """The cone radius exceeds half a spatial period: the periodic images of
    the cone overlap and the result includes self-interaction."""


@dataclass(frozen=True)
class ConeQuadSpec:
    """Panel counts for the composite-trapezoid cone quadrature."""

    n_s: int = 64
    n_r: int = 64
    n_ang: int = 64

    def __post_init__(self):
        if min(self.n_s, self.n_r, self.n_ang) < 2:
            raise ValueError("all panel counts must be at least 2")


def trapezoid_nodes(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-panel composite trapezoid rule on [a, b]."""
    x = np.linspace(a, b, n + 1)
    w = np.full(n + 1, (b - a) / n)
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


def sphere_directions(dim: int, n_ang: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit directions p_i and weights w_i with sum_i w_i f(p_i) ~ the
    surface integral of f over the unit sphere.

    d=1: the two endpoints, weight 1 each.  d=2: n_ang equispaced angles
    (the composite trapezoid on a periodic integrand).  d=3: trapezoid in
    c = cos(polar) times equispaced azimuth.  The weights sum to sigma_d
    exactly in every dimension.
    """
    if dim == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if dim == 2:
        th = np.arange(n_ang) * (2.0 * math.pi / n_ang)
        p = np.stack([np.cos(th), np.sin(th)], axis=1)
        return p, np.full(n_ang, 2.0 * math.pi / n_ang)
    if dim == 3:
        c, wc = trapezoid_nodes(-1.0, 1.0, n_ang)
        s = np.sqrt(np.clip(1.0 - c * c, 0.0, None))
        ph = np.arange(n_ang) * (2.0 * math.pi / n_ang)
        wp = 2.0 * math.pi / n_ang
        px = np.broadcast_to(c[:, None], (c.size, n_ang))
        py = s[:, None] * np.cos(ph)[None, :]
        pz = s[:, None] * np.sin(ph)[None, :]
        p = np.stack([px, py, pz], axis=-1).reshape(-1, 3)
        w = np.repeat(wc * wp, n_ang)
        return p, w
    raise ValueError(f"unsupported dimension {dim}")


def cone_radius(warp: TimeWarp, t: float, s: float) -> float:
    """r(t, s) = R_hat(t) - R_hat(s); zero iff s == t."""
    if s > t:
        raise ValueError(f"need s <= t, got s={s} > t={t}")
    return float(warp.r_hat(t) - warp.r_hat(s))


def _check_wrap(grid: GridSpec, radius: float) -> None:
    if 2.0 * radius > min(grid.periods):
        warnings.warn(
            f"cone radius {radius:.6g} exceeds half the smallest period "
            f"{min(grid.periods):.6g}; the cone wraps around the domain",
            ConeWrapWarning,
            stacklevel=3,
        )


def direct_u(
    rate,
    speed: SampledSpeed,
    warp: TimeWarp,
    x,
    t: float,
    quad: ConeQuadSpec = ConeQuadSpec(),
):
    """Composite-trapezoid approximation of the cone integral at (x, t).

    ``rate`` is a :class:`~timecone.fields.SampledRate` (interpolating) or
    an analytic scenario rate; alpha is evaluated through the shared
    ``eval_at`` interface.  ``x`` is one point ``(dim,)`` or a batch
    ``(k, dim)`` (bare floats are fine for d=1).  Linear in alpha;
    converges at second order as the panel counts grow.  Emits
    :class:`ConeWrapWarning` when the cone is wide enough to overlap its
    own periodic images.
    """
    grid = rate.grid
    d = grid.dim
    if t < 0.0 or t > rate.horizon:
        raise ValueError(f"t out of range [0, {rate.horizon}]")
    xa = np.asarray(x, dtype=np.float64)
    single = xa.ndim <= 1
    xa = np.atleast_1d(xa)
    if d == 1 and xa.ndim == 1:
        xa = xa[:, None]
    if xa.ndim == 1:
        xa = xa[None, :]
    if xa.shape[-1] != d:
        raise ValueError(f"points must have {d} coordinates")

    _check_wrap(grid, cone_radius(warp, t, 0.0))

    s_nodes, s_w = trapezoid_nodes(0.0, t, quad.n_s)
    lam, lam_w = trapezoid_nodes(0.0, 1.0, quad.n_r)
    p, ang_w = sphere_directions(d, quad.n_ang)
    # ball quadrature weights: lambda^(d-1) radial density times angle weights
    w_ball = (lam_w * lam ** (d - 1))[:, None] * ang_w[None, :]

    rt = warp.r_hat(t)
    acc = np.zeros(xa.shape[0])
    for s, ws in zip(s_nodes, s_w):
        if ws == 0.0:
            continue
        r = float(rt - warp.r_hat(s))
        pts = xa[:, None, None, :] + (r * lam)[None, :, None, None] * p[None, None, :, :]
        vals = rate.eval_at(pts, float(s))
        acc += ws * r**d * np.einsum("klm,lm->k", vals, w_ball)
    return float(acc[0]) if single else acc


def _shift_sample(values: np.ndarray, cells: np.ndarray) -> np.ndarray:
    """Field sampled at every lattice point displaced by ``cells`` (in units
    of the grid step), via periodic multilinear interpolation."""
    out = values
    for a, c in enumerate(cells):
        i0 = int(np.floor(c))
        f = c - i0
        lo = np.roll(out, -i0, axis=a)
        if f == 0.0:
            out = lo
        else:
            out = lo + f * (np.roll(out, -(i0 + 1), axis=a) - lo)
    return out


def direct_u_lattice(
    rate,
    speed: SampledSpeed,
    warp: TimeWarp,
    t: float,
    quad: ConeQuadSpec = ConeQuadSpec(),
) -> np.ndarray:
    """The cone integral evaluated at every lattice point at once.

    Same quadrature rule as :func:`direct_u` applied to the rate's lattice
    frames: off-lattice values come from the frames' periodic multilinear
    interpolant (data-mode semantics), and each quadrature node reuses one
    uniformly shifted frame for all lattice points.  For a sampled rate
    this matches :func:`direct_u` at every lattice point to roundoff.
    """
    grid = rate.grid
    d = grid.dim
    if t < 0.0 or t > rate.horizon:
        raise ValueError(f"t out of range [0, {rate.horizon}]")
    _check_wrap(grid, cone_radius(warp, t, 0.0))

    s_nodes, s_w = trapezoid_nodes(0.0, t, quad.n_s)
    lam, lam_w = trapezoid_nodes(0.0, 1.0, quad.n_r)
    p, ang_w = sphere_directions(d, quad.n_ang)
    rt = warp.r_hat(t)

    acc = np.zeros(grid.counts)
    for s, ws in zip(s_nodes, s_w):
        if ws == 0.0:
            continue
        r = float(rt - warp.r_hat(s))
        frame = rate.frame_at(float(s))
        inner = np.zeros(grid.counts)
        for li in range(lam.size):
            wl = lam_w[li] * lam[li] ** (d - 1)
            if wl == 0.0:
                continue
            if lam[li] == 0.0 or r == 0.0:
                inner += (wl * ang_w.sum()) * frame
                continue
            for di in range(p.shape[0]):
                cells = r * lam[li] * p[di] / grid.step
                inner += (wl * ang_w[di]) * _shift_sample(frame, cells)
        acc += ws * r**d * inner
    return acc


def jmak_u(alpha0: float, rho0: float, t: float, dim: int) -> float:
    """Constant-coefficient closed form of the cone integral.

    alpha0*rho0*t^2 (d=1), pi*alpha0*rho0^2*t^3/3 (d=2),
    pi*alpha0*rho0^3*t^4/3 (d=3).
    """
    if alpha0 < 0:
        raise ValueError("alpha0 must be nonnegative")
    if rho0 <= 0:
        raise ValueError("rho0 must be positive")
    if dim == 1:
        return alpha0 * rho0 * t**2
    if dim == 2:
        return math.pi * alpha0 * rho0**2 * t**3 / 3.0
    if dim == 3:
        return math.pi * alpha0 * rho0**3 * t**4 / 3.0
    raise ValueError(f"unsupported dimension {dim}")


def phase_fraction(u):
    """Transformed fraction 1 - exp(-u) of the Poisson event count."""
    ua = np.asarray(u, dtype=np.float64)
    if np.any(ua < 0):
        raise ValueError("u must be nonnegative")
    out = -np.expm1(-ua)
    return float(out) if np.ndim(u) == 0 else out
