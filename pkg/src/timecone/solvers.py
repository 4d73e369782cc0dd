"""Fast forward solvers for the warped wave systems on periodic lattices.

All three solvers march the three-level family

    U_{n+1} - 2 U_n + U_{n-1}
        = r * d2( eta U_{n+1} + (1-2 eta) U_n + eta U_{n-1} ) + dtau^2 * S_n

with r = (dtau/ds)^2, a weight eta in [0, 1/2] (eta = 1/4 is the von
Neumann member, unconditionally stable for eta >= 1/4) and periodic wrap.
The middle weight is +(1-2*eta) in every dimension; with -(1-2*eta) the
eta = 1/4 member would not be the von Neumann scheme and the stability
range would not hold.

d = 1 solves one cyclic tridiagonal system per step (source 2*F).
d = 2 uses the two-sweep Lees ADI splitting; the source is the cone-lateral
      integral U1 computed by quadrature (no pure PDE form exists in even
      dimensions), scaled by dtau^2.
d = 3 runs the three-sweep Fairweather-Mitchell ADI twice: first for U1
      with source 4*pi*F, then for U0 with source 2*U1.

Each implicit sweep factors into independent periodic line systems, solved
by a banded LU with a rank-one (Sherman-Morrison) correction for the
periodic corners.  Intermediate sweep values are never reported.

Start rules: "zero" forces the first two levels to zero; "taylor" (default)
sets level 1 to dtau^2/2 times the level-0 source, the second-order-
consistent initialization that preserves the schemes' temporal order for
sources that do not vanish at tau = 0.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .fields import FieldSeries, GridSpec
from .timewarp import TimeWarp

START_RULES = ("taylor", "zero")


class CflError(ValueError):
    """Raised when an explicit-regime run violates the stability bound."""


@dataclass(frozen=True)
class CflStatus:
    ok: bool
    note: str


@dataclass(frozen=True)
class SchemeParams:
    """Weight eta, time step dtau, spatial step, and the start rule.

    The mesh ratio r = (dtau/step)^2 is derived, never stored, so it cannot
    drift out of sync with the grid.
    """

    eta: float
    dtau: float
    step: float
    start_rule: str = "taylor"

    def __post_init__(self):
        if not 0.0 <= self.eta <= 0.5:
            raise ValueError("eta must lie in [0, 1/2]")
        if not self.dtau > 0:
            raise ValueError("dtau must be positive")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.start_rule not in START_RULES:
            raise ValueError(f"start_rule must be one of {START_RULES}")

    @property
    def ratio(self) -> float:
        return (self.dtau / self.step) ** 2


@dataclass(frozen=True)
class SolveReport:
    """Solver output: one series per unknown plus run metadata."""

    series: dict[str, FieldSeries]
    wall_time: float
    stability_note: str
    level_max: dict[str, np.ndarray]
    level_min: dict[str, np.ndarray]


def check_cfl(params: SchemeParams, dim: int) -> CflStatus:
    """Stability guard: unconditional for eta >= 1/4, otherwise the explicit
    bound sqrt(dim)*dtau <= step must hold."""
    if params.eta >= 0.25:
        return CflStatus(True, f"eta={params.eta:g} >= 1/4: unconditionally stable")
    lhs = math.sqrt(dim) * params.dtau
    if lhs <= params.step:
        return CflStatus(
            True,
            f"explicit regime: sqrt({dim})*dtau = {lhs:.6g} <= step = "
            f"{params.step:.6g}",
        )
    return CflStatus(
        False,
        f"explicit regime violates sqrt({dim})*dtau <= step: "
        f"{lhs:.6g} > {params.step:.6g} (eta={params.eta:g} < 1/4)",
    )


def cyclic_tridiag_solve(sub, diag, sup, corner_low, corner_high, rhs) -> np.ndarray:
    """Solve a periodic (cyclic) tridiagonal system.

    Row 0:    diag[0] x0 + sup[0] x1 + corner_high x_{n-1} = rhs[0]
    Row i:    sub[i] x_{i-1} + diag[i] x_i + sup[i] x_{i+1} = rhs[i]
    Row n-1:  corner_low x0 + sub[n-1] x_{n-2} + diag[n-1] x_{n-1} = rhs[n-1]

    so ``corner_high`` is the upper-right matrix entry and ``corner_low``
    the lower-left one.  Coefficients may be scalars or length-n sequences;
    ``rhs`` may be ``(n,)`` or a batch ``(n, k)`` solved in one factorization.
    The periodic corners are removed by a rank-one update and the remaining
    tridiagonal solve is a banded LU.
    """
    b = np.asarray(rhs, dtype=np.float64)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    n = b.shape[0]
    if n < 3:
        raise ValueError("system size must be at least 3")
    sub = np.broadcast_to(np.asarray(sub, dtype=np.float64), (n,))
    diag = np.broadcast_to(np.asarray(diag, dtype=np.float64), (n,))
    sup = np.broadcast_to(np.asarray(sup, dtype=np.float64), (n,))
    alpha = float(corner_low)
    beta = float(corner_high)

    gamma = -diag[0] if diag[0] != 0.0 else 1.0
    d = diag.copy()
    d[0] -= gamma
    d[-1] -= alpha * beta / gamma

    ab = np.zeros((3, n))
    ab[0, 1:] = sup[:-1]
    ab[1] = d
    ab[2, :-1] = sub[1:]

    u = np.zeros((n, 1))
    u[0, 0] = gamma
    u[-1, 0] = alpha
    try:
        sol = solve_banded((1, 1), ab, np.hstack([b, u]))
    except np.linalg.LinAlgError as exc:  # zero pivot
        raise np.linalg.LinAlgError(
            f"singular tridiagonal factor in cyclic solve: {exc}"
        ) from exc
    y = sol[:, :-1]
    z = sol[:, -1]
    vy = y[0, :] + (beta / gamma) * y[-1, :]
    vz = z[0] + (beta / gamma) * z[-1]
    denom = 1.0 + vz
    if abs(denom) < 1e-300:
        raise np.linalg.LinAlgError("rank-one correction is singular")
    x = y - np.outer(z, vy / denom)
    return x[:, 0] if squeeze else x


def _delta2(a: np.ndarray, axis: int) -> np.ndarray:
    """Periodic second difference along one axis (undivided)."""
    return np.roll(a, -1, axis=axis) - 2.0 * a + np.roll(a, 1, axis=axis)


def _implicit_sweep(rhs: np.ndarray, axis: int, eta_r: float) -> np.ndarray:
    """Solve (I - eta_r * d2_axis) x = rhs, one cyclic system per line."""
    if eta_r == 0.0:
        return rhs
    arr = np.moveaxis(rhs, axis, 0)
    shape = arr.shape
    flat = arr.reshape(shape[0], -1)
    out = cyclic_tridiag_solve(
        -eta_r, 1.0 + 2.0 * eta_r, -eta_r, -eta_r, -eta_r, flat
    )
    return np.moveaxis(out.reshape(shape), 0, axis)


def _start_level(params: SchemeParams, source0: np.ndarray) -> np.ndarray:
    if params.start_rule == "zero":
        return np.zeros_like(source0)
    return 0.5 * params.dtau**2 * source0


def _require(F: FieldSeries, params: SchemeParams, dim: int) -> CflStatus:
    if F.grid.dim != dim:
        raise ValueError(f"expected a {dim}-D source series, got dim={F.grid.dim}")
    if F.grid.step != params.step:
        raise ValueError(
            f"params.step={params.step} does not match grid step {F.grid.step}"
        )
    if F.n_levels < 2:
        raise ValueError("need at least two time levels")
    status = check_cfl(params, dim)
    if not status.ok:
        raise CflError(status.note)
    return status


def _report(
    series: dict[str, FieldSeries], t0: float, status: CflStatus
) -> SolveReport:
    axes = None
    level_max = {}
    level_min = {}
    for label, s in series.items():
        axes = tuple(range(1, s.levels.ndim))
        level_max[label] = s.levels.max(axis=axes)
        level_min[label] = s.levels.min(axis=axes)
    return SolveReport(
        series=series,
        wall_time=time.perf_counter() - t0,
        stability_note=status.note,
        level_max=level_max,
        level_min=level_min,
    )


def solve_1d(F: FieldSeries, params: SchemeParams) -> SolveReport:
    """Three-level weighted scheme for the 1-D warped system (source 2*F)."""
    status = _require(F, params, 1)
    t0 = time.perf_counter()
    eta, r = params.eta, params.ratio
    dt2 = params.dtau**2
    U = np.zeros(F.levels.shape)
    U[1] = _start_level(params, 2.0 * F.levels[0])
    for n in range(1, F.n_levels - 1):
        rhs = (
            2.0 * U[n]
            - U[n - 1]
            + r * _delta2((1.0 - 2.0 * eta) * U[n] + eta * U[n - 1], 0)
            + 2.0 * dt2 * F.levels[n]
        )
        U[n + 1] = _implicit_sweep(rhs, 0, eta * r)
    series = {"U0": FieldSeries(F.grid, U, "U0", F.times)}
    return _report(series, t0, status)


def _ring_kernel(
    counts: tuple[int, int], step: float, radius: float, n_theta: int
) -> np.ndarray:
    """Bilinear stamp of a radius-``radius`` ring of n_theta equispaced
    sample directions, each carrying weight 2*pi/n_theta."""
    kern = np.zeros(counts)
    w = 2.0 * math.pi / n_theta
    th = np.arange(n_theta) * (2.0 * math.pi / n_theta)
    vx = radius * np.cos(th) / step
    vy = radius * np.sin(th) / step
    i0 = np.floor(vx).astype(np.int64)
    j0 = np.floor(vy).astype(np.int64)
    fx = vx - i0
    fy = vy - j0
    for bx in (0, 1):
        wx = fx if bx else 1.0 - fx
        for by in (0, 1):
            wy = fy if by else 1.0 - fy
            np.add.at(
                kern,
                ((i0 + bx) % counts[0], (j0 + by) % counts[1]),
                w * wx * wy,
            )
    return kern


def lateral_source_2d(
    F: FieldSeries, warp: TimeWarp | None = None, n_theta: int = 64
) -> FieldSeries:
    """Cone-lateral source U1(x, tau_n) for the 2-D system.

    U1(x, tau) = int_0^tau int_0^{2 pi}
                 F(x + (tau-z) (cos th, sin th), z) dth dz,

    discretized by the composite trapezoid over the tau levels in z and
    n_theta equispaced angles, with F interpolated bilinearly (periodic)
    off-grid.  Evaluating the angle sum at every grid point simultaneously
    is a circular cross-correlation with a stamped ring kernel, computed by
    FFT; the values are the plain quadrature values to roundoff.
    """
    if F.grid.dim != 2:
        raise ValueError("lateral source is a 2-D construction")
    if n_theta < 4:
        raise ValueError("n_theta must be at least 4")
    times = F.times
    nlev = F.n_levels
    dtau = float(times[1] - times[0])
    if np.max(np.abs(np.diff(times) - dtau)) > 1e-9 * dtau:
        raise ValueError("source series must be on a uniform tau partition")
    if warp is not None:
        if warp.n_tau + 1 != nlev or not math.isclose(
            warp.dtau, dtau, rel_tol=1e-12
        ):
            raise ValueError("warp partition does not match the source series")
    counts = F.grid.counts
    f_hat = np.fft.rfft2(F.levels)
    k_conj = np.empty_like(f_hat[: nlev])
    for delta in range(nlev):
        kern = _ring_kernel(counts, F.grid.step, delta * dtau, n_theta)
        k_conj[delta] = np.conj(np.fft.rfft2(kern))
    U = np.zeros(F.levels.shape)
    for n in range(1, nlev):
        w = np.full(n + 1, dtau)
        w[0] *= 0.5
        w[-1] *= 0.5
        u_hat = np.einsum("j,jab->ab", w, f_hat[: n + 1] * k_conj[n::-1])
        U[n] = np.fft.irfft2(u_hat, s=counts)
    return FieldSeries(F.grid, U, "U1", times)


def solve_2d(
    F: FieldSeries, params: SchemeParams, n_theta: int = 64
) -> SolveReport:
    """Two-sweep Lees ADI for the 2-D warped system, source dtau^2 * U1.

    Sweep 1 is implicit in x with weights eta/(1-2 eta)/eta and carries the
    explicit y term and the source; sweep 2 applies the implicit y
    correction.  The half-step iterate is an intermediate only.
    """
    status = _require(F, params, 2)
    t0 = time.perf_counter()
    u1 = lateral_source_2d(F, None, n_theta)
    S = u1.levels
    eta, r = params.eta, params.ratio
    er = eta * r
    dt2 = params.dtau**2
    U = np.zeros(F.levels.shape)
    U[1] = _start_level(params, S[0])
    for n in range(1, F.n_levels - 1):
        G = 2.0 * U[n] - U[n - 1]
        r1 = (
            G
            + r * _delta2((1.0 - 2.0 * eta) * U[n] + eta * U[n - 1], 0)
            + r * _delta2(U[n], 1)
            + dt2 * S[n]
        )
        half = _implicit_sweep(r1, 0, er)
        r2 = half - er * _delta2(G, 1)
        U[n + 1] = _implicit_sweep(r2, 1, er)
    series = {
        "U0": FieldSeries(F.grid, U, "U0", F.times),
        "U1": u1,
    }
    return _report(series, t0, status)


def _adi3(src: np.ndarray, grid: GridSpec, params: SchemeParams) -> np.ndarray:
    """Three-sweep Fairweather-Mitchell march with the given source levels."""
    eta, r = params.eta, params.ratio
    er = eta * r
    dt2 = params.dtau**2
    U = np.zeros(src.shape)
    U[1] = _start_level(params, src[0])
    for n in range(1, src.shape[0] - 1):
        G = 2.0 * U[n] - U[n - 1]
        r1 = (
            G
            + r * _delta2((1.0 - 2.0 * eta) * U[n] + eta * U[n - 1], 0)
            + r * (_delta2(U[n], 1) + _delta2(U[n], 2))
            + dt2 * src[n]
        )
        sw1 = _implicit_sweep(r1, 0, er)
        sw2 = _implicit_sweep(sw1 - er * _delta2(G, 1), 1, er)
        U[n + 1] = _implicit_sweep(sw2 - er * _delta2(G, 2), 2, er)
    return U


def solve_3d(F: FieldSeries, params: SchemeParams) -> SolveReport:
    """Sequential 3-D cascade: U1 from source 4*pi*F, then U0 from 2*U1."""
    status = _require(F, params, 3)
    t0 = time.perf_counter()
    u1 = _adi3(4.0 * math.pi * F.levels, F.grid, params)
    u0 = _adi3(2.0 * u1, F.grid, params)
    series = {
        "U1": FieldSeries(F.grid, u1, "U1", F.times),
        "U0": FieldSeries(F.grid, u0, "U0", F.times),
    }
    return _report(series, t0, status)


def unwarp(report: SolveReport, warp: TimeWarp) -> FieldSeries:
    """Relabel the solved U0 levels as u(., t_hat_n); values unchanged."""
    s = report.series["U0"]
    if s.n_levels != warp.t_hat.size:
        raise ValueError("warp partition does not match the solved series")
    return FieldSeries(s.grid, s.levels, "u", warp.t_hat)


# ---------------------------------------------------------------------------
# back-substitution residuals (the schemes are solved, not approximated)


def _eliminated_residual(
    U: np.ndarray, src: np.ndarray, params: SchemeParams, dim: int
) -> float:
    """Max relative residual of the sweep-eliminated difference equations."""
    eta, r = params.eta, params.ratio
    er = eta * r
    dt2 = params.dtau**2

    def L(a, axis):
        return er * _delta2(a, axis)

    scale = max(np.max(np.abs(U)), dt2 * np.max(np.abs(src)), 1e-300)
    worst = 0.0
    for n in range(1, U.shape[0] - 1):
        G = 2.0 * U[n] - U[n - 1]
        r1 = (
            G
            + r * _delta2((1.0 - 2.0 * eta) * U[n] + eta * U[n - 1], 0)
            + dt2 * src[n]
        )
        for a in range(1, dim):
            r1 = r1 + r * _delta2(U[n], a)
        if dim == 1:
            lhs = U[n + 1] - L(U[n + 1], 0)
        elif dim == 2:
            A = U[n + 1] - L(U[n + 1], 1)
            lhs = A - L(A, 0)
            lyg = L(G, 1)
            lhs = lhs + lyg - L(lyg, 0)
        else:
            B = U[n + 1] - L(U[n + 1], 2)
            A = B - L(B, 1)
            lhs = A - L(A, 0)
            lzg = L(G, 2)
            m = lzg - L(lzg, 1) + L(G, 1)
            lhs = lhs + m - L(m, 0)
        worst = max(worst, float(np.max(np.abs(lhs - r1))) / scale)
    return worst


def scheme_residual(
    report: SolveReport, F: FieldSeries, params: SchemeParams
) -> dict[str, float]:
    """Substitute the produced levels back into the difference equations.

    Returns the max relative residual per solved unknown.  The sources are
    reassembled independently of the march (2*F for d=1, the stored U1 for
    d=2, 4*pi*F and 2*U1 for d=3).
    """
    dim = F.grid.dim
    out: dict[str, float] = {}
    if dim == 1:
        out["U0"] = _eliminated_residual(
            report.series["U0"].levels, 2.0 * F.levels, params, 1
        )
    elif dim == 2:
        out["U0"] = _eliminated_residual(
            report.series["U0"].levels, report.series["U1"].levels, params, 2
        )
    else:
        u1 = report.series["U1"].levels
        out["U1"] = _eliminated_residual(
            u1, 4.0 * math.pi * F.levels, params, 3
        )
        out["U0"] = _eliminated_residual(
            report.series["U0"].levels, 2.0 * u1, params, 3
        )
    return out
