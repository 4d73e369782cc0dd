"""Periodic grid geometry, sampled model inputs, and time-level field stacks.

This is the data layer shared by the warp builder, the cone-integral oracle
and the finite-difference solvers.  Grids are equidistant and periodic on
every axis: point ``i`` of axis ``a`` sits at ``i*step`` for ``i = 0..N-1``
and index arithmetic is modulo ``counts[a]``, so the spatial period is
``counts[a]*step``.  The lattice stores one representative per equivalence
class; there is no duplicated endpoint (a duplicated endpoint would be
counted twice by every periodic sweep).

All stored arrays are float64 and frozen (non-writeable), which makes the
concurrent-read guarantees of these types trivially true.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

FIELD_LABELS = ("U0", "U1", "u", "F")


def _freeze(a, dtype=np.float64) -> np.ndarray:
    out = np.array(a, dtype=dtype, order="C", copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class GridSpec:
    """Equidistant periodic lattice in 1, 2 or 3 dimensions."""

    dim: int
    counts: tuple[int, ...]
    step: float

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        object.__setattr__(self, "counts", tuple(int(n) for n in self.counts))
        if len(self.counts) != self.dim:
            raise ValueError(
                f"counts has {len(self.counts)} entries for dim={self.dim}"
            )
        if any(n < 3 for n in self.counts):
            raise ValueError("every axis needs at least 3 points")
        if not self.step > 0:
            raise ValueError("step must be positive")

    @property
    def periods(self) -> tuple[float, ...]:
        return tuple(n * self.step for n in self.counts)

    def axis_points(self, axis: int) -> np.ndarray:
        return np.arange(self.counts[axis]) * self.step

    def meshgrid(self) -> list[np.ndarray]:
        return np.meshgrid(
            *(self.axis_points(a) for a in range(self.dim)), indexing="ij"
        )


def wrap_index(grid: GridSpec, axis: int, i: int) -> int:
    """Reduce a 1-based lattice index into ``1..N`` by the periodic wrap.

    ``wrap_index(0) == N`` and ``wrap_index(N+1) == 1``, matching the ghost
    identifications used by all periodic stencils.
    """
    n = grid.counts[axis]
    return (int(i) - 1) % n + 1


def periodic_interp(grid: GridSpec, values: np.ndarray, pts) -> np.ndarray:
    """Periodic multilinear interpolation of a grid field at arbitrary points.

    ``pts`` has shape ``(..., dim)`` (a bare scalar/array is accepted for
    ``dim == 1``).  Exact at lattice points, reproduces constants, and is
    periodic with period ``counts[a]*step`` on each axis.
    """
    pts = np.asarray(pts, dtype=np.float64)
    if grid.dim == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
        pts = pts[..., np.newaxis]
    if pts.shape[-1] != grid.dim:
        raise ValueError(f"points must have last axis {grid.dim}")
    u = pts / grid.step
    base = np.floor(u).astype(np.int64)
    frac = u - base
    # gather the 2^dim cell corners, leading axes indexing the corner bits
    corners = np.empty((2,) * grid.dim + pts.shape[:-1], dtype=np.float64)
    for corner in itertools.product((0, 1), repeat=grid.dim):
        idx = tuple(
            (base[..., a] + bit) % grid.counts[a] for a, bit in enumerate(corner)
        )
        corners[corner] = values[idx]
    # fold one axis at a time as lo + f*(hi - lo): reproduces constants and
    # lattice values bit-exactly
    out = corners
    for a in range(grid.dim - 1, -1, -1):
        lo = out[(slice(None),) * a + (0,)]
        hi = out[(slice(None),) * a + (1,)]
        out = lo + frac[..., a] * (hi - lo)
    return out


@dataclass(frozen=True)
class SampledSpeed:
    """Growth speed rho(t) on strictly increasing knots, piecewise linear.

    Knot values must be strictly positive; this keeps the cumulative warp
    strictly increasing and hence invertible.
    """

    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        knots = _freeze(self.knots)
        values = _freeze(self.values)
        if knots.ndim != 1 or values.shape != knots.shape:
            raise ValueError("knots and values must be 1-D of equal length")
        if knots.size < 2:
            raise ValueError("need at least two knots")
        if knots[0] != 0.0:
            raise ValueError("first knot must be t = 0")
        if np.any(np.diff(knots) <= 0):
            raise ValueError("knots must be strictly increasing")
        if np.any(values <= 0):
            raise ValueError("speed values must be strictly positive")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    @property
    def horizon(self) -> float:
        return float(self.knots[-1])


def eval_speed(speed: SampledSpeed, t):
    """Piecewise-linear speed at time(s) ``t`` in ``[0, T]``."""
    ta = np.asarray(t, dtype=np.float64)
    if np.any(ta < 0.0) or np.any(ta > speed.horizon):
        raise ValueError(f"t out of range [0, {speed.horizon}]")
    out = np.interp(ta, speed.knots, speed.values)
    return float(out) if np.ndim(t) == 0 else out


@dataclass(frozen=True)
class SampledRate:
    """Nucleation rate alpha(x, t): one periodic grid frame per time knot.

    Off-knot evaluation is linear in time; off-grid evaluation is periodic
    multilinear in space.  All samples must be nonnegative.
    """

    grid: GridSpec
    knots: np.ndarray
    frames: np.ndarray

    def __post_init__(self):
        knots = _freeze(self.knots)
        frames = _freeze(self.frames)
        if knots.ndim != 1 or knots.size < 2:
            raise ValueError("need at least two time knots")
        if knots[0] != 0.0 or np.any(np.diff(knots) <= 0):
            raise ValueError("knots must be strictly increasing from 0")
        if frames.shape != (knots.size, *self.grid.counts):
            raise ValueError(
                f"frames shape {frames.shape} does not match "
                f"(n_knots, *counts) = {(knots.size, *self.grid.counts)}"
            )
        if np.any(frames < 0):
            raise ValueError("rate samples must be nonnegative")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "frames", frames)

    @property
    def horizon(self) -> float:
        return float(self.knots[-1])

    def frame_at(self, t: float) -> np.ndarray:
        """Time-interpolated frame at ``t``; exact at knots."""
        if t < 0.0 or t > self.horizon:
            raise ValueError(f"t out of range [0, {self.horizon}]")
        i = int(np.searchsorted(self.knots, t, side="right")) - 1
        i = min(max(i, 0), self.knots.size - 2)
        w = (t - self.knots[i]) / (self.knots[i + 1] - self.knots[i])
        if w == 0.0:
            return self.frames[i]
        return (1.0 - w) * self.frames[i] + w * self.frames[i + 1]

    def eval_at(self, x, t: float):
        return periodic_interp(self.grid, self.frame_at(t), x)


@dataclass(frozen=True)
class AnalyticRate:
    """Closed-form nonnegative rate for scenario mode.

    Shares the evaluation interface of :class:`SampledRate` but evaluates
    the formula exactly at any point and time (no interpolation bias);
    ``frame_at`` samples it on the lattice.  ``fn(pts, t)`` takes points
    shaped ``(..., dim)`` and must be periodic on the grid's box.
    """

    grid: GridSpec
    knots: np.ndarray
    fn: Callable[[np.ndarray, float], np.ndarray]

    def __post_init__(self):
        knots = _freeze(self.knots)
        if knots.ndim != 1 or knots.size < 2:
            raise ValueError("need at least two time knots")
        if knots[0] != 0.0 or np.any(np.diff(knots) <= 0):
            raise ValueError("knots must be strictly increasing from 0")
        object.__setattr__(self, "knots", knots)
        for t in (knots[0], knots[-1]):
            if np.any(self.frame_at(float(t)) < 0):
                raise ValueError("rate samples must be nonnegative")

    @property
    def horizon(self) -> float:
        return float(self.knots[-1])

    def _lattice(self) -> np.ndarray:
        return np.stack(self.grid.meshgrid(), axis=-1)

    def frame_at(self, t: float) -> np.ndarray:
        if t < 0.0 or t > self.horizon:
            raise ValueError(f"t out of range [0, {self.horizon}]")
        return np.asarray(self.fn(self._lattice(), float(t)), dtype=np.float64)

    def eval_at(self, x, t: float):
        if t < 0.0 or t > self.horizon:
            raise ValueError(f"t out of range [0, {self.horizon}]")
        pts = np.asarray(x, dtype=np.float64)
        if self.grid.dim == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
            pts = pts[..., np.newaxis]
        return np.asarray(self.fn(pts, float(t)), dtype=np.float64)

    def sampled(self) -> SampledRate:
        """Materialize as knot frames (the data-mode representation)."""
        frames = np.stack([self.frame_at(float(t)) for t in self.knots])
        return SampledRate(self.grid, self.knots, frames)


def eval_rate(rate, x, t: float):
    """alpha at point(s) ``x`` and time ``t``.

    Sampled rates interpolate (multilinear-periodic in space, linear in
    time, exact at knots and lattice points); analytic scenario rates
    evaluate their closed form exactly.  Both go through this one entry
    point.
    """
    return rate.eval_at(x, t)


@dataclass(frozen=True, eq=False)
class FieldSeries:
    """Time-indexed stack of periodic grid fields.

    ``levels[n]`` is the field at ``times[n]``.  Level 0 of a U-labelled
    series must be identically zero (homogeneous initial data).
    """

    grid: GridSpec
    levels: np.ndarray
    label: str
    times: np.ndarray

    def __post_init__(self):
        levels = _freeze(self.levels)
        times = _freeze(self.times)
        if self.label not in FIELD_LABELS:
            raise ValueError(f"label must be one of {FIELD_LABELS}")
        if levels.ndim != self.grid.dim + 1:
            raise ValueError("levels must be (n_levels, *grid.counts)")
        if levels.shape[1:] != self.grid.counts:
            raise ValueError(
                f"level shape {levels.shape[1:]} != grid counts {self.grid.counts}"
            )
        if times.shape != (levels.shape[0],):
            raise ValueError("times must have one entry per level")
        if self.label in ("U0", "U1") and levels.shape[0] > 0:
            if np.any(levels[0] != 0.0):
                raise ValueError(f"level 0 of a {self.label} series must be zero")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "times", times)

    @property
    def n_levels(self) -> int:
        return self.levels.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldSeries):
            return NotImplemented
        return (
            self.grid == other.grid
            and self.label == other.label
            and np.array_equal(self.levels, other.levels)
            and np.array_equal(self.times, other.times)
        )
