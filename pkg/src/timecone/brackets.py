"""Cone-surface / cone-interior integral brackets and their identity checks.

For a smooth space-time field G(y, zeta) the two bracket families are

    [k, S_d, L^j](x, tau) = int_0^tau int_{S_d(x, tau-z)} L^j G(y, z)
                            / (tau-z)^k  dsigma dz          (k <= d-1)
    [k, B_d, L^j](x, tau) = int_0^tau int_{B_d(x, tau-z)} L^j G(y, z)
                            / (tau-z)^k  dy dz               (k <= d)

where L^j is the j-th iterated Laplacian.  In the polar representation the
surface element contributes (tau-z)^(d-1), so the integrands reduce to
smooth powers (tau-z)^(d-1-k) and (tau-z)^(d-k) and both brackets vanish at
tau = 0, which is returned exactly.

They are linked by differential identities (Laplacians commute with both
brackets; the tau-derivative of one family lands in the other), and the
d = 3 surface bracket with k = 1 is the lateral-source unknown whose wave
equation has right-hand side 4*pi*G.  The check_* functions measure those
identities with centered finite differences on top of the quadrature, so
their residuals shrink at second order in the step until the quadrature
floor takes over.

Field callbacks have signature ``field(y, zeta, j)`` with ``y`` shaped
``(..., dim)`` and must return the j-th iterated Laplacian analytically;
this keeps the evaluator a pure quadrature and the identity checks sharp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .oracle import SPHERE_AREA, ConeQuadSpec, sphere_directions, trapezoid_nodes

FieldFn = Callable[[np.ndarray, float, int], np.ndarray]


@dataclass(frozen=True)
class BracketSpec:
    """Which bracket: surface ("S") or ball ("B"), weight power k, Laplacian
    power j, dimension 2 or 3.  k <= dim-1 for S, k <= dim for B keeps the
    integrand nonsingular."""

    kind: str
    k: int
    j: int
    dim: int

    def __post_init__(self):
        if self.kind not in ("S", "B"):
            raise ValueError("kind must be 'S' or 'B'")
        if self.dim not in (2, 3):
            raise ValueError("brackets are implemented for dim 2 and 3")
        if self.k < 0 or self.j < 0:
            raise ValueError("k and j must be nonnegative")
        kmax = self.dim - 1 if self.kind == "S" else self.dim
        if self.k > kmax:
            raise ValueError(
                f"k={self.k} out of range for kind {self.kind} in d={self.dim}"
            )

    def with_(self, **kw) -> "BracketSpec":
        d = {"kind": self.kind, "k": self.k, "j": self.j, "dim": self.dim}
        d.update(kw)
        return BracketSpec(**d)


def eval_bracket(
    spec: BracketSpec,
    field: FieldFn,
    x,
    tau: float,
    quad: ConeQuadSpec = ConeQuadSpec(),
) -> float:
    """Composite-trapezoid value of the bracket at (x, tau); exactly 0 at
    tau = 0."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if tau == 0.0:
        return 0.0
    d, k = spec.dim, spec.k
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (d,):
        raise ValueError(f"x must have shape ({d},)")
    z_nodes, z_w = trapezoid_nodes(0.0, tau, quad.n_s)
    p, ang_w = sphere_directions(d, quad.n_ang)
    acc = 0.0
    if spec.kind == "S":
        for z, wz in zip(z_nodes, z_w):
            r = tau - z
            vals = field(x[None, :] + r * p, float(z), spec.j)
            acc += wz * r ** (d - 1 - k) * float(ang_w @ vals)
    else:
        lam, lam_w = trapezoid_nodes(0.0, 1.0, quad.n_r)
        w_ball = (lam_w * lam ** (d - 1))[:, None] * ang_w[None, :]
        for z, wz in zip(z_nodes, z_w):
            r = tau - z
            pts = x[None, None, :] + (r * lam)[:, None, None] * p[None, :, :]
            vals = field(pts, float(z), spec.j)
            acc += wz * r ** (d - k) * float(np.sum(w_ball * vals))
    return acc


def check_laplace_identity(
    spec: BracketSpec,
    field: FieldFn,
    x,
    tau: float,
    h: float,
    quad: ConeQuadSpec = ConeQuadSpec(),
) -> float:
    """|centered-difference Laplacian of the bracket - bracket with j+1|.

    Both sides evaluate the same quadrature, so the residual is pure
    finite-difference error plus the quadrature floor.
    """
    x = np.asarray(x, dtype=np.float64)
    center = eval_bracket(spec, field, x, tau, quad)
    lap = 0.0
    for a in range(spec.dim):
        e = np.zeros(spec.dim)
        e[a] = h
        lap += (
            eval_bracket(spec, field, x + e, tau, quad)
            - 2.0 * center
            + eval_bracket(spec, field, x - e, tau, quad)
        ) / h**2
    rhs = eval_bracket(spec.with_(j=spec.j + 1), field, x, tau, quad)
    return abs(lap - rhs)


def check_time_identities(
    spec: BracketSpec,
    field: FieldFn,
    x,
    tau: float,
    h: float,
    quad: ConeQuadSpec = ConeQuadSpec(),
) -> float:
    """Residual of the tau-derivative identity for the given bracket.

    Surface kind, k < d-1:  d/dtau [k,S] = (d-k-1)[k+1,S] + [k,B,L^(j+1)]
    Surface kind, k = d-1:  d/dtau [d-1,S] = sigma_d L^j G + [d-1,B,L^(j+1)]
    Ball kind (k <= d-1):   d/dtau [k,B] = -k [k+1,B] + [k,S]

    The left side is a centered difference, so tau > h is required.
    """
    if tau <= h:
        raise ValueError("need tau > h for the centered difference")
    d, k = spec.dim, spec.k
    x = np.asarray(x, dtype=np.float64)
    lhs = (
        eval_bracket(spec, field, x, tau + h, quad)
        - eval_bracket(spec, field, x, tau - h, quad)
    ) / (2.0 * h)
    if spec.kind == "S":
        if k < d - 1:
            rhs = (d - k - 1) * eval_bracket(
                spec.with_(k=k + 1), field, x, tau, quad
            ) + eval_bracket(spec.with_(kind="B", j=spec.j + 1), field, x, tau, quad)
        else:
            point = float(np.asarray(field(x, tau, spec.j)))
            rhs = SPHERE_AREA[d] * point + eval_bracket(
                spec.with_(kind="B", j=spec.j + 1), field, x, tau, quad
            )
    else:
        if k > d - 1:
            raise ValueError("ball-kind identity needs k <= d-1")
        rhs = -k * eval_bracket(spec.with_(k=k + 1), field, x, tau, quad) + eval_bracket(
            spec.with_(kind="S"), field, x, tau, quad
        )
    return abs(lhs - rhs)


def verify_gov_U1_3d(
    field: FieldFn,
    x,
    tau: float,
    h: float,
    quad: ConeQuadSpec = ConeQuadSpec(),
) -> float:
    """Residual of the d=3 lateral-source wave equation.

    U1 = [1, S_3, L^0] must satisfy (d^2/dtau^2 - Laplacian) U1 = 4 pi G;
    both derivatives are centered differences of the bracket quadrature.
    """
    if tau <= h:
        raise ValueError("need tau > h for the centered differences")
    spec = BracketSpec("S", 1, 0, 3)
    x = np.asarray(x, dtype=np.float64)
    center = eval_bracket(spec, field, x, tau, quad)
    dtt = (
        eval_bracket(spec, field, x, tau + h, quad)
        - 2.0 * center
        + eval_bracket(spec, field, x, tau - h, quad)
    ) / h**2
    lap = 0.0
    for a in range(3):
        e = np.zeros(3)
        e[a] = h
        lap += (
            eval_bracket(spec, field, x + e, tau, quad)
            - 2.0 * center
            + eval_bracket(spec, field, x - e, tau, quad)
        ) / h**2
    point = float(np.asarray(field(x, tau, 0)))
    return abs(dtt - lap - 4.0 * math.pi * point)


# ---------------------------------------------------------------------------
# analytic test fields (iterated Laplacians supplied in closed form)


@dataclass(frozen=True)
class AnalyticField:
    """Smooth field with closed-form iterated Laplacians.

    ``scale`` is max|G| over the region of interest, the normalization the
    residual criteria are stated in.
    """

    dim: int
    fn: FieldFn
    scale: float
    name: str = ""

    def __call__(self, y, zeta, j=0):
        return self.fn(np.asarray(y, dtype=np.float64), zeta, j)


def constant_field(dim: int, value: float = 1.0) -> AnalyticField:
    def fn(y, zeta, j):
        base = np.full(y.shape[:-1], value if j == 0 else 0.0)
        return base

    return AnalyticField(dim, fn, abs(value) or 1.0, f"const({value})")


def plane_wave_field(dim: int, freq: float = 1.0) -> AnalyticField:
    """sin(freq*y1) * exp(-zeta/2): eigenfunction, L^j = (-freq^2)^j."""

    def fn(y, zeta, j):
        return (-(freq**2)) ** j * np.sin(freq * y[..., 0]) * math.exp(-zeta / 2.0)

    return AnalyticField(dim, fn, 1.0, f"planewave({freq})")


def separable_field(dim: int, freq: float = 1.0) -> AnalyticField:
    """prod_a cos(freq*y_a) * exp(-zeta/3): L^j = (-dim*freq^2)^j."""

    def fn(y, zeta, j):
        prod = np.ones(y.shape[:-1])
        for a in range(dim):
            prod = prod * np.cos(freq * y[..., a])
        return (-(dim * freq**2)) ** j * prod * math.exp(-zeta / 3.0)

    return AnalyticField(dim, fn, 1.0, f"separable({freq})")


def quadratic_field(dim: int) -> AnalyticField:
    """|y|^2: Laplacian 2*dim, then zero."""

    def fn(y, zeta, j):
        if j == 0:
            return np.sum(y * y, axis=-1)
        if j == 1:
            return np.full(y.shape[:-1], 2.0 * dim)
        return np.zeros(y.shape[:-1])

    return AnalyticField(dim, fn, 1.0, "quadratic")


def perturbed_constant_field(dim: int, eps: float = 0.1) -> AnalyticField:
    """1 + eps*sin(y1): the constant drops out of every Laplacian."""

    def fn(y, zeta, j):
        wave = np.sin(y[..., 0])
        if j == 0:
            return 1.0 + eps * wave
        return eps * (-1.0) ** j * wave

    return AnalyticField(dim, fn, 1.0 + abs(eps), f"perturbed({eps})")
