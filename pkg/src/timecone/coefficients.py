"""Exact integer coefficients of the multiple-hyperbolic reduction.

The order-m wave unknown expands over integral brackets with polynomial
weights P_m^k(d) (integer coefficients, a polynomial in the dimension
symbol d) and positive integer counts c_m^k.  Everything in this module is
exact: arbitrary-precision integers throughout, pi kept symbolic as an
exponent, no floating point anywhere.

Recurrences:
    P_m^m(d) = 1,
    P_m^k(d) = (d - 2*(m - floor((k+1)/2))) * P_{m-1}^k(d)   (1 <= k <= m-1)

    c_m^1 = c_m^m = 1,
    c_m^k = c_{m-1}^{k-1}              (k even, 2 <= k <= m-1)
    c_m^k = c_{m-1}^{k-1} + c_{m-1}^k  (k odd,  2 <= k <= m-1)

Indices outside 1 <= k <= m are rejected, never extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@dataclass(frozen=True)
class PolyInD:
    """Univariate integer-coefficient polynomial in the dimension symbol d.

    ``coeffs`` is ascending-degree, trimmed (no trailing zeros); the zero
    polynomial has empty coeffs.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def __add__(self, other: "PolyInD") -> "PolyInD":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return PolyInD(tuple(out))

    def __mul__(self, other: "PolyInD | int") -> "PolyInD":
        if isinstance(other, int):
            return PolyInD(tuple(other * v for v in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyInD(tuple(out))

    __rmul__ = __mul__

    def __call__(self, d: int) -> int:
        """Exact evaluation at an integer d (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * d + c
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for p in range(self.degree, -1, -1):
            c = self.coeffs[p]
            if c == 0:
                continue
            if p == 0:
                term = f"{abs(c)}"
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}d" + (f"^{p}" if p > 1 else "")
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


ONE = PolyInD((1,))


def _linear(const: int) -> PolyInD:
    """d + const."""
    return PolyInD((const, 1))


def pmk(m: int, k: int) -> PolyInD:
    """P_m^k(d) by the downward recurrence from the base P_k^k = 1."""
    if not 1 <= k <= m:
        raise ValueError(f"k must satisfy 1 <= k <= m, got k={k}, m={m}")
    poly = ONE
    for mm in range(k + 1, m + 1):
        poly = _linear(-2 * (mm - (k + 1) // 2)) * poly
    return poly


@lru_cache(maxsize=None)
def cmk(m: int, k: int) -> int:
    """c_m^k by the parity-split recurrence."""
    if not 1 <= k <= m:
        raise ValueError(f"k must satisfy 1 <= k <= m, got k={k}, m={m}")
    if k == 1 or k == m:
        return 1
    if k % 2 == 0:
        return cmk(m - 1, k - 1)
    return cmk(m - 1, k - 1) + cmk(m - 1, k)


@dataclass(frozen=True)
class CoeffTable:
    """Row of counts c_m^k for 1 <= k <= m."""

    m: int
    c: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1 or len(self.c) != self.m:
            raise ValueError("table must hold exactly m entries")
        if self.c[0] != 1 or self.c[-1] != 1:
            raise ValueError("first and last entries must be 1")
        if any(v <= 0 for v in self.c):
            raise ValueError("all entries must be positive")

    @classmethod
    def build(cls, m: int) -> "CoeffTable":
        return cls(m=m, c=tuple(cmk(m, k) for k in range(1, m + 1)))


def double_factorial(n: int) -> int:
    """n!! with the usual conventions (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError("double factorial needs n >= -1")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def verify_pmk_identity(m: int, pmk_fn=pmk) -> bool:
    """Check P_m^{k-1}(d) == ((d-m) + (-1)^k (m - 2*floor(k/2))) * P_m^k(d)
    exactly, for every 2 <= k <= m."""
    if m < 2:
        raise ValueError("identity requires m >= 2")
    for k in range(2, m + 1):
        factor = _linear(-m + (-1) ** k * (m - 2 * (k // 2)))
        if pmk_fn(m, k - 1) != factor * pmk_fn(m, k):
            return False
    return True


def verify_cmk_identity(m: int, cmk_fn=cmk) -> bool:
    """Check 2(m-k) c_m^k == k c_m^{k+1} (k even) and
    2(m-k) c_m^k == (2m-k-1) c_m^{k+1} (k odd), for 2 <= k <= m-1."""
    if m < 3:
        raise ValueError("identity requires m >= 3")
    for k in range(2, m):
        lhs = 2 * (m - k) * cmk_fn(m, k)
        rhs = (k if k % 2 == 0 else 2 * m - k - 1) * cmk_fn(m, k + 1)
        if lhs != rhs:
            return False
    return True


def p1_product_check(m: int, pmk_fn=pmk) -> bool:
    """Check P_{m+1}^1(d) equals the expanded product of (d - 2j), j = 1..m."""
    if m < 1:
        raise ValueError("requires m >= 1")
    prod = ONE
    for j in range(1, m + 1):
        prod = prod * _linear(-2 * j)
    return pmk_fn(m + 1, 1) == prod


def sigma_identity_check(m: int, pmk_fn=pmk) -> bool:
    """Check P_{m+1}^1(2m+1) == (2m-1)!! exactly.

    This is the rational content (pi cancels) of the statement that the
    odd-dimensional unit-sphere area times P_{m+1}^1 collapses to the
    source multiplier 2^{m+1} pi^m.
    """
    if m < 1:
        raise ValueError("requires m >= 1")
    return pmk_fn(m + 1, 1)(2 * m + 1) == double_factorial(2 * m - 1)


def source_multiplier(m: int) -> tuple[int, int]:
    """Integer and pi-power of the order-m source multiplier.

    Returns ``(c, p)`` meaning ``c * pi**p`` with ``c = (2m)!! * 2^(m+1)``.
    ``m = 0`` gives 2 (the single-equation case), ``m = 1`` gives 8*pi.
    """
    if m < 0:
        raise ValueError("requires m >= 0")
    return double_factorial(2 * m) * 2 ** (m + 1), m


def sigma_odd(m: int) -> tuple[Fraction, int]:
    """Unit-sphere surface area in dimension 2m+1 as (rational, pi-power).

    sigma_{2m+1} = 2^{m+1} pi^m / (2m-1)!!; m = 1 gives 4*pi.
    """
    if m < 0:
        raise ValueError("requires m >= 0")
    return Fraction(2 ** (m + 1), double_factorial(2 * m - 1)), m
