"""Exact scalar arithmetic: rationals and integer combinations of roots of unity.

Rationals are ``fractions.Fraction`` throughout the package; this module adds
the string serialization used by the CLI ("a/b", or "a" for integers) and a
power helper that keeps everything exact.

The second half implements ``RootOfUnitySum``: a formal integer combination

    sum_k  c_k * zeta_M^k,     zeta_M = exp(2*pi*i/M),

which is exactly the kind of value a mask polynomial takes at a rational
point.  Whether such a sum vanishes is decidable: the sum is zero iff the
coefficient polynomial P(x) = sum c_k x^k is divisible by the M-th cyclotomic
polynomial Phi_M (the minimal polynomial of zeta_M over the rationals).  We
compute Phi_M by exact integer polynomial division of x^M - 1 by the Phi_d
for proper divisors d of M, cache it, and test divisibility by taking the
remainder.  No floating point is involved anywhere in the decision.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm, tau
from typing import Iterable, Mapping

Rational = Fraction

__all__ = [
    "Rational",
    "parse_rational",
    "format_rational",
    "rational_pow",
    "RootOfUnitySum",
    "root_sum_is_zero",
    "cyclotomic",
]


def parse_rational(text: str) -> Fraction:
    """Parse "a/b" or "a" (optionally signed) into an exact rational."""
    if not isinstance(text, str):
        raise TypeError(f"expected a rational literal string, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Inverse of :func:`parse_rational`: "a/b", or "a" when b == 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rational_pow(x: Fraction, k: int) -> Fraction:
    """x**k with integer k of either sign, exactly.

    Raises ValueError for 0**k with k < 0.
    """
    if not isinstance(k, int):
        raise TypeError("exponent must be an integer")
    x = Fraction(x)
    if x == 0 and k < 0:
        raise ValueError("zero base with negative exponent")
    return x**k


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # num / den for a monic divisor; division must be exact.
    num = list(num)
    d = len(den) - 1
    out = [0] * (len(num) - d)
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i]
        if c == 0:
            continue
        out[i - d] = c
        for j, dj in enumerate(den):
            num[i - d + j] -= c * dj
    if any(num[:d]):
        raise ArithmeticError("polynomial division left a remainder")
    return out


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("order must be a positive integer")
    if n > 10**7:
        raise ValueError(f"cyclotomic order {n} too large for exact computation")
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, cyclotomic(d))
    return tuple(poly)


# ---------------------------------------------------------------------------
# sums of roots of unity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootOfUnitySum:
    """Formal sum  sum_k coeffs[k] * exp(2*pi*i*k/order).

    Residues are stored reduced mod ``order`` with zero coefficients dropped,
    so equal formal sums compare equal structurally.  Semantic equality of
    the complex values they denote is ``(a - b).is_zero()``.
    """

    order: int
    coeffs: tuple[tuple[int, int], ...]  # sorted (residue, coefficient) pairs

    def __init__(self, order: int, coeffs: Mapping[int, int] | Iterable[tuple[int, int]]):
        if order < 1:
            raise ValueError("order must be a positive integer")
        acc: dict[int, int] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for k, c in items:
            k = int(k) % order
            acc[k] = acc.get(k, 0) + int(c)
        cleaned = tuple(sorted((k, c) for k, c in acc.items() if c != 0))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", cleaned)

    @classmethod
    def from_phases(cls, phases: Iterable[Fraction]) -> "RootOfUnitySum":
        """Sum of exp(2*pi*i*q) over rational phases q (a multiset)."""
        qs = [Fraction(q) for q in phases]
        order = lcm(*(q.denominator for q in qs)) if qs else 1
        pairs = [((q.numerator * (order // q.denominator)) % order, 1) for q in qs]
        return cls(order, pairs)

    def is_zero(self) -> bool:
        if not self.coeffs:
            return True
        if self.order == 1:
            return False  # single surviving constant term
        phi = cyclotomic(self.order)
        d = len(phi) - 1
        rem = [0] * self.order
        for k, c in self.coeffs:
            rem[k] = c
        for i in range(self.order - 1, d - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            for j, pj in enumerate(phi):
                rem[i - d + j] -= c * pj
        return not any(rem[:d])

    def value(self) -> complex:
        """Double-precision evaluation, for diagnostics only."""
        return sum(c * cmath.exp(1j * tau * k / self.order) for k, c in self.coeffs)

    def rotated(self, t: int) -> "RootOfUnitySum":
        """Multiply by zeta^t: shifts every residue by t."""
        return RootOfUnitySum(self.order, [(k + t, c) for k, c in self.coeffs])

    def _lifted(self, order: int) -> "RootOfUnitySum":
        if order % self.order:
            raise ValueError("can only lift to a multiple of the order")
        step = order // self.order
        return RootOfUnitySum(order, [(k * step, c) for k, c in self.coeffs])

    def __neg__(self) -> "RootOfUnitySum":
        return RootOfUnitySum(self.order, [(k, -c) for k, c in self.coeffs])

    def __add__(self, other: "RootOfUnitySum") -> "RootOfUnitySum":
        order = lcm(self.order, other.order)
        a = self._lifted(order)
        b = other._lifted(order)
        return RootOfUnitySum(order, list(a.coeffs) + list(b.coeffs))

    def __sub__(self, other: "RootOfUnitySum") -> "RootOfUnitySum":
        return self + (-other)

    def __mul__(self, other: "RootOfUnitySum") -> "RootOfUnitySum":
        order = lcm(self.order, other.order)
        a = self._lifted(order)
        b = other._lifted(order)
        pairs = [((ka + kb), ca * cb) for ka, ca in a.coeffs for kb, cb in b.coeffs]
        return RootOfUnitySum(order, pairs)

    def equals(self, other: "RootOfUnitySum") -> bool:
        return (self - other).is_zero()


def root_sum_is_zero(s: RootOfUnitySum) -> bool:
    """Exact zero test for a sum of roots of unity."""
    return s.is_zero()
