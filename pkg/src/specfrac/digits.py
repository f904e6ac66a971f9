"""Digit sets, mask polynomials, and exact zero sets.

A digit set D is a finite set of rationals.  Its mask is the exponential
polynomial

    m_D(x) = (1/#D) * sum_{d in D} exp(2*pi*i*d*x),

the Fourier transform of the uniform atomic measure on D.  Masks multiply
under direct sums: if D = A (+) B with all sums a+b distinct, then
m_D = m_A * m_B.

Zero sets are computed exactly, but only for digit sets whose construction
as a direct sum of scaled consecutive blocks  alpha * {0, .., L-1}  was
recorded.  For a single block the zeros are classical:

    L >= 3:  zeros of m_{alpha*{0..L-1}} are  (Z \\ L*Z) / (alpha*L)
    L == 2:  zeros are the odd half-lattice  (2*Z + 1) / (2*alpha)
    L == 1:  the mask is constant 1 and never vanishes

and for a recorded direct sum the zero set is the union over blocks.  The
structure is never inferred from raw elements (recovering a direct-sum
decomposition is a search problem); an unstructured digit set simply has an
unknown zero set, reported as None.

``ZeroSetExpr`` represents  fixed_atoms  union  U_{j>=min_exponent} base^j *
(union of atoms)  with exact rational membership testing.  Self-similar
measure zero sets use the dilation family with base 1/rho; factor measures
with a finite prefix also populate ``fixed_atoms``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import tau
from typing import Iterable, NamedTuple, Optional, Union

from .exact import RootOfUnitySum, root_sum_is_zero

__all__ = [
    "Block",
    "DigitSet",
    "DirectSumCollisionError",
    "consecutive",
    "digit_set",
    "direct_sum",
    "alternating_equivalent_digits",
    "mask_eval",
    "mask_phase_sum",
    "mask_is_zero",
    "mask_zero_set",
    "LatticeComplement",
    "OddLattice",
    "ZeroSetExpr",
]


class DirectSumCollisionError(ValueError):
    """Raised when a claimed direct sum has colliding element sums."""


class Block(NamedTuple):
    scale: Fraction
    length: int


@dataclass(frozen=True)
class DigitSet:
    """Finite set of rationals, optionally carrying block structure.

    ``blocks`` records a construction D = (+)_i scale_i * {0..length_i - 1};
    when present it must reproduce ``elements`` exactly and without
    collisions.
    """

    elements: tuple[Fraction, ...]
    blocks: Optional[tuple[Block, ...]] = None

    def __post_init__(self):
        if not self.elements:
            raise ValueError("digit set must be nonempty")
        for a, b in zip(self.elements, self.elements[1:]):
            if not a < b:
                raise ValueError("elements must be strictly increasing")
        if self.blocks is not None:
            rebuilt = _expand_blocks(self.blocks)
            if rebuilt != set(self.elements):
                raise ValueError("blocks do not reproduce the elements")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return Fraction(x) in set(self.elements)

    def scaled(self, c: Fraction) -> "DigitSet":
        c = Fraction(c)
        if c == 0:
            raise ValueError("scaling a digit set by zero collapses it")
        els = tuple(sorted(e * c for e in self.elements))
        blocks = None
        if self.blocks is not None:
            blocks = tuple(Block(b.scale * c, b.length) for b in self.blocks)
        return DigitSet(els, blocks)

    def max_abs(self) -> Fraction:
        return max(abs(e) for e in self.elements)


def _expand_blocks(blocks: Iterable[Block]) -> set[Fraction]:
    acc = {Fraction(0)}
    for b in blocks:
        if b.length < 1:
            raise ValueError("block length must be positive")
        if b.scale == 0 and b.length > 1:
            raise ValueError("zero-scale block of length > 1 collides")
        nxt = {a + b.scale * i for a in acc for i in range(b.length)}
        if len(nxt) != len(acc) * b.length:
            raise DirectSumCollisionError("block expansion collides")
        acc = nxt
    return acc


def consecutive(n: int) -> DigitSet:
    """The digit set {0, 1, ..., n-1} with its one-block structure."""
    if n < 1:
        raise ValueError("need a positive number of digits")
    return DigitSet(tuple(Fraction(i) for i in range(n)), (Block(Fraction(1), n),))


def digit_set(values: Iterable) -> DigitSet:
    """Unstructured digit set from arbitrary rationals (must be distinct)."""
    vals = sorted(Fraction(v) for v in values)
    for a, b in zip(vals, vals[1:]):
        if a == b:
            raise ValueError(f"duplicate digit {a}")
    return DigitSet(tuple(vals), None)


def direct_sum(a: DigitSet, b: DigitSet) -> DigitSet:
    """D = a (+) b; raises DirectSumCollisionError if any sums coincide.

    Structure is kept only when both operands carry it.
    """
    sums: dict[Fraction, tuple[Fraction, Fraction]] = {}
    for x in a.elements:
        for y in b.elements:
            s = x + y
            if s in sums:
                px, py = sums[s]
                raise DirectSumCollisionError(
                    f"{px}+{py} and {x}+{y} both give {s}"
                )
            sums[s] = (x, y)
    blocks = None
    if a.blocks is not None and b.blocks is not None:
        blocks = a.blocks + b.blocks
    return DigitSet(tuple(sorted(sums)), blocks)


def alternating_equivalent_digits(m: int, npairs: int, ratio: Fraction) -> DigitSet:
    """Digit set of the uniform-contraction system equal in law to the
    sign-alternating system on {0, .., 2*m*npairs - 1} with block size m.

    The construction is the three-block direct sum

        {0..m-1} (+) 2m*{0..npairs-1} (+) (1 + m*ratio - 2*npairs*m)*{0,1}.
    """
    if m < 1 or npairs < 1:
        raise ValueError("m and npairs must be positive integers")
    ratio = Fraction(ratio)
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie strictly between 0 and 1")
    tail_scale = 1 + m * ratio - 2 * npairs * m
    out = direct_sum(consecutive(m), consecutive(npairs).scaled(Fraction(2 * m)))
    return direct_sum(out, consecutive(2).scaled(tail_scale))


# ---------------------------------------------------------------------------
# mask evaluation
# ---------------------------------------------------------------------------


def mask_eval(d: DigitSet, x) -> complex:
    """m_d(x) in double precision.  |result| <= 1 always.

    Rational x gets each phase reduced mod 1 exactly before rounding, so
    large arguments lose no precision to range reduction.
    """
    n = len(d)
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        total = 0j
        for e in d.elements:
            ph = (e * x) % 1
            total += cmath.exp(1j * tau * float(ph))
        return total / n
    xf = float(x)
    return sum(cmath.exp(1j * tau * float(e) * xf) for e in d.elements) / n


def mask_phase_sum(d: DigitSet, x: Fraction) -> RootOfUnitySum:
    """The unnormalized mask value  sum_d exp(2*pi*i*d*x)  as a formal
    root-of-unity sum, for exact zero testing.  Requires rational x."""
    x = Fraction(x)
    return RootOfUnitySum.from_phases([e * x for e in d.elements])


def mask_is_zero(d: DigitSet, x: Fraction) -> bool:
    """Exact test of m_d(x) == 0 for rational x."""
    return root_sum_is_zero(mask_phase_sum(d, x))


# ---------------------------------------------------------------------------
# zero set expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeComplement:
    """The set  scale * ((Z \\ modulus*Z) / modulus)."""

    scale: Fraction
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if self.scale == 0:
            raise ValueError("scale must be nonzero")

    def contains(self, x: Fraction) -> bool:
        k = Fraction(x) * self.modulus / self.scale
        return k.denominator == 1 and k.numerator % self.modulus != 0

    def min_abs(self) -> Fraction:
        return abs(self.scale) / self.modulus

    def scaled(self, c: Fraction) -> "LatticeComplement":
        return LatticeComplement(self.scale * c, self.modulus)


@dataclass(frozen=True)
class OddLattice:
    """The set  scale * (2*Z + 1) / (2*half_denominator)."""

    scale: Fraction
    half_denominator: Fraction

    def __post_init__(self):
        if self.scale == 0 or self.half_denominator == 0:
            raise ValueError("scale and half_denominator must be nonzero")

    def contains(self, x: Fraction) -> bool:
        k = 2 * self.half_denominator * Fraction(x) / self.scale
        return k.denominator == 1 and k.numerator % 2 != 0

    def min_abs(self) -> Fraction:
        return abs(self.scale) / (2 * abs(self.half_denominator))

    def scaled(self, c: Fraction) -> "OddLattice":
        return OddLattice(self.scale * c, self.half_denominator)


Atom = Union[LatticeComplement, OddLattice]


@dataclass(frozen=True)
class ZeroSetExpr:
    """fixed_atoms  U  U_{j >= min_exponent} base^j * (U atoms).

    ``base`` is None for a bare finite union of atoms.  Membership is exact
    for rational arguments: the dilation exponent is bounded because every
    atom has a positive minimum absolute value, so only finitely many j can
    place x inside base^j * atom.
    """

    atoms: tuple[Atom, ...]
    base: Optional[Fraction] = None
    min_exponent: int = 0
    fixed_atoms: tuple[Atom, ...] = field(default=())

    def __post_init__(self):
        if self.base is not None and abs(self.base) <= 1:
            raise ValueError("dilation base must have |base| > 1")
        if self.base is None and self.atoms:
            raise ValueError("family atoms given without a dilation base")

    def contains(self, x) -> bool:
        x = Fraction(x)
        if x == 0:
            return False
        if any(a.contains(x) for a in self.fixed_atoms):
            return True
        if self.base is None or not self.atoms:
            return False
        floor = min(a.min_abs() for a in self.atoms)
        power = self.base**self.min_exponent
        ax = abs(x)
        while floor * abs(power) <= ax:
            y = x / power
            if any(a.contains(y) for a in self.atoms):
                return True
            power *= self.base
        return False


def mask_zero_set(d: DigitSet) -> Optional[ZeroSetExpr]:
    """Exact zero set of m_d, or None (unknown) for unstructured d.

    For structured d the answer is complete: m_d factors over the blocks and
    each block's zeros are classical lattice sets.
    """
    if d.blocks is None:
        return None
    atoms: list[Atom] = []
    for b in d.blocks:
        if b.length == 1:
            continue
        if b.length == 2:
            atoms.append(OddLattice(Fraction(1), b.scale))
        else:
            atoms.append(LatticeComplement(1 / b.scale, b.length))
    return ZeroSetExpr(atoms=(), base=None, fixed_atoms=tuple(atoms))
