"""Certified Fourier transforms of self-similar, factor, and alternating measures.

Measures are described by small spec dataclasses:

* ``SelfSimilar(ratio, digits)``: the equal-weight invariant measure of the
  maps x -> ratio*(x + d), d in digits.  Its transform is the infinite
  product  prod_{j>=1} m_digits(ratio^j * xi).
* ``Moran(prefix, tail)``: an infinite convolution with factor masks
  m_{R_k}(xi / (b_1 ... b_k)); ``tail`` repeats forever (it may be empty,
  which leaves a finite convolution).
* ``Alternating(ratio, period, count)``: digits {0..count-1} where the map
  for digit d contracts by +ratio or -ratio according to the parity of
  d // period.  No product formula exists; instead the pair
  F(t) = (F^(t), F^(-t)) of transform values satisfies a linear two-term
  recursion F(t) = M(ratio*t) F(ratio*t) whose 2x2 matrices have rows that
  are convex combinations of unit phasors, hence max-norm at most 1.  We
  iterate the recursion down to a seed F(ratio^K t) ~ (1, 1) and certify the
  seed error with a Lipschitz bound; the matrices cannot amplify it.
* ``AlternatingSymmetric(ratio, radius)``: digits {-radius..radius} with
  sign (-1)^d, handled by the same recursion.

Every evaluator returns a ``CertifiedComplex``: a double-precision value and
a rigorous truncation bound (floating rounding is not tracked).  Truncation
bounds rest on two facts: each factor has modulus <= 1, and
|m_R(x) - 1| <= 2*pi*max|R|*|x|.  For rational arguments the evaluators
first scan the finitely many factors that could vanish (a mask zero needs
|x| >= 1/(2*pi*max|R|)) with the exact root-of-unity test and return an
exact zero when they find one.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, tau
from typing import Optional, Union

from .digits import (
    DigitSet,
    ZeroSetExpr,
    alternating_equivalent_digits,
    consecutive,
    digit_set,
    mask_eval,
    mask_is_zero,
    mask_zero_set,
)
from .exact import format_rational, parse_rational

__all__ = [
    "CertifiedComplex",
    "SelfSimilar",
    "Alternating",
    "AlternatingSymmetric",
    "MoranFactor",
    "Moran",
    "MeasureSpec",
    "measure_from_json",
    "measure_to_json",
    "measure_zero_set",
    "ft_discrete",
    "ft_self_similar",
    "ft_moran",
    "ft_alternating",
    "ft_measure",
    "IdentityCheckReport",
    "check_alternating_uniform_identity",
    "check_symmetric_phase_identity",
]

_MAX_FACTORS = 2_000_000  # hard cap on truncation depth; hit only by absurd tolerances

# the exact vanishing test reduces modulo a cyclotomic polynomial whose order
# is the lcm of the phase denominators; construction is quadratic-ish in the
# order, so past this cap the evaluators keep the certified numeric value
_MAX_EXACT_ORDER = 10**4


def _exact_zero_test_feasible(digits: DigitSet, arg: Fraction) -> bool:
    order = 1
    for e in digits.elements:
        order = lcm(order, (e * arg).denominator)
        if order > _MAX_EXACT_ORDER:
            return False
    return True


@dataclass(frozen=True)
class CertifiedComplex:
    """A value together with a bound on |true - value| (truncation only)."""

    value: complex
    error_bound: float

    def abs_upper(self) -> float:
        return abs(self.value) + self.error_bound

    def abs_lower(self) -> float:
        return max(0.0, abs(self.value) - self.error_bound)


def _check_ratio(ratio: Fraction) -> None:
    if not 0 < ratio < 1:
        raise ValueError("contraction ratio must lie strictly between 0 and 1")


@dataclass(frozen=True)
class SelfSimilar:
    ratio: Fraction
    digits: DigitSet

    def __post_init__(self):
        _check_ratio(self.ratio)


@dataclass(frozen=True)
class Alternating:
    ratio: Fraction
    period: int  # run length of equal signs
    count: int  # number of digits; period must divide count

    def __post_init__(self):
        _check_ratio(self.ratio)
        if self.period < 1 or self.count < 1:
            raise ValueError("period and count must be positive")
        if self.count % self.period:
            raise ValueError("period must divide count")


@dataclass(frozen=True)
class AlternatingSymmetric:
    ratio: Fraction
    radius: int  # digits -radius .. radius, sign (-1)^d

    def __post_init__(self):
        _check_ratio(self.ratio)
        if self.radius < 1:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class MoranFactor:
    expansion: Fraction  # b_k
    digits: DigitSet

    def __post_init__(self):
        if self.expansion == 0:
            raise ValueError("expansion must be nonzero")


@dataclass(frozen=True)
class Moran:
    prefix: tuple[MoranFactor, ...]
    tail: tuple[MoranFactor, ...]  # repeats forever; may be empty

    def __post_init__(self):
        if not self.prefix and not self.tail:
            raise ValueError("need at least one factor")
        if self.tail:
            b = Fraction(1)
            for f in self.tail:
                b *= f.expansion
            if abs(b) <= 1:
                raise ValueError(
                    "periodic tail must expand: |product of expansions| > 1"
                )


MeasureSpec = Union[SelfSimilar, Alternating, AlternatingSymmetric, Moran]


# ---------------------------------------------------------------------------
# JSON forms (external interface)
# ---------------------------------------------------------------------------


def _rational_from_json(v) -> Fraction:
    # exact wire forms only: integers or "a/b" strings, never floats
    if isinstance(v, bool):
        raise ValueError(f"expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    return parse_rational(v)


def _digits_from_json(obj) -> DigitSet:
    from functools import reduce

    from .digits import direct_sum

    if isinstance(obj, list):
        return digit_set(_rational_from_json(s) for s in obj)
    if isinstance(obj, dict):
        if "blocks" in obj:
            parts = []
            for b in obj["blocks"]:
                parts.append(
                    consecutive(int(b["len"])).scaled(_rational_from_json(b["scale"]))
                )
            built = reduce(direct_sum, parts)
            if "elements" in obj:
                want = tuple(sorted(_rational_from_json(s) for s in obj["elements"]))
                if want != built.elements:
                    raise ValueError("elements do not match the declared blocks")
            return built
        if "elements" in obj:
            return digit_set(_rational_from_json(s) for s in obj["elements"])
    raise ValueError("digit set must be an array or an object with blocks/elements")


def _digits_to_json(d: DigitSet):
    if d.blocks is None:
        return [format_rational(e) for e in d.elements]
    return {
        "elements": [format_rational(e) for e in d.elements],
        "blocks": [{"scale": format_rational(b.scale), "len": b.length} for b in d.blocks],
    }


def measure_from_json(obj: dict) -> MeasureSpec:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ValueError("measure spec must be an object with a 'type' field")
    t = obj["type"]
    if t == "self_similar":
        return SelfSimilar(
            _rational_from_json(obj["rho"]), _digits_from_json(obj["digits"])
        )
    if t == "alternating":
        return Alternating(_rational_from_json(obj["rho"]), int(obj["m"]), int(obj["n"]))
    if t == "alternating_symmetric":
        return AlternatingSymmetric(_rational_from_json(obj["rho"]), int(obj["n"]))
    if t == "moran":
        def factors(key):
            return tuple(
                MoranFactor(_rational_from_json(f["b"]), _digits_from_json(f["R"]))
                for f in obj.get(key, [])
            )

        return Moran(factors("prefix"), factors("tail"))
    raise ValueError(f"unknown measure type {t!r}")


def measure_to_json(spec: MeasureSpec) -> dict:
    if isinstance(spec, SelfSimilar):
        return {
            "type": "self_similar",
            "rho": format_rational(spec.ratio),
            "digits": _digits_to_json(spec.digits),
        }
    if isinstance(spec, Alternating):
        return {
            "type": "alternating",
            "rho": format_rational(spec.ratio),
            "m": spec.period,
            "n": spec.count,
        }
    if isinstance(spec, AlternatingSymmetric):
        return {
            "type": "alternating_symmetric",
            "rho": format_rational(spec.ratio),
            "n": spec.radius,
        }
    if isinstance(spec, Moran):
        return {
            "type": "moran",
            "prefix": [
                {"b": format_rational(f.expansion), "R": _digits_to_json(f.digits)}
                for f in spec.prefix
            ],
            "tail": [
                {"b": format_rational(f.expansion), "R": _digits_to_json(f.digits)}
                for f in spec.tail
            ],
        }
    raise TypeError(f"not a measure spec: {spec!r}")


# ---------------------------------------------------------------------------
# measure-level zero sets
# ---------------------------------------------------------------------------


def measure_zero_set(spec: MeasureSpec) -> Optional[ZeroSetExpr]:
    """Exact zero set of the transform, or None when no exact form is known.

    Self-similar (structured digits): union over j >= 1 of (1/ratio)^j times
    the mask zeros.  Alternating with an even number of sign runs reduces to
    an equivalent uniform system; an odd number of runs has no known exact
    zero set.  The symmetric family differs from a uniform system by a
    nonvanishing phase, so it inherits the uniform zero set verbatim.
    """
    if isinstance(spec, SelfSimilar):
        mz = mask_zero_set(spec.digits)
        if mz is None:
            return None
        atoms = mz.fixed_atoms
        if not atoms:
            return ZeroSetExpr(atoms=(), base=None)
        return ZeroSetExpr(atoms=atoms, base=1 / spec.ratio, min_exponent=1)
    if isinstance(spec, Alternating):
        runs = spec.count // spec.period
        if runs % 2:
            return None
        equiv = alternating_equivalent_digits(spec.period, runs // 2, spec.ratio)
        return measure_zero_set(SelfSimilar(spec.ratio, equiv))
    if isinstance(spec, AlternatingSymmetric):
        uniform = SelfSimilar(spec.ratio, consecutive(2 * spec.radius + 1))
        return measure_zero_set(uniform)
    if isinstance(spec, Moran):
        fixed: list = []
        cumul = Fraction(1)
        for f in spec.prefix:
            cumul *= f.expansion
            mz = mask_zero_set(f.digits)
            if mz is None:
                return None
            fixed.extend(a.scaled(cumul) for a in mz.fixed_atoms)
        family: list = []
        if spec.tail:
            partial = cumul
            for f in spec.tail:
                partial *= f.expansion
                mz = mask_zero_set(f.digits)
                if mz is None:
                    return None
                family.extend(a.scaled(partial) for a in mz.fixed_atoms)
        if not family:
            return ZeroSetExpr(atoms=(), base=None, fixed_atoms=tuple(fixed))
        base = Fraction(1)
        for f in spec.tail:
            base *= f.expansion
        return ZeroSetExpr(
            atoms=tuple(family), base=base, min_exponent=0, fixed_atoms=tuple(fixed)
        )
    raise TypeError(f"not a measure spec: {spec!r}")


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------


def ft_discrete(digits: DigitSet, xi) -> complex:
    """Transform of the uniform atomic measure on ``digits``: the mask."""
    return mask_eval(digits, xi)


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def _validate_tol(tol: float) -> None:
    if not tol > 0:
        raise ValueError("tol must be positive")


def ft_self_similar(spec: SelfSimilar, xi, tol: float = 1e-9) -> CertifiedComplex:
    """prod_{j>=1} m_D(ratio^j xi), truncated with a certified tail bound.

    The tail after J factors is bounded by sum_{j>J} 2*pi*max|D|*ratio^j*|xi|
    (each omitted factor differs from 1 by at most its term, and all factors
    have modulus <= 1).  J is chosen to push that below tol/2.  Rational xi
    with an exactly vanishing factor returns CertifiedComplex(0, 0).
    """
    _validate_tol(tol)
    digits = spec.digits
    maxd = digits.max_abs()
    if xi == 0 or maxd == 0:
        return CertifiedComplex(1 + 0j, 0.0)
    rho = spec.ratio
    rf = float(rho)
    big = tau * float(maxd) * abs(float(xi))
    tail = big * rf / (1 - rf)
    depth = 0
    while tail > tol / 2:
        tail *= rf
        depth += 1
        if depth > _MAX_FACTORS:
            raise ValueError("tolerance unreachably small for this spec")

    value = 1 + 0j
    if _is_rational(xi):
        x = Fraction(xi)
        arg = x
        j = 0
        while True:
            j += 1
            arg *= rho
            in_zero_range = 7 * maxd * abs(arg) >= 1
            if j > depth and not in_zero_range:
                break
            if (
                in_zero_range
                and _exact_zero_test_feasible(digits, arg)
                and mask_is_zero(digits, arg)
            ):
                return CertifiedComplex(0j, 0.0)
            if j <= depth:
                value *= mask_eval(digits, arg)
    else:
        xf = float(xi)
        for j in range(1, depth + 1):
            value *= mask_eval(digits, rf**j * xf)
    return CertifiedComplex(value, tail)


def ft_moran(spec: Moran, xi, tol: float = 1e-9) -> CertifiedComplex:
    """Infinite convolution transform  prod_k m_{R_k}(xi / (b_1..b_k)).

    The prefix is consumed in full; tail periods are appended until the
    remaining-factor bound drops below tol/2 (a geometric series across
    periods) and, for rational xi, until no remaining factor could vanish.
    An empty tail yields the finite product exactly (bound 0).
    """
    _validate_tol(tol)
    if xi == 0:
        return CertifiedComplex(1 + 0j, 0.0)
    rational = _is_rational(xi)
    x = Fraction(xi) if rational else None
    xf = float(xi)

    value = 1 + 0j
    cumul = Fraction(1)

    def one_factor(f: MoranFactor):
        nonlocal value, cumul
        cumul *= f.expansion
        maxr = f.digits.max_abs()
        if rational:
            arg = x / cumul
            if (
                maxr > 0
                and 7 * maxr * abs(arg) >= 1
                and _exact_zero_test_feasible(f.digits, arg)
                and mask_is_zero(f.digits, arg)
            ):
                return True
            value *= mask_eval(f.digits, arg)
        else:
            value *= mask_eval(f.digits, xf / float(cumul))
        return False

    for f in spec.prefix:
        if one_factor(f):
            return CertifiedComplex(0j, 0.0)
    if not spec.tail:
        return CertifiedComplex(value, 0.0)

    period = spec.tail
    base = Fraction(1)
    partials = []
    for f in period:
        base *= f.expansion
        partials.append(abs(base))
    min_partial = min(partials)
    max_tail_digit = max(f.digits.max_abs() for f in period)
    # remaining bound after a period boundary with cumulative product c:
    #   (|xi| / |c|) * per_period / (1 - 1/|B|)
    per_period = sum(
        tau * float(f.digits.max_abs()) / float(p) for f, p in zip(period, partials)
    )
    geo = 1 - 1 / float(abs(base))

    periods = 0
    while True:
        rest = (abs(xf) / float(abs(cumul))) * per_period / geo
        vanish_possible = (
            rational
            and max_tail_digit > 0
            and 7 * max_tail_digit * abs(x) >= abs(cumul) * min_partial
        )
        if rest <= tol / 2 and not vanish_possible:
            return CertifiedComplex(value, rest)
        for f in period:
            if one_factor(f):
                return CertifiedComplex(0j, 0.0)
        periods += 1
        if periods * len(period) > _MAX_FACTORS:
            raise ValueError("tolerance unreachably small for this spec")


def _split_signs(spec) -> tuple[list[int], list[int], Fraction]:
    if isinstance(spec, Alternating):
        digits = range(spec.count)
        plus = [d for d in digits if (d // spec.period) % 2 == 0]
        minus = [d for d in digits if (d // spec.period) % 2 == 1]
    elif isinstance(spec, AlternatingSymmetric):
        digits = range(-spec.radius, spec.radius + 1)
        plus = [d for d in digits if d % 2 == 0]
        minus = [d for d in digits if d % 2 == 1]
    else:
        raise TypeError(f"not an alternating spec: {spec!r}")
    maxd = max(abs(Fraction(d)) for d in [*plus, *minus])
    return plus, minus, maxd


def _phasor_sum(ds: list[int], y, sign: int) -> complex:
    # sum of exp(sign * 2*pi*i * d * y); rational y reduced mod 1 per term
    if isinstance(y, Fraction):
        total = 0j
        for d in ds:
            ph = (d * y * sign) % 1
            total += cmath.exp(1j * tau * float(ph))
        return total
    return sum(cmath.exp(sign * 1j * tau * d * y) for d in ds)


def ft_alternating(spec, xi, tol: float = 1e-9) -> CertifiedComplex:
    """Transform of a sign-alternating system via the two-component recursion.

    With S+(y) = sum over plus-digits of exp(2*pi*i*d*y) and S-(y) the
    conjugate-signed sum over minus-digits, the pair F(t) = (F^(t), F^(-t))
    satisfies F(t) = M(ratio*t) F(ratio*t),

        M(y) = (1/n) [[S+(y), S-(y)], [conj(S-(y)), conj(S+(y))]],

    whose rows are convex combinations of unit phasors, so the iteration
    cannot amplify the seed error.  Seeding F(ratio^K t) = (1, 1) is off by
    at most 2*pi*max|d|*ratio^K*|xi|/(1-ratio); K is chosen to push that
    below tol/2.
    """
    _validate_tol(tol)
    plus, minus, maxd = _split_signs(spec)
    if xi == 0 or maxd == 0:
        return CertifiedComplex(1 + 0j, 0.0)
    rho = spec.ratio
    rf = float(rho)
    err = tau * float(maxd) * abs(float(xi)) / (1 - rf)
    depth = 0
    while err > tol / 2:
        err *= rf
        depth += 1
        if depth > _MAX_FACTORS:
            raise ValueError("tolerance unreachably small for this spec")

    value = _cocycle_value(plus, minus, spec.ratio, xi, depth)
    return CertifiedComplex(value, err)


def _cocycle_value(plus, minus, rho: Fraction, xi, depth: int) -> complex:
    """Run the two-component recursion for exactly ``depth`` steps from the
    seed (1, 1)."""
    n = len(plus) + len(minus)
    rational = _is_rational(xi)
    rf = float(rho)
    fp = fm = 1 + 0j
    for j in range(depth, 0, -1):
        y = Fraction(xi) * rho**j if rational else rf**j * float(xi)
        sp = _phasor_sum(plus, y, +1)
        sm = _phasor_sum(minus, y, -1)
        fp, fm = (sp * fp + sm * fm) / n, (sm.conjugate() * fp + sp.conjugate() * fm) / n
    return fp


def ft_measure(spec: MeasureSpec, xi, tol: float = 1e-9) -> CertifiedComplex:
    """Dispatch on the measure spec type."""
    if isinstance(spec, SelfSimilar):
        return ft_self_similar(spec, xi, tol)
    if isinstance(spec, Moran):
        return ft_moran(spec, xi, tol)
    if isinstance(spec, (Alternating, AlternatingSymmetric)):
        return ft_alternating(spec, xi, tol)
    raise TypeError(f"not a measure spec: {spec!r}")


# ---------------------------------------------------------------------------
# dual-route identity checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCheckReport:
    samples: int
    window: float
    tol: float
    seed: int
    max_abs_diff: float
    worst_xi: float
    max_excess: float  # max over samples of |diff| - (tol + both bounds)
    passed: bool


def _compare_on_samples(eval_a, eval_b, samples, window, tol, seed):
    rng = random.Random(seed)
    worst_diff = -1.0
    worst_xi = 0.0
    max_excess = float("-inf")
    for _ in range(samples):
        xi = rng.uniform(-window, window)
        a = eval_a(xi)
        b = eval_b(xi)
        diff = abs(a.value - b.value)
        excess = diff - (tol + a.error_bound + b.error_bound)
        if diff > worst_diff:
            worst_diff = diff
            worst_xi = xi
        max_excess = max(max_excess, excess)
    return IdentityCheckReport(
        samples=samples,
        window=window,
        tol=tol,
        seed=seed,
        max_abs_diff=worst_diff,
        worst_xi=worst_xi,
        max_excess=max_excess,
        passed=max_excess <= 0,
    )


def check_alternating_uniform_identity(
    m: int,
    npairs: int,
    ratio: Fraction,
    samples: int = 200,
    window: float = 10.0,
    tol: float = 1e-8,
    seed: int = 20260816,
) -> IdentityCheckReport:
    """Cross-check the two evaluators that must agree in law: the alternating
    system with 2*npairs sign runs of length m against the uniform system on
    the equivalent three-block digit set.  Passes when every sampled point
    satisfies |difference| <= tol + both certified bounds."""
    alt = Alternating(Fraction(ratio), m, 2 * m * npairs)
    uni = SelfSimilar(Fraction(ratio), alternating_equivalent_digits(m, npairs, ratio))
    return _compare_on_samples(
        lambda x: ft_alternating(alt, x, tol),
        lambda x: ft_self_similar(uni, x, tol),
        samples,
        window,
        tol,
        seed,
    )


def check_symmetric_phase_identity(
    radius: int,
    ratio: Fraction,
    samples: int = 200,
    window: float = 10.0,
    tol: float = 1e-8,
    seed: int = 20260816,
) -> IdentityCheckReport:
    """The symmetric alternating system equals a unit phase times the uniform
    system on {0..2*radius}: check
    F_alt(t) = exp(-2*pi*i*radius*ratio*t/(1-ratio)) * F_uniform(t)."""
    ratio = Fraction(ratio)
    alt = AlternatingSymmetric(ratio, radius)
    uni = SelfSimilar(ratio, consecutive(2 * radius + 1))
    shift = float(radius * ratio / (1 - ratio))

    def rhs(x):
        cc = ft_self_similar(uni, x, tol)
        phase = cmath.exp(-1j * tau * shift * float(x))
        return CertifiedComplex(phase * cc.value, cc.error_bound)

    return _compare_on_samples(
        lambda x: ft_alternating(alt, x, tol), rhs, samples, window, tol, seed
    )
