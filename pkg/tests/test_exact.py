import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specfrac.exact import (
    RootOfUnitySum,
    cyclotomic,
    format_rational,
    parse_rational,
    rational_pow,
    root_sum_is_zero,
)


# ---------------------------------------------------------------------------
# rationals
# ---------------------------------------------------------------------------


@given(st.integers(-10**12, 10**12), st.integers(1, 10**12))
def test_parse_format_round_trip(num, den):
    x = Fraction(num, den)
    assert parse_rational(format_rational(x)) == x


def test_format_integers_without_denominator():
    assert format_rational(Fraction(7)) == "7"
    assert format_rational(Fraction(-3)) == "-3"
    assert format_rational(Fraction(1, 2)) == "1/2"


def test_parse_normalizes():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("4/2") == Fraction(2)
    assert parse_rational(" 7 ") == Fraction(7)


@pytest.mark.parametrize("bad", ["", "a", "1//2", "1/0", "1/2/3", "1.5.2", None])
def test_parse_rejects_garbage(bad):
    with pytest.raises((ValueError, TypeError)):
        parse_rational(bad)


def test_rational_pow():
    assert rational_pow(Fraction(1, 4), 2) == Fraction(1, 16)
    assert rational_pow(Fraction(1, 4), 0) == Fraction(1)
    assert rational_pow(Fraction(2, 3), -1) == Fraction(3, 2)
    assert rational_pow(Fraction(-2, 3), 3) == Fraction(-8, 27)
    with pytest.raises(ValueError):
        rational_pow(Fraction(0), -1)


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

KNOWN_CYCLOTOMIC = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    5: (1, 1, 1, 1, 1),
    6: (1, -1, 1),
    8: (1, 0, 0, 0, 1),
    9: (1, 0, 0, 1, 0, 0, 1),
    12: (1, 0, -1, 0, 1),
}


def test_cyclotomic_known_values():
    for n, coeffs in KNOWN_CYCLOTOMIC.items():
        assert cyclotomic(n) == coeffs


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8, 12, 15, 24, 30, 36, 105])
def test_cyclotomic_degree_and_divisor_product(n):
    assert len(cyclotomic(n)) - 1 == _totient(n)
    prod = [1]
    for d in range(1, n + 1):
        if n % d == 0:
            prod = _poly_mul(prod, cyclotomic(d))
    expected = [0] * (n + 1)
    expected[0], expected[n] = -1, 1
    assert prod == expected


# ---------------------------------------------------------------------------
# root-of-unity sums
# ---------------------------------------------------------------------------


def test_zero_examples():
    assert root_sum_is_zero(RootOfUnitySum(2, {0: 1, 1: 1}))
    assert not root_sum_is_zero(RootOfUnitySum(3, {0: 1, 1: 1}))
    assert root_sum_is_zero(RootOfUnitySum(8, {0: 1, 1: 1, 4: 1, 5: 1}))


@pytest.mark.parametrize("order", range(2, 41))
def test_full_orbit_sums_vanish(order):
    s = RootOfUnitySum(order, {k: 1 for k in range(order)})
    assert s.is_zero()


def test_order_one_is_plain_integer():
    assert not RootOfUnitySum(1, {0: 3}).is_zero()
    assert RootOfUnitySum(1, {}).is_zero()


def test_residues_normalized_mod_order():
    a = RootOfUnitySum(6, {7: 2, -1: 1})
    b = RootOfUnitySum(6, {1: 2, 5: 1})
    assert a.equals(b)


def test_value_matches_complex_arithmetic():
    rng = random.Random(7)
    for _ in range(50):
        m = rng.randrange(1, 40)
        coeffs = {rng.randrange(m): rng.randint(-4, 4) for _ in range(4)}
        s = RootOfUnitySum(m, coeffs)
        direct = sum(
            c * complex(math.cos(2 * math.pi * k / m), math.sin(2 * math.pi * k / m))
            for k, c in coeffs.items()
        )
        assert abs(s.value() - direct) < 1e-9


def test_arithmetic_consistency():
    a = RootOfUnitySum(12, {0: 1, 3: 2})
    b = RootOfUnitySum(8, {1: 1, 5: -1})
    assert abs((a + b).value() - (a.value() + b.value())) < 1e-12
    assert abs((a - b).value() - (a.value() - b.value())) < 1e-12
    assert abs((a * b).value() - a.value() * b.value()) < 1e-12
    assert abs((-a).value() + a.value()) < 1e-12


def test_from_phases_matches_mask_numerator():
    phases = [Fraction(0), Fraction(1, 2)]
    s = RootOfUnitySum.from_phases(phases)
    assert s.is_zero()
    s2 = RootOfUnitySum.from_phases([Fraction(0), Fraction(1, 3), Fraction(2, 3)])
    assert s2.is_zero()
    assert not RootOfUnitySum.from_phases([Fraction(0), Fraction(1, 3)]).is_zero()


def test_rotation_preserves_zeroness():
    rng = random.Random(11)
    for _ in range(200):
        m = rng.randrange(2, 60)
        coeffs = {rng.randrange(m): rng.randint(-5, 5) for _ in range(rng.randrange(1, 6))}
        s = RootOfUnitySum(m, coeffs)
        t = rng.randrange(m)
        assert s.is_zero() == s.rotated(t).is_zero()


def test_galois_conjugation_preserves_zeroness():
    # substituting zeta -> zeta^u for a unit u mod M is a field automorphism
    rng = random.Random(13)
    for _ in range(200):
        m = rng.randrange(2, 60)
        coeffs = {rng.randrange(m): rng.randint(-5, 5) for _ in range(rng.randrange(1, 6))}
        s = RootOfUnitySum(m, coeffs)
        units = [u for u in range(1, m) if math.gcd(u, m) == 1]
        u = rng.choice(units)
        mapped: dict = {}
        for k, c in s.coeffs:
            kk = (k * u) % m
            mapped[kk] = mapped.get(kk, 0) + c
        assert s.is_zero() == RootOfUnitySum(m, mapped).is_zero()


# ---------------------------------------------------------------------------
# the big oracle run: exact test vs 50-digit evaluation
# ---------------------------------------------------------------------------


def _mp_value(order, coeffs, cache):
    total = mpmath.mpc(0)
    for k, c in coeffs:
        key = (k, order)
        z = cache.get(key)
        if z is None:
            z = mpmath.expjpi(mpmath.mpf(2 * k) / order)
            cache[key] = z
        total += c * z
    return total


def _random_sum(rng):
    m = rng.randrange(1, 361)
    coeffs: dict = {}
    for _ in range(rng.randrange(1, 9)):
        k = rng.randrange(m)
        coeffs[k] = coeffs.get(k, 0) + rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5])
    return RootOfUnitySum(m, coeffs)


def _engineered_zero(rng):
    # c * zeta^t * (sum of all d-th roots of unity) = 0 for d >= 2
    m = rng.randrange(2, 361)
    divisors = [d for d in range(2, m + 1) if m % d == 0]
    d = rng.choice(divisors)
    t = rng.randrange(m)
    c = rng.choice([-5, -3, -2, -1, 1, 2, 3, 5])
    coeffs: dict = {}
    for j in range(d):
        k = (t + j * (m // d)) % m
        coeffs[k] = coeffs.get(k, 0) + c
    s = RootOfUnitySum(m, coeffs)
    if rng.random() < 0.5:
        other = _engineered_zero_plain(rng, m)
        s = s + other
    return s


def _engineered_zero_plain(rng, m):
    divisors = [d for d in range(2, m + 1) if m % d == 0]
    d = rng.choice(divisors)
    t = rng.randrange(m)
    c = rng.choice([-2, -1, 1, 2])
    return RootOfUnitySum(m, {(t + j * (m // d)) % m: c for j in range(d)})


def test_oracle_agreement_on_ten_thousand_sums():
    mpmath.mp.dps = 50
    rng = random.Random(20260816)
    cache: dict = {}
    zeros = nonzeros = 0
    for i in range(10_000):
        s = _engineered_zero(rng) if i % 4 == 0 else _random_sum(rng)
        numeric_zero = abs(_mp_value(s.order, s.coeffs, cache)) < mpmath.mpf("1e-30")
        exact_zero = s.is_zero()
        assert exact_zero == numeric_zero, (s.order, s.coeffs)
        if exact_zero:
            zeros += 1
        else:
            nonzeros += 1
    # both branches must actually be exercised
    assert zeros >= 2000 and nonzeros >= 2000
