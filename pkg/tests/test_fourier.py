import cmath
import random
from fractions import Fraction

import pytest

from specfrac.digits import (
    alternating_equivalent_digits,
    consecutive,
    digit_set,
)
from specfrac.fourier import (
    Alternating,
    AlternatingSymmetric,
    CertifiedComplex,
    Moran,
    MoranFactor,
    SelfSimilar,
    _cocycle_value,
    _split_signs,
    check_alternating_uniform_identity,
    check_symmetric_phase_identity,
    ft_alternating,
    ft_discrete,
    ft_measure,
    ft_moran,
    ft_self_similar,
    measure_from_json,
    measure_to_json,
    measure_zero_set,
)

F = Fraction

QUARTER = SelfSimilar(F(1, 4), consecutive(2).scaled(2))


# ---------------------------------------------------------------------------
# spec construction and JSON
# ---------------------------------------------------------------------------


def test_ratio_must_be_contractive():
    with pytest.raises(ValueError):
        SelfSimilar(F(1), consecutive(2))
    with pytest.raises(ValueError):
        SelfSimilar(F(0), consecutive(2))
    with pytest.raises(ValueError):
        Alternating(F(5, 4), 1, 2)


def test_alternating_period_divides_count():
    Alternating(F(1, 2), 2, 6)
    with pytest.raises(ValueError):
        Alternating(F(1, 2), 2, 5)


def test_moran_needs_expanding_tail():
    MoranFactor(F(4), consecutive(2).scaled(2))
    with pytest.raises(ValueError):
        Moran((), (MoranFactor(F(1, 2), consecutive(2)),))
    # empty tail means a finite convolution, which is allowed
    Moran((MoranFactor(F(4), consecutive(2)),), ())


def test_json_round_trip():
    specs = [
        QUARTER,
        SelfSimilar(F(2, 7), consecutive(3)),
        Alternating(F(1, 8), 2, 8),
        AlternatingSymmetric(F(1, 3), 1),
        Moran(
            (MoranFactor(F(3), consecutive(3)),),
            (MoranFactor(F(4), consecutive(2).scaled(2)),),
        ),
    ]
    for spec in specs:
        assert measure_from_json(measure_to_json(spec)) == spec


def test_json_rejects_unknown_type():
    with pytest.raises(ValueError):
        measure_from_json({"type": "what", "rho": "1/2"})
    with pytest.raises(ValueError):
        measure_from_json({"rho": "1/2"})


def test_json_digit_forms():
    bare = measure_from_json(
        {"type": "self_similar", "rho": "1/4", "digits": ["0", "2"]}
    )
    assert bare.digits.blocks is None
    blocked = measure_from_json(
        {
            "type": "self_similar",
            "rho": "1/4",
            "digits": {"blocks": [{"scale": "2", "len": 2}]},
        }
    )
    assert blocked.digits.elements == (F(0), F(2))
    assert blocked.digits.blocks is not None


# ---------------------------------------------------------------------------
# discrete transform
# ---------------------------------------------------------------------------


def test_ft_discrete_examples():
    assert abs(ft_discrete(digit_set([0, 2]), F(1, 4))) < 1e-15
    assert ft_discrete(digit_set([0, 3, 11]), 0) == 1
    assert abs(ft_discrete(consecutive(2), F(1, 4)) - (1 + 1j) / 2) < 1e-15


# ---------------------------------------------------------------------------
# self-similar evaluator
# ---------------------------------------------------------------------------


def test_ft_self_similar_at_zero():
    cc = ft_self_similar(QUARTER, 0, 1e-9)
    assert cc.value == 1 and cc.error_bound == 0


def test_ft_self_similar_exact_zero_short_circuit():
    cc = ft_self_similar(QUARTER, F(1), 1e-9)
    assert cc.value == 0 and cc.error_bound == 0


def test_ft_self_similar_bounded():
    rng = random.Random(3)
    for _ in range(100):
        xi = rng.uniform(-20, 20)
        cc = ft_self_similar(QUARTER, xi, 1e-9)
        assert abs(cc.value) <= 1 + cc.error_bound
        assert cc.error_bound <= 1e-9


def test_ft_self_similar_known_value():
    # each factor for digits {0,2} is exp(2 pi i y) cos(2 pi y) with
    # y = xi/4^j; at xi = 1/2 the phases sum to pi/3
    magnitude = 1.0
    for j in range(1, 60):
        magnitude *= cmath.cos(cmath.pi / 4**j).real
    expected = cmath.exp(1j * cmath.pi / 3) * magnitude
    cc = ft_self_similar(QUARTER, F(1, 2), 1e-12)
    assert abs(cc.value - expected) < 1e-10


def test_tol_must_be_positive():
    with pytest.raises(ValueError):
        ft_self_similar(QUARTER, 1.0, 0.0)
    with pytest.raises(ValueError):
        ft_self_similar(QUARTER, 1.0, -1e-9)


# ---------------------------------------------------------------------------
# Moran evaluator
# ---------------------------------------------------------------------------


def test_ft_moran_matches_self_similar_encoding():
    moran = Moran((), (MoranFactor(F(4), consecutive(2).scaled(2)),))
    rng = random.Random(4)
    for _ in range(100):
        xi = rng.uniform(-15, 15)
        a = ft_moran(moran, xi, 1e-9)
        b = ft_self_similar(QUARTER, xi, 1e-9)
        assert abs(a.value - b.value) <= a.error_bound + b.error_bound


def test_ft_moran_prefix_only_single_factor():
    moran = Moran((MoranFactor(F(4), consecutive(2).scaled(2)),), ())
    cc = ft_moran(moran, F(1), 1e-9)
    assert cc.value == 0 and cc.error_bound == 0
    cc = ft_moran(moran, 0, 1e-9)
    assert cc.value == 1 and cc.error_bound == 0
    # finite product has no truncation error at all
    cc = ft_moran(moran, F(1, 3), 1e-9)
    assert cc.error_bound == 0
    assert abs(cc.value - ft_discrete(consecutive(2).scaled(2), F(1, 12))) < 1e-15


def test_ft_moran_mixed_prefix_tail():
    spec = Moran(
        (MoranFactor(F(3), consecutive(3)),),
        (
            MoranFactor(F(4), consecutive(2).scaled(2)),
            MoranFactor(F(6), consecutive(2).scaled(3)),
        ),
    )
    cc = ft_moran(spec, 0, 1e-9)
    assert cc.value == 1 and cc.error_bound == 0
    cc = ft_moran(spec, 1.7, 1e-9)
    assert abs(cc.value) <= 1 + cc.error_bound
    assert cc.error_bound <= 1e-9


# ---------------------------------------------------------------------------
# alternating evaluator
# ---------------------------------------------------------------------------


def test_ft_alternating_at_zero():
    spec = Alternating(F(1, 8), 2, 8)
    cc = ft_alternating(spec, 0, 1e-9)
    assert cc.value == 1 and cc.error_bound == 0


def test_ft_alternating_conjugate_symmetry():
    spec = Alternating(F(1, 8), 2, 8)
    rng = random.Random(12)
    for _ in range(100):
        xi = rng.uniform(-10, 10)
        a = ft_alternating(spec, xi, 1e-9)
        b = ft_alternating(spec, -xi, 1e-9)
        assert abs(a.value - b.value.conjugate()) <= a.error_bound + b.error_bound


def test_ft_alternating_agrees_with_uniform_route_at_one():
    alt = Alternating(F(1, 8), 2, 8)
    uni = SelfSimilar(F(1, 8), alternating_equivalent_digits(2, 2, F(1, 8)))
    a = ft_alternating(alt, 1.0, 1e-10)
    b = ft_self_similar(uni, 1.0, 1e-10)
    assert abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-12


def test_cocycle_consistency_one_extra_step():
    rng = random.Random(21)
    for spec in (Alternating(F(1, 8), 2, 8), AlternatingSymmetric(F(1, 3), 2)):
        plus, minus, maxd = _split_signs(spec)
        rho = spec.ratio
        for _ in range(25):
            xi = rng.uniform(-10, 10)
            depth = rng.randrange(3, 25)
            v1 = _cocycle_value(plus, minus, rho, xi, depth)
            v2 = _cocycle_value(plus, minus, rho, xi, depth + 1)
            seed_bound = (
                2 * cmath.pi * float(maxd) * float(rho) ** depth * abs(xi) / (1 - float(rho))
            )
            assert abs(v1 - v2) <= seed_bound + 1e-15


def test_identity_alternating_equals_uniform():
    for m, npairs, rho in [(1, 1, F(1, 2)), (2, 2, F(1, 8))]:
        rep = check_alternating_uniform_identity(m, npairs, rho, samples=50)
        assert rep.passed, rep


def test_identity_holds_for_non_reciprocal_ratio():
    rep = check_alternating_uniform_identity(2, 1, F(3, 7), samples=50)
    assert rep.passed, rep


def test_identity_symmetric_phase():
    for radius, rho in [(1, F(1, 3)), (2, F(1, 5))]:
        rep = check_symmetric_phase_identity(radius, rho, samples=50)
        assert rep.passed, rep


def test_identity_report_fields():
    rep = check_alternating_uniform_identity(1, 1, F(1, 2), samples=10, seed=5)
    assert rep.samples == 10 and rep.seed == 5
    assert rep.max_abs_diff >= 0
    assert rep.passed == (rep.max_excess <= 0)


# ---------------------------------------------------------------------------
# cross-cutting properties
# ---------------------------------------------------------------------------

POOL = [
    QUARTER,
    SelfSimilar(F(2, 7), consecutive(3)),
    SelfSimilar(F(1, 8), alternating_equivalent_digits(2, 2, F(1, 8))),
    Alternating(F(1, 8), 2, 8),
    Alternating(F(1, 5), 1, 3),
    AlternatingSymmetric(F(1, 3), 1),
    Moran(
        (MoranFactor(F(3), consecutive(3)),),
        (MoranFactor(F(4), consecutive(2).scaled(2)),),
    ),
]


def test_certification_honesty_tol_vs_hundredth():
    rng = random.Random(17)
    tol = 1e-7
    for _ in range(500):
        spec = rng.choice(POOL)
        xi = rng.uniform(-12, 12)
        a = ft_measure(spec, xi, tol)
        b = ft_measure(spec, xi, tol / 100)
        assert abs(a.value - b.value) <= tol


def test_transforms_bounded_by_one():
    rng = random.Random(18)
    for _ in range(200):
        spec = rng.choice(POOL)
        xi = rng.uniform(-20, 20)
        cc = ft_measure(spec, xi, 1e-9)
        assert abs(cc.value) <= 1 + cc.error_bound


def test_zero_set_agreement():
    spec = SelfSimilar(F(1, 8), alternating_equivalent_digits(2, 2, F(1, 8)))
    zs = measure_zero_set(spec)
    assert zs is not None
    assert zs.contains(F(4))
    rng = random.Random(19)
    hits = 0
    for _ in range(400):
        x = F(rng.randint(-4000, 4000), rng.choice([1, 2, 4, 27, 54]))
        if not zs.contains(x):
            continue
        hits += 1
        cc = ft_measure(spec, x, 1e-9)
        assert abs(cc.value) <= cc.error_bound + 1e-10
    assert hits >= 20


def test_measure_zero_set_variants():
    assert measure_zero_set(SelfSimilar(F(1, 4), digit_set([0, 1, 3]))) is None
    assert measure_zero_set(Alternating(F(1, 5), 1, 3)) is None  # odd run count
    even = measure_zero_set(Alternating(F(1, 8), 2, 8))
    assert even is not None and even.contains(F(4))
    sym = measure_zero_set(AlternatingSymmetric(F(1, 3), 1))
    uni = measure_zero_set(SelfSimilar(F(1, 3), consecutive(3)))
    assert sym is not None
    for x in (F(1, 3), F(1), F(3), F(5, 3), F(1, 2)):
        assert sym.contains(x) == uni.contains(x)


def test_certified_complex_interval_helpers():
    cc = CertifiedComplex(0.5 + 0j, 0.1)
    assert cc.abs_upper() == pytest.approx(0.6)
    assert cc.abs_lower() == pytest.approx(0.4)
    assert CertifiedComplex(0.05 + 0j, 0.1).abs_lower() == 0.0
