"""Exact and certified computation for fractal spectral measures.

The package decides orthogonality and spectrality questions for a family
of self-similar and sign-alternating measures with exact rational
arithmetic wherever an algebraic criterion exists (vanishing sums of
roots of unity, structured mask zero sets, Hadamard triples) and with
certified-error numerics everywhere else.
"""

from .exact import (
    RootOfUnitySum,
    cyclotomic,
    format_rational,
    parse_rational,
    rational_pow,
    root_sum_is_zero,
)
from .digits import (
    Block,
    DigitSet,
    DirectSumCollisionError,
    LatticeComplement,
    OddLattice,
    ZeroSetExpr,
    alternating_equivalent_digits,
    consecutive,
    digit_set,
    direct_sum,
    mask_eval,
    mask_is_zero,
    mask_zero_set,
)
from .fourier import (
    Alternating,
    AlternatingSymmetric,
    CertifiedComplex,
    IdentityCheckReport,
    MeasureSpec,
    Moran,
    MoranFactor,
    SelfSimilar,
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
from .hadamard import (
    HadamardCertificate,
    HadamardFailure,
    ProductFormCertificate,
    Stage,
    VerificationReport,
    build_product_form,
    certificate_from_json,
    certificate_to_json,
    check_hadamard,
    search_companion,
    unitarity_defect,
    verify_certificate,
    verify_product_form,
)
from .spectra import (
    CertifiedReal,
    DecompositionResult,
    MaxFamilyResult,
    MembershipUndecidableError,
    OrthogonalityResult,
    SpectralityDecision,
    canonical_spectrum,
    completeness_sum,
    decompose_spectrum,
    even_superset_candidates,
    freqset,
    is_orthogonal,
    max_orthogonal_family,
    odd_family_zero_superset_member,
    odd_superset_candidates,
    orthogonality_bound,
    spectrality_decision,
    superset_candidates,
    zero_membership,
)

__version__ = "0.1.0"
