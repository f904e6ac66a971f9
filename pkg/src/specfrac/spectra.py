"""Orthogonality, spectra, and spectrality decisions.

A frequency set Lambda is orthogonal for a measure when every nonzero
difference of its elements is a zero of the measure's Fourier transform;
it is a spectrum when additionally the completeness sum

    Q(xi) = sum over lambda of |transform(xi + lambda)|^2

is identically 1 (it is <= 1 for every orthogonal family, pointwise by the
Bessel inequality, and constancy at 1 is the classical completeness
criterion for exponential systems).

Membership of a difference in the zero set comes in three strengths:

* exact and complete, whenever :func:`specfrac.fourier.measure_zero_set`
  returns an expression (structured uniform systems, expanding factor
  systems, alternating systems with an even number of sign runs, and the
  symmetric family);
* exact against a proven superset of the zero set, for the alternating
  family with unit run length and an odd digit count, where no exact zero
  set is known.  Non-membership then soundly refutes orthogonality, while
  membership only fails to refute: results carry relation="zero_superset"
  and never claim more;
* numeric with certified error bounds otherwise; the check answers only
  when an interval excludes zero or a factor vanishes exactly, and reports
  the offending pair as indeterminate otherwise.

The maximum-orthogonal-family search is an exact branch-and-bound maximum
clique over a finite candidate window (greedy-coloring upper bounds,
degree-descending vertex order, deterministic).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Callable, Iterable, Optional

from .digits import DigitSet, DirectSumCollisionError, direct_sum
from .exact import format_rational
from .fourier import (
    Alternating,
    AlternatingSymmetric,
    MeasureSpec,
    ft_measure,
    measure_zero_set,
)

__all__ = [
    "freqset",
    "MembershipUndecidableError",
    "zero_membership",
    "odd_family_zero_superset_member",
    "OrthogonalityResult",
    "is_orthogonal",
    "CertifiedReal",
    "completeness_sum",
    "canonical_spectrum",
    "MaxFamilyResult",
    "max_orthogonal_family",
    "DecompositionResult",
    "decompose_spectrum",
    "SpectralityDecision",
    "spectrality_decision",
    "orthogonality_bound",
    "odd_superset_candidates",
    "even_superset_candidates",
    "superset_candidates",
]


def freqset(values: Iterable) -> tuple[Fraction, ...]:
    """Sorted duplicate-free tuple of rationals."""
    vals = sorted(Fraction(v) for v in values)
    for a, b in zip(vals, vals[1:]):
        if a == b:
            raise ValueError(f"duplicate frequency {a}")
    return tuple(vals)


# ---------------------------------------------------------------------------
# zero-set membership backends
# ---------------------------------------------------------------------------


class MembershipUndecidableError(ValueError):
    """No exact zero-set relation is available for this measure spec."""


def odd_family_zero_superset_member(s: int, ratio: Fraction, x) -> bool:
    """Membership in the proven zero-set superset for the unit-run
    alternating family with an odd digit count s:

        U_{k>=1} ratio^-k * [ ((2Z+1) \\ s(2Z+1)) / (2s)  U  (Z \\ sZ) / s ].

    Valid for every ratio in (0,1); only finitely many k can match because
    the dilates grow.
    """
    if s < 3 or s % 2 == 0:
        raise ValueError("digit count must be an odd integer >= 3")
    ratio = Fraction(ratio)
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie strictly between 0 and 1")
    x = Fraction(x)
    if x == 0:
        return False
    power = ratio  # ratio^k
    while 2 * s * abs(x) * power >= 1:
        a = 2 * s * x * power
        if a.denominator == 1 and a.numerator % 2 != 0 and a.numerator % s != 0:
            return True
        b = s * x * power
        if b.denominator == 1 and b.numerator % s != 0:
            return True
        power *= ratio
    return False


def zero_membership(spec: MeasureSpec) -> tuple[str, Callable[[Fraction], bool]]:
    """(relation, membership test) for the measure's transform zeros.

    relation is "zero_set" (exact and complete) or "zero_superset" (exact
    membership in a proven superset; see the module docstring).  Raises
    MembershipUndecidableError when only numerics are available.
    """
    zs = measure_zero_set(spec)
    if zs is not None:
        return "zero_set", zs.contains
    if (
        isinstance(spec, Alternating)
        and spec.period == 1
        and spec.count % 2 == 1
        and spec.count >= 3
    ):
        s, r = spec.count, spec.ratio
        return "zero_superset", lambda x: odd_family_zero_superset_member(s, r, x)
    raise MembershipUndecidableError(
        "no exact zero set or proven superset is known for this spec; "
        "only certified numerics are available"
    )


# ---------------------------------------------------------------------------
# orthogonality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrthogonalityResult:
    status: str  # orthogonal | not_orthogonal | superset_consistent | indeterminate
    relation: str  # zero_set | zero_superset | numeric
    witness: Optional[Fraction] = None  # offending difference, when any

    def __bool__(self) -> bool:
        return self.status == "orthogonal"


def is_orthogonal(
    spec: MeasureSpec, frequencies: Iterable, tol: float = 1e-9
) -> OrthogonalityResult:
    """Decide whether all nonzero pairwise differences are transform zeros.

    Exact whenever a zero set (or superset) exists.  With only a superset,
    a miss refutes orthogonality, but full membership yields
    ``superset_consistent``: consistent with orthogonality, not a proof.
    The numeric fallback tightens the tolerance three times before giving
    up as indeterminate.
    """
    freqs = freqset(frequencies)
    diffs = sorted(
        {freqs[j] - freqs[i] for i in range(len(freqs)) for j in range(i + 1, len(freqs))}
    )
    try:
        relation, member = zero_membership(spec)
    except MembershipUndecidableError:
        relation, member = "numeric", None

    if member is not None:
        for d in diffs:
            if not member(d):
                return OrthogonalityResult("not_orthogonal", relation, d)
        status = "orthogonal" if relation == "zero_set" else "superset_consistent"
        return OrthogonalityResult(status, relation)

    for d in diffs:
        decided = False
        for t in (tol, tol * 1e-3, tol * 1e-6):
            cc = ft_measure(spec, d, t)
            if cc.value == 0 and cc.error_bound == 0:
                decided = True
                break
            if abs(cc.value) - cc.error_bound > 0:
                return OrthogonalityResult("not_orthogonal", "numeric", d)
        if not decided:
            return OrthogonalityResult("indeterminate", "numeric", d)
    return OrthogonalityResult("orthogonal", "numeric")


@dataclass(frozen=True)
class CertifiedReal:
    value: float
    error_bound: float


def completeness_sum(
    spec: MeasureSpec, frequencies: Iterable, xi, tol: float = 1e-9
) -> CertifiedReal:
    """Q(xi) = sum |transform(xi + lambda)|^2 with an aggregate bound <= tol.

    Each term is evaluated to a per-term tolerance small enough that the
    squared-modulus errors sum below tol.
    """
    freqs = freqset(frequencies)
    if not tol > 0:
        raise ValueError("tol must be positive")
    per = tol / (8 * len(freqs))
    exact_shift = isinstance(xi, (int, Fraction))
    total = 0.0
    bound = 0.0
    for lam in freqs:
        arg = (Fraction(xi) + lam) if exact_shift else (float(xi) + float(lam))
        cc = ft_measure(spec, arg, per)
        a = abs(cc.value)
        total += a * a
        bound += cc.error_bound * (2 * a + cc.error_bound)
    return CertifiedReal(total, bound)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


def canonical_spectrum(p: int, labels: DigitSet, depth: int) -> tuple[Fraction, ...]:
    """{ sum_{j<depth} p^j l_j : l_j in labels }, the depth-truncated
    label expansion in base p.  Collisions mean a degenerate label set."""
    if p < 2:
        raise ValueError("base must be an integer >= 2")
    if depth < 1:
        raise ValueError("depth must be positive")
    try:
        acc = reduce(
            direct_sum, [labels.scaled(Fraction(p) ** j) for j in range(depth)]
        )
    except DirectSumCollisionError as exc:
        raise DirectSumCollisionError(f"degenerate label set: {exc}") from exc
    return freqset(acc.elements)


@dataclass(frozen=True)
class MaxFamilyResult:
    size: int
    family: tuple[Fraction, ...]
    nodes_explored: int
    relation: str  # zero_set | zero_superset


def _greedy_color_order(cand: int, adj: list[int]) -> tuple[list[int], list[int]]:
    order: list[int] = []
    bounds: list[int] = []
    color = 0
    uncolored = cand
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            bit = avail & -avail
            v = bit.bit_length() - 1
            order.append(v)
            bounds.append(color)
            uncolored ^= bit
            avail &= ~(adj[v] | bit)
    return order, bounds


def _max_clique(adj: list[int], n: int) -> tuple[list[int], int]:
    best: list[int] = []
    nodes = 0

    def expand(clique: list[int], cand: int):
        nonlocal best, nodes
        nodes += 1
        if cand == 0:
            if len(clique) > len(best):
                best = clique.copy()
            return
        order, bounds = _greedy_color_order(cand, adj)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(best):
                return
            v = order[i]
            clique.append(v)
            expand(clique, cand & adj[v])
            clique.pop()
            cand &= ~(1 << v)

    expand([], (1 << n) - 1 if n else 0)
    return best, nodes


def max_orthogonal_family(
    spec: MeasureSpec, candidates: Iterable
) -> MaxFamilyResult:
    """Exact maximum clique in the graph on ``candidates`` whose edges are
    pairs with difference in the zero relation of ``spec``.

    With relation "zero_set" the result is a genuine maximum orthogonal
    family within the candidate window.  With "zero_superset" (odd-count
    unit-run alternating family) the edge relation over-approximates true
    orthogonality, so the size is an upper bound for the window and the
    family is a candidate, not a certificate.  Numeric-only specs are
    refused.
    """
    cands = freqset(candidates)
    relation, member = zero_membership(spec)
    n = len(cands)
    # degree-descending relabeling keeps the coloring bound tight and the
    # search deterministic
    raw_adj = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if member(cands[j] - cands[i]):
                raw_adj[i][j] = raw_adj[j][i] = True
    perm = sorted(range(n), key=lambda v: (-sum(raw_adj[v]), v))
    adj = [0] * n
    for a in range(n):
        for b in range(n):
            if raw_adj[perm[a]][perm[b]]:
                adj[a] |= 1 << b
    clique, nodes = _max_clique(adj, n)
    family = freqset(cands[perm[v]] for v in clique)
    return MaxFamilyResult(len(family), family, nodes, relation)


# ---------------------------------------------------------------------------
# spectrum decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionResult:
    b1: Fraction
    c: int
    q1: int
    gamma1: int
    cells: tuple[tuple[int, tuple[int, ...]], ...]  # (index, integer cell)
    leftovers: tuple[Fraction, ...]  # unmatched values of lambda/b1

    def reassembled(self) -> tuple[Fraction, ...]:
        out = [self.b1 * w for w in self.leftovers]
        for idx, cell in self.cells:
            out.extend(self.b1 * (Fraction(idx, self.c) + z) for z in cell)
        return freqset(out)


def decompose_spectrum(
    frequencies: Iterable, b1, c: int, q1: int, gamma1: int
) -> DecompositionResult:
    """Split Lambda by residue: lambda/b1 = (i + q1*j)/c + z with z integer,
    i < q1, j < gamma1.  Cell i + q1*j collects the integers z; scaled
    values lambda/b1 that are not an integer translate of an admissible
    residue land in ``leftovers``.
    """
    freqs = freqset(frequencies)
    b1 = Fraction(b1)
    if b1 == 0:
        raise ValueError("b1 must be nonzero")
    if c < 1 or q1 < 1 or gamma1 < 1:
        raise ValueError("c, q1, gamma1 must be positive integers")
    if q1 * gamma1 > c:
        raise ValueError("q1*gamma1 must not exceed c")
    cells: dict[int, list[int]] = {}
    leftovers: list[Fraction] = []
    for lam in freqs:
        w = lam / b1 * c
        if w.denominator != 1:
            leftovers.append(lam / b1)
            continue
        r = w.numerator % c
        if r >= q1 * gamma1:
            leftovers.append(lam / b1)
            continue
        cells.setdefault(r, []).append((w.numerator - r) // c)
    packed = tuple(
        (idx, tuple(sorted(zs))) for idx, zs in sorted(cells.items())
    )
    return DecompositionResult(b1, c, q1, gamma1, packed, tuple(leftovers))


# ---------------------------------------------------------------------------
# spectrality and orthogonality bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralityDecision:
    spectral: bool
    reason: str
    p: Optional[int]  # 1/ratio when that is an integer

    def __bool__(self) -> bool:
        return self.spectral


def spectrality_decision(m: int, npairs: int, ratio) -> SpectralityDecision:
    """Decide spectrality of the alternating measure with run length m and
    2*npairs sign runs at the given ratio: spectral exactly when 1/ratio is
    an integer divisible by 2*m*npairs."""
    if m < 1 or npairs < 1:
        raise ValueError("m and npairs must be positive integers")
    ratio = Fraction(ratio)
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie strictly between 0 and 1")
    d = 2 * m * npairs
    if ratio.numerator != 1:
        return SpectralityDecision(
            False, f"1/rho = {format_rational(1 / ratio)} is not an integer", None
        )
    p = ratio.denominator
    if p % d:
        return SpectralityDecision(False, f"{d}∤{p}", p)
    return SpectralityDecision(True, f"1/rho = {p} and {d} | {p}", p)


def orthogonality_bound(p: int, s: int) -> Optional[int]:
    """Largest possible count of mutually orthogonal exponentials for the
    unit-run alternating family at ratio 1/p with s digits: s when p and s
    are coprime, None (no bound from this criterion) otherwise."""
    if p < 2 or s < 2:
        raise ValueError("p and s must be integers >= 2")
    return s if gcd(p, s) == 1 else None


# ---------------------------------------------------------------------------
# candidate windows for the orthogonality desk checks
# ---------------------------------------------------------------------------


def odd_superset_candidates(s: int, window) -> tuple[Fraction, ...]:
    """{0} plus the window cut of (Z \\ sZ)/(2s), the collapsed zero-set
    superset for odd s when 1/ratio is an integer coprime to s."""
    if s < 3 or s % 2 == 0:
        raise ValueError("s must be an odd integer >= 3")
    window = Fraction(window)
    if window <= 0:
        raise ValueError("window must be positive")
    hi = int(window * 2 * s)
    out = [Fraction(0)]
    out.extend(
        Fraction(a, 2 * s) for a in range(-hi, hi + 1) if a % s and abs(Fraction(a, 2 * s)) <= window
    )
    return freqset(out)


def even_superset_candidates(p: int, s: int, window) -> tuple[Fraction, ...]:
    """{0} plus the window cut of (Z \\ sZ)/(s*|Q|), Q = p*(1-s)+1, the
    zero-set superset for even s at ratio 1/p with gcd(p, s) = 1."""
    if s < 2 or s % 2:
        raise ValueError("s must be an even integer >= 2")
    if p < 2:
        raise ValueError("p must be an integer >= 2")
    if gcd(p, s) != 1:
        raise ValueError("p and s must be coprime for this superset")
    window = Fraction(window)
    if window <= 0:
        raise ValueError("window must be positive")
    q = abs(p * (1 - s) + 1)
    hi = int(window * s * q)
    out = [Fraction(0)]
    out.extend(
        Fraction(a, s * q)
        for a in range(-hi, hi + 1)
        if a % s and abs(Fraction(a, s * q)) <= window
    )
    return freqset(out)


def superset_candidates(spec: MeasureSpec, window) -> tuple[Fraction, ...]:
    """Candidate window for a unit-run alternating spec, derived from the
    proven zero-set supersets.  Requires 1/ratio integer and coprime to the
    digit count."""
    if not isinstance(spec, Alternating) or spec.period != 1:
        raise ValueError("candidate supersets exist only for unit-run alternating specs")
    s = spec.count
    if spec.ratio.numerator != 1:
        raise ValueError("1/ratio must be an integer for the candidate superset")
    p = spec.ratio.denominator
    if gcd(p, s) != 1:
        raise ValueError("1/ratio and the digit count must be coprime")
    if s % 2:
        return odd_superset_candidates(s, window)
    return even_superset_candidates(p, s, window)
