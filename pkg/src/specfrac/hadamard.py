"""Hadamard triples and their staged (product-form) refinements.

A triple (p, D, L) of a modulus p, integer digits D, and integer labels L
with #D = #L is Hadamard when the matrix

    H = (1/sqrt(#D)) * [ exp(2*pi*i*d*l/p) ]_{d in D, l in L}

is unitary.  Unitarity is equivalent to the exact vanishing of the mask of D
at every difference of distinct labels:  m_D((l1 - l2)/p) = 0.  That is a
sum of p-th roots of unity, so the whole check is exact; the floating
unitarity defect exists only as a cross-check.

``build_product_form`` realizes a two-stage construction: given m, N, and a
multiplier p', set p = 2*m*N*p' and

    E0 = {0, (1 - 2*m*N)*p + m}      L0 = {0, N*p'}
    E1 = {0..m-1}                    L1 = 2*N*p' * {0..m-1}
    E2 = 2*m * {0..N-1}              L2 = p' * {0..N-1}

Then p*D = E0 (+) p*E1 (+) p*E2 reproduces p times the three-block digit
set of the alternating family, and every stage triple, every prefix direct
sum (E0(+)..(+)Ej against L0(+)..(+)Lj), and every suffix direct sum
(Ej(+)..(+)Ek against Lj(+)..(+)Lk) is Hadamard with modulus p.  The
certificate stores all of those sub-checks; ``verify_product_form``
re-derives the assembly from the staged recursion

    D(j) = union over d in D(j-1) of  d + p^(c_j) * E_j(d)

(c_j the per-stage dilation exponent, stage maps may depend on the parent
digit) and re-runs every Hadamard condition from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import isqrt
from typing import Optional, Union

import numpy as np

from .digits import (
    DigitSet,
    DirectSumCollisionError,
    alternating_equivalent_digits,
    consecutive,
    digit_set,
    direct_sum,
    mask_phase_sum,
)
from .exact import RootOfUnitySum, format_rational, parse_rational, root_sum_is_zero

__all__ = [
    "HadamardCertificate",
    "HadamardFailure",
    "check_hadamard",
    "unitarity_defect",
    "search_companion",
    "Stage",
    "ProductFormCertificate",
    "VerificationReport",
    "build_product_form",
    "verify_product_form",
    "verify_certificate",
    "certificate_from_json",
    "certificate_to_json",
]


def _as_int_tuple(d: DigitSet, what: str) -> tuple[int, ...]:
    out = []
    for e in d.elements:
        if e.denominator != 1:
            raise ValueError(f"{what} must be integers, got {e}")
        out.append(e.numerator)
    return tuple(out)


@dataclass(frozen=True)
class HadamardCertificate:
    modulus: int
    digits: DigitSet
    labels: DigitSet
    # one record per unordered label pair: (l1, l2, vanishing phase sum)
    witnesses: tuple[tuple[int, int, RootOfUnitySum], ...]


@dataclass(frozen=True)
class HadamardFailure:
    modulus: int
    digits: DigitSet
    labels: DigitSet
    pair: tuple[int, int]
    value: complex  # the nonzero mask value at the failing difference


def check_hadamard(
    p: int, digits: DigitSet, labels: DigitSet
) -> Union[HadamardCertificate, HadamardFailure]:
    """Exact Hadamard-triple test via mask vanishing at label differences.

    Returns a certificate carrying one exact vanishing witness per label
    pair, or a failure naming the first pair whose mask value is nonzero.
    Digit/label counts must agree and both must be integer sets.
    """
    if p < 1:
        raise ValueError("modulus must be a positive integer")
    if len(digits) != len(labels):
        raise ValueError(
            f"digit and label counts differ: {len(digits)} vs {len(labels)}"
        )
    _as_int_tuple(digits, "digits")
    ls = _as_int_tuple(labels, "labels")
    witnesses = []
    for l1, l2 in combinations(ls, 2):
        s = mask_phase_sum(digits, Fraction(l1 - l2, p))
        if not root_sum_is_zero(s):
            return HadamardFailure(
                p, digits, labels, (l1, l2), s.value() / len(digits)
            )
        witnesses.append((l1, l2, s))
    return HadamardCertificate(p, digits, labels, tuple(witnesses))


def unitarity_defect(p: int, digits: DigitSet, labels: DigitSet) -> float:
    """max |(H* H - I)_{jk}| for the scaled exponential matrix.

    Floating cross-check of :func:`check_hadamard`; values below ~1e-12 mean
    unitary at double precision.
    """
    ds = np.array([float(e) for e in digits.elements])
    ls = np.array([float(e) for e in labels.elements])
    h = np.exp(2j * np.pi * np.outer(ds, ls) / p) / np.sqrt(len(ds))
    gram = h.conj().T @ h
    return float(np.max(np.abs(gram - np.eye(len(ls)))))


def search_companion(
    p: int, digits: DigitSet, label_bound: int
) -> Optional[HadamardCertificate]:
    """Smallest (lexicographic) label set L with 0 in L, max(L) <= label_bound,
    and (p, digits, L) Hadamard; None if no such set exists within the bound.

    All pairwise label differences must be mask zeros, so the search first
    computes the admissible difference set and then backtracks; this is
    complete within the bound.
    """
    if label_bound < 0:
        raise ValueError("label_bound must be nonnegative")
    n = len(digits)
    _as_int_tuple(digits, "digits")
    good = [
        delta
        for delta in range(1, label_bound + 1)
        if root_sum_is_zero(mask_phase_sum(digits, Fraction(delta, p)))
    ]
    good_set = set(good)
    if n == 1:
        return check_hadamard(p, digits, digit_set([0]))  # type: ignore[return-value]

    chosen = [0]

    def extend() -> Optional[list[int]]:
        if len(chosen) == n:
            return list(chosen)
        start = chosen[-1] + 1
        for cand in range(start, label_bound + 1):
            if all((cand - c) in good_set for c in chosen):
                chosen.append(cand)
                hit = extend()
                if hit is not None:
                    return hit
                chosen.pop()
        return None

    labels = extend()
    if labels is None:
        return None
    cert = check_hadamard(p, digits, digit_set(labels))
    if not isinstance(cert, HadamardCertificate):  # pragma: no cover
        raise RuntimeError("difference filter admitted a non-Hadamard label set")
    return cert


# ---------------------------------------------------------------------------
# staged product form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Stage:
    """One stage of the recursion: labels, digit map, dilation exponent.

    ``digit_map`` is a single DigitSet when the stage digits do not depend
    on the parent digit, or a mapping parent -> DigitSet.  ``exponent`` is
    the cumulative dilation exponent c_j: stage digits enter scaled by
    modulus**c_j.  Stage 0 always has exponent 0.
    """

    labels: DigitSet
    digit_map: Union[DigitSet, tuple[tuple[Fraction, DigitSet], ...]]
    exponent: int = 0

    def digits_for(self, parent: Fraction) -> DigitSet:
        if isinstance(self.digit_map, DigitSet):
            return self.digit_map
        for key, val in self.digit_map:
            if key == parent:
                return val
        raise KeyError(f"stage has no digits for parent {parent}")

    def all_digit_sets(self) -> list[DigitSet]:
        if isinstance(self.digit_map, DigitSet):
            return [self.digit_map]
        return [val for _, val in self.digit_map]


@dataclass(frozen=True)
class ProductFormCertificate:
    modulus: int
    stages: tuple[Stage, ...]  # stage 0 first
    assembled_digits: DigitSet  # D(k) from the recursion
    assembled_labels: DigitSet  # L0 (+) ... (+) Lk
    sub_certificates: tuple[tuple[str, HadamardCertificate], ...]


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    failures: tuple[str, ...]


def _assemble(modulus: int, stages: tuple[Stage, ...]) -> DigitSet:
    """Run the staged recursion and return D(k); collisions are errors."""
    if not isinstance(stages[0].digit_map, DigitSet):
        raise ValueError("stage 0 cannot depend on a parent digit")
    if stages[0].exponent != 0:
        raise ValueError("stage 0 must have exponent 0")
    elements = list(stages[0].digit_map.elements)
    for idx, st in enumerate(stages[1:], start=1):
        scale = Fraction(modulus) ** st.exponent
        nxt: list[Fraction] = []
        for parent in elements:
            block = st.digits_for(parent)
            nxt.extend(parent + scale * e for e in block.elements)
        if len(set(nxt)) != len(nxt):
            raise DirectSumCollisionError(f"stage {idx} assembly collides")
        elements = sorted(set(nxt))
    return digit_set(elements)


def _constant_stages(stages: tuple[Stage, ...]) -> bool:
    return all(isinstance(s.digit_map, DigitSet) for s in stages)


def _sum_over_branches(stages: tuple[Stage, ...], modulus: int, lo: int, hi: int):
    """All digit sets of the form E_lo (+) ... (+) E_hi reachable along the
    recursion (undilated, per the staged-triple conditions), with labels
    L_lo (+) ... (+) L_hi.  For constant stages there is exactly one."""
    labels = reduce(direct_sum, [stages[j].labels for j in range(lo, hi + 1)])
    if _constant_stages(stages):
        ds = reduce(direct_sum, [stages[j].digit_map for j in range(lo, hi + 1)])
        return [(ds, labels)]
    # branch-dependent: walk every root-to-leaf path of the recursion; the
    # block chosen at stage j depends on the digit assembled so far
    found: dict[tuple, DigitSet] = {}

    def walk(j: int, parent: Fraction, acc: Optional[DigitSet]):
        st = stages[j]
        block = st.digits_for(parent)
        new_acc = block if acc is None else direct_sum(acc, block)
        if j == hi:
            found.setdefault(new_acc.elements, new_acc)
            return
        step = Fraction(modulus) ** st.exponent
        for e in block.elements:
            walk(j + 1, parent + step * e, new_acc)

    if lo == 0:
        walk(0, Fraction(0), None)
    else:
        for parent in _assemble(modulus, stages[:lo]).elements:
            walk(lo, parent, None)
    return [(ds, labels) for ds in found.values()]


def verify_product_form(cert: ProductFormCertificate) -> VerificationReport:
    """Re-derive the assembly and re-run every staged Hadamard condition.

    Checks: stage exponents sane; recursion reproduces ``assembled_digits``
    without collisions; labels direct-sum to ``assembled_labels``; every
    stage triple, every prefix run, and every suffix run is Hadamard.  All
    mask tests are exact.
    """
    failures: list[str] = []
    p = cert.modulus
    stages = cert.stages
    k = len(stages) - 1
    if k < 0:
        return VerificationReport(False, ("no stages",))
    if stages[0].exponent != 0:
        failures.append("stage 0 exponent must be 0")
    if k >= 1 and stages[1].exponent < 1:
        failures.append("stage 1 exponent must be at least 1")
    for j in range(2, k + 1):
        if stages[j].exponent < stages[j - 1].exponent:
            failures.append(f"stage {j} exponent decreases")

    try:
        derived = _assemble(p, stages)
        if derived.elements != cert.assembled_digits.elements:
            failures.append("assembled digits do not match the recursion")
    except (DirectSumCollisionError, ValueError, KeyError) as exc:
        failures.append(f"assembly failed: {exc}")

    try:
        lab = reduce(direct_sum, [s.labels for s in stages])
        if lab.elements != cert.assembled_labels.elements:
            failures.append("assembled labels do not match the stage labels")
    except DirectSumCollisionError as exc:
        failures.append(f"label direct sum collides: {exc}")

    def demand(tag: str, digits: DigitSet, labels: DigitSet):
        res = check_hadamard(p, digits, labels)
        if isinstance(res, HadamardFailure):
            failures.append(
                f"{tag}: mask nonzero at label pair {res.pair} "
                f"(value ~ {res.value:.3e})"
            )

    for j, st in enumerate(stages):
        for ds in st.all_digit_sets():
            demand(f"stage {j}", ds, st.labels)
    for mid in range(1, k + 1):
        try:
            for ds, lab in _sum_over_branches(stages, p, 0, mid):
                demand(f"prefix 0..{mid}", ds, lab)
            for ds, lab in _sum_over_branches(stages, p, mid, k):
                demand(f"suffix {mid}..{k}", ds, lab)
        except DirectSumCollisionError as exc:
            failures.append(f"run {mid}: direct sum collides: {exc}")
    return VerificationReport(not failures, tuple(failures))


def build_product_form(m: int, npairs: int, p_prime: int) -> ProductFormCertificate:
    """Two-stage certificate for the scaled alternating digit set.

    p = 2*m*npairs*p'; the assembled digits equal p times the three-block
    alternating digit set at ratio 1/p.  Every staged condition is verified
    exactly before the certificate is returned; a failure here means an
    implementation bug, not bad input.
    """
    if m < 1 or npairs < 1 or p_prime < 1:
        raise ValueError("m, npairs, p_prime must be positive integers")
    p = 2 * m * npairs * p_prime
    e0 = digit_set([0, (1 - 2 * m * npairs) * p + m])
    e1 = consecutive(m)
    e2 = consecutive(npairs).scaled(Fraction(2 * m))
    l0 = digit_set([0, npairs * p_prime])
    l1 = consecutive(m).scaled(Fraction(2 * npairs * p_prime))
    l2 = consecutive(npairs).scaled(Fraction(p_prime))
    stages = (
        Stage(labels=l0, digit_map=e0, exponent=0),
        Stage(labels=l1, digit_map=e1, exponent=1),
        Stage(labels=l2, digit_map=e2, exponent=1),
    )
    assembled = _assemble(p, stages)
    labels = reduce(direct_sum, [l0, l1, l2])

    expected = alternating_equivalent_digits(m, npairs, Fraction(1, p)).scaled(
        Fraction(p)
    )
    if assembled.elements != expected.elements:
        raise RuntimeError("assembly does not match the scaled alternating digit set")

    subs: list[tuple[str, HadamardCertificate]] = []

    def certify(tag: str, digits: DigitSet, lab: DigitSet):
        res = check_hadamard(p, digits, lab)
        if isinstance(res, HadamardFailure):
            raise RuntimeError(f"internal consistency: {tag} not Hadamard at {res.pair}")
        subs.append((tag, res))

    certify("stage 0", e0, l0)
    certify("stage 1", e1, l1)
    certify("stage 2", e2, l2)
    certify("prefix 0..1", direct_sum(e0, e1), direct_sum(l0, l1))
    certify("suffix 1..2", direct_sum(e1, e2), direct_sum(l1, l2))
    certify("prefix 0..2", direct_sum(direct_sum(e0, e1), e2), labels)
    return ProductFormCertificate(p, stages, assembled, labels, tuple(subs))


def verify_certificate(
    cert: Union[HadamardCertificate, ProductFormCertificate]
) -> VerificationReport:
    """Re-verify a (possibly externally stored) certificate from scratch.

    Plain triples are re-checked exactly; any stored witnesses must match
    the freshly computed phase sums.  Staged certificates go through
    :func:`verify_product_form`.
    """
    if isinstance(cert, ProductFormCertificate):
        return verify_product_form(cert)
    res = check_hadamard(cert.modulus, cert.digits, cert.labels)
    if isinstance(res, HadamardFailure):
        return VerificationReport(
            False,
            (f"mask nonzero at label pair {res.pair} (value ~ {res.value:.3e})",),
        )
    if cert.witnesses and cert.witnesses != res.witnesses:
        return VerificationReport(False, ("stored witnesses do not match",))
    return VerificationReport(True, ())


# ---------------------------------------------------------------------------
# JSON forms (external interface)
# ---------------------------------------------------------------------------


def _digit_list_json(d: DigitSet) -> list[str]:
    return [format_rational(e) for e in d.elements]


def certificate_to_json(cert: Union[HadamardCertificate, ProductFormCertificate]) -> dict:
    if isinstance(cert, HadamardCertificate):
        return {
            "kind": "hadamard",
            "p": cert.modulus,
            "digits": _digit_list_json(cert.digits),
            "labels": _digit_list_json(cert.labels),
            "witnesses": [
                {
                    "pair": [l1, l2],
                    "order": s.order,
                    "coeffs": [[k, c] for k, c in s.coeffs],
                }
                for l1, l2, s in cert.witnesses
            ],
        }
    if isinstance(cert, ProductFormCertificate):
        stage_objs = []
        for st in cert.stages:
            obj: dict = {
                "labels": _digit_list_json(st.labels),
                "exponent": st.exponent,
            }
            if isinstance(st.digit_map, DigitSet):
                obj["digits"] = _digit_list_json(st.digit_map)
            else:
                obj["digit_map"] = [
                    [format_rational(parent), _digit_list_json(ds)]
                    for parent, ds in st.digit_map
                ]
            stage_objs.append(obj)
        return {
            "kind": "product_form",
            "p": cert.modulus,
            "stages": stage_objs,
            "assembled_digits": _digit_list_json(cert.assembled_digits),
            "assembled_labels": _digit_list_json(cert.assembled_labels),
        }
    raise TypeError(f"not a certificate: {cert!r}")


def certificate_from_json(obj: dict) -> Union[HadamardCertificate, ProductFormCertificate]:
    """Parse a stored certificate without verifying it; pair with
    :func:`verify_certificate` so that tampering is reported as a failed
    verification rather than a parse error."""
    kind = obj.get("kind")
    if kind == "hadamard":
        digits = digit_set(parse_rational(s) for s in obj["digits"])
        labels = digit_set(parse_rational(s) for s in obj["labels"])
        witnesses = tuple(
            (
                int(w["pair"][0]),
                int(w["pair"][1]),
                RootOfUnitySum(int(w["order"]), [(k, c) for k, c in w["coeffs"]]),
            )
            for w in obj.get("witnesses", [])
        )
        return HadamardCertificate(int(obj["p"]), digits, labels, witnesses)
    if kind == "product_form":
        stages = []
        for sobj in obj["stages"]:
            labels = digit_set(parse_rational(s) for s in sobj["labels"])
            if "digits" in sobj:
                dmap: Union[DigitSet, tuple] = digit_set(
                    parse_rational(s) for s in sobj["digits"]
                )
            else:
                dmap = tuple(
                    (parse_rational(parent), digit_set(parse_rational(s) for s in ds))
                    for parent, ds in sobj["digit_map"]
                )
            stages.append(Stage(labels=labels, digit_map=dmap, exponent=int(sobj["exponent"])))
        assembled = digit_set(parse_rational(s) for s in obj["assembled_digits"])
        labels = digit_set(parse_rational(s) for s in obj["assembled_labels"])
        return ProductFormCertificate(int(obj["p"]), tuple(stages), assembled, labels, ())
    raise ValueError("certificate object must have kind 'hadamard' or 'product_form'")
