"""Command-line front end.

One job per invocation:

    specfrac COMMAND [PAYLOAD] [--output PATH] [--format json|csv]
                     [--threads N] [--tol FLOAT]

PAYLOAD is a JSON object given inline, as @path, or as "-" (stdin, the
default).  Every run writes a report; JSON reports are byte-deterministic
for identical inputs (fixed field order, floats printed with 17
significant digits) and embed the library version plus the sha256 of the
raw payload text.  CSV output exists for sweep-ft plot data only.

Exit codes: 0 for true/verified outcomes, 1 for falsified ones, 2 for
invalid input, 3 for indeterminate decisions.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional, Union

from . import __version__
from .digits import DigitSet, digit_set
from .exact import format_rational, parse_rational
from .fourier import ft_measure, measure_from_json, measure_zero_set
from .hadamard import (
    HadamardCertificate,
    build_product_form,
    certificate_from_json,
    certificate_to_json,
    check_hadamard,
    search_companion,
    unitarity_defect,
    verify_certificate,
)
from .fourier import (
    check_alternating_uniform_identity,
    check_symmetric_phase_identity,
)
from .spectra import (
    MembershipUndecidableError,
    completeness_sum,
    decompose_spectrum,
    freqset,
    is_orthogonal,
    max_orthogonal_family,
    spectrality_decision,
    superset_candidates,
    zero_membership,
)

__all__ = ["main"]

DEFAULT_TOL = 1e-9

_EXIT = {
    "verified": 0,
    "found": 0,
    "ok": 0,
    "member": 0,
    "orthogonal": 0,
    "spectral": 0,
    "passed": 0,
    "falsified": 1,
    "none": 1,
    "not_member": 1,
    "not_orthogonal": 1,
    "not_spectral": 1,
    "failed": 1,
    "error": 2,
    "indeterminate": 3,
    "superset_consistent": 3,
}


class InputError(ValueError):
    """Bad payload: wrong shape, missing field, or domain violation."""


# ---------------------------------------------------------------------------
# deterministic JSON
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    return "%.17g" % x


def render_json(obj) -> str:
    """Recursive serializer with pinned formatting: dict fields in
    insertion order, floats at 17 significant digits, rationals as "a/b"
    strings."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return json.dumps(format_rational(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{render_json(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(render_json(v) for v in obj) + "]"
    raise TypeError(f"unserializable value: {obj!r}")


def _report(command: str, payload_text: str, status: str, result, error: Optional[str] = None) -> dict:
    rep = {
        "command": command,
        "library_version": __version__,
        "payload_sha256": hashlib.sha256(payload_text.encode("utf-8")).hexdigest(),
        "status": status,
        "result": result,
    }
    if error is not None:
        rep["error"] = error
    return rep


# ---------------------------------------------------------------------------
# payload helpers
# ---------------------------------------------------------------------------


def _load_payload_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        try:
            with open(arg[1:], "r", encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise InputError(f"cannot read payload file {arg[1:]}: {exc}") from exc
    return arg


def _parse_payload(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"invalid JSON at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise InputError("payload must be a JSON object")
    return obj


def _need(payload: dict, key: str):
    if key not in payload:
        raise InputError(f"payload field {key!r} is required")
    return payload[key]


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"payload field {key!r} must be an integer")
    return value


def _as_rational(value, key: str) -> Fraction:
    if isinstance(value, bool):
        raise InputError(f"payload field {key!r} must be a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError as exc:
            raise InputError(f"payload field {key!r}: {exc}") from exc
    raise InputError(f"payload field {key!r} must be an integer or a rational string")


def _as_point(value, key: str) -> Union[Fraction, float]:
    """Evaluation points may be exact rationals or floats."""
    if isinstance(value, float):
        return value
    return _as_rational(value, key)


def _as_digit_set(value, key: str) -> DigitSet:
    if not isinstance(value, list) or not value:
        raise InputError(f"payload field {key!r} must be a nonempty array")
    try:
        return digit_set([_as_rational(v, key) for v in value])
    except ValueError as exc:
        raise InputError(f"payload field {key!r}: {exc}") from exc


def _as_freqs(value, key: str) -> tuple[Fraction, ...]:
    if not isinstance(value, list) or not value:
        raise InputError(f"payload field {key!r} must be a nonempty array")
    try:
        return freqset(_as_rational(v, key) for v in value)
    except ValueError as exc:
        raise InputError(f"payload field {key!r}: {exc}") from exc


def _as_spec(payload: dict):
    obj = _need(payload, "spec")
    if not isinstance(obj, dict):
        raise InputError("payload field 'spec' must be a JSON object")
    try:
        return measure_from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad measure spec: {exc}") from exc


def _tol(payload: dict, opt_tol: Optional[float], default: float = DEFAULT_TOL) -> float:
    t = payload.get("tol", opt_tol if opt_tol is not None else default)
    if isinstance(t, bool) or not isinstance(t, (int, float)) or not t > 0:
        raise InputError("tol must be a positive number")
    return float(t)


def _point_json(x: Union[Fraction, float]):
    return x if isinstance(x, Fraction) else float(x)


# ---------------------------------------------------------------------------
# command handlers: payload, opts -> (status, result)
# ---------------------------------------------------------------------------


def _cmd_check_hadamard(payload: dict, opts) -> tuple[str, dict]:
    p = _as_int(_need(payload, "p"), "p")
    digits = _as_digit_set(_need(payload, "digits"), "digits")
    labels = _as_digit_set(_need(payload, "labels"), "labels")
    try:
        outcome = check_hadamard(p, digits, labels)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if isinstance(outcome, HadamardCertificate):
        result = certificate_to_json(outcome)
        result["unitarity_defect"] = unitarity_defect(p, digits, labels)
        return "verified", result
    v = outcome.value
    return "falsified", {
        "p": outcome.modulus,
        "digits": [format_rational(d) for d in outcome.digits.elements],
        "labels": [format_rational(d) for d in outcome.labels.elements],
        "pair": list(outcome.pair),
        "value": {"re": v.real, "im": v.imag, "abs": abs(v)},
    }


def _cmd_search_companion(payload: dict, opts) -> tuple[str, Optional[dict]]:
    p = _as_int(_need(payload, "p"), "p")
    digits = _as_digit_set(_need(payload, "digits"), "digits")
    bound = _as_int(_need(payload, "bound"), "bound")
    try:
        cert = search_companion(p, digits, bound)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if cert is None:
        return "none", None
    return "found", certificate_to_json(cert)


def _cmd_build_product_form(payload: dict, opts) -> tuple[str, dict]:
    m = _as_int(_need(payload, "m"), "m")
    npairs = _as_int(_need(payload, "N"), "N")
    p_prime = _as_int(_need(payload, "p_prime"), "p_prime")
    try:
        cert = build_product_form(m, npairs, p_prime)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return "verified", certificate_to_json(cert)


def _cmd_verify_certificate(payload: dict, opts) -> tuple[str, dict]:
    try:
        cert = certificate_from_json(payload)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad certificate: {exc}") from exc
    rep = verify_certificate(cert)
    status = "verified" if rep.ok else "falsified"
    return status, {"ok": rep.ok, "failures": list(rep.failures)}


def _ft_row(spec, x, tol: float) -> dict:
    cc = ft_measure(spec, x, tol)
    v = cc.value
    return {
        "xi": _point_json(x),
        "re": v.real,
        "im": v.imag,
        "abs": abs(v),
        "error_bound": cc.error_bound,
    }


def _cmd_eval_ft(payload: dict, opts) -> tuple[str, dict]:
    spec = _as_spec(payload)
    x = _as_point(_need(payload, "xi"), "xi")
    return "ok", _ft_row(spec, x, _tol(payload, opts.tol))


def _sweep_grid(payload: dict) -> list:
    lo = _as_point(_need(payload, "from"), "from")
    hi = _as_point(_need(payload, "to"), "to")
    points = _as_int(_need(payload, "points"), "points")
    if points < 1:
        raise InputError("points must be >= 1")
    if points == 1:
        return [lo]
    if isinstance(lo, Fraction) and isinstance(hi, Fraction):
        step = (hi - lo) / (points - 1)
        return [lo + step * i for i in range(points)]
    lo_f, hi_f = float(lo), float(hi)
    return [lo_f + (hi_f - lo_f) * i / (points - 1) for i in range(points)]


def _sweep_chunk(args) -> list[dict]:
    spec_json, xs, tol = args
    spec = measure_from_json(spec_json)
    out = []
    for x in xs:
        out.append(_ft_row(spec, Fraction(x) if isinstance(x, str) else x, tol))
    return out


def _cmd_sweep_ft(payload: dict, opts) -> tuple[str, dict]:
    spec = _as_spec(payload)
    tol = _tol(payload, opts.tol)
    grid = _sweep_grid(payload)
    threads = max(1, opts.threads)
    if threads == 1 or len(grid) < 2 * threads:
        rows = [_ft_row(spec, x, tol) for x in grid]
    else:
        spec_json = payload["spec"]
        wire = [str(x) if isinstance(x, Fraction) else x for x in grid]
        size = (len(wire) + threads - 1) // threads
        chunks = [
            (spec_json, wire[i : i + size], tol) for i in range(0, len(wire), size)
        ]
        rows = []
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_sweep_chunk, chunks):
                rows.extend(part)
    return "ok", {"rows": rows}


def _cmd_zero_member(payload: dict, opts) -> tuple[str, dict]:
    spec = _as_spec(payload)
    x = _as_rational(_need(payload, "x"), "x")
    zs = measure_zero_set(spec)
    if zs is not None:
        member = zs.contains(x)
        return ("member" if member else "not_member"), {
            "x": x,
            "relation": "zero_set",
            "member": member,
        }
    try:
        relation, test = zero_membership(spec)
    except MembershipUndecidableError:
        relation = "numeric"
        tol = _tol(payload, opts.tol)
        for t in (tol, tol * 1e-3, tol * 1e-6):
            cc = ft_measure(spec, x, t)
            if cc.value == 0 and cc.error_bound == 0:
                return "member", {"x": x, "relation": relation, "member": True}
            if abs(cc.value) - cc.error_bound > 0:
                return "not_member", {"x": x, "relation": relation, "member": False}
        return "indeterminate", {"x": x, "relation": relation, "member": None}
    if not test(x):
        return "not_member", {"x": x, "relation": relation, "member": False}
    # inside the superset: true zero-set membership stays open
    return "indeterminate", {"x": x, "relation": relation, "member": None}


def _cmd_check_orthogonal(payload: dict, opts) -> tuple[str, dict]:
    spec = _as_spec(payload)
    freqs = _as_freqs(_need(payload, "frequencies"), "frequencies")
    res = is_orthogonal(spec, freqs, _tol(payload, opts.tol))
    return res.status, {
        "status": res.status,
        "relation": res.relation,
        "witness": res.witness,
    }


def _cmd_q_function(payload: dict, opts) -> tuple[str, dict]:
    spec = _as_spec(payload)
    freqs = _as_freqs(_need(payload, "frequencies"), "frequencies")
    x = _as_point(_need(payload, "xi"), "xi")
    q = completeness_sum(spec, freqs, x, _tol(payload, opts.tol))
    return "ok", {"xi": _point_json(x), "value": q.value, "error_bound": q.error_bound}


def _cmd_max_family(payload: dict, opts) -> tuple[str, dict]:
    spec = _as_spec(payload)
    if "candidates" in payload:
        cands = _as_freqs(payload["candidates"], "candidates")
    elif "window" in payload:
        try:
            cands = superset_candidates(spec, _as_rational(payload["window"], "window"))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        raise InputError("payload needs 'candidates' or 'window'")
    try:
        res = max_orthogonal_family(spec, cands)
    except MembershipUndecidableError as exc:
        raise InputError(str(exc)) from exc
    return "ok", {
        "size": res.size,
        "family": list(res.family),
        "nodes_explored": res.nodes_explored,
        "relation": res.relation,
    }


def _cmd_decompose(payload: dict, opts) -> tuple[str, dict]:
    freqs = _as_freqs(_need(payload, "frequencies"), "frequencies")
    b1 = _as_rational(_need(payload, "b1"), "b1")
    c = _as_int(_need(payload, "c"), "c")
    q1 = _as_int(_need(payload, "q1"), "q1")
    gamma1 = _as_int(_need(payload, "gamma1"), "gamma1")
    try:
        dec = decompose_spectrum(freqs, b1, c, q1, gamma1)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return "ok", {
        "b1": dec.b1,
        "c": dec.c,
        "q1": dec.q1,
        "gamma1": dec.gamma1,
        "cells": [
            {"index": idx, "elements": list(cell)} for idx, cell in dec.cells
        ],
        "leftovers": list(dec.leftovers),
    }


def _cmd_decide_spectral(payload: dict, opts) -> tuple[str, dict]:
    m = _as_int(_need(payload, "m"), "m")
    npairs = _as_int(_need(payload, "N"), "N")
    rho = _as_rational(_need(payload, "rho"), "rho")
    try:
        dec = spectrality_decision(m, npairs, rho)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    status = "spectral" if dec.spectral else "not_spectral"
    return status, {"spectral": dec.spectral, "reason": dec.reason, "p": dec.p}


def _identity_opts(payload: dict, opts) -> dict:
    kw = {}
    if "samples" in payload:
        kw["samples"] = _as_int(payload["samples"], "samples")
        if kw["samples"] < 1:
            raise InputError("samples must be >= 1")
    if "window" in payload:
        w = payload["window"]
        if isinstance(w, bool) or not isinstance(w, (int, float)) or not w > 0:
            raise InputError("window must be a positive number")
        kw["window"] = float(w)
    if "seed" in payload:
        kw["seed"] = _as_int(payload["seed"], "seed")
    kw["tol"] = _tol(payload, opts.tol, default=1e-8)
    return kw


def _identity_result(rep) -> dict:
    return {
        "samples": rep.samples,
        "window": rep.window,
        "tol": rep.tol,
        "seed": rep.seed,
        "max_abs_diff": rep.max_abs_diff,
        "worst_xi": rep.worst_xi,
        "max_excess": rep.max_excess,
        "passed": rep.passed,
    }


def _cmd_verify_nu_mu(payload: dict, opts) -> tuple[str, dict]:
    m = _as_int(_need(payload, "m"), "m")
    npairs = _as_int(_need(payload, "N"), "N")
    rho = _as_rational(_need(payload, "rho"), "rho")
    kw = _identity_opts(payload, opts)
    try:
        rep = check_alternating_uniform_identity(m, npairs, rho, **kw)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return ("passed" if rep.passed else "failed"), _identity_result(rep)


def _cmd_verify_symmetric(payload: dict, opts) -> tuple[str, dict]:
    radius = _as_int(_need(payload, "n"), "n")
    rho = _as_rational(_need(payload, "rho"), "rho")
    kw = _identity_opts(payload, opts)
    try:
        rep = check_symmetric_phase_identity(radius, rho, **kw)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return ("passed" if rep.passed else "failed"), _identity_result(rep)


_COMMANDS = {
    "check-hadamard": _cmd_check_hadamard,
    "search-companion": _cmd_search_companion,
    "build-product-form": _cmd_build_product_form,
    "verify-certificate": _cmd_verify_certificate,
    "eval-ft": _cmd_eval_ft,
    "sweep-ft": _cmd_sweep_ft,
    "zero-member": _cmd_zero_member,
    "check-orthogonal": _cmd_check_orthogonal,
    "q-function": _cmd_q_function,
    "max-family": _cmd_max_family,
    "decompose": _cmd_decompose,
    "decide-spectral": _cmd_decide_spectral,
    "verify-nu-mu": _cmd_verify_nu_mu,
    "verify-symmetric": _cmd_verify_symmetric,
}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _csv_cell(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["xi", "re", "im", "abs", "error_bound"])
    for row in rows:
        writer.writerow(
            [_csv_cell(row[k]) for k in ("xi", "re", "im", "abs", "error_bound")]
        )
    return buf.getvalue()


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specfrac",
        description="Exact and certified computation for fractal spectral measures.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument(
        "payload",
        nargs="?",
        default="-",
        help="JSON object, @file, or - for stdin (default)",
    )
    parser.add_argument("--output", default=None, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--tol", type=float, default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        payload_text = _load_payload_text(args.payload)
    except InputError as exc:
        rep = _report(args.command, "", "error", None, str(exc))
        _emit(render_json(rep) + "\n", args.output)
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.format == "csv" and args.command != "sweep-ft":
            raise InputError("csv format is only available for sweep-ft")
        if args.threads < 1:
            raise InputError("--threads must be >= 1")
        payload = _parse_payload(payload_text)
        status, result = _COMMANDS[args.command](payload, args)
    except InputError as exc:
        rep = _report(args.command, payload_text, "error", None, str(exc))
        _emit(render_json(rep) + "\n", args.output)
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.format == "csv":
        _emit(_render_csv(result["rows"]), args.output)
    else:
        rep = _report(args.command, payload_text, status, result)
        _emit(render_json(rep) + "\n", args.output)
    return _EXIT[status]


if __name__ == "__main__":
    sys.exit(main())
