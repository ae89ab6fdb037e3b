"""Text forms of rationals, weights, models, slope lists and coefficient dumps.

Rationals travel as strings ``"a/b"`` (``"a"`` for integers) so no float ever
enters an interchange file.
"""

from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from typing import Any

from .dimensions import (
    AxiomError,
    DimensionModel,
    QuasiLinearSpec,
    RhobarSpec,
    build_gamma0_model,
    build_quasilinear_model,
    build_rhobar_model,
    verify_axioms,
)
from .ghost import GhostCoefficient
from .newton import SlopeSequence
from .weightspace import BoundaryWeight, GhostParams, IntegerWeight, NearIntegerWeight, WeightPoint

_RATIONAL = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


class FormatError(ValueError):
    pass


def frac_to_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def frac_from_str(s) -> Fraction:
    if isinstance(s, bool):
        raise FormatError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise FormatError(f"rationals must be strings like '3/2', got {s!r}")
    m = _RATIONAL.match(s)
    if not m:
        raise FormatError(f"not a rational: {s!r}")
    den = int(m.group(2) or 1)
    if den == 0:
        raise FormatError(f"zero denominator in {s!r}")
    return Fraction(int(m.group(1)), den)


# -- weights -------------------------------------------------------------------


def parse_weight(text: str) -> WeightPoint:
    """``int:12``, ``boundary:1/2`` or ``near:12,3/2``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "int":
            return IntegerWeight(int(rest))
        if kind == "boundary":
            return BoundaryWeight(frac_from_str(rest))
        if kind == "near":
            k, alpha = rest.split(",")
            return NearIntegerWeight(int(k), frac_from_str(alpha))
    except (ValueError, TypeError) as exc:
        raise FormatError(f"bad weight {text!r}: {exc}") from None
    raise FormatError(f"bad weight {text!r}: expected int:K, boundary:V or near:K,ALPHA")


def format_weight(kappa: WeightPoint) -> str:
    if isinstance(kappa, IntegerWeight):
        return f"int:{kappa.k}"
    if isinstance(kappa, BoundaryWeight):
        return f"boundary:{frac_to_str(kappa.v)}"
    if isinstance(kappa, NearIntegerWeight):
        return f"near:{kappa.k_plus},{frac_to_str(kappa.alpha)}"
    return "wadic"


# -- models --------------------------------------------------------------------


def _inline_rhobar(body: str) -> dict:
    spec: dict = {"type": "rhobar"}
    aliases = {"k": "k_rbar", "window": "base_window", "dp": "dp_base"}
    for item in body.split(","):
        if not item.strip():
            continue
        key, sep, val = item.partition("=")
        if not sep:
            raise FormatError(f"rhobar fields look like key=value, got {item!r}")
        key = aliases.get(key.strip(), key.strip())
        val = val.strip()
        if key == "base_window":
            spec[key] = [int(x) for x in val.split("/")]
        elif key in ("split", "experimental"):
            spec[key] = val.lower() in ("1", "true", "yes", "split")
        else:
            spec[key] = int(val)
    return spec


def parse_model_text(text: str) -> dict:
    """Turn an inline descriptor or a JSON file path into a model dictionary."""
    if text.startswith("gamma0:"):
        parts = text[len("gamma0:"):].split(",")
        if len(parts) not in (2, 3):
            raise FormatError(f"gamma0 models look like gamma0:p,N[,k0], got {text!r}")
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise FormatError(f"non-integer field in {text!r}") from None
        return {"type": "gamma0", "p": nums[0], "N": nums[1], "k0": nums[2] if len(nums) == 3 else 0}
    if text.startswith("rhobar:"):
        try:
            return _inline_rhobar(text[len("rhobar:"):])
        except ValueError as exc:
            raise FormatError(f"bad rhobar descriptor {text!r}: {exc}") from None
    if os.path.exists(text):
        try:
            with open(text) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{text}: invalid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise FormatError(f"{text}: model file must hold a JSON object")
        return data
    raise FormatError(f"unrecognized model {text!r}: use gamma0:..., rhobar:... or a JSON file")


def _ql(data: Any, name: str) -> QuasiLinearSpec:
    if not isinstance(data, dict):
        raise FormatError(f"quasilinear field {name!r} must be an object")
    try:
        return QuasiLinearSpec(tuple(data["base"]), int(data["period"]), int(data["defect"]),
                               int(data.get("n_lo", 0)))
    except KeyError as exc:
        raise FormatError(f"quasilinear field {name!r} is missing {exc}") from None


def build_model(spec: dict, check: bool = True) -> DimensionModel:
    """Build a dimension model from its dictionary form, checking the axioms on a window."""
    kind = spec.get("type")
    try:
        if kind == "gamma0":
            model = build_gamma0_model(int(spec["p"]), int(spec["N"]), int(spec.get("k0", 0)))
        elif kind == "quasilinear":
            params = GhostParams(int(spec["p"]), int(spec.get("k_base", 0)))
            model = build_quasilinear_model(_ql(spec.get("d"), "d"), _ql(spec.get("dnew"), "dnew"), params)
        elif kind == "rhobar":
            window = spec.get("base_window")
            model = build_rhobar_model(RhobarSpec(
                p=int(spec["p"]), k_rbar=int(spec["k_rbar"]), split=bool(spec.get("split", False)),
                m1=int(spec.get("m1", 0)), m2=int(spec.get("m2", 0)), m3=int(spec.get("m3", 0)),
                t=int(spec.get("t", 0)),
                base_window=tuple(window) if window is not None else None,
                dp_base=spec.get("dp_base"),
                experimental=bool(spec.get("experimental", False)),
            ))
        else:
            raise FormatError(f"unknown model type {kind!r}")
    except KeyError as exc:
        raise FormatError(f"model is missing field {exc}") from None
    if check:
        longest = max(P for P, _ in model.periods.values())
        report = verify_axioms(model, (-2 * longest, 4 * longest))
        if not report.ok:
            raise AxiomError("; ".join(report.failures))
    return model


def model_label(model: DimensionModel) -> str:
    src = model.source
    if src.get("type") == "gamma0":
        return f"gamma0:{src['p']},{src['N']},{src['k0']}"
    if src.get("type") == "rhobar":
        return (f"rhobar:p={src['p']},k={src['k_rbar']},split={int(src['split'])},"
                f"m1={src['m1']},m2={src['m2']},m3={src['m3']},t={src['t']}")
    return f"quasilinear:p={model.params.p},k_base={model.params.k_base}"


# -- slopes and coefficients -----------------------------------------------------


def slopes_to_json(seq: SlopeSequence, model: DimensionModel) -> dict:
    header = {"p": model.params.p, "model": model_label(model),
              "weight": format_weight(seq.weight), "count": len(seq.slopes)}
    if model.source.get("type") == "gamma0":
        header["N"] = model.source["N"]
    if isinstance(seq.weight, IntegerWeight):
        header["k"] = seq.weight.k
    return {"header": header, "slopes": [frac_to_str(s) for s in seq.slopes],
            "certified": seq.certified}


def slopes_from_json(data: Any) -> tuple:
    """Return ``(header, slopes)``; a bare list is accepted with an empty header."""
    if isinstance(data, list):
        header, raw = {}, data
    elif isinstance(data, dict) and isinstance(data.get("slopes"), list):
        header, raw = data.get("header") or {}, data["slopes"]
        if not isinstance(header, dict):
            raise FormatError("slope file header must be an object")
    else:
        raise FormatError("slope file must be a list of rationals or an object with a 'slopes' list")
    slopes = []
    for j, s in enumerate(raw, start=1):
        try:
            slopes.append(frac_from_str(s))
        except FormatError as exc:
            raise FormatError(f"entry {j}: {exc}") from None
    return header, slopes


def slope_sequence_from_json(data: Any) -> SlopeSequence:
    header, slopes = slopes_from_json(data)
    weight = header.get("weight")
    kappa = parse_weight(weight) if weight and weight != "wadic" else None
    certified = bool(data.get("certified", False)) if isinstance(data, dict) else False
    return SlopeSequence(kappa, len(slopes), tuple(slopes), certified)


def coefficients_to_json(coeffs) -> list:
    return [{"i": c.i, "zeros": [[n, m] for n, m in c.zeros]} for c in coeffs]


def coefficients_from_json(data: Any) -> list:
    if not isinstance(data, list):
        raise FormatError("coefficient dump must be a list")
    out = []
    for entry in data:
        zeros = tuple((int(n), int(m)) for n, m in entry["zeros"])
        lz = zeros[0][0] if zeros else None
        hz = zeros[-1][0] if zeros else None
        out.append(GhostCoefficient(int(entry["i"]), zeros, sum(m for _, m in zeros), lz, hz))
    return out
