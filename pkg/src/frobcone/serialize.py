"""JSON encodings. Exact rationals are canonical ``"num/den"`` strings
(``"3"`` when integral); float renderings only ever appear under a
separate ``"approx"`` key."""

from __future__ import annotations

import re
from fractions import Fraction

from .exact import TruncSeries
from .polyhedral import MembershipCertificate
from .toric import ConicClass

SCHEMA_VERSION = 1


_RAT = re.compile(r"-?\d+(/[1-9]\d*)?")


def rat(x) -> str:
    return str(Fraction(x))


def parse_rat(text: str) -> Fraction:
    if not isinstance(text, str) or not _RAT.fullmatch(text):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def approximate(obj):
    """Copy of a results tree with every rational string turned into a float."""
    if isinstance(obj, dict):
        return {k: approximate(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [approximate(v) for v in obj]
    if isinstance(obj, str) and _RAT.fullmatch(obj):
        return float(Fraction(obj))
    return obj


def series(ts: TruncSeries) -> list:
    return [rat(c) for c in ts.coeffs]


def conic_class(c: ConicClass) -> dict:
    return {
        "label": c.label,
        "element": list(c.element),
        "signature": list(c.signature),
        "free": c.is_free,
        "canonical": c.is_canonical,
    }


def class_map(mapping) -> dict:
    """``{label: value}`` for rational values, ``{label: int}`` for counts."""
    return {c.label: v if isinstance(v, int) else rat(v) for c, v in mapping.items()}


def certificate(cert: MembershipCertificate, labels=None) -> dict:
    out = {
        "verdict": cert.verdict,
        "query": [rat(x) for x in cert.query],
        "generators": [[rat(x) for x in g] for g in cert.generators],
        "verified": cert.verify(),
    }
    if labels is not None:
        out["coordinates"] = list(labels)
    if cert.coefficients is not None:
        out["coefficients"] = [rat(x) for x in cert.coefficients]
    if cert.functional is not None:
        out["functional"] = [rat(x) for x in cert.functional]
    return out


def certificate_from_json(obj) -> MembershipCertificate:
    return MembershipCertificate(
        obj["verdict"],
        tuple(parse_rat(x) for x in obj["query"]),
        tuple(tuple(parse_rat(x) for x in g) for g in obj["generators"]),
        tuple(parse_rat(x) for x in obj["coefficients"]) if "coefficients" in obj else None,
        tuple(parse_rat(x) for x in obj["functional"]) if "functional" in obj else None,
    )
