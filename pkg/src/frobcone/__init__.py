"""Frobenius limits on toric rings: conic decompositions, fundamental
classes, Cohen-Macaulay cone certificates and Hilbert-Kunz fitting."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    FrobconeError,
    InvariantViolation,
    ResourceGuardExceeded,
    ValidationError,
)
from .toric import ToricRing, class_group, frobenius_decompose, limit_multiplicities, validate  # noqa: E402

__all__ = [
    "FrobconeError",
    "InvariantViolation",
    "ResourceGuardExceeded",
    "ToricRing",
    "ValidationError",
    "class_group",
    "frobenius_decompose",
    "limit_multiplicities",
    "validate",
]
