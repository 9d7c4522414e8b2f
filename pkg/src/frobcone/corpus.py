"""Bundled example rings and ideals shipped with the package."""

from __future__ import annotations

import json
from importlib import resources

from .hk import MonomialIdeal
from .toric import ToricRing, validate

RINGS = ("orthant2", "orthant3", "veronese2", "veronese3", "conifold")

# Monomial ideals used for cross-checks. The conifold cone has four rays,
# so no three monomials generate a primary ideal; it gets a four-generator
# primary ideal instead of a system of parameters.
SOPS = {
    "orthant2": ("orthant2.sop", "orthant2.box23"),
    "orthant3": ("orthant3.sop",),
    "veronese2": ("veronese2.sop",),
    "veronese3": ("veronese3.sop",),
    "conifold": ("conifold.primary",),
}
MAXIMAL = {name: f"{name}.max" for name in RINGS}


def _data():
    return resources.files("frobcone") / "data"


def _strip(name: str) -> str:
    return name[:-5] if name.endswith(".json") else name


def has_ring(name: str) -> bool:
    return _strip(name) in RINGS


def ring_spec(name: str) -> dict:
    return json.loads((_data() / "rings" / f"{_strip(name)}.json").read_text())


def load_ring(name: str) -> ToricRing:
    return validate(ToricRing.from_spec(ring_spec(name)))


def has_ideal(name: str) -> bool:
    return (_data() / "ideals" / f"{_strip(name)}.json").is_file()


def ideal_spec(name: str) -> dict:
    return json.loads((_data() / "ideals" / f"{_strip(name)}.json").read_text())


def load_ideal(name: str) -> MonomialIdeal:
    return MonomialIdeal.from_spec(ideal_spec(name))
