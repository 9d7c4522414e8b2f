import itertools
import sys
import math
from fractions import Fraction

import pytest

from frobcone import corpus
from frobcone.toric import ToricRing, validate


def make_ring(facets, p=2, name="inline"):
    return validate(ToricRing(name, p, len(facets[0]), tuple(tuple(r) for r in facets)))


def brute_signatures(ring, start, e):
    """Signature histogram of F^e_* M_start by looping over every residue."""
    q = ring.p ** e
    A = ring.A
    out = {}
    for u in itertools.product(range(q), repeat=ring.d):
        sig = tuple(-((-(s - sum(a * x for a, x in zip(row, u)))) // q) for s, row in zip(start, A))
        out[sig] = out.get(sig, 0) + 1
    return out


@pytest.fixture(scope="session")
def rings():
    return {name: corpus.load_ring(name) for name in corpus.RINGS}


@pytest.fixture
def veronese2_p2():
    return make_ring([[0, 1], [2, -1]], p=2, name="veronese2-p2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
