"""Shared builders for the test suite. All weights exact rationals."""

from fractions import Fraction

import pytest

from measureflow import AtomSpace, SignedMeasure1, SignedMeasure2


@pytest.fixture
def ab():
    return AtomSpace(("a", "b"))


@pytest.fixture
def smt():
    return AtomSpace(("s", "m", "t"))


@pytest.fixture
def abc():
    return AtomSpace(("a", "b", "c"))


def m2(space, entries):
    return SignedMeasure2.from_dict(
        space, {k: Fraction(v) for k, v in entries.items()}
    )


def m1(space, entries):
    return SignedMeasure1.from_dict(
        space, {k: Fraction(v) for k, v in entries.items()}
    )


def k23_instance():
    """Bipartite 2x3 instance: every cut passes, no feasible routing."""
    space = AtomSpace(("u1", "u2", "v1", "v2", "v3"))
    cap = {}
    for u in ("u1", "u2"):
        for v in ("v1", "v2", "v3"):
            cap[(u, v)] = 1
            cap[(v, u)] = 1
    dem = {("u1", "u2"): 1, ("u2", "u1"): 1}
    for a, b in (("v1", "v2"), ("v1", "v3"), ("v2", "v3")):
        dem[(a, b)] = 1
        dem[(b, a)] = 1
    return space, m2(space, dem), m2(space, cap)
