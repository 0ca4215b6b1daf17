"""Containers for witnesses of infeasibility and optimality.

Each certificate stores the two sides of the inequality it violates (or
attains, for DualPair); re-evaluation lives in the verify module so that a
certificate can be checked without trusting the solver that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

from .measures import Potential


@dataclass(frozen=True)
class CutCertificate:
    """A set X whose cut inequality fails: lhs > rhs."""

    set_X: frozenset
    lhs: Real
    rhs: Real


@dataclass(frozen=True)
class PotentialCertificate:
    """A potential f and b in {-1, 0, +1} violating the tagged condition.

    The tag fixes which inequality lhs < rhs instantiates:
    JJFB1 (b=+1), JJFB2 (b=-1), JJFB3 (b=0), ERG, MINCOST.
    """

    f: Potential
    b: int
    violated_condition: str
    lhs: Real
    rhs: Real


@dataclass(frozen=True)
class RectangleCertificate:
    """A pair of sets S, T violating the operation's rectangle inequality."""

    set_S: frozenset
    set_T: frozenset
    lhs: Real
    rhs: Real


@dataclass(frozen=True)
class DualPair:
    """Feasible dual potentials with g(x)+h(y) <= c(x,y) attaining value."""

    g: Potential
    h: Potential
    value: Real
