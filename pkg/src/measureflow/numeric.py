"""Number handling for the dual arithmetic modes.

Weights are plain Python numbers: int/Fraction in rational mode, float in
float mode. Mode is inferred from the inputs unless forced; rational is the
default whenever every weight is exact and the space is small enough for
exact pivoting to stay cheap.
"""

import math
from fractions import Fraction

RATIONAL = "rational"
FLOAT = "float"

DEFAULT_TOL = 1e-9

# Above this atom count exact pivoting gets expensive; default to floats.
RATIONAL_ATOM_LIMIT = 64


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def check_finite(x, what="weight"):
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"non-finite {what}: {x!r}")
    return x


def parse_number(text: str):
    """Parse a numeric literal: 'p/q' exact, integer exact, decimal -> Fraction.

    Decimals are read exactly (0.25 -> 1/4) so instance files round-trip
    losslessly; callers convert to float only when float mode is forced.
    """
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    if any(ch in text for ch in ".eE"):
        return Fraction(text)
    return Fraction(int(text))


def format_number(x) -> str:
    if isinstance(x, bool):
        raise TypeError("bool is not a weight")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(x)


def infer_mode(n_atoms: int, *weight_iterables) -> str:
    """Rational when every weight is exact and the space is small enough."""
    if n_atoms > RATIONAL_ATOM_LIMIT:
        return FLOAT
    for it in weight_iterables:
        for w in it:
            if not is_exact(w):
                return FLOAT
    return RATIONAL


def resolve_tol(mode: str, tol):
    """Effective comparison tolerance: exact mode compares exactly."""
    if mode == RATIONAL:
        return 0
    return DEFAULT_TOL if tol is None else tol
