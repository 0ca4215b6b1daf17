"""Instance constructors: graphon discretizations, cyclic chains, and
seeded random families used by the test harness."""

from __future__ import annotations

from fractions import Fraction

from .errors import DensityOutOfRange
from .measures import AtomSpace, SignedMeasure2
from .numeric import parse_number


def uniform_space(n, prefix="x"):
    """n atoms with the uniform interval tiling of [0, 1)."""
    atoms = tuple(f"{prefix}{i}" for i in range(n))
    intervals = tuple((Fraction(i, n), Fraction(i + 1, n)) for i in range(n))
    return AtomSpace(atoms, intervals)


def gen_graphon(W, n):
    """Discretize a symmetric-or-not density W on the unit square.

    The space is the uniform n-partition; the pair weight on (i, j) is the
    midpoint value W(m_i, m_j) scaled by the cell area 1/n^2. Densities must
    stay within [0, 1].
    """
    if n < 1:
        raise ValueError("need at least one cell")
    space = uniform_space(n)
    mids = [Fraction(2 * i + 1, 2 * n) for i in range(n)]
    w = [[None] * n for _ in range(n)]
    cell = Fraction(1, n * n)
    for i in range(n):
        for j in range(n):
            v = W(mids[i], mids[j])
            if v < 0 or v > 1:
                raise DensityOutOfRange(
                    f"density {v} at ({mids[i]}, {mids[j]}) leaves [0, 1]"
                )
            w[i][j] = v * cell
    return space, SignedMeasure2(space, w)


def graphon_from_spec(spec):
    """Callable density from a short spec string.

    const:p      constant p
    product      W(x, y) = x * y
    min          W(x, y) = min(x, y)
    step:k:v1,.. k x k blocks, row-major values
    """
    if spec == "product":
        return lambda x, y: x * y
    if spec == "min":
        return lambda x, y: min(x, y)
    if spec.startswith("const:"):
        p = parse_number(spec[len("const:"):])
        return lambda x, y: p
    if spec.startswith("step:"):
        parts = spec.split(":", 2)
        if len(parts) != 3:
            raise ValueError(f"bad step spec {spec!r}")
        k = int(parts[1])
        vals = [parse_number(s) for s in parts[2].split(",")]
        if k < 1 or len(vals) != k * k:
            raise ValueError(f"step spec needs {k * k} values")

        def W(x, y):
            i = min(int(x * k), k - 1)
            j = min(int(y * k), k - 1)
            return vals[i * k + j]

        return W
    raise ValueError(f"unknown graphon spec {spec!r}")


def gen_cyclic(q):
    """Uniform mass 1/q on consecutive pairs of a q-cycle."""
    if q < 2:
        raise ValueError("a cycle needs at least two atoms")
    space = uniform_space(q, prefix="c")
    w = [[Fraction(0)] * q for _ in range(q)]
    for i in range(q):
        w[i][(i + 1) % q] = Fraction(1, q)
    return space, SignedMeasure2(space, w)


# ---------------------------------------------------------------------------
# seeded random families for property tests


def small_space(n, prefix="a"):
    return AtomSpace(tuple(f"{prefix}{i}" for i in range(n)))


def random_fraction(rng, lo=-2, hi=8, den=4):
    return Fraction(rng.randrange(lo * den, hi * den + 1), den)


def random_bounds(space, rng, density=0.5, signed=False):
    """(phi, psi) with phi <= psi entrywise; sparse."""
    n = space.n
    lo = [[Fraction(0)] * n for _ in range(n)]
    hi = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if rng.random() >= density:
                continue
            a = random_fraction(rng, -2 if signed else 0, 6)
            b = random_fraction(rng, -2 if signed else 0, 6)
            lo[i][j], hi[i][j] = min(a, b), max(a, b)
    return SignedMeasure2(space, lo), SignedMeasure2(space, hi)


def random_measure2(space, rng, density=0.5, lo=0, hi=6):
    n = space.n
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if rng.random() < density:
                w[i][j] = random_fraction(rng, lo, hi)
    return SignedMeasure2(space, w)


def random_acyclic(space, rng, density=0.6):
    """Nonnegative measure whose support respects a random atom order."""
    n = space.n
    order = list(range(n))
    rng.shuffle(order)
    w = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < density:
                w[order[a]][order[b]] = random_fraction(rng, 0, 6) + Fraction(1, 4)
    return SignedMeasure2(space, w)


def random_circulation(space, rng, cycles=3):
    """Nonnegative circulation: a few random directed cycles."""
    n = space.n
    w = [[Fraction(0)] * n for _ in range(n)]
    for _ in range(cycles):
        k = rng.randrange(2, n + 1)
        cyc = rng.sample(range(n), k)
        wt = random_fraction(rng, 0, 4) + Fraction(1, 4)
        for a, b in zip(cyc, cyc[1:] + [cyc[0]]):
            w[a][b] += wt
    return SignedMeasure2(space, w)


def random_pseudometric(space, rng, scale=4):
    """Shortest-path closure of random symmetric edge lengths."""
    from .multiflow import Pseudometric

    n = space.n
    big = Fraction(10 ** 6)
    d = [[Fraction(0) if i == j else big for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.7:
                v = Fraction(rng.randrange(0, scale * 4), 4)
                d[i][j] = min(d[i][j], v)
                d[j][i] = d[i][j]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = d[i][k] + d[k][j]
                if via < d[i][j]:
                    d[i][j] = via
    cap = max(x for row in d for x in row if x < big) if n > 1 else Fraction(1)
    for i in range(n):
        for j in range(n):
            if d[i][j] >= big:
                d[i][j] = cap + 1 if i != j else Fraction(0)
    return Pseudometric(space, d)


def random_walks(space, rng, count=4):
    """Walk measure with arbitrary (possibly revisiting) walks."""
    from .paths import WalkMeasure

    atoms = space.atoms
    entries = []
    for _ in range(count):
        length = rng.randrange(1, space.n + 3)
        walk = tuple(atoms[rng.randrange(space.n)] for _ in range(length))
        entries.append((walk, random_fraction(rng, 0, 3) + Fraction(1, 4)))
    return WalkMeasure(space, entries)
