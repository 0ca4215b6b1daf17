"""Signed-measure algebra on a finite atom space and its square.

An AtomSpace fixes an ordered list of atom labels; SignedMeasure1 holds one
weight per atom, SignedMeasure2 one weight per ordered atom pair. Weights are
plain numbers (int/Fraction in rational mode, float otherwise). All operations
are pure; measures are immutable after construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NegativeMeasure
from .numeric import check_finite, format_number, infer_mode


class AtomSpace:
    """Finite labeled partition of the ground set.

    Optionally carries per-atom half-open subintervals of [0,1) (used by the
    generators); when present they must tile [0,1).
    """

    __slots__ = ("atoms", "intervals", "_index")

    def __init__(self, atoms: Sequence[str], intervals=None):
        atoms = tuple(str(a) for a in atoms)
        if len(set(atoms)) != len(atoms):
            raise ValueError("atom labels must be pairwise distinct")
        if not atoms:
            raise ValueError("need at least one atom")
        self.atoms = atoms
        if intervals is not None:
            intervals = tuple((lo, hi) for lo, hi in intervals)
            if len(intervals) != len(atoms):
                raise ValueError("one interval per atom required")
            for lo, hi in intervals:
                if not lo < hi:
                    raise ValueError("intervals must be nonempty half-open [lo, hi)")
            spans = sorted(intervals)
            if spans[0][0] != 0 or spans[-1][1] != 1:
                raise ValueError("intervals must cover [0,1)")
            for (_, hi), (lo2, _) in zip(spans, spans[1:]):
                if hi != lo2:
                    raise ValueError("intervals must be disjoint and cover [0,1)")
        self.intervals = intervals
        self._index = {a: i for i, a in enumerate(atoms)}

    @property
    def n(self) -> int:
        return len(self.atoms)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown atom {label!r}") from None

    def indices(self, labels: Iterable[str]) -> frozenset:
        return frozenset(self.index(a) for a in labels)

    def __eq__(self, other):
        return isinstance(other, AtomSpace) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __repr__(self):
        return f"AtomSpace({list(self.atoms)!r})"


def _check_space(a, b):
    if a.space != b.space:
        raise ValueError("measures live on different atom spaces")


class SignedMeasure1:
    """Signed measure on the atom space: one weight per atom."""

    __slots__ = ("space", "w")

    def __init__(self, space: AtomSpace, weights):
        w = list(weights)
        if len(w) != space.n:
            raise ValueError("weight table length must equal atom count")
        for x in w:
            check_finite(x)
        self.space = space
        self.w = w

    @classmethod
    def zero(cls, space):
        return cls(space, [0] * space.n)

    @classmethod
    def from_dict(cls, space, entries: dict):
        w = [0] * space.n
        for label, val in entries.items():
            w[space.index(label)] = val
        return cls(space, w)

    @classmethod
    def point_mass(cls, space, label, weight=1):
        w = [0] * space.n
        w[space.index(label)] = weight
        return cls(space, w)

    def __getitem__(self, label):
        return self.w[self.space.index(label)]

    def mass(self):
        return sum(self.w)

    def total_set(self, indices) -> "number":
        return sum(self.w[i] for i in indices)

    def integral(self, values: Sequence) -> "number":
        """Integral of a per-atom function given as a positional list."""
        return sum(wi * vi for wi, vi in zip(self.w, values))

    def is_nonnegative(self, tol=0) -> bool:
        return all(x >= -tol for x in self.w)

    def __add__(self, other):
        _check_space(self, other)
        return SignedMeasure1(self.space, [a + b for a, b in zip(self.w, other.w)])

    def __sub__(self, other):
        _check_space(self, other)
        return SignedMeasure1(self.space, [a - b for a, b in zip(self.w, other.w)])

    def __neg__(self):
        return SignedMeasure1(self.space, [-a for a in self.w])

    def scale(self, factor):
        return SignedMeasure1(self.space, [a * factor for a in self.w])

    def __eq__(self, other):
        return (
            isinstance(other, SignedMeasure1)
            and self.space == other.space
            and all(a == b for a, b in zip(self.w, other.w))
        )

    def close_to(self, other, tol):
        _check_space(self, other)
        return all(abs(a - b) <= tol for a, b in zip(self.w, other.w))

    def as_dict(self):
        return {a: self.w[i] for i, a in enumerate(self.space.atoms) if self.w[i] != 0}

    def __repr__(self):
        body = ", ".join(f"{a}: {format_number(x)}" for a, x in self.as_dict().items())
        return f"SignedMeasure1({{{body}}})"


class SignedMeasure2:
    """Signed measure on ordered atom pairs: an n-by-n weight table.

    Also doubles as the container for bounded pair functions (costs, value
    tables) since both are just pair-indexed reals at this scale.
    """

    __slots__ = ("space", "w")

    def __init__(self, space: AtomSpace, weights):
        w = [list(row) for row in weights]
        n = space.n
        if len(w) != n or any(len(row) != n for row in w):
            raise ValueError("pair table must be n-by-n")
        for row in w:
            for x in row:
                check_finite(x)
        self.space = space
        self.w = w

    @classmethod
    def zero(cls, space):
        n = space.n
        return cls(space, [[0] * n for _ in range(n)])

    @classmethod
    def constant(cls, space, value):
        n = space.n
        return cls(space, [[value] * n for _ in range(n)])

    @classmethod
    def from_dict(cls, space, entries: dict):
        n = space.n
        w = [[0] * n for _ in range(n)]
        for (a, b), val in entries.items():
            w[space.index(a)][space.index(b)] = val
        return cls(space, w)

    @classmethod
    def point_mass(cls, space, a, b, weight=1):
        return cls.from_dict(space, {(a, b): weight})

    def __getitem__(self, pair):
        a, b = pair
        return self.w[self.space.index(a)][self.space.index(b)]

    def mass(self):
        return sum(sum(row) for row in self.w)

    def rect(self, rows, cols):
        """Mass of the rectangle S x T, given index collections."""
        return sum(self.w[i][j] for i in rows for j in cols)

    def pairing(self, table: "SignedMeasure2"):
        """Integral of a pair function: sum of w(x,y) * table(x,y)."""
        _check_space(self, table)
        return sum(
            a * b for ra, rb in zip(self.w, table.w) for a, b in zip(ra, rb)
        )

    def support(self):
        """Ordered pairs (i, j) with nonzero weight."""
        return [
            (i, j)
            for i, row in enumerate(self.w)
            for j, x in enumerate(row)
            if x != 0
        ]

    def is_nonnegative(self, tol=0) -> bool:
        return all(x >= -tol for row in self.w for x in row)

    def is_symmetric(self, tol=0) -> bool:
        n = self.space.n
        return all(
            abs(self.w[i][j] - self.w[j][i]) <= tol
            for i in range(n)
            for j in range(i + 1, n)
        )

    def leq(self, other, tol=0) -> bool:
        _check_space(self, other)
        return all(
            a <= b + tol for ra, rb in zip(self.w, other.w) for a, b in zip(ra, rb)
        )

    def __add__(self, other):
        _check_space(self, other)
        return SignedMeasure2(
            self.space,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.w, other.w)],
        )

    def __sub__(self, other):
        _check_space(self, other)
        return SignedMeasure2(
            self.space,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.w, other.w)],
        )

    def __neg__(self):
        return SignedMeasure2(self.space, [[-a for a in row] for row in self.w])

    def scale(self, factor):
        return SignedMeasure2(self.space, [[a * factor for a in row] for row in self.w])

    def __eq__(self, other):
        return (
            isinstance(other, SignedMeasure2)
            and self.space == other.space
            and all(ra == rb for ra, rb in zip(self.w, other.w))
        )

    def close_to(self, other, tol):
        _check_space(self, other)
        return all(
            abs(a - b) <= tol for ra, rb in zip(self.w, other.w) for a, b in zip(ra, rb)
        )

    def as_dict(self):
        atoms = self.space.atoms
        return {
            (atoms[i], atoms[j]): x
            for i, row in enumerate(self.w)
            for j, x in enumerate(row)
            if x != 0
        }

    def __repr__(self):
        body = ", ".join(
            f"({a},{b}): {format_number(x)}" for (a, b), x in self.as_dict().items()
        )
        return f"SignedMeasure2({{{body}}})"


class Potential:
    """Per-atom function f inducing the pair function F(x,y) = f(x) - f(y)."""

    __slots__ = ("space", "f")

    def __init__(self, space: AtomSpace, values):
        f = list(values)
        if len(f) != space.n:
            raise ValueError("potential length must equal atom count")
        for x in f:
            check_finite(x, "potential value")
        self.space = space
        self.f = f

    @classmethod
    def zero(cls, space):
        return cls(space, [0] * space.n)

    @classmethod
    def indicator(cls, space, labels):
        idx = space.indices(labels)
        return cls(space, [1 if i in idx else 0 for i in range(space.n)])

    @classmethod
    def from_dict(cls, space, entries: dict):
        f = [0] * space.n
        for label, val in entries.items():
            f[space.index(label)] = val
        return cls(space, f)

    def F(self, i: int, j: int):
        return self.f[i] - self.f[j]

    def pair_table(self) -> SignedMeasure2:
        n = self.space.n
        return SignedMeasure2(
            self.space, [[self.f[i] - self.f[j] for j in range(n)] for i in range(n)]
        )

    def normalized(self) -> "Potential":
        """Shift so min f = 0 (F is invariant under constant shifts)."""
        m = min(self.f)
        return Potential(self.space, [x - m for x in self.f])

    def as_dict(self):
        return {a: self.f[i] for i, a in enumerate(self.space.atoms)}

    def __eq__(self, other):
        return (
            isinstance(other, Potential)
            and self.space == other.space
            and all(a == b for a, b in zip(self.f, other.f))
        )

    def __repr__(self):
        body = ", ".join(f"{a}: {format_number(x)}" for a, x in self.as_dict().items())
        return f"Potential({{{body}}})"


class CutChain:
    """Level-set decomposition of a potential: (threshold, set) pairs.

    Thresholds strictly increase while the sets strictly shrink; each entry
    carries the weight (threshold gap) used in reconstruction.
    """

    __slots__ = ("space", "entries")

    def __init__(self, space, entries):
        entries = [(t, frozenset(s), w) for t, s, w in entries]
        for (t1, s1, _), (t2, s2, _) in zip(entries, entries[1:]):
            if not t1 < t2:
                raise ValueError("thresholds must strictly increase")
            if not s2 < s1:
                raise ValueError("sets must strictly decrease")
        for _, s, w in entries:
            if not s:
                raise ValueError("cut sets must be nonempty")
            if w <= 0:
                raise ValueError("cut weights must be positive")
        self.space = space
        self.entries = entries

    def eval_pair(self, i: int, j: int):
        """Reconstructed F(i,j) = sum of w * (1_A(i) - 1_A(j))."""
        total = 0
        for _, s, w in self.entries:
            total += w * ((i in s) - (j in s))
        return total

    def to_potential(self) -> Potential:
        """Reassembled potential, normalized to min 0."""
        f = [0] * self.space.n
        for _, s, w in self.entries:
            for i in s:
                f[i] += w
        return Potential(self.space, f)

    def __len__(self):
        return len(self.entries)


# ---------------------------------------------------------------------------
# operations


def marginals(mu: SignedMeasure2):
    """(row sums, column sums): first and second marginal of the pair measure."""
    n = mu.space.n
    first = [sum(mu.w[i]) for i in range(n)]
    second = [sum(mu.w[i][j] for i in range(n)) for j in range(n)]
    return SignedMeasure1(mu.space, first), SignedMeasure1(mu.space, second)


def transpose(mu: SignedMeasure2) -> SignedMeasure2:
    n = mu.space.n
    return SignedMeasure2(
        mu.space, [[mu.w[j][i] for j in range(n)] for i in range(n)]
    )


def _jordan_weights(weights):
    pos, neg = [], []
    for x in weights:
        if x >= 0:
            pos.append(x)
            neg.append(0)
        else:
            pos.append(0)
            neg.append(-x)
    return pos, neg


def jordan(mu):
    """Split into nonnegative parts with disjoint supports: mu = pos - neg.

    Zero-weight atoms land in the positive part, which keeps the split
    deterministic; neither side of the sup/inf in the TV norm cares.
    """
    if isinstance(mu, SignedMeasure1):
        pos, neg = _jordan_weights(mu.w)
        return SignedMeasure1(mu.space, pos), SignedMeasure1(mu.space, neg)
    pos_rows, neg_rows = [], []
    for row in mu.w:
        pos, neg = _jordan_weights(row)
        pos_rows.append(pos)
        neg_rows.append(neg)
    return SignedMeasure2(mu.space, pos_rows), SignedMeasure2(mu.space, neg_rows)


def tv_norm(mu):
    """Total variation: sup over sets minus inf over sets = sum of |weights|."""
    if isinstance(mu, SignedMeasure1):
        return sum(abs(x) for x in mu.w)
    return sum(abs(x) for row in mu.w for x in row)


def positive_part(mu):
    return jordan(mu)[0]


def setminus(alpha, beta):
    """(alpha - beta) clamped below at zero, atom-wise."""
    return positive_part(alpha - beta)


def meet(alpha, beta):
    """Greatest measure dominated by both nonnegative inputs."""
    if not alpha.is_nonnegative() or not beta.is_nonnegative():
        raise NegativeMeasure("meet requires nonnegative measures")
    return alpha - setminus(alpha, beta)


def product(lambda1: SignedMeasure1, lambda2: SignedMeasure1) -> SignedMeasure2:
    """Product measure: result(x,y) = lambda1(x) * lambda2(y)."""
    _check_space(lambda1, lambda2)
    return SignedMeasure2(
        lambda1.space, [[a * b for b in lambda2.w] for a in lambda1.w]
    )


def is_circulation(alpha: SignedMeasure2, tol=0) -> bool:
    """True iff the two marginals agree: ||alpha^1 - alpha^2|| <= tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    first, second = marginals(alpha)
    return tv_norm(first - second) <= tol


def eval_potential(mu: SignedMeasure2, pot: Potential):
    """mu(F) = sum over pairs of mu(x,y) * (f(x) - f(y)).

    Equals (mu^1 - mu^2)(f), so it vanishes exactly on circulations.
    """
    _check_space(mu, pot)
    first, second = marginals(mu)
    return (first - second).integral(pot.f)


def potential_to_cuts(pot: Potential) -> CutChain:
    """Level sets A_t = {x : f(x) >= t} at the distinct values of f.

    The chain reconstructs F exactly: F(x,y) = sum w_t (1_{A_t}(x) - 1_{A_t}(y))
    with w_t the gap between consecutive distinct values.
    """
    n = pot.space.n
    values = sorted(set(pot.f))
    entries = []
    for prev, t in zip(values, values[1:]):
        level = frozenset(i for i in range(n) if pot.f[i] >= t)
        entries.append((t, level, t - prev))
    return CutChain(pot.space, entries)


def circulation_space_dim(mu: SignedMeasure2) -> int:
    """Dimension of the space of circulations supported within supp(mu).

    Exact Gaussian elimination on the marginal-balance system restricted to
    the support pairs.
    """
    support = mu.support()
    if not support:
        return 0
    n = mu.space.n
    # rows: balance at each atom; columns: one per support pair
    rows = []
    for z in range(n):
        row = []
        for (i, j) in support:
            coef = (1 if i == z else 0) - (1 if j == z else 0)
            row.append(Fraction(coef))
        rows.append(row)
    rank = 0
    ncols = len(support)
    pivot_row = 0
    for col in range(ncols):
        sel = None
        for r in range(pivot_row, n):
            if rows[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        pv = rows[pivot_row][col]
        rows[pivot_row] = [x / pv for x in rows[pivot_row]]
        for r in range(n):
            if r != pivot_row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        rank += 1
        if pivot_row == n:
            break
    return ncols - rank


def measure_mode(*measures) -> str:
    """Arithmetic mode inferred from a collection of measures/potentials."""
    n = 1
    tables = []
    for m in measures:
        if m is None:
            continue
        if isinstance(m, SignedMeasure2):
            n = max(n, m.space.n)
            tables.append(x for row in m.w for x in row)
        elif isinstance(m, SignedMeasure1):
            n = max(n, m.space.n)
            tables.append(iter(m.w))
        elif isinstance(m, Potential):
            n = max(n, m.space.n)
            tables.append(iter(m.f))
        else:
            tables.append(iter(m))
    return infer_mode(n, *tables)
