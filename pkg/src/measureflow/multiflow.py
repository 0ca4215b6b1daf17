"""Multicommodity flows, pseudometric separation, and load tensors.

Feasibility of a symmetric demand/capacity pair is decided by one LP over
per-demand unit flows plus overload slack. When the demands cannot be routed
within the allowed overload, the dual is realized as a [0,1]-valued
pseudometric whose demand volume exceeds its capacity volume; cut metrics
are the special case of indicator pseudometrics, and the gap witness found
by worst_pseudometric need not be one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import (
    ExtractFailure,
    NegativeCapacity,
    NegativeEpsilon,
    NegativeMeasure,
    NotPseudometric,
    NotSymmetric,
    VerificationFailure,
)
from .flows import PIVOT_TOL, _num, _run_lp, _setup, _table
from .measures import SignedMeasure1, SignedMeasure2, transpose, tv_norm, setminus
from .numeric import FLOAT, RATIONAL, to_fraction
from .simplex import INF


class Pseudometric:
    """Symmetric nonnegative table with zero diagonal; not validated on
    construction, see is_pseudometric."""

    __slots__ = ("space", "d")

    def __init__(self, space, d):
        if len(d) != space.n or any(len(row) != space.n for row in d):
            raise ValueError("distance table must be square over the atom space")
        self.space = space
        self.d = [list(row) for row in d]

    @classmethod
    def zero(cls, space):
        return cls(space, [[0] * space.n for _ in range(space.n)])

    @classmethod
    def from_dict(cls, space, table):
        d = [[0] * space.n for _ in range(space.n)]
        for (x, y), v in table.items():
            d[space.index(x)][space.index(y)] = v
        return cls(space, d)

    @classmethod
    def cut(cls, space, part, scale=1):
        """Indicator pseudometric of a bipartition: scale if separated."""
        inside = frozenset(space.index(a) for a in part)
        d = [
            [scale if (i in inside) != (j in inside) else 0 for j in range(space.n)]
            for i in range(space.n)
        ]
        return cls(space, d)

    def dist(self, x, y):
        return self.d[self.space.index(x)][self.space.index(y)]

    def as_dict(self):
        atoms = self.space.atoms
        return {
            (atoms[i], atoms[j]): self.d[i][j]
            for i in range(self.space.n)
            for j in range(self.space.n)
            if self.d[i][j]
        }

    def __repr__(self):
        return f"Pseudometric({self.as_dict()})"


def is_pseudometric(D: Pseudometric, tol=0):
    """True, or the first violating atom tuple.

    Length 1: nonzero diagonal; length 2: asymmetry or negative entry;
    length 3: triangle failure d(x,z) > d(x,y) + d(y,z).
    """
    n = D.space.n
    d = D.d
    atoms = D.space.atoms
    for i in range(n):
        if abs(d[i][i]) > tol:
            return (atoms[i],)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(d[i][j] - d[j][i]) > tol or d[i][j] < -tol:
                return (atoms[i], atoms[j])
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if i == j or j == k or i == k:
                    continue
                if d[i][k] - d[i][j] - d[j][k] > tol:
                    return (atoms[i], atoms[j], atoms[k])
    return True


def _require_symmetric(m, tol, what):
    if not m.is_symmetric(tol):
        raise NotSymmetric(f"{what} must be symmetric")


def volume_condition(sigma, psi, D: Pseudometric, tol=0):
    """(demand volume sigma(d), capacity volume psi(d)) for a pseudometric."""
    _require_symmetric(sigma, tol, "demands")
    _require_symmetric(psi, tol, "capacities")
    out = is_pseudometric(D, tol)
    if out is not True:
        raise NotPseudometric(f"axiom violated at {out}")
    n = sigma.space.n
    lhs = sum(sigma.w[i][j] * D.d[i][j] for i in range(n) for j in range(n))
    rhs = sum(psi.w[i][j] * D.d[i][j] for i in range(n) for j in range(n))
    return lhs, rhs


def worst_pseudometric(sigma, psi, mode=None, tol=None):
    """Maximize sigma(d) - psi(d) over [0,1]-valued pseudometrics d.

    Returns (Pseudometric, gap). gap <= 0 certifies the volume condition
    for every bounded pseudometric; gap > 0 is a separation witness.
    """
    mode, tol = _setup(mode, tol, sigma, psi)
    _require_symmetric(sigma, tol, "demands")
    _require_symmetric(psi, tol, "capacities")
    n = sigma.space.n
    sig = _table(sigma, mode)
    cap = _table(psi, mode)

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    col = {p: k for k, p in enumerate(pairs)}
    nv = len(pairs)
    zero = _num(0, mode)
    one = _num(1, mode)

    # max (sigma - psi)(d) -> min -(coef . d)
    c = [-(sig[i][j] + sig[j][i] - cap[i][j] - cap[j][i]) for i, j in pairs]
    A_ub = []
    b_ub = []
    for i, j in pairs:
        for mid in range(n):
            if mid == i or mid == j:
                continue
            row = [zero] * nv
            row[col[(i, j)]] = one
            row[col[tuple(sorted((i, mid)))]] += -one
            row[col[tuple(sorted((mid, j)))]] += -one
            A_ub.append(row)
            b_ub.append(zero)
    lo = [zero] * nv
    up = [one] * nv

    res = _run_lp(c, [], [], lo, up, mode, A_ub=A_ub, b_ub=b_ub)
    if res.status != "optimal":
        raise VerificationFailure("pseudometric search LP must be feasible")
    d = [[zero] * n for _ in range(n)]
    for (i, j), k in col.items():
        d[i][j] = res.x[k]
        d[j][i] = res.x[k]
    D = Pseudometric(sigma.space, d)
    out = is_pseudometric(D, tol if mode == FLOAT else 0)
    if out is not True:
        raise VerificationFailure(f"search returned a non-pseudometric at {out}")
    gap = -res.objective
    return D, gap


@dataclass(frozen=True)
class MultiFlow:
    """Unit flows per ordered demand pair plus their capacity load.

    flows[(s, t)] is a value-1 flow from s to t scaled to unit mass;
    flows[(t, s)] is its transpose. total_load is the sigma-weighted sum,
    always symmetric.
    """

    sigma: SignedMeasure2
    flows: dict
    total_load: SignedMeasure2

    def overload(self, psi):
        return tv_norm(setminus(self.total_load, psi))


def _demand_pairs(sigma, n):
    return [(i, j) for i in range(n) for j in range(i + 1, n) if sigma.w[i][j] > 0]


def solve_multicommodity(sigma, psi, epsilon=0, mode=None, tol=None):
    """Route all demands within capacity, up to total overload epsilon.

    Returns a MultiFlow when feasible; otherwise a Pseudometric certificate d
    with sigma(d) > psi(d) (obtained via worst_pseudometric, re-verified
    exactly).
    """
    mode, tol = _setup(mode, tol, sigma, psi, [epsilon])
    _require_symmetric(sigma, tol, "demands")
    _require_symmetric(psi, tol, "capacities")
    if not sigma.is_nonnegative(tol):
        raise NegativeMeasure("demands must be nonnegative")
    if not psi.is_nonnegative(tol):
        raise NegativeCapacity("capacities must be nonnegative")
    if epsilon < 0:
        raise NegativeEpsilon("overload budget must be nonnegative")

    n = sigma.space.n
    atoms = sigma.space.atoms
    sig = _table(sigma, mode)
    eps = _num(epsilon, mode)
    zero = _num(0, mode)
    one = _num(1, mode)

    pairs = _demand_pairs(sigma, n)
    arcs = [(x, y) for x in range(n) for y in range(n) if x != y]
    na = len(arcs)
    over = [(x, y) for x in range(n) for y in range(x + 1, n)]
    nflow = len(pairs) * na
    nv = nflow + len(over)

    def fcol(p, a):
        return p * na + a

    c = [zero] * nflow + [one + one] * len(over)
    lo = [zero] * nv
    up = [INF] * nv

    A_eq = []
    b_eq = []
    for p, (s, t) in enumerate(pairs):
        for z in range(n):
            row = [zero] * nv
            for a, (x, y) in enumerate(arcs):
                if x == z:
                    row[fcol(p, a)] += one
                if y == z:
                    row[fcol(p, a)] += -one
            A_eq.append(row)
            b_eq.append(one if z == s else (-one if z == t else zero))

    A_ub = []
    b_ub = []
    cap = _table(psi, mode)
    for k, (x, y) in enumerate(over):
        row = [zero] * nv
        for p, (s, t) in enumerate(pairs):
            w = sig[s][t]
            for a, (ax, ay) in enumerate(arcs):
                if (ax, ay) in ((x, y), (y, x)):
                    row[fcol(p, a)] += w
        row[nflow + k] = -one
        A_ub.append(row)
        b_ub.append(cap[x][y])

    if pairs:
        res = _run_lp(c, A_eq, b_eq, lo, up, mode, A_ub=A_ub, b_ub=b_ub)
        if res.status != "optimal":
            raise VerificationFailure("overload LP is always feasible")
        min_overload = res.objective
    else:
        res = None
        min_overload = zero

    if min_overload <= eps + tol:
        flows = {}
        load = [[zero] * n for _ in range(n)]
        for p, (s, t) in enumerate(pairs):
            f = [[zero] * n for _ in range(n)]
            for a, (x, y) in enumerate(arcs):
                v = res.x[fcol(p, a)]
                f[x][y] = v
                load[x][y] += sig[s][t] * v
                load[y][x] += sig[s][t] * v
            flow = SignedMeasure2(sigma.space, f)
            flows[(atoms[s], atoms[t])] = flow
            flows[(atoms[t], atoms[s])] = transpose(flow)
        for i in range(n):
            if sig[i][i] > 0:
                flows[(atoms[i], atoms[i])] = SignedMeasure2.zero(sigma.space)
        mf = MultiFlow(sigma, flows, SignedMeasure2(sigma.space, load))
        _verify_multiflow(mf, psi, eps, tol)
        return mf

    D, gap = worst_pseudometric(sigma, psi, mode, tol)
    if not gap > tol:
        raise VerificationFailure("infeasible instance must admit a gap witness")
    _verify_metric_cert(sigma, psi, D)
    return D


def _verify_multiflow(mf: MultiFlow, psi, eps, tol):
    space = mf.sigma.space
    for (s, t), flow in mf.flows.items():
        si, ti = space.index(s), space.index(t)
        div = [sum(flow.w[i]) - sum(flow.w[j][i] for j in range(space.n))
               for i in range(space.n)]
        for i in range(space.n):
            want = (1 if i == si else 0) - (1 if i == ti else 0)
            if abs(div[i] - want) > tol:
                raise VerificationFailure("demand flow is not a unit flow")
        if not flow.is_nonnegative(tol):
            raise VerificationFailure("demand flow has negative weight")
    if not mf.total_load.is_symmetric(tol):
        raise VerificationFailure("total load must be symmetric")
    if mf.overload(psi) > eps + tol + tol:
        raise VerificationFailure("overload exceeds the budget")


def _verify_metric_cert(sigma, psi, D: Pseudometric):
    """Exact recheck: d is a pseudometric and sigma(d) > psi(d) strictly."""
    n = sigma.space.n
    d = [[to_fraction(x) for x in row] for row in D.d]
    exact = Pseudometric(sigma.space, d)
    out = is_pseudometric(exact, 0)
    if out is not True:
        raise VerificationFailure(f"certificate violates a metric axiom at {out}")
    lhs = sum(
        to_fraction(sigma.w[i][j]) * d[i][j] for i in range(n) for j in range(n)
    )
    rhs = sum(
        to_fraction(psi.w[i][j]) * d[i][j] for i in range(n) for j in range(n)
    )
    if not lhs > rhs:
        raise VerificationFailure("certificate volume gap is not strict")


@dataclass(frozen=True)
class LoadTensor:
    """Measure on pair-of-pairs: slices[(s, t)][x][y] holds the mass the
    (s, t) demand places on the arc (x, y)."""

    space: object
    slices: dict

    def project_arcs(self):
        """Marginal on the arc coordinates (sum over demand labels)."""
        n = self.space.n
        tot = [[0] * n for _ in range(n)]
        for tab in self.slices.values():
            for i in range(n):
                for j in range(n):
                    tot[i][j] += tab[i][j]
        return SignedMeasure2(self.space, tot)

    def star(self):
        """Swap arc orientation and demand orientation simultaneously."""
        flipped = {}
        for (s, t), tab in self.slices.items():
            n = self.space.n
            flipped[(t, s)] = [[tab[j][i] for j in range(n)] for i in range(n)]
        return LoadTensor(self.space, flipped)


def build_load_tensor(mf: MultiFlow) -> LoadTensor:
    """Scale each unit demand flow by its demand mass."""
    space = mf.sigma.space
    slices = {}
    for (s, t), flow in mf.flows.items():
        w = mf.sigma.w[space.index(s)][space.index(t)]
        slices[(s, t)] = [[w * x for x in row] for row in flow.w]
    return LoadTensor(space, slices)


def extract_flows(tensor: LoadTensor, sigma, tol=0) -> MultiFlow:
    """Recover per-demand unit flows from a load tensor.

    Slices over demand pairs outside the support of sigma are dropped; the
    remaining slices must be nonnegative with divergence sigma(s,t) at s,
    -sigma(s,t) at t, and zero elsewhere, else ExtractFailure.
    """
    space = tensor.space
    n = space.n
    atoms = space.atoms
    flows = {}
    load = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            w = sigma.w[i][j]
            if not w > 0:
                continue
            if i == j:
                flows[(atoms[i], atoms[j])] = SignedMeasure2.zero(space)
                continue
            tab = tensor.slices.get((atoms[i], atoms[j]))
            if tab is None:
                raise ExtractFailure(f"missing slice for demand {atoms[i]},{atoms[j]}")
            for x in range(n):
                for y in range(n):
                    if tab[x][y] < -tol:
                        raise ExtractFailure("load tensor has a negative entry")
                want = w * ((1 if x == i else 0) - (1 if x == j else 0))
                div = sum(tab[x]) - sum(tab[y][x] for y in range(n))
                if abs(div - want) > tol:
                    raise ExtractFailure("slice divergence does not match the demand")
            flows[(atoms[i], atoms[j])] = SignedMeasure2(
                space, [[v / w for v in row] for row in tab]
            )
            for x in range(n):
                for y in range(n):
                    load[x][y] += tab[x][y]
    return MultiFlow(sigma, flows, SignedMeasure2(space, load))


@dataclass(frozen=True)
class AxiomReport:
    diagonal_ok: bool
    transpose_ok: bool
    triangle_ok: bool
    witness: tuple | None
    trials: int
    seed: int

    @property
    def passed(self):
        return self.diagonal_ok and self.transpose_ok and self.triangle_ok


def metrical_axiom_check(D: Pseudometric, trials=200, seed=0, tol=1e-12):
    """Probe the lifted axioms of the pair functional mu -> mu(d).

    (a) vanishing on diagonal-supported measures, (b) transpose invariance,
    (c) triangle inequality against measures on atom triples: every point
    mass first, then seeded random nonnegative combinations. Violations are
    reported, never raised.
    """
    n = D.space.n
    d = D.d
    atoms = D.space.atoms

    diagonal_ok = all(abs(d[i][i]) <= tol for i in range(n))
    transpose_ok = all(
        abs(d[i][j] - d[j][i]) <= tol for i in range(n) for j in range(n)
    )
    witness = None
    triangle_ok = True

    def triple_gap(kappa):
        # D(k^{12}) + D(k^{23}) - D(k^{13}) for kappa on ordered triples
        total = 0
        for (i, j, k), w in kappa.items():
            total += w * (d[i][j] + d[j][k] - d[i][k])
        return total

    for i in range(n):
        for j in range(n):
            for k in range(n):
                if triple_gap({(i, j, k): 1}) < -tol:
                    triangle_ok = False
                    witness = (atoms[i], atoms[j], atoms[k])
                    break
            if witness:
                break
        if witness:
            break

    rng = random.Random(seed)
    if triangle_ok:
        for _ in range(trials):
            kappa = {}
            for _ in range(rng.randrange(1, n + 2)):
                key = (rng.randrange(n), rng.randrange(n), rng.randrange(n))
                kappa[key] = kappa.get(key, 0) + Fraction(rng.randrange(1, 16), 16)
            if triple_gap(kappa) < -tol:
                triangle_ok = False
                worst = min(kappa, key=lambda key: triple_gap({key: 1}))
                witness = tuple(atoms[i] for i in worst)
                break

    return AxiomReport(diagonal_ok, transpose_ok, triangle_ok, witness, trials, seed)


def _random_symmetric(space, rng, entries, values, mode):
    n = space.n
    w = [[0] * n for _ in range(n)]
    for _ in range(entries):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        v = rng.choice(values)
        w[i][j] = v
        w[j][i] = v
    return SignedMeasure2(space, w)


def search_noncut_instance(space, budget=100000, seed=20240, max_pairs=4,
                           progress=None):
    """Hunt for an instance that passes every cut bound yet is infeasible.

    Screens seeded random symmetric (sigma, psi) with a compiled cut scan,
    runs a float LP on survivors, and confirms exact infeasibility through
    solve_multicommodity in rational mode. Returns (sigma, psi, certificate,
    tries) or None when the budget runs out.
    """
    import numpy as np

    n = space.n
    rng = random.Random(seed)
    values = [Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(5, 4)]
    tries = 0
    while tries < budget:
        tries += 1
        if tries % 2:
            # bipartite-like: unit caps across a split, demands within sides
            k = rng.randrange(1, n)
            left = set(rng.sample(range(n), k))
            w = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    if i != j and (i in left) != (j in left):
                        w[i][j] = Fraction(1)
            psi = SignedMeasure2(space, w)
            s = [[0] * n for _ in range(n)]
            npairs = 0
            for i in range(n):
                for j in range(i + 1, n):
                    if (i in left) == (j in left) and rng.random() < 0.8:
                        if npairs >= max_pairs:
                            continue
                        v = rng.choice(values)
                        s[i][j] = v
                        s[j][i] = v
                        npairs += 1
            sigma = SignedMeasure2(space, s)
        else:
            psi = _random_symmetric(space, rng, 2 * n, values, RATIONAL)
            sigma = SignedMeasure2.zero(space)
            s = [[0] * n for _ in range(n)]
            for _ in range(rng.randrange(1, max_pairs + 1)):
                i = rng.randrange(n)
                j = rng.randrange(n)
                if i == j:
                    continue
                v = rng.choice(values)
                s[min(i, j)][max(i, j)] = v
                s[max(i, j)][min(i, j)] = v
            sigma = SignedMeasure2(space, s)

        dem = [
            (i, j, float(sigma.w[i][j]))
            for i in range(n)
            for j in range(i + 1, n)
            if sigma.w[i][j] > 0
        ]
        if not dem:
            continue
        psi_f = np.array([[float(x) for x in row] for row in psi.w])
        dem_f = np.array(dem, dtype=np.float64)
        slack, _ = kernels.cut_scan(psi_f, dem_f)
        if slack < -1e-9:
            continue  # some cut already refutes it; not the shape we want

        try:
            out = solve_multicommodity(sigma, psi, 0, mode=FLOAT, tol=PIVOT_TOL)
        except (VerificationFailure, ArithmeticError):
            continue  # borderline float behavior; not worth an exact pass
        if isinstance(out, MultiFlow):
            continue
        exact = solve_multicommodity(sigma, psi, 0, mode=RATIONAL)
        if isinstance(exact, MultiFlow):
            continue
        if progress:
            progress(tries)
        return sigma, psi, exact, tries
    return None
