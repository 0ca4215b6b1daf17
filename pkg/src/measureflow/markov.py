"""Stationary Markov chains built from probability circulations.

A nonnegative circulation of mass one is exactly a stationary pair
(pi, kernel): pi is the common marginal and the kernel row at u is the
u-row of eta normalized by pi(u). Atoms outside the support of pi keep a
self-loop so rows stay stochastic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import Decomposable, EmptyTarget, NotErgodicCirculation, NotProbability
from .measures import (
    SignedMeasure1,
    SignedMeasure2,
    is_circulation,
    marginals,
    measure_mode,
    transpose,
    tv_norm,
)
from .numeric import resolve_tol


@dataclass(frozen=True)
class MarkovSpace:
    eta: SignedMeasure2
    pi: SignedMeasure1
    kernel: tuple  # row-stochastic, kernel[i][j] = P(next=j | now=i)

    @property
    def space(self):
        return self.eta.space


def _resolve(ms_or_measure, tol):
    eta = ms_or_measure.eta if isinstance(ms_or_measure, MarkovSpace) else ms_or_measure
    return resolve_tol(measure_mode(eta), tol)


def from_circulation(eta, tol=None):
    """Markov space of a probability circulation; NotErgodicCirculation else."""
    tol = _resolve(eta, tol)
    if not eta.is_nonnegative(tol):
        raise NotErgodicCirculation("chain measure has a negative weight")
    if abs(eta.mass() - 1) > tol:
        raise NotErgodicCirculation("chain measure must have total mass one")
    if not is_circulation(eta, tol):
        raise NotErgodicCirculation("marginals disagree; not stationary")
    pi, _ = marginals(eta)
    n = eta.space.n
    kernel = []
    for i in range(n):
        if pi.w[i] > tol:
            row = [eta.w[i][j] / pi.w[i] for j in range(n)]
        else:
            row = [1 if j == i else 0 for j in range(n)]
        kernel.append(tuple(row))
    return MarkovSpace(eta, pi, tuple(kernel))


def is_reversible(ms: MarkovSpace, tol=None):
    tol = _resolve(ms, tol)
    return tv_norm(ms.eta - transpose(ms.eta)) <= tol


def reverse_chain(ms: MarkovSpace, tol=None):
    """Chain of the transposed measure; shares the stationary marginal."""
    rev = from_circulation(transpose(ms.eta), tol)
    tolv = _resolve(ms, tol)
    if tv_norm(rev.pi - ms.pi) > tolv:
        raise NotErgodicCirculation("reversal changed the stationary marginal")
    return rev


def is_indecomposable(ms: MarkovSpace, tol=None):
    """True, or a witness set A with eta(A x Ac) = 0 and 0 < pi(A) < 1.

    Decomposability is detected as a non-strongly-connected support digraph
    on the positive-mass atoms; the witness is a sink component.
    """
    tol = _resolve(ms, tol)
    n = ms.space.n
    alive = [i for i in range(n) if ms.pi.w[i] > tol]
    pos = set(alive)
    fwd = {i: [j for j in alive if j != i and ms.eta.w[i][j] > tol] for i in alive}
    rev = {i: [] for i in alive}
    for i in alive:
        for j in fwd[i]:
            rev[j].append(i)

    order = []
    seen = set()
    for root in alive:
        if root in seen:
            continue
        stack = [(root, iter(fwd[root]))]
        seen.add(root)
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if v not in seen:
                    seen.add(v)
                    stack.append((v, iter(fwd[v])))
                    advanced = True
                    break
            if not advanced:
                order.append(u)
                stack.pop()

    comp = {}
    ncomp = 0
    for root in reversed(order):
        if root in comp:
            continue
        stack = [root]
        comp[root] = ncomp
        while stack:
            u = stack.pop()
            for v in rev[u]:
                if v not in comp:
                    comp[v] = ncomp
                    stack.append(v)
        ncomp += 1

    if ncomp <= 1:
        return True
    # find a component with no edge leaving it
    leaves = [False] * ncomp
    for i in alive:
        for j in fwd[i]:
            if comp[i] != comp[j]:
                leaves[comp[i]] = True
    sink = leaves.index(False)
    atoms = ms.space.atoms
    return frozenset(atoms[i] for i in alive if comp[i] == sink)


def _row_sampler(kernel, n):
    rows = []
    for i in range(n):
        cum = []
        acc = 0.0
        for j in range(n):
            acc += float(kernel[i][j])
            cum.append(acc)
        rows.append(cum)
    return rows


def _step(rng, cum_row, kernel_row, n):
    r = rng.random() * cum_row[-1]
    for j in range(n):
        if r < cum_row[j] and kernel_row[j] > 0:
            return j
    for j in range(n - 1, -1, -1):
        if kernel_row[j] > 0:
            return j
    raise AssertionError("stochastic row has no positive entry")


def simulate_walk(ms: MarkovSpace, start: SignedMeasure1, steps, seed, tol=None):
    """Sample a trajectory of the chain; returns steps+1 atom labels."""
    tolv = _resolve(ms, tol)
    if not start.is_nonnegative(tolv) or abs(start.mass() - 1) > tolv:
        raise NotProbability("starting distribution must be a probability")
    n = ms.space.n
    rng = random.Random(seed)
    cum0 = []
    acc = 0.0
    for i in range(n):
        acc += float(start.w[i])
        cum0.append(acc)
    cur = _step(rng, cum0, start.w, n)
    rows = _row_sampler(ms.kernel, n)
    atoms = ms.space.atoms
    path = [atoms[cur]]
    for _ in range(steps):
        cur = _step(rng, rows[cur], ms.kernel[cur], n)
        path.append(atoms[cur])
    return path


def hitting_stats(ms: MarkovSpace, start, targets, max_steps, trials, seed,
                  tol=None):
    """Fraction of seeded trajectories from `start` that reach the target
    set within max_steps transitions (the starting position counts)."""
    tolv = _resolve(ms, tol)
    out = is_indecomposable(ms, tol)
    if out is not True:
        raise Decomposable(f"chain is decomposable; witness {sorted(out)}")
    n = ms.space.n
    target_idx = frozenset(ms.space.index(a) for a in targets)
    if not sum(ms.pi.w[i] for i in target_idx) > tolv:
        raise EmptyTarget("target set carries no stationary mass")
    start_idx = ms.space.index(start)
    rows = _row_sampler(ms.kernel, n)
    rng = random.Random(seed)
    hits = 0
    for _ in range(trials):
        cur = start_idx
        if cur in target_idx:
            hits += 1
            continue
        for _ in range(max_steps):
            cur = _step(rng, rows[cur], ms.kernel[cur], n)
            if cur in target_idx:
                hits += 1
                break
    return Fraction(hits, trials)
