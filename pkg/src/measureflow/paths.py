"""Acyclicity, cycle splitting, and decomposition of flows into walks.

A WalkMeasure is a weighted finite family of atom sequences. The operators
V, E, Z count exits, edge traversals, and endpoint pairs; decompose_paths
peels an acyclic nonnegative measure into simple source-to-sink paths whose
E-image reproduces it exactly.
"""

from __future__ import annotations

from .errors import NegativeMeasure, NotAcyclic, NotPseudometric, VerificationFailure
from .measures import SignedMeasure1, SignedMeasure2, marginals, setminus, tv_norm
from .multiflow import is_pseudometric


class WalkMeasure:
    """Finite list of (walk, weight) pairs; walks are atom-label tuples."""

    __slots__ = ("space", "entries")

    def __init__(self, space, entries):
        cleaned = []
        for walk, weight in entries:
            walk = tuple(walk)
            if not walk:
                raise ValueError("walks must be nonempty")
            for a in walk:
                space.index(a)
            if not weight > 0:
                raise ValueError("walk weights must be positive")
            cleaned.append((walk, weight))
        self.space = space
        self.entries = cleaned

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def total_weight(self):
        return sum(w for _, w in self.entries)

    def __repr__(self):
        inner = ", ".join(f"{'>'.join(walk)}: {w}" for walk, w in self.entries)
        return f"WalkMeasure({{{inner}}})"


def is_acyclic(beta, tol=0):
    """True when the support digraph is acyclic.

    Otherwise returns a nonzero circulation carried by one directed cycle of
    the support (weight = smallest edge weight on the cycle); test the
    result with `is True`.
    """
    if not beta.is_nonnegative(tol):
        raise NegativeMeasure("acyclicity is defined for nonnegative measures")
    n = beta.space.n
    adj = [[j for j in range(n) if beta.w[i][j] > 0] for i in range(n)]

    for i in range(n):
        if beta.w[i][i] > 0:
            return SignedMeasure2.from_dict(
                beta.space, {(beta.space.atoms[i], beta.space.atoms[i]): beta.w[i][i]}
            )

    color = [0] * n  # 0 unseen, 1 on stack, 2 done
    parent_edge = {}

    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = 1
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if color[v] == 0:
                    color[v] = 1
                    parent_edge[v] = u
                    stack.append((v, iter(adj[v])))
                    advanced = True
                    break
                if color[v] == 1:
                    # directed cycle v -> ... -> u -> v
                    cycle = [u]
                    w = u
                    while w != v:
                        w = parent_edge[w]
                        cycle.append(w)
                    cycle.reverse()
                    weight = min(
                        beta.w[a][b]
                        for a, b in zip(cycle, cycle[1:] + [cycle[0]])
                    )
                    atoms = beta.space.atoms
                    return SignedMeasure2.from_dict(
                        beta.space,
                        {
                            (atoms[a], atoms[b]): weight
                            for a, b in zip(cycle, cycle[1:] + [cycle[0]])
                        },
                    )
            if not advanced:
                color[u] = 2
                stack.pop()
    return True


def split_acyclic_circulation(mu, tol=0):
    """Split a nonnegative measure into (acyclic part, circulation part)."""
    if not mu.is_nonnegative(tol):
        raise NegativeMeasure("split requires a nonnegative measure")
    circ = SignedMeasure2.zero(mu.space)
    rest = mu
    while True:
        out = is_acyclic(rest, tol)
        if out is True:
            return rest, circ
        rest = rest - out
        circ = circ + out


def walk_operators(tau: WalkMeasure):
    """(V, E, Z): exits with multiplicity, edge traversals, endpoint pairs."""
    space = tau.space
    V = [0] * space.n
    n = space.n
    E = [[0] * n for _ in range(n)]
    Z = [[0] * n for _ in range(n)]
    for walk, w in tau:
        idxs = [space.index(a) for a in walk]
        for u in idxs[:-1]:
            V[u] = V[u] + w
        for u, v in zip(idxs, idxs[1:]):
            E[u][v] = E[u][v] + w
        Z[idxs[0]][idxs[-1]] = Z[idxs[0]][idxs[-1]] + w
    return (
        SignedMeasure1(space, V),
        SignedMeasure2(space, E),
        SignedMeasure2(space, Z),
    )


def decompose_paths(phi, tol=0):
    """Peel an acyclic nonnegative measure into weighted simple paths.

    Returns a WalkMeasure tau with E(tau) = phi (exact in rational mode) and
    endpoint marginals Z(tau)^1 = phi^1 minus phi^2 (positive part),
    Z(tau)^2 = phi^2 minus phi^1. Greedy: start at the first residual source
    atom, follow the heaviest remaining edge (ties to the smaller index) to a
    sink, subtract the bottleneck.
    """
    out = is_acyclic(phi, tol)
    if out is not True:
        raise NotAcyclic("support digraph contains a directed cycle")
    n = phi.space.n
    rem = [list(row) for row in phi.w]
    entries = []
    for _ in range(n * n + 1):
        out_mass = [sum(row) for row in rem]
        in_mass = [sum(rem[i][j] for i in range(n)) for j in range(n)]
        start = None
        for i in range(n):
            if out_mass[i] > 0 and not in_mass[i] > 0:
                start = i
                break
        if start is None:
            break
        walk = [start]
        cur = start
        while True:
            best = None
            for j in range(n):
                if rem[cur][j] > 0 and (best is None or rem[cur][j] > rem[cur][best]):
                    best = j
            if best is None:
                break
            walk.append(best)
            cur = best
        bottleneck = min(rem[u][v] for u, v in zip(walk, walk[1:]))
        for u, v in zip(walk, walk[1:]):
            rem[u][v] -= bottleneck
        atoms = phi.space.atoms
        entries.append((tuple(atoms[i] for i in walk), bottleneck))
    if any(x > 0 for row in rem for x in row):
        raise VerificationFailure("path peeling left mass behind")

    tau = WalkMeasure(phi.space, entries)
    _, E, Z = walk_operators(tau)
    if tv_norm(E - phi) > tol:
        raise VerificationFailure("decomposition does not reproduce the measure")
    first, second = marginals(phi)
    z1, z2 = marginals(Z)
    if tv_norm(z1 - setminus(first, second)) > tol:
        raise VerificationFailure("walk starts do not match the source excess")
    if tv_norm(z2 - setminus(second, first)) > tol:
        raise VerificationFailure("walk ends do not match the sink excess")
    return tau


def shortcut_check(D, tau: WalkMeasure, tol=0):
    """(D-length of E(tau), D-length of Z(tau)); lhs >= rhs for pseudometrics."""
    out = is_pseudometric(D, tol)
    if out is not True:
        raise NotPseudometric(f"axiom violated at {out}")
    _, E, Z = walk_operators(tau)
    n = tau.space.n
    lhs = sum(E.w[i][j] * D.d[i][j] for i in range(n) for j in range(n))
    rhs = sum(Z.w[i][j] * D.d[i][j] for i in range(n) for j in range(n))
    return lhs, rhs
