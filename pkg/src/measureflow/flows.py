"""Certified solvers: circulations, flows, transshipments, couplings.

Every operation either returns a witness measure satisfying its
post-conditions or a certificate object violating the matching inequality;
both are re-verified through the verify module before being handed back.
Exact rational arithmetic is the default for exact inputs on small spaces,
floats otherwise; forced via mode="rational" / mode="float".
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from . import kernels
from .certificates import (
    CutCertificate,
    DualPair,
    PotentialCertificate,
    RectangleCertificate,
)
from .errors import (
    BoundOrderViolation,
    MassMismatch,
    NegativeCapacity,
    NegativeMeasure,
    NonIntegerCost,
    NotProbability,
    PartitionInvalid,
    SameEndpoints,
    VerificationFailure,
)
from .maxflow import max_flow_matrix
from .measures import (
    Potential,
    SignedMeasure1,
    SignedMeasure2,
    marginals,
    measure_mode,
)
from .numeric import FLOAT, RATIONAL, resolve_tol, to_fraction
from .simplex import SimplexResult, assemble, simplex_box, solve_box_lp
from . import verify

PIVOT_TOL = 1e-9  # pivot/zero threshold inside the float simplex kernel
FLOW_TOL = 1e-12  # residual threshold inside the float push-relabel kernel


def _setup(mode, tol, *sources):
    if mode is None:
        mode = measure_mode(*sources)
    if mode not in (RATIONAL, FLOAT):
        raise ValueError(f"unknown mode {mode!r}")
    return mode, resolve_tol(mode, tol)


def _num(x, mode):
    return to_fraction(x) if mode == RATIONAL else float(x)


def _table(mu, mode):
    return [[_num(x, mode) for x in row] for row in mu.w]


def _labels(space, idxs):
    return frozenset(space.atoms[i] for i in idxs)


def _check_spaces(*ms):
    space = ms[0].space
    for m in ms[1:]:
        if m.space != space:
            raise ValueError("inputs live on different atom spaces")
    return space


def _require_nonneg(mu, tol, err, what):
    if not mu.is_nonnegative(tol):
        raise err(f"{what} has a negative weight")


def _run_maxflow(cap, s, t, mode):
    if mode == FLOAT:
        arr = np.array([[float(x) for x in row] for row in cap], dtype=np.float64)
        value, flow, cut = kernels.maxflow_f64(arr, s, t, FLOW_TOL)
        return value, flow.tolist(), frozenset(int(i) for i in cut)
    value, flow, cut = max_flow_matrix(cap, s, t, 0)
    return value, flow, frozenset(cut)


def _run_lp(c, A_eq, b_eq, lo, up, mode, A_ub=None, b_ub=None):
    """Box LP in the requested mode; inequality rows get slack columns."""
    A_ub = A_ub or []
    b_ub = b_ub or []
    if mode == RATIONAL:
        return solve_box_lp(c, A_eq, b_eq, A_ub, b_ub, lo, up, 0)
    Af, bf, cf, lof, upf, nstruct = assemble(c, A_eq, b_eq, A_ub, b_ub, lo, up)
    A = np.array([[float(x) for x in row] for row in Af], dtype=np.float64)
    b = np.array([float(x) for x in bf], dtype=np.float64)
    cv = np.array([float(x) for x in cf], dtype=np.float64)
    lov = np.array([float(x) for x in lof], dtype=np.float64)
    upv = np.array([0.0 if u is None else float(u) for u in upf], dtype=np.float64)
    has_up = np.array([u is not None for u in upf], dtype=np.uint8)
    status, x, obj, duals, farkas, infeas = kernels.simplex_f64(
        A, b, cv, lov, upv, has_up, PIVOT_TOL
    )
    if status == 1:
        return SimplexResult("infeasible", None, None, None, list(farkas), infeas)
    return SimplexResult("optimal", list(x)[:nstruct], obj, list(duals), None, None)


# --------------------------------------------------------------------------
# circulations


def feasible_circulation(phi, psi, mode=None, tol=None):
    """Circulation between the bound measures, or a violated cut.

    Returns a SignedMeasure2 alpha with phi <= alpha <= psi and equal
    marginals, or a CutCertificate X with phi(X x Xc) > psi(Xc x X).
    """
    space = _check_spaces(phi, psi)
    mode, tol = _setup(mode, tol, phi, psi)
    if not phi.leq(psi, tol):
        raise BoundOrderViolation("lower bound exceeds upper bound on some pair")

    n = space.n
    phi_t = _table(phi, mode)
    psi_t = _table(psi, mode)
    first, second = marginals(SignedMeasure2(space, phi_t))
    # alpha = phi + slack; slack needs divergence phi2 - phi1 within psi - phi
    need = [second.w[i] - first.w[i] for i in range(n)]
    size = n + 2
    src, snk = n, n + 1
    cap = [[0] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            if i != j:
                u = psi_t[i][j] - phi_t[i][j]
                cap[i][j] = u if u > 0 else 0
    supply = 0
    for i in range(n):
        if need[i] > 0:
            cap[src][i] = need[i]
            supply += need[i]
        elif need[i] < 0:
            cap[i][snk] = -need[i]

    value, flow, cut = _run_maxflow(cap, src, snk, mode)
    if value >= supply - tol:
        table = [
            [phi_t[i][j] + (flow[i][j] if i != j else 0) for j in range(n)]
            for i in range(n)
        ]
        alpha = SignedMeasure2(space, table)
        verify.verify_circulation_witness(phi, psi, alpha, tol)
        return alpha

    inside = sorted(i for i in cut if i < n)
    outside = [i for i in range(n) if i not in set(inside)]
    # the violated Hoffman set is the complement of the cut's atom side
    cert = CutCertificate(
        set_X=_labels(space, outside),
        lhs=phi.rect(outside, inside),
        rhs=psi.rect(inside, outside),
    )
    verify.verify_hoffman_cut(phi, psi, cert, tol)
    return cert


def _is_integral_table(v):
    for row in v.w:
        for x in row:
            if isinstance(x, float):
                if not x.is_integer():
                    return False
            elif to_fraction(x).denominator != 1:
                return False
    return True


def _jjfb_sides(phi, psi, v, c, fvals, b):
    """(lhs, rhs) of the tagged inequality in the inputs' own arithmetic."""
    n = phi.space.n
    lhs = 0
    low = 0
    for i in range(n):
        for j in range(n):
            t = fvals[i] - fvals[j] + b * v.w[i][j]
            if t > 0:
                lhs = lhs + psi.w[i][j] * t
            elif t < 0:
                low = low + phi.w[i][j] * (-t)
    return lhs, low + b * c


def _normalize_multipliers(g, bh, tol):
    """Scale a Farkas pair so b lands in {-1, 0, +1}."""
    if bh > tol:
        return [x / bh for x in g], 1
    if bh < -tol:
        return [x / -bh for x in g], -1
    return list(g), 0


_B_TAG = {1: "JJFB1", -1: "JJFB2", 0: "JJFB3"}


def valued_circulation(phi, psi, v, c, mode=None, tol=None):
    """Circulation with prescribed pairing alpha(v) = c, or a potential.

    The infeasibility certificate (f, b) violates, with F(x,y)=f(x)-f(y),
    psi(|F+bv|_+) >= phi(|F+bv|_-) + b*c for its tagged b.
    """
    space = _check_spaces(phi, psi, v)
    mode, tol = _setup(mode, tol, phi, psi, v, [c])
    if not phi.leq(psi, tol):
        raise BoundOrderViolation("lower bound exceeds upper bound on some pair")
    n = space.n

    def finish_cert(fvals, b):
        f = Potential(space, fvals)
        if _is_integral_table(v):
            v_eff = v.scale(b) if b != 0 else SignedMeasure2.zero(space)
            f = integralize_potential(f, v_eff, phi, psi)
        f = f.normalized()
        lhs, rhs = _jjfb_sides(phi, psi, v, c, f.f, b)
        cert = PotentialCertificate(
            f=f, b=b, violated_condition=_B_TAG[b], lhs=lhs, rhs=rhs
        )
        verify.verify_potential_cert(phi, psi, v, c, cert, tol)
        return cert

    # quick screen with F = 0: c must fit inside the box pairing range
    box_hi = 0
    box_lo = 0
    for i in range(n):
        for j in range(n):
            vv = v.w[i][j]
            if vv >= 0:
                box_hi = box_hi + psi.w[i][j] * vv
                box_lo = box_lo + phi.w[i][j] * vv
            else:
                box_hi = box_hi + phi.w[i][j] * vv
                box_lo = box_lo + psi.w[i][j] * vv
    if c > box_hi + tol:
        return finish_cert([0] * n, 1)
    if c < box_lo - tol:
        return finish_cert([0] * n, -1)

    nv = n * n
    A_eq = []
    for z in range(n):
        row = [0] * nv
        for i in range(n):
            for j in range(n):
                coef = (1 if i == z else 0) - (1 if j == z else 0)
                if coef:
                    row[i * n + j] = coef
        A_eq.append(row)
    A_eq.append([_num(v.w[i // n][i % n], mode) for i in range(nv)])
    b_eq = [0] * n + [_num(c, mode)]
    lo = [_num(phi.w[i // n][i % n], mode) for i in range(nv)]
    up = [_num(psi.w[i // n][i % n], mode) for i in range(nv)]
    if mode == FLOAT:
        up = [max(l, u) for l, u in zip(lo, up)]

    res = _run_lp([0] * nv, A_eq, b_eq, lo, up, mode)
    if res.status == "optimal":
        table = [[res.x[i * n + j] for j in range(n)] for i in range(n)]
        alpha = SignedMeasure2(space, table)
        verify.verify_valued_witness(phi, psi, v, c, alpha, tol)
        return alpha

    g, bh = res.farkas[:n], res.farkas[n]
    fvals, b = _normalize_multipliers(g, bh, tol if mode == FLOAT else 0)
    return finish_cert(fvals, b)


def ergodic_circulation(psi, mode=None, tol=None):
    """Probability-mass circulation under psi, or a potential certificate.

    Infeasibility means psi(|1+F|_+) < 1 for the returned potential.
    """
    space = psi.space
    mode, tol = _setup(mode, tol, psi)
    _require_nonneg(psi, tol, NegativeCapacity, "capacity")
    zero = SignedMeasure2.zero(space)
    ones = SignedMeasure2.constant(space, 1)
    out = valued_circulation(zero, psi, ones, 1, mode=mode, tol=tol)
    if isinstance(out, SignedMeasure2):
        return out
    if out.b != 1:
        raise VerificationFailure("ergodic infeasibility must surface as b=+1")
    cert = PotentialCertificate(
        f=out.f, b=1, violated_condition="ERG", lhs=out.lhs, rhs=out.rhs
    )
    verify.verify_potential_cert(zero, psi, ones, 1, cert, tol)
    return cert


def partition_condition(psi, partition):
    """Weighted backward mass sum of an ordered partition.

    Sums (j-i+1) * psi(S_j x S_i) over class indices i <= j. The ergodic
    circulation under psi exists iff this is >= 1 for every ordered
    partition of the atoms.
    """
    space = psi.space
    blocks = []
    seen = set()
    for block in partition:
        try:
            idxs = sorted(space.index(a) for a in block)
        except KeyError:
            raise PartitionInvalid("partition names an unknown atom") from None
        if not idxs:
            raise PartitionInvalid("partition contains an empty class")
        if seen & set(idxs):
            raise PartitionInvalid("partition classes overlap")
        seen.update(idxs)
        blocks.append(idxs)
    if len(seen) != space.n:
        raise PartitionInvalid("partition does not cover the atom set")
    total = 0
    for j in range(len(blocks)):
        for i in range(j + 1):
            total = total + (j - i + 1) * psi.rect(blocks[j], blocks[i])
    return total


def iter_ordered_partitions(items):
    """All ordered partitions of items into nonempty classes."""
    items = list(items)
    n = len(items)
    for k in range(1, n + 1):
        for assign in itertools.product(range(k), repeat=n):
            if len(set(assign)) != k:
                continue
            yield tuple(
                frozenset(items[i] for i in range(n) if assign[i] == b)
                for b in range(k)
            )


def integralize_potential(f, v, phi, psi):
    """Round a potential to integers without weakening its certificate.

    Scans the shifts a where floor(f+a) changes and returns floor(f+a) for
    the a minimizing psi(|F+v|_+) - phi(|F+v|_-); that quantity never ends
    up above its value at f, so the rounded potential violates at least as
    strongly whenever f did.
    """
    _check_spaces(phi, psi, v, f)
    if not _is_integral_table(v):
        raise NonIntegerCost("value table must be integer-valued")

    def score(fvals):
        total = 0
        n = phi.space.n
        for i in range(n):
            for j in range(n):
                t = fvals[i] - fvals[j] + v.w[i][j]
                if t > 0:
                    total = total + psi.w[i][j] * t
                elif t < 0:
                    total = total + phi.w[i][j] * t
        return total

    shifts = {(-x) % 1 for x in f.f}
    shifts.add(0)
    best_vals, best_score = None, None
    for a in sorted(shifts):
        rounded = [math.floor(x + a) for x in f.f]
        s = score(rounded)
        if best_score is None or s < best_score:
            best_vals, best_score = rounded, s
    return Potential(f.space, best_vals)


# --------------------------------------------------------------------------
# s-t and supply-demand flows


def max_flow(psi, s, t, mode=None, tol=None):
    """Maximum s-t flow under psi: (flow, value, min cut source side)."""
    space = psi.space
    if s == t:
        raise SameEndpoints("source equals sink")
    mode, tol = _setup(mode, tol, psi)
    _require_nonneg(psi, tol, NegativeCapacity, "capacity")
    si, ti = space.index(s), space.index(t)
    cap = _table(psi, mode)
    for i in range(space.n):
        cap[i][i] = 0
        for j in range(space.n):
            if cap[i][j] < 0:
                cap[i][j] = 0
    value, flow, cut = _run_maxflow(cap, si, ti, mode)
    flow_measure = SignedMeasure2(space, flow)
    cut_labels = _labels(space, cut)
    verify.verify_maxflow_witness(psi, s, t, flow_measure, value, cut_labels, tol)
    return flow_measure, value, cut_labels


def supply_demand_flow(psi, sigma, tau, mode=None, tol=None):
    """Flow with divergence sigma - tau under psi, or a violated cut."""
    space = _check_spaces(psi, sigma, tau)
    mode, tol = _setup(mode, tol, psi, sigma, tau)
    _require_nonneg(psi, tol, NegativeCapacity, "capacity")
    _require_nonneg(sigma, tol, NegativeMeasure, "supply")
    _require_nonneg(tau, tol, NegativeMeasure, "demand")
    if abs(sigma.mass() - tau.mass()) > tol:
        raise MassMismatch("supply and demand totals differ")

    n = space.n
    size = n + 2
    src, snk = n, n + 1
    cap = [[0] * size for _ in range(size)]
    psi_t = _table(psi, mode)
    for i in range(n):
        for j in range(n):
            if i != j and psi_t[i][j] > 0:
                cap[i][j] = psi_t[i][j]
    supply = 0
    for i in range(n):
        sv = _num(sigma.w[i], mode)
        tv = _num(tau.w[i], mode)
        if sv > 0:
            cap[src][i] = sv
            supply += sv
        if tv > 0:
            cap[i][snk] = tv

    value, flow, cut = _run_maxflow(cap, src, snk, mode)
    if value >= supply - tol:
        table = [[flow[i][j] if i != j else 0 for j in range(n)] for i in range(n)]
        phi = SignedMeasure2(space, table)
        verify.verify_flow_witness(psi, sigma, tau, phi, tol)
        return phi

    inside = sorted(i for i in cut if i < n)
    outside = [i for i in range(n) if i not in set(inside)]
    lhs = sigma.total_set(inside) - tau.total_set(inside)
    cert = CutCertificate(
        set_X=_labels(space, inside), lhs=lhs, rhs=psi.rect(inside, outside)
    )
    verify.verify_supply_demand_cut(psi, sigma, tau, cert, tol)
    return cert


def min_cost_flow(psi, sigma, tau, v, target, mode=None, tol=None):
    """Feasible sigma-tau flow with prescribed cost, or a potential.

    The certificate (f, b) violates
    psi(|f(y)-f(x)+b*v(x,y)|_+) >= tau(f)-sigma(f)+b*target.
    """
    space = _check_spaces(psi, sigma, tau, v)
    mode, tol = _setup(mode, tol, psi, sigma, tau, v, [target])
    _require_nonneg(psi, tol, NegativeCapacity, "capacity")
    _require_nonneg(sigma, tol, NegativeMeasure, "supply")
    _require_nonneg(tau, tol, NegativeMeasure, "demand")
    _require_nonneg(v, tol, NegativeMeasure, "cost table")
    if abs(sigma.mass() - tau.mass()) > tol:
        raise MassMismatch("supply and demand totals differ")

    n = space.n
    nv = n * n
    A_eq = []
    for z in range(n):
        row = [0] * nv
        for i in range(n):
            for j in range(n):
                coef = (1 if i == z else 0) - (1 if j == z else 0)
                if coef:
                    row[i * n + j] = coef
        A_eq.append(row)
    A_eq.append([_num(v.w[i // n][i % n], mode) for i in range(nv)])
    b_eq = [_num(sigma.w[z], mode) - _num(tau.w[z], mode) for z in range(n)]
    b_eq.append(_num(target, mode))
    lo = [0] * nv
    up = [max(_num(psi.w[i // n][i % n], mode), 0) for i in range(nv)]

    res = _run_lp([0] * nv, A_eq, b_eq, lo, up, mode)
    if res.status == "optimal":
        table = [[res.x[i * n + j] for j in range(n)] for i in range(n)]
        flow = SignedMeasure2(space, table)
        verify.verify_mincost_witness(psi, sigma, tau, v, target, flow, tol)
        return flow

    g, bh = res.farkas[:n], res.farkas[n]
    gvals, b = _normalize_multipliers(g, bh, tol if mode == FLOAT else 0)
    f = Potential(space, [-x for x in gvals]).normalized()
    lhs = 0
    for i in range(n):
        for j in range(n):
            t = f.f[j] - f.f[i] + b * v.w[i][j]
            if t > 0:
                lhs = lhs + psi.w[i][j] * t
    rhs = tau.integral(f.f) - sigma.integral(f.f) + b * target
    cert = PotentialCertificate(
        f=f, b=b, violated_condition="MINCOST", lhs=lhs, rhs=rhs
    )
    verify.verify_mincost_cert(psi, sigma, tau, v, target, cert, tol)
    return cert


# --------------------------------------------------------------------------
# transshipment and couplings


def transship_feasible(psi, alpha, beta, mode=None, tol=None):
    """Coupling of alpha and beta under psi, or a violated rectangle."""
    space = _check_spaces(psi, alpha, beta)
    mode, tol = _setup(mode, tol, psi, alpha, beta)
    _require_nonneg(psi, tol, NegativeCapacity, "capacity")
    _require_nonneg(alpha, tol, NegativeMeasure, "first marginal")
    _require_nonneg(beta, tol, NegativeMeasure, "second marginal")
    if abs(alpha.mass() - beta.mass()) > tol:
        raise MassMismatch("marginal totals differ")

    n = space.n
    size = 2 * n + 2
    src, snk = 2 * n, 2 * n + 1
    cap = [[0] * size for _ in range(size)]
    psi_t = _table(psi, mode)
    for i in range(n):
        av = _num(alpha.w[i], mode)
        bv = _num(beta.w[i], mode)
        if av > 0:
            cap[src][i] = av
        if bv > 0:
            cap[n + i][snk] = bv
        for j in range(n):
            if psi_t[i][j] > 0:
                cap[i][n + j] = psi_t[i][j]
    supply = sum(cap[src][i] for i in range(n))

    value, flow, cut = _run_maxflow(cap, src, snk, mode)
    if value >= supply - tol:
        table = [[flow[i][n + j] for j in range(n)] for i in range(n)]
        mu = SignedMeasure2(space, table)
        verify.verify_coupling_witness(psi, alpha, beta, mu, tol)
        return mu

    s_side = sorted(i for i in cut if i < n)
    t_side = sorted(i - n for i in cut if n <= i < 2 * n)
    t_comp = [i for i in range(n) if i not in set(t_side)]
    lhs = psi.rect(s_side, t_comp)
    rhs = alpha.total_set(s_side) + beta.total_set(t_comp) - alpha.mass()
    cert = RectangleCertificate(
        set_S=_labels(space, s_side), set_T=_labels(space, t_comp), lhs=lhs, rhs=rhs
    )
    verify.verify_transship_rect(psi, alpha, beta, cert, tol)
    return cert


def transship_min_cost(alpha, beta, c, mode=None, tol=None):
    """Cheapest coupling of alpha and beta: (coupling, cost, DualPair)."""
    space = _check_spaces(alpha, beta, c)
    mode, tol = _setup(mode, tol, alpha, beta, c)
    _require_nonneg(alpha, tol, NegativeMeasure, "first marginal")
    _require_nonneg(beta, tol, NegativeMeasure, "second marginal")
    _require_nonneg(c, tol, NegativeMeasure, "cost table")
    if abs(alpha.mass() - beta.mass()) > tol:
        raise MassMismatch("marginal totals differ")

    n = space.n
    nv = n * n
    A_eq = []
    for z in range(n):
        row = [0] * nv
        for j in range(n):
            row[z * n + j] = 1
        A_eq.append(row)
    for z in range(n):
        row = [0] * nv
        for i in range(n):
            row[i * n + z] = 1
        A_eq.append(row)
    b_eq = [_num(alpha.w[z], mode) for z in range(n)]
    b_eq += [_num(beta.w[z], mode) for z in range(n)]
    cost = [_num(c.w[i // n][i % n], mode) for i in range(nv)]

    res = _run_lp(cost, A_eq, b_eq, [0] * nv, [None] * nv, mode)
    if res.status != "optimal":
        raise VerificationFailure("coupling problem with equal masses cannot fail")
    table = [[res.x[i * n + j] for j in range(n)] for i in range(n)]
    mu = SignedMeasure2(space, table)
    total = mu.pairing(c)
    g = Potential(space, res.duals[:n])
    h = Potential(space, res.duals[n:])
    dual = DualPair(g=g, h=h, value=alpha.integral(g.f) + beta.integral(h.f))
    verify.verify_coupling_witness(
        SignedMeasure2.constant(space, alpha.mass()), alpha, beta, mu, tol
    )
    verify.verify_dual_pair(alpha, beta, c, dual, total, tol)
    return mu, total, dual


def strassen_coupling(alpha, beta, E, mode=None, tol=None):
    """Coupling supported on the allowed pair set, or a blocking rectangle.

    The certificate (S, T) has S x T disjoint from E and alpha(S)+beta(T)>1.
    """
    space = _check_spaces(alpha, beta)
    mode, tol = _setup(mode, tol, alpha, beta)
    _require_nonneg(alpha, tol, NegativeMeasure, "first law")
    _require_nonneg(beta, tol, NegativeMeasure, "second law")
    if abs(alpha.mass() - 1) > tol or abs(beta.mass() - 1) > tol:
        raise NotProbability("both laws must have total mass 1")

    pair_set = _pair_index_set(space, E)
    n = space.n
    table = [[1 if (i, j) in pair_set else 0 for j in range(n)] for i in range(n)]
    psi = SignedMeasure2(space, table)
    out = transship_feasible(psi, alpha, beta, mode=mode, tol=tol)
    if isinstance(out, SignedMeasure2):
        verify.verify_strassen_witness(pair_set, alpha, beta, out, tol)
        return out
    s = [space.index(a) for a in out.set_S]
    t = [space.index(a) for a in out.set_T]
    cert = RectangleCertificate(
        set_S=out.set_S,
        set_T=out.set_T,
        lhs=alpha.total_set(s) + beta.total_set(t),
        rhs=1,
    )
    verify.verify_strassen_rect(pair_set, alpha, beta, cert, tol)
    return cert


def _pair_index_set(space, E):
    if isinstance(E, SignedMeasure2):
        if E.space != space:
            raise ValueError("pair set lives on a different atom space")
        return {(i, j) for i, j in E.support()}
    return {(space.index(a), space.index(b)) for a, b in E}
