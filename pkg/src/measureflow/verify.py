"""Independent re-verification of witnesses and certificates.

Witness measures are checked against their stated post-conditions within the
caller's tolerance. Certificates are re-evaluated in exact rational
arithmetic regardless of the mode that produced them (floats convert to
Fractions losslessly), and must violate their inequality strictly. Only
measure primitives are used here; no solver code is trusted.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import VerificationFailure
from .measures import SignedMeasure1, SignedMeasure2, marginals, tv_norm
from .numeric import to_fraction


def _fail(msg):
    raise VerificationFailure(msg)


def _idx(space, labels):
    return [space.index(a) for a in labels]


def _rect_exact(mu, rows, cols):
    return sum(to_fraction(mu.w[i][j]) for i in rows for j in cols)


def _sum1_exact(m1, idxs):
    return sum(to_fraction(m1.w[i]) for i in idxs)


def _close(a, b, tol):
    return abs(a - b) <= tol


def _check_stored(name, stored, exact_value, tol):
    if not _close(to_fraction(stored), exact_value, max(to_fraction(tol), 0)):
        _fail(f"{name} recomputes to {exact_value}, certificate stores {stored}")


# --------------------------------------------------------------------------
# witness checks (tolerance semantics follow the producing mode)


def verify_bounds(phi, psi, alpha, tol):
    n = alpha.space.n
    for i in range(n):
        for j in range(n):
            if alpha.w[i][j] < phi.w[i][j] - tol:
                _fail("witness drops below the lower bound")
            if alpha.w[i][j] > psi.w[i][j] + tol:
                _fail("witness exceeds the upper bound")


def verify_circulation_witness(phi, psi, alpha, tol):
    verify_bounds(phi, psi, alpha, tol)
    first, second = marginals(alpha)
    if tv_norm(first - second) > tol:
        _fail("witness marginals differ: not a circulation")


def verify_valued_witness(phi, psi, v, c, alpha, tol):
    verify_circulation_witness(phi, psi, alpha, tol)
    if not _close(alpha.pairing(v), c, tol):
        _fail("witness circulation misses the prescribed value")


def verify_flow_witness(psi, sigma, tau, flow, tol):
    verify_bounds(SignedMeasure2.zero(psi.space), psi, flow, tol)
    first, second = marginals(flow)
    div = first - second
    req = sigma - tau
    if tv_norm(div - req) > tol:
        _fail("flow divergence does not match supply minus demand")


def verify_mincost_witness(psi, sigma, tau, v, target, flow, tol):
    verify_flow_witness(psi, sigma, tau, flow, tol)
    if not _close(flow.pairing(v), target, tol):
        _fail("flow misses the prescribed cost")


def verify_maxflow_witness(psi, s, t, flow, value, cut, tol):
    space = psi.space
    verify_bounds(SignedMeasure2.zero(space), psi, flow, tol)
    si, ti = space.index(s), space.index(t)
    # flow plus the value on the return pair (t, s) must circulate
    back = SignedMeasure2.point_mass(space, t, s, value)
    first, second = marginals(flow + back)
    if tv_norm(first - second) > tol:
        _fail("flow plus return edge is not a circulation")
    if s not in cut or t in cut:
        _fail("cut must contain the source and exclude the sink")
    a = _idx(space, cut)
    ac = [i for i in range(space.n) if i not in set(a)]
    if not _close(_rect_exact(psi, a, ac), to_fraction(value), tol):
        _fail("cut capacity does not equal the flow value")


def verify_coupling_witness(psi, alpha, beta, mu, tol):
    verify_bounds(SignedMeasure2.zero(psi.space), psi, mu, tol)
    first, second = marginals(mu)
    if tv_norm(first - alpha) > tol:
        _fail("coupling first marginal differs from alpha")
    if tv_norm(second - beta) > tol:
        _fail("coupling second marginal differs from beta")


def verify_strassen_witness(pair_set, alpha, beta, mu, tol):
    n = mu.space.n
    for i in range(n):
        for j in range(n):
            if (i, j) not in pair_set and abs(mu.w[i][j]) > tol:
                _fail("coupling puts mass outside the allowed pair set")
    first, second = marginals(mu)
    if tv_norm(first - alpha) > tol or tv_norm(second - beta) > tol:
        _fail("coupling marginals differ from the prescribed laws")


def verify_dual_pair(alpha, beta, cost, dual, mu_cost, tol):
    space = alpha.space
    n = space.n
    g, h = dual.g.f, dual.h.f
    for i in range(n):
        for j in range(n):
            if g[i] + h[j] > cost.w[i][j] + tol:
                _fail("dual potentials violate g(x)+h(y) <= c(x,y)")
    attained = alpha.integral(g) + beta.integral(h)
    if not _close(attained, dual.value, tol):
        _fail("dual pair value is not alpha(g)+beta(h)")
    if not _close(attained, mu_cost, tol):
        _fail("dual value does not meet the primal cost")


# --------------------------------------------------------------------------
# certificate checks (always exact; strict violation required)


def verify_hoffman_cut(phi, psi, cert, tol):
    space = phi.space
    x = _idx(space, cert.set_X)
    xs = set(x)
    xc = [i for i in range(space.n) if i not in xs]
    lhs = _rect_exact(phi, x, xc)
    rhs = _rect_exact(psi, xc, x)
    if not lhs > rhs:
        _fail("cut certificate fails phi(XxXc) > psi(XcxX)")
    _check_stored("cut lhs", cert.lhs, lhs, tol)
    _check_stored("cut rhs", cert.rhs, rhs, tol)


def verify_supply_demand_cut(psi, sigma, tau, cert, tol):
    space = psi.space
    s = _idx(space, cert.set_X)
    ss = set(s)
    sc = [i for i in range(space.n) if i not in ss]
    lhs = _sum1_exact(sigma, s) - _sum1_exact(tau, s)
    rhs = _rect_exact(psi, s, sc)
    if not lhs > rhs:
        _fail("cut certificate fails sigma(S)-tau(S) > psi(SxSc)")
    _check_stored("cut lhs", cert.lhs, lhs, tol)
    _check_stored("cut rhs", cert.rhs, rhs, tol)


def _potential_sides(phi, psi, v, c, f, b):
    """Exact (lhs, rhs) of the tagged inequality for the JJFB family."""
    n = phi.space.n
    fv = [to_fraction(x) for x in f.f]
    lhs = Fraction(0)
    low = Fraction(0)
    for i in range(n):
        for j in range(n):
            t = fv[i] - fv[j] + b * to_fraction(v.w[i][j])
            if t > 0:
                lhs += to_fraction(psi.w[i][j]) * t
            elif t < 0:
                low += to_fraction(phi.w[i][j]) * (-t)
    return lhs, low + b * to_fraction(c)


_TAG_B = {"JJFB1": 1, "JJFB2": -1, "JJFB3": 0, "ERG": 1}


def verify_potential_cert(phi, psi, v, c, cert, tol):
    tag = cert.violated_condition
    if tag not in _TAG_B:
        _fail(f"unknown certificate tag {tag!r}")
    if cert.b != _TAG_B[tag]:
        _fail(f"certificate b={cert.b} contradicts tag {tag}")
    lhs, rhs = _potential_sides(phi, psi, v, c, cert.f, cert.b)
    if not lhs < rhs:
        _fail(f"potential certificate does not violate {tag}")
    _check_stored("potential lhs", cert.lhs, lhs, tol)
    _check_stored("potential rhs", cert.rhs, rhs, tol)


def verify_mincost_cert(psi, sigma, tau, v, target, cert, tol):
    if cert.violated_condition != "MINCOST":
        _fail("expected a MINCOST certificate")
    if cert.b not in (-1, 0, 1):
        _fail("certificate b must lie in {-1, 0, +1}")
    space = psi.space
    n = space.n
    fv = [to_fraction(x) for x in cert.f.f]
    lhs = Fraction(0)
    for i in range(n):
        for j in range(n):
            t = fv[j] - fv[i] + cert.b * to_fraction(v.w[i][j])
            if t > 0:
                lhs += to_fraction(psi.w[i][j]) * t
    rhs = sum(to_fraction(tau.w[i]) * fv[i] for i in range(n))
    rhs -= sum(to_fraction(sigma.w[i]) * fv[i] for i in range(n))
    rhs += cert.b * to_fraction(target)
    if not lhs < rhs:
        _fail("cost certificate does not violate its inequality")
    _check_stored("cost lhs", cert.lhs, lhs, tol)
    _check_stored("cost rhs", cert.rhs, rhs, tol)


def verify_transship_rect(psi, alpha, beta, cert, tol):
    space = psi.space
    s = _idx(space, cert.set_S)
    t = _idx(space, cert.set_T)
    lhs = _rect_exact(psi, s, t)
    rhs = _sum1_exact(alpha, s) + _sum1_exact(beta, t)
    rhs -= sum(to_fraction(x) for x in alpha.w)
    if not lhs < rhs:
        _fail("rectangle certificate fails psi(SxT) < alpha(S)+beta(T)-alpha(J)")
    _check_stored("rectangle lhs", cert.lhs, lhs, tol)
    _check_stored("rectangle rhs", cert.rhs, rhs, tol)


def verify_strassen_rect(pair_set, alpha, beta, cert, tol):
    space = alpha.space
    s = _idx(space, cert.set_S)
    t = _idx(space, cert.set_T)
    for i in s:
        for j in t:
            if (i, j) in pair_set:
                _fail("certificate rectangle meets the allowed pair set")
    lhs = _sum1_exact(alpha, s) + _sum1_exact(beta, t)
    if not lhs > 1:
        _fail("certificate fails alpha(S)+beta(T) > 1")
    _check_stored("rectangle lhs", cert.lhs, lhs, tol)
    _check_stored("rectangle rhs", cert.rhs, Fraction(1), tol)
