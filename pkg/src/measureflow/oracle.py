"""Brute-force LP oracle: a second, independent simplex for cross-checks.

Deliberately a different code path from the solver engine: standard-form
dense tableau with shifted variables, explicit upper-bound rows, slack-basis
warm start, Dantzig pivoting with a Bland fallback against cycling, always
in exact rational arithmetic. Returns verdict and optimum only; witnesses
stay the solver's job.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import TooLarge
from .numeric import to_fraction

VAR_LIMIT = 10 ** 4


@dataclass(frozen=True)
class OracleVerdict:
    status: str            # optimal | infeasible | unbounded
    optimum: object        # Fraction or None


def _frac_rows(rows):
    return [[to_fraction(x) for x in row] for row in rows]


def lp_oracle(problem) -> OracleVerdict:
    """Solve min c.x : A_eq x = b_eq, A_ub x <= b_ub, lo <= x <= up.

    problem is a dict with keys c, A_eq, b_eq, A_ub, b_ub, lo, up; up
    entries may be None for unbounded coordinates.
    """
    c = [to_fraction(x) for x in problem["c"]]
    A_eq = _frac_rows(problem.get("A_eq", []))
    b_eq = [to_fraction(x) for x in problem.get("b_eq", [])]
    A_ub = _frac_rows(problem.get("A_ub", []))
    b_ub = [to_fraction(x) for x in problem.get("b_ub", [])]
    lo = [to_fraction(x) for x in problem["lo"]]
    up = [None if u is None else to_fraction(u) for u in problem["up"]]
    n = len(c)

    # shift x = y + lo, y >= 0; upper bounds become explicit rows
    b_eq = [b - sum(row[k] * lo[k] for k in range(n)) for row, b in zip(A_eq, b_eq)]
    b_ub = [b - sum(row[k] * lo[k] for k in range(n)) for row, b in zip(A_ub, b_ub)]
    shift = sum(c[k] * lo[k] for k in range(n))
    for k in range(n):
        if up[k] is not None:
            row = [Fraction(0)] * n
            row[k] = Fraction(1)
            A_ub.append(row)
            b_ub.append(up[k] - lo[k])

    meq, mub = len(A_eq), len(A_ub)
    m = meq + mub
    nslack = mub
    # negative <= rhs rows need an artificial; nonneg ones start on slack
    flip = [b < 0 for b in b_ub]
    art_rows = list(range(meq)) + [meq + k for k in range(mub) if flip[k]]
    nart = len(art_rows)
    N = n + nslack + nart
    if N > VAR_LIMIT:
        raise TooLarge(f"{N} variables exceeds the oracle guard")

    T = []
    rhs = []
    basis = [0] * m
    art_col = {}
    for pos, r in enumerate(art_rows):
        art_col[r] = n + nslack + pos
    for r in range(meq):
        sign = -1 if b_eq[r] < 0 else 1
        row = [sign * x for x in A_eq[r]] + [Fraction(0)] * (nslack + nart)
        row[art_col[r]] = Fraction(1)
        T.append(row)
        rhs.append(sign * b_eq[r])
        basis[r] = art_col[r]
    for k in range(mub):
        r = meq + k
        sign = -1 if flip[k] else 1
        row = [sign * x for x in A_ub[k]] + [Fraction(0)] * (nslack + nart)
        row[n + k] = sign * Fraction(1)
        T.append(row)
        rhs.append(sign * b_ub[k])
        if flip[k]:
            basis[r] = art_col[r]
        else:
            basis[r] = n + k

    def run_phase(cost, ncols):
        # returns (objective, unbounded?) maintaining T, rhs, basis
        z = [Fraction(0)] * ncols
        obj = Fraction(0)
        for r in range(m):
            cb = cost[basis[r]]
            if cb:
                obj += cb * rhs[r]
                for j in range(ncols):
                    z[j] += cb * T[r][j]
        red = [cost[j] - z[j] for j in range(ncols)]

        stall = 0
        bland = False
        guard = 3 * (m + ncols) + 10
        while True:
            enter = -1
            if bland:
                for j in range(ncols):
                    if j not in basis_set and red[j] < 0:
                        enter = j
                        break
            else:
                best = Fraction(0)
                for j in range(ncols):
                    if red[j] < best and j not in basis_set:
                        best = red[j]
                        enter = j
            if enter < 0:
                return obj, False
            leave = -1
            ratio = None
            for r in range(m):
                a = T[r][enter]
                if a > 0:
                    q = rhs[r] / a
                    if ratio is None or q < ratio:
                        ratio = q
                        leave = r
            if leave < 0:
                return obj, True
            if ratio == 0:
                stall += 1
                if stall > guard:
                    bland = True
            else:
                stall = 0
            piv = T[leave][enter]
            T[leave] = [x / piv for x in T[leave]]
            rhs[leave] /= piv
            for r in range(m):
                if r != leave and T[r][enter]:
                    f = T[r][enter]
                    T[r] = [x - f * y for x, y in zip(T[r], T[leave])]
                    rhs[r] -= f * rhs[leave]
            f = red[enter]
            if f:
                for j in range(ncols):
                    red[j] -= f * T[leave][j]
                obj += f * rhs[leave]
            basis_set.discard(basis[leave])
            basis_set.add(enter)
            basis[leave] = enter

    basis_set = set(basis)
    if nart:
        cost1 = [Fraction(0)] * (n + nslack) + [Fraction(1)] * nart
        obj1, unb = run_phase(cost1, N)
        if obj1 > 0:
            return OracleVerdict("infeasible", None)
        # drop leftover artificials from the basis where possible
        for r in range(m):
            if basis[r] >= n + nslack:
                for j in range(n + nslack):
                    if T[r][j] != 0 and j not in basis_set:
                        piv = T[r][j]
                        T[r] = [x / piv for x in T[r]]
                        rhs[r] /= piv
                        for r2 in range(m):
                            if r2 != r and T[r2][j]:
                                f = T[r2][j]
                                T[r2] = [x - f * y for x, y in zip(T[r2], T[r])]
                                rhs[r2] -= f * rhs[r]
                        basis_set.discard(basis[r])
                        basis_set.add(j)
                        basis[r] = j
                        break

    # phase 2 over structural + slack columns; leftover basic artificials sit
    # at level zero and can only leave, never re-enter
    cost2 = list(c) + [Fraction(0)] * (nslack + nart)
    obj2, unb = run_phase(cost2, n + nslack)
    if unb:
        return OracleVerdict("unbounded", None)
    return OracleVerdict("optimal", obj2 + shift)


# ---------------------------------------------------------------------------
# canonical encodings of the solver operations


def _balance_rows(n):
    rows = []
    for z in range(n):
        row = [Fraction(0)] * (n * n)
        for i in range(n):
            for j in range(n):
                coef = (1 if i == z else 0) - (1 if j == z else 0)
                if coef:
                    row[i * n + j] = Fraction(coef)
        rows.append(row)
    return rows


def _flat(mu):
    return [to_fraction(mu.w[i // mu.space.n][i % mu.space.n])
            for i in range(mu.space.n ** 2)]


def encode_circulation(phi, psi):
    n = phi.space.n
    return {
        "c": [Fraction(0)] * (n * n),
        "A_eq": _balance_rows(n),
        "b_eq": [Fraction(0)] * n,
        "lo": _flat(phi),
        "up": _flat(psi),
    }


def encode_valued(phi, psi, v, value):
    n = phi.space.n
    prob = encode_circulation(phi, psi)
    prob["A_eq"] = prob["A_eq"] + [_flat(v)]
    prob["b_eq"] = prob["b_eq"] + [to_fraction(value)]
    return prob


def encode_ergodic(psi):
    from .measures import SignedMeasure2

    zero = SignedMeasure2.zero(psi.space)
    one = SignedMeasure2.constant(psi.space, 1)
    return encode_valued(zero, psi, one, 1)


def encode_maxflow(psi, s, t):
    n = psi.space.n
    si, ti = psi.space.index(s), psi.space.index(t)
    rows = _balance_rows(n)
    A_eq = [rows[z] for z in range(n) if z not in (si, ti)]
    cap = _flat(psi)
    c = [Fraction(0)] * (n * n)
    for j in range(n):
        if j != si:
            c[si * n + j] -= 1
            c[j * n + si] += 1
    return {
        "c": c,
        "A_eq": A_eq,
        "b_eq": [Fraction(0)] * len(A_eq),
        "lo": [Fraction(0)] * (n * n),
        "up": [max(x, Fraction(0)) if i // n != i % n else Fraction(0)
               for i, x in enumerate(cap)],
    }


def encode_supply_demand(psi, sigma, tau):
    n = psi.space.n
    prob = encode_maxflow_base(psi)
    prob["A_eq"] = _balance_rows(n)
    prob["b_eq"] = [to_fraction(sigma.w[z]) - to_fraction(tau.w[z])
                    for z in range(n)]
    return prob


def encode_maxflow_base(psi):
    n = psi.space.n
    cap = _flat(psi)
    return {
        "c": [Fraction(0)] * (n * n),
        "A_eq": [],
        "b_eq": [],
        "lo": [Fraction(0)] * (n * n),
        "up": [max(x, Fraction(0)) for x in cap],
    }


def encode_mincost(psi, sigma, tau, v, target):
    prob = encode_supply_demand(psi, sigma, tau)
    prob["A_eq"] = prob["A_eq"] + [_flat(v)]
    prob["b_eq"] = prob["b_eq"] + [to_fraction(target)]
    return prob


def _marginal_rows(n):
    rows = []
    for z in range(n):
        row = [Fraction(0)] * (n * n)
        for j in range(n):
            row[z * n + j] = Fraction(1)
        rows.append(row)
    for z in range(n):
        row = [Fraction(0)] * (n * n)
        for i in range(n):
            row[i * n + z] = Fraction(1)
        rows.append(row)
    return rows


def encode_transship(psi, alpha, beta):
    n = psi.space.n
    return {
        "c": [Fraction(0)] * (n * n),
        "A_eq": _marginal_rows(n),
        "b_eq": [to_fraction(x) for x in list(alpha.w) + list(beta.w)],
        "lo": [Fraction(0)] * (n * n),
        "up": [max(x, Fraction(0)) for x in _flat(psi)],
    }


def encode_transship_cost(alpha, beta, cost):
    n = alpha.space.n
    return {
        "c": _flat(cost),
        "A_eq": _marginal_rows(n),
        "b_eq": [to_fraction(x) for x in list(alpha.w) + list(beta.w)],
        "lo": [Fraction(0)] * (n * n),
        "up": [None] * (n * n),
    }


def encode_strassen(alpha, beta, allowed):
    """allowed: SignedMeasure2 whose support is the permitted pair set."""
    n = alpha.space.n
    up = [Fraction(1) if allowed.w[i // n][i % n] != 0 else Fraction(0)
          for i in range(n * n)]
    prob = encode_transship(allowed, alpha, beta)
    prob["up"] = up
    return prob


def encode_multiflow(sigma, psi):
    """Minimum total overload of the demand routing; optimum <= eps means
    feasible at that budget."""
    n = sigma.space.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
             if sigma.w[i][j] > 0]
    arcs = [(x, y) for x in range(n) for y in range(n) if x != y]
    na = len(arcs)
    over = [(x, y) for x in range(n) for y in range(x + 1, n)]
    nflow = len(pairs) * na
    nv = nflow + len(over)

    c = [Fraction(0)] * nflow + [Fraction(2)] * len(over)
    A_eq = []
    b_eq = []
    for p, (s, t) in enumerate(pairs):
        for z in range(n):
            row = [Fraction(0)] * nv
            for a, (x, y) in enumerate(arcs):
                if x == z:
                    row[p * na + a] += 1
                if y == z:
                    row[p * na + a] -= 1
            A_eq.append(row)
            b_eq.append(Fraction(1 if z == s else (-1 if z == t else 0)))
    A_ub = []
    b_ub = []
    for k, (x, y) in enumerate(over):
        row = [Fraction(0)] * nv
        for p, (s, t) in enumerate(pairs):
            w = to_fraction(sigma.w[s][t])
            for a, (ax, ay) in enumerate(arcs):
                if (ax, ay) in ((x, y), (y, x)):
                    row[p * na + a] += w
        row[nflow + k] = Fraction(-1)
        A_ub.append(row)
        b_ub.append(to_fraction(psi.w[x][y]))
    return {
        "c": c,
        "A_eq": A_eq,
        "b_eq": b_eq,
        "A_ub": A_ub,
        "b_ub": b_ub,
        "lo": [Fraction(0)] * nv,
        "up": [None] * nv,
    }
