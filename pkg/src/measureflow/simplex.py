"""Bounded-variable two-phase simplex with certificate extraction.

Solves  min c.x  subject to  A x = b,  lo <= x <= up  (upper bounds may be
absent). Works over exact Fractions (tol == 0) or floats (tol > 0). On
infeasible problems it returns a Farkas vector y with

    y.b  >  sum_j max over [lo_j, up_j] of (y.A_j) x_j,

the gap being exactly the phase-1 optimum. On feasible problems it returns
the optimum, an optimal point, and the row duals. Bland's rule throughout,
so termination does not depend on the data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

INF = None  # sentinel: no upper bound


@dataclass
class SimplexResult:
    status: str  # "optimal" or "infeasible"
    x: list | None
    objective: object
    duals: list | None
    farkas: list | None
    infeasibility: object


def assemble(c, A_eq, b_eq, A_ub, b_ub, lo, up):
    """Append one slack column per inequality row.

    Input is  min c.x : A_eq x = b_eq, A_ub x <= b_ub, lo <= x <= up.
    Output (A, b, c2, lo2, up2, nstruct) is the equality box form consumed
    by simplex_box; x[:nstruct] of a solution is the original vector.
    """
    n = len(c)
    nub = len(A_ub)
    A, b = [], []
    for row, rhs in zip(A_eq, b_eq):
        if len(row) != n:
            raise ValueError("row length mismatch")
        A.append(list(row) + [0] * nub)
        b.append(rhs)
    for k, (row, rhs) in enumerate(zip(A_ub, b_ub)):
        if len(row) != n:
            raise ValueError("row length mismatch")
        srow = list(row) + [0] * nub
        srow[n + k] = 1
        A.append(srow)
        b.append(rhs)
    c2 = list(c) + [0] * nub
    lo2 = list(lo) + [0] * nub
    up2 = list(up) + [INF] * nub
    return A, b, c2, lo2, up2, n


def _convert(value, exact):
    if exact:
        return value if isinstance(value, Fraction) else Fraction(value)
    return float(value)


def simplex_box(A, b, c, lo, up, tol=0):
    """Core engine on the equality box form. tol == 0 selects exact mode."""
    exact = tol == 0
    m = len(A)
    N = len(c)
    A = [[_convert(x, exact) for x in row] for row in A]
    b = [_convert(x, exact) for x in b]
    c = [_convert(x, exact) for x in c]
    lo = [_convert(x, exact) for x in lo]
    up = [None if u is None else _convert(u, exact) for u in up]
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    for j in range(N):
        if up[j] is not None and up[j] < lo[j]:
            raise ValueError("lower bound exceeds upper bound")

    NT = N + m
    lo_full = lo + [zero] * m
    up_full = up + [INF] * m
    fixed = [up_full[j] is not None and up_full[j] == lo_full[j] for j in range(NT)]
    at_upper = [False] * NT

    # start with every structural variable at its lower bound
    xval = list(lo)
    resid = [b[i] - sum(A[i][j] * xval[j] for j in range(N)) for i in range(m)]
    sign = [one if resid[i] >= 0 else -one for i in range(m)]

    # tableau rows scaled so the artificial block is the identity
    T = [[sign[i] * A[i][j] for j in range(N)] for i in range(m)]
    for i in range(m):
        T[i].extend(one if k == i else zero for k in range(m))
    xB = [sign[i] * resid[i] for i in range(m)]
    basis = [N + i for i in range(m)]
    in_basis = [False] * NT
    for j in basis:
        in_basis[j] = True

    def reduced_costs(cost):
        cB = [cost[basis[i]] for i in range(m)]
        return [
            cost[j] - sum(cB[i] * T[i][j] for i in range(m)) for j in range(NT)
        ]

    def bound_value(j):
        return up_full[j] if at_upper[j] else lo_full[j]

    def pivot(r, enter):
        piv = T[r][enter]
        inv = one / piv
        row = [x * inv for x in T[r]]
        T[r] = row
        for i in range(m):
            if i != r:
                f = T[i][enter]
                if f != 0:
                    T[i] = [a - f * bb for a, bb in zip(T[i], row)]
        return row

    def optimize(z, entering_limit):
        """Bland loop; mutates T, xB, basis, at_upper, z in place."""
        while True:
            enter = -1
            for j in range(entering_limit):
                if in_basis[j] or fixed[j]:
                    continue
                if not at_upper[j] and z[j] < -tol:
                    enter = j
                    break
                if at_upper[j] and z[j] > tol:
                    enter = j
                    break
            if enter < 0:
                return
            delta = -one if at_upper[enter] else one
            # ratio test: entering moves by t >= 0 in direction delta
            span = None
            if up_full[enter] is not None:
                span = up_full[enter] - lo_full[enter]
            best_t, best_row = span, -1
            for i in range(m):
                e = delta * T[i][enter]
                if e > tol:
                    limit = (xB[i] - lo_full[basis[i]]) / e
                elif e < -tol:
                    ub = up_full[basis[i]]
                    if ub is None:
                        continue
                    limit = (ub - xB[i]) / (-e)
                else:
                    continue
                if limit < 0:
                    limit = zero
                if best_t is None or limit < best_t:
                    best_t, best_row = limit, i
                elif limit == best_t and best_row >= 0 and basis[i] < basis[best_row]:
                    best_row = i
            if best_t is None:
                raise ArithmeticError("unbounded direction in a box problem")
            t = best_t
            for i in range(m):
                xB[i] -= delta * t * T[i][enter]
            if best_row < 0:
                # bound flip: the entering variable crosses its whole range
                at_upper[enter] = not at_upper[enter]
                continue
            leave = basis[best_row]
            enter_val = bound_value(enter) + delta * t
            e = delta * T[best_row][enter]
            at_upper[leave] = e < 0
            in_basis[leave] = False
            in_basis[enter] = True
            basis[best_row] = enter
            xB[best_row] = enter_val
            row = pivot(best_row, enter)
            zf = z[enter]
            if zf != 0:
                for j in range(NT):
                    z[j] -= zf * row[j]

    # phase 1: drive the artificial mass to zero
    cost1 = [zero] * N + [one] * m
    z1 = reduced_costs(cost1)
    optimize(z1, NT)
    infeas = sum(xB[i] for i in range(m) if basis[i] >= N)
    if infeas > tol:
        farkas = [sign[i] * (one - z1[N + i]) for i in range(m)]
        if exact:
            _assert_farkas_gap(A, b, lo, up, farkas, infeas, N, m)
        return SimplexResult("infeasible", None, None, None, farkas, infeas)

    # pin the artificials at zero and try to pivot them out of the basis
    for k in range(m):
        up_full[N + k] = zero
        fixed[N + k] = True
        if at_upper[N + k]:
            at_upper[N + k] = False
    for r in range(m):
        if basis[r] < N:
            continue
        for j in range(N):
            if not in_basis[j] and not fixed[j] and (
                T[r][j] > tol or T[r][j] < -tol
            ):
                leave = basis[r]
                in_basis[leave] = False
                in_basis[j] = True
                basis[r] = j
                xB[r] = bound_value(j)
                pivot(r, j)
                break
        # a row that offers no pivot is redundant; its artificial stays at 0

    # phase 2
    cost2 = list(c) + [zero] * m
    z2 = reduced_costs(cost2)
    optimize(z2, N)

    xfinal = [bound_value(j) for j in range(NT)]
    for i in range(m):
        xfinal[basis[i]] = xB[i]
    xs = xfinal[:N]
    objective = sum(c[j] * xs[j] for j in range(N))
    duals = [-sign[i] * z2[N + i] for i in range(m)]
    if exact:
        _assert_optimal(A, b, c, lo, up, xs, duals, z2, objective, N, m)
    return SimplexResult("optimal", xs, objective, duals, None, None)


def _assert_farkas_gap(A, b, lo, up, y, infeas, N, m):
    """Exact-mode self check: the Farkas gap equals the phase-1 optimum."""
    gap = sum(y[i] * b[i] for i in range(m))
    for j in range(N):
        coef = sum(y[i] * A[i][j] for i in range(m))
        if coef > 0:
            if up[j] is None:
                raise AssertionError("farkas coefficient escapes through +inf")
            gap -= coef * up[j]
        else:
            gap -= coef * lo[j]
    if gap != infeas or gap <= 0:
        raise AssertionError("farkas certificate does not match infeasibility")


def _assert_optimal(A, b, c, lo, up, xs, duals, z, objective, N, m):
    """Exact-mode self check: primal feasibility and strong duality."""
    for i in range(m):
        if sum(A[i][j] * xs[j] for j in range(N)) != b[i]:
            raise AssertionError("optimal point violates an equality row")
    for j in range(N):
        if xs[j] < lo[j] or (up[j] is not None and xs[j] > up[j]):
            raise AssertionError("optimal point violates a bound")
    # c.x = y.b + sum_j rc_j x_j with rc the final reduced costs
    rhs = sum(duals[i] * b[i] for i in range(m))
    rhs += sum(z[j] * xs[j] for j in range(N))
    if rhs != objective:
        raise AssertionError("strong duality identity fails")


def solve_box_lp(c, A_eq, b_eq, A_ub, b_ub, lo, up, tol=0):
    """Assemble and solve; x is returned in the original variable order."""
    A, b, c2, lo2, up2, n = assemble(c, A_eq, b_eq, A_ub, b_ub, lo, up)
    res = simplex_box(A, b, c2, lo2, up2, tol)
    if res.status == "optimal":
        res.x = res.x[:n]
    return res
