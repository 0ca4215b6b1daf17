# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float64 kernels: dense push-relabel, bounded-variable simplex,
and an exhaustive cut scan. Mirrors the generic engines closely; the pure
fallback in _kernels_py exposes the same signatures."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def maxflow_f64(cnp.float64_t[:, ::1] cap, Py_ssize_t s, Py_ssize_t t, double tol):
    cdef Py_ssize_t n = cap.shape[0]
    if cap.shape[1] != n:
        raise ValueError("capacity matrix must be square")
    if s == t:
        raise ValueError("source equals sink")

    cdef cnp.ndarray[cnp.float64_t, ndim=2] F_arr = np.zeros((n, n), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] F = F_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] excess_arr = np.zeros(n, dtype=np.float64)
    cdef cnp.float64_t[::1] excess = excess_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] height_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] height = height_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue_arr = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] inq_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] inq = inq_arr

    cdef Py_ssize_t head = 0, tail = 0, qcap = n + 1
    cdef Py_ssize_t u, v
    cdef double amount, resid
    cdef cnp.int64_t best
    cdef bint pushed, found

    height[s] = n
    for v in range(n):
        if v != s and cap[s, v] > tol:
            amount = cap[s, v]
            F[s, v] += amount
            F[v, s] -= amount
            excess[s] -= amount
            excess[v] += amount
            if v != t and excess[v] > tol:
                inq[v] = 1
                queue[tail] = v
                tail = (tail + 1) % qcap

    while head != tail:
        u = queue[head]
        head = (head + 1) % qcap
        inq[u] = 0
        while excess[u] > tol:
            pushed = False
            for v in range(n):
                if v == u:
                    continue
                resid = cap[u, v] - F[u, v]
                if resid > tol and height[u] == height[v] + 1:
                    amount = excess[u]
                    if resid < amount:
                        amount = resid
                    F[u, v] += amount
                    F[v, u] -= amount
                    excess[u] -= amount
                    excess[v] += amount
                    if v != s and v != t and inq[v] == 0 and excess[v] > tol:
                        inq[v] = 1
                        queue[tail] = v
                        tail = (tail + 1) % qcap
                    pushed = True
                    if not excess[u] > tol:
                        break
            if not excess[u] > tol:
                break
            if not pushed:
                best = -1
                found = False
                for v in range(n):
                    if v != u and cap[u, v] - F[u, v] > tol:
                        if not found or height[v] < best:
                            best = height[v]
                            found = True
                if not found:
                    break
                height[u] = best + 1
                if height[u] >= 2 * n:
                    break

    cdef double value = 0.0
    for v in range(n):
        value += F[s, v]

    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] seen = seen_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] stack_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] stack = stack_arr
    cdef Py_ssize_t top = 0
    seen[s] = 1
    stack[top] = s
    top += 1
    while top > 0:
        top -= 1
        u = stack[top]
        for v in range(n):
            if seen[v] == 0 and cap[u, v] - F[u, v] > tol:
                seen[v] = 1
                stack[top] = v
                top += 1

    cdef cnp.ndarray[cnp.float64_t, ndim=2] flow = np.where(F_arr > 0, F_arr, 0.0)
    cut = [v for v in range(n) if seen[v]]
    return value, flow, cut


def simplex_f64(
    cnp.float64_t[:, ::1] A,
    cnp.float64_t[::1] b,
    cnp.float64_t[::1] c,
    cnp.float64_t[::1] lo,
    cnp.float64_t[::1] up,
    cnp.uint8_t[::1] has_up,
    double tol,
):
    """Two-phase bounded simplex on the equality box form.

    Returns (status, x, objective, duals, farkas, infeasibility) with
    status 0 for optimal and 1 for infeasible; farkas is None when optimal.
    """
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t N = A.shape[1]
    cdef Py_ssize_t NT = N + m
    if tol <= 0:
        raise ValueError("float kernel needs a positive tolerance")

    cdef cnp.ndarray[cnp.float64_t, ndim=1] lof_arr = np.zeros(NT, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] upf_arr = np.zeros(NT, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] hup_arr = np.zeros(NT, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] fixed_arr = np.zeros(NT, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] atup_arr = np.zeros(NT, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] inb_arr = np.zeros(NT, dtype=np.uint8)
    cdef cnp.float64_t[::1] lof = lof_arr
    cdef cnp.float64_t[::1] upf = upf_arr
    cdef cnp.uint8_t[::1] hup = hup_arr
    cdef cnp.uint8_t[::1] fixed = fixed_arr
    cdef cnp.uint8_t[::1] atup = atup_arr
    cdef cnp.uint8_t[::1] inb = inb_arr

    cdef Py_ssize_t i, j, k, r
    for j in range(N):
        lof[j] = lo[j]
        if has_up[j]:
            upf[j] = up[j]
            hup[j] = 1
            if upf[j] < lof[j]:
                raise ValueError("lower bound exceeds upper bound")
            if upf[j] == lof[j]:
                fixed[j] = 1

    cdef cnp.ndarray[cnp.float64_t, ndim=1] sign_arr = np.zeros(m, dtype=np.float64)
    cdef cnp.float64_t[::1] sign = sign_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xB_arr = np.zeros(m, dtype=np.float64)
    cdef cnp.float64_t[::1] xB = xB_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] basis_arr = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] basis = basis_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=2] T_arr = np.zeros((m, NT), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] T = T_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] z_arr = np.zeros(NT, dtype=np.float64)
    cdef cnp.float64_t[::1] z = z_arr

    cdef double resid, acc
    for i in range(m):
        resid = b[i]
        for j in range(N):
            resid -= A[i, j] * lo[j]
        sign[i] = 1.0 if resid >= 0 else -1.0
        for j in range(N):
            T[i, j] = sign[i] * A[i, j]
        T[i, N + i] = 1.0
        xB[i] = sign[i] * resid
        basis[i] = N + i
        inb[N + i] = 1

    # phase-1 reduced costs: cost 0 on structurals, 1 on artificials
    for j in range(NT):
        acc = 0.0
        for i in range(m):
            acc += T[i, j]
        z[j] = (1.0 if j >= N else 0.0) - acc

    cdef Py_ssize_t enter, best_row, leave
    cdef double delta, span, best_t, limit, e, t, piv, inv, f, zf, ub
    cdef bint has_span, has_best
    cdef long iterations = 0
    cdef long budget = 200000 + 2000 * (m + NT)
    cdef Py_ssize_t entering_limit
    cdef int phase

    for phase in range(2):
        entering_limit = NT if phase == 0 else N
        while True:
            iterations += 1
            if iterations > budget:
                raise ArithmeticError("simplex iteration budget exhausted")
            enter = -1
            for j in range(entering_limit):
                if inb[j] or fixed[j]:
                    continue
                if atup[j] == 0 and z[j] < -tol:
                    enter = j
                    break
                if atup[j] == 1 and z[j] > tol:
                    enter = j
                    break
            if enter < 0:
                break
            delta = -1.0 if atup[enter] else 1.0
            has_span = hup[enter] == 1
            span = upf[enter] - lof[enter] if has_span else 0.0
            has_best = has_span
            best_t = span
            best_row = -1
            for i in range(m):
                e = delta * T[i, enter]
                if e > tol:
                    limit = (xB[i] - lof[basis[i]]) / e
                elif e < -tol:
                    if hup[basis[i]] == 0:
                        continue
                    limit = (upf[basis[i]] - xB[i]) / (-e)
                else:
                    continue
                if limit < 0:
                    limit = 0.0
                if not has_best or limit < best_t:
                    has_best = True
                    best_t = limit
                    best_row = i
                elif limit == best_t and best_row >= 0 and basis[i] < basis[best_row]:
                    best_row = i
            if not has_best:
                raise ArithmeticError("unbounded direction in a box problem")
            t = best_t
            for i in range(m):
                xB[i] -= delta * t * T[i, enter]
            if best_row < 0:
                atup[enter] = 0 if atup[enter] else 1
                continue
            leave = basis[best_row]
            e = delta * T[best_row, enter]
            atup[leave] = 1 if e < 0 else 0
            inb[leave] = 0
            inb[enter] = 1
            basis[best_row] = enter
            xB[best_row] = (upf[enter] if atup[enter] else lof[enter]) + delta * t
            piv = T[best_row, enter]
            inv = 1.0 / piv
            for j in range(NT):
                T[best_row, j] *= inv
            for i in range(m):
                if i != best_row:
                    f = T[i, enter]
                    if f != 0.0:
                        for j in range(NT):
                            T[i, j] -= f * T[best_row, j]
            zf = z[enter]
            if zf != 0.0:
                for j in range(NT):
                    z[j] -= zf * T[best_row, j]

        if phase == 1:
            break

        # end of phase 1
        acc = 0.0
        for i in range(m):
            if basis[i] >= N:
                acc += xB[i]
        if acc > tol:
            farkas = np.zeros(m, dtype=np.float64)
            for i in range(m):
                farkas[i] = sign[i] * (1.0 - z[N + i])
            return 1, None, 0.0, None, farkas, acc

        # pin the artificials, pivot them out where a structural column allows
        for k in range(m):
            upf[N + k] = 0.0
            hup[N + k] = 1
            fixed[N + k] = 1
            atup[N + k] = 0
        for r in range(m):
            if basis[r] < N:
                continue
            for j in range(N):
                if inb[j] == 0 and fixed[j] == 0 and (
                    T[r, j] > tol or T[r, j] < -tol
                ):
                    leave = basis[r]
                    inb[leave] = 0
                    inb[j] = 1
                    basis[r] = j
                    xB[r] = upf[j] if atup[j] else lof[j]
                    piv = T[r, j]
                    inv = 1.0 / piv
                    for k in range(NT):
                        T[r, k] *= inv
                    for i in range(m):
                        if i != r:
                            f = T[i, j]
                            if f != 0.0:
                                for k in range(NT):
                                    T[i, k] -= f * T[r, k]
                    break

        # phase-2 reduced costs from scratch
        for j in range(NT):
            acc = 0.0
            for i in range(m):
                if basis[i] < N:
                    acc += c[basis[i]] * T[i, j]
            z[j] = (c[j] if j < N else 0.0) - acc

    cdef cnp.ndarray[cnp.float64_t, ndim=1] x_arr = np.zeros(N, dtype=np.float64)
    for j in range(N):
        x_arr[j] = upf[j] if atup[j] else lof[j]
    for i in range(m):
        if basis[i] < N:
            x_arr[basis[i]] = xB[i]
    cdef double objective = 0.0
    for j in range(N):
        objective += c[j] * x_arr[j]
    duals = np.zeros(m, dtype=np.float64)
    for i in range(m):
        duals[i] = -sign[i] * z[N + i]
    return 0, x_arr, objective, duals, None, 0.0


def cut_scan(cnp.float64_t[:, ::1] psi, cnp.float64_t[:, ::1] dem):
    """Exhaustive cut check for a multicommodity instance.

    psi is the symmetric capacity table; dem rows are (source index, target
    index, demand). Returns (worst slack, worst mask) over all proper
    nonempty vertex subsets, where slack = capacity from the subset to its
    complement minus separated demand, each unordered pair counted once —
    the same normalization as the cut-metric volume test.
    """
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t k = dem.shape[0]
    cdef unsigned long mask, full = (1UL << n) - 1UL
    cdef Py_ssize_t i, j, d
    cdef double cap, sep, slack, best_slack = 0.0
    cdef unsigned long best_mask = 0
    cdef bint first = True
    cdef Py_ssize_t si, ti

    for mask in range(1, full):
        cap = 0.0
        for i in range(n):
            if (mask >> i) & 1UL:
                for j in range(n):
                    if not ((mask >> j) & 1UL):
                        cap += psi[i, j]
        sep = 0.0
        for d in range(k):
            si = <Py_ssize_t> dem[d, 0]
            ti = <Py_ssize_t> dem[d, 1]
            if ((mask >> si) & 1UL) != ((mask >> ti) & 1UL):
                sep += dem[d, 2]
        slack = cap - sep
        if first or slack < best_slack:
            best_slack = slack
            best_mask = mask
            first = False
    return best_slack, best_mask
