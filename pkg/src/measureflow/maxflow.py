"""Dense FIFO push-relabel maximum flow, generic over the number type.

Capacities come as an n-by-n matrix (diagonal ignored). Exact arithmetic
when tol == 0, floating point otherwise. Returns the flow value, the
nonnegative flow matrix, and the source side of a minimum cut. Deterministic:
neighbors are scanned in index order and active vertices run through a FIFO
queue.
"""

from __future__ import annotations

from collections import deque


def max_flow_matrix(cap, s, t, tol=0):
    """Maximum s-t flow on dense capacities.

    Returns (value, flow, cut) where flow[i][j] >= 0 carries conservation at
    every vertex other than s and t, and cut is the frozenset of vertices
    reachable from s in the final residual graph (so s in cut, t not in cut,
    and the capacity across cut equals value).
    """
    n = len(cap)
    if s == t:
        raise ValueError("source equals sink")
    for row in cap:
        if len(row) != n:
            raise ValueError("capacity matrix must be square")
    for i in range(n):
        for j in range(n):
            if i != j and cap[i][j] < 0:
                raise ValueError("negative capacity")

    # antisymmetric flow: F[i][j] == -F[j][i], residual = cap - F
    F = [[0] * n for _ in range(n)]
    excess = [0] * n
    height = [0] * n
    height[s] = n

    active = deque()
    in_queue = [False] * n

    def push(u, v, amount):
        F[u][v] += amount
        F[v][u] -= amount
        excess[u] -= amount
        excess[v] += amount
        if v != s and v != t and not in_queue[v] and excess[v] > tol:
            in_queue[v] = True
            active.append(v)

    for v in range(n):
        if v != s and cap[s][v] > tol:
            push(s, v, cap[s][v])

    while active:
        u = active.popleft()
        in_queue[u] = False
        while excess[u] > tol:
            pushed = False
            for v in range(n):
                if v == u:
                    continue
                resid = cap[u][v] - F[u][v]
                if resid > tol and height[u] == height[v] + 1:
                    amount = excess[u] if excess[u] < resid else resid
                    push(u, v, amount)
                    pushed = True
                    if not excess[u] > tol:
                        break
            if not excess[u] > tol:
                break
            if not pushed:
                best = None
                for v in range(n):
                    if v != u and cap[u][v] - F[u][v] > tol:
                        if best is None or height[v] < best:
                            best = height[v]
                if best is None:
                    break  # no residual arc at all; excess is stuck (cannot happen)
                height[u] = best + 1
                if height[u] >= 2 * n:
                    break  # unreachable excess flows back no further

    value = sum(F[s][v] for v in range(n))

    # min cut: residual reachability from s
    seen = [False] * n
    seen[s] = True
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in range(n):
            if not seen[v] and cap[u][v] - F[u][v] > tol:
                seen[v] = True
                queue.append(v)
    cut = frozenset(i for i in range(n) if seen[i])

    flow = [[F[i][j] if F[i][j] > 0 else 0 for j in range(n)] for i in range(n)]
    return value, flow, cut
