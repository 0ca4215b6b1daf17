"""Pure-Python stand-ins for the compiled kernels.

Same signatures and numeric behavior as _kernels: float64 in, float64 out.
These wrap the generic engines, so the compiled module is an accelerator,
not a separate algorithm.
"""

from __future__ import annotations

import numpy as np

from .maxflow import max_flow_matrix
from .simplex import simplex_box

BACKEND = "pure"


def maxflow_f64(cap, s, t, tol):
    cap = np.asarray(cap, dtype=np.float64)
    value, flow, cut = max_flow_matrix(cap.tolist(), int(s), int(t), float(tol))
    return float(value), np.array(flow, dtype=np.float64), sorted(cut)


def simplex_f64(A, b, c, lo, up, has_up, tol):
    tol = float(tol)
    if tol <= 0:
        raise ValueError("float kernel needs a positive tolerance")
    A = np.asarray(A, dtype=np.float64)
    up_list = [
        float(u) if flag else None for u, flag in zip(np.asarray(up), np.asarray(has_up))
    ]
    res = simplex_box(
        [list(map(float, row)) for row in A],
        [float(x) for x in np.asarray(b)],
        [float(x) for x in np.asarray(c)],
        [float(x) for x in np.asarray(lo)],
        up_list,
        tol,
    )
    if res.status == "infeasible":
        return 1, None, 0.0, None, np.array(res.farkas, dtype=np.float64), float(
            res.infeasibility
        )
    return (
        0,
        np.array(res.x, dtype=np.float64),
        float(res.objective),
        np.array(res.duals, dtype=np.float64),
        None,
        0.0,
    )


def cut_scan(psi, dem):
    psi = np.asarray(psi, dtype=np.float64)
    dem = np.asarray(dem, dtype=np.float64).reshape(-1, 3)
    n = psi.shape[0]
    masks = np.arange(1, (1 << n) - 1, dtype=np.uint64)
    # membership table: rows = masks, cols = vertices
    inside = (masks[:, None] >> np.arange(n, dtype=np.uint64)[None, :]) & 1
    inside = inside.astype(bool)
    outside = ~inside
    caps = np.einsum("mi,ij,mj->m", inside, psi, outside)
    si = dem[:, 0].astype(np.int64)
    ti = dem[:, 1].astype(np.int64)
    sep = ((inside[:, si] != inside[:, ti]) * dem[:, 2]).sum(axis=1)
    slack = caps - sep
    best = int(np.argmin(slack))
    return float(slack[best]), int(masks[best])
