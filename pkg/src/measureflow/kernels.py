"""Backend selection for the float64 kernels.

The compiled extension is used when it imports cleanly; otherwise the pure
fallback takes over. Set MEASUREFLOW_PURE=1 to force the fallback. Exact
(rational) arithmetic never routes through here.
"""

from __future__ import annotations

import os

if os.environ.get("MEASUREFLOW_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
maxflow_f64 = _impl.maxflow_f64
simplex_f64 = _impl.simplex_f64
cut_scan = _impl.cut_scan
