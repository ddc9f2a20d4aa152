"""Kernel backend selection.

The compiled extension is preferred when present; the numpy fallback is picked
up transparently otherwise. Setting MVCLUST_PURE_PYTHON=1 forces the fallback,
which the benchmark and the backend-parity tests rely on.
"""

import os

if os.environ.get("MVCLUST_PURE_PYTHON"):
    from . import _simplex_np as _impl
else:
    try:
        from . import _simplex as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _simplex_np as _impl

BACKEND = _impl.BACKEND
project_rows = _impl.project_rows
