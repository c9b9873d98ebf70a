"""Backend selection for the hot kernels.

Imports the compiled Cython extension when present; otherwise falls back to
the numpy implementation.  Set GHILL_PURE_PYTHON=1 to force the fallback
(used by the benchmark and the backend-equivalence tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("GHILL_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND

weighted_exp_sums = _impl.weighted_exp_sums
power_sum = _impl.power_sum


def backends():
    """All importable backends, for benchmarks and cross-checks."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        found["cython"] = _kernels
    except ImportError:
        pass
    return found
