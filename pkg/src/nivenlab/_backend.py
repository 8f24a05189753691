"""Kernel backend selection.

The hot numeric inner loops (phase-polynomial DP, modular representation-count
DP) each have two interchangeable implementations: numba ``@njit`` kernels and
pure-numpy fallbacks.  Selection happens once at import time; set the
environment variable ``NIVENLAB_NO_NUMBA`` to any non-empty value to force the
numpy path (the fallback is also used automatically when numba is missing or
fails to import).
"""

from __future__ import annotations

import os

DISABLE_FLAG = "NIVENLAB_NO_NUMBA"

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - import failure depends on host
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not os.environ.get(DISABLE_FLAG)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
