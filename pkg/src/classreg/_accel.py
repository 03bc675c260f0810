"""Backend selection for the compiled kernels.

Set ``CLASSREG_DISABLE_NUMBA=1`` to force the pure-numpy fallback even when
numba is importable. The flag is read once, at import time.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("CLASSREG_DISABLE_NUMBA", "").strip().lower()

NUMBA_AVAILABLE = numba is not None
NUMBA_ENABLED = NUMBA_AVAILABLE and _FLAG not in {"1", "true", "yes", "on"}


def maybe_njit(fn):
    """Compile ``fn`` in nopython mode when numba is importable, else return None."""
    if not NUMBA_AVAILABLE:
        return None
    return numba.njit(cache=True, nogil=True)(fn)


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
