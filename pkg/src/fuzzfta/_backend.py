"""Select the compiled kernels when available, else the numpy fallback.

Set ``FUZZFTA_PURE_PYTHON=1`` to force the fallback.
"""

import os

from fuzzfta import _fallback

kernels = _fallback
BACKEND = "python"

if os.environ.get("FUZZFTA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from fuzzfta import _kernels as kernels  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"


def available():
    """Name -> kernel module for every backend importable in this environment."""
    found = {"python": _fallback}
    try:
        from fuzzfta import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found
