"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``LOCROUND_FORCE_PURE=1`` to force the pure-Python kernels.  The
compiled kernels additionally fall back per call when their integer
magnitude bounds would overflow.
"""

import os

from . import pure

if os.environ.get("LOCROUND_FORCE_PURE"):
    impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _core as impl   # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        impl = pure
        BACKEND = "pure"
