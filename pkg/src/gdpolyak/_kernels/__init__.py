"""Kernel backend selection: compiled extension when available, else NumPy.

Set GDPOLYAK_PURE=1 to force the pure-Python backend (used by the
benchmark to compare the two).
"""

import os

if os.environ.get("GDPOLYAK_PURE") == "1":
    from gdpolyak._kernels._pure import *  # noqa: F401,F403
else:
    try:
        from gdpolyak._kernels._fast import *  # noqa: F401,F403
    except ImportError:
        from gdpolyak._kernels._pure import *  # noqa: F401,F403
