"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback is
interface-identical. DIXTRACE_KERNELS=python or =cython forces a choice
(forcing cython raises if the extension is missing).
"""

from __future__ import annotations

import os

_forced = os.environ.get("DIXTRACE_KERNELS", "").strip().lower()

if _forced in ("python", "py"):
    from . import _kernels_py as kernels
elif _forced in ("cython", "cy", "c"):
    from . import _kernels_cy as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]


def backend_name() -> str:
    return kernels.BACKEND
