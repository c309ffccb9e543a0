"""Kernel selection: the compiled extension when built, pure Python otherwise.

Set ``MMM_PURE_KERNEL=1`` to force the pure kernel (used by the benchmark and
by differential tests comparing the two implementations).
"""
from __future__ import annotations

import os

if os.environ.get("MMM_PURE_KERNEL"):
    from meanmedian import _kernel_py as kernel

    BACKEND = "pure"
else:
    try:
        from meanmedian import _kernel_cy as kernel  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from meanmedian import _kernel_py as kernel  # type: ignore[no-redef]

        BACKEND = "pure"
