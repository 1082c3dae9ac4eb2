"""Split-kernel backend selection.

The compiled Cython kernel is preferred; the numpy fallback is used when
the extension is absent or PUPILMOOD_PURE_PY is set. Both kernels produce
bit-identical results (asserted in tests), so backend choice never changes
model output.
"""

from __future__ import annotations

import os

if os.environ.get("PUPILMOOD_PURE_PY"):
    from ._split_np import BACKEND, best_split_scan
else:
    try:
        from ._split_cy import BACKEND, best_split_scan  # type: ignore[no-redef]
    except ImportError:
        from ._split_np import BACKEND, best_split_scan  # type: ignore[no-redef]

__all__ = ["BACKEND", "best_split_scan"]
