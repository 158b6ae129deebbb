"""Product-kernel backend selection.

The compiled Cython kernel is used when importable; REDUP_BACKEND=py or =c
forces a choice (forcing c without the extension built is an import error).
"""

from __future__ import annotations

import os

from ._product_py import product as _py_product

BACKEND = "py"
product = _py_product

_choice = os.environ.get("REDUP_BACKEND", "").strip().lower()
if _choice not in ("", "py", "c"):
    raise ImportError(f"REDUP_BACKEND must be 'py' or 'c', not {_choice!r}")
if _choice != "py":
    try:
        from ._product_c import product as _c_product  # type: ignore[import-not-found]

        product = _c_product
        BACKEND = "c"
    except ImportError:
        if _choice == "c":
            raise
