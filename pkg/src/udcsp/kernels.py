"""Kernel selection: the compiled module when built, else the Python twin.

Set ``UDCSP_PURE=1`` to force the Python versions.
"""

from __future__ import annotations

import os
from typing import List, Optional, Sequence, Tuple

from . import _kernels_py as py

compiled = None
if os.environ.get("UDCSP_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled = None

BACKEND = "cython" if compiled is not None else "python"


def gf2_rank(rows: Sequence[int], width: int) -> int:
    if compiled is not None and width <= 64:
        return compiled.gf2_rank(rows)
    return py.gf2_rank(rows)


def division_exists(cols: Sequence[int], nrows: int, k: int) -> Optional[Tuple[List[int], List[int]]]:
    if compiled is not None and nrows <= 64:
        return compiled.division_exists(list(cols), nrows, k)
    return py.division_exists(cols, nrows, k)
