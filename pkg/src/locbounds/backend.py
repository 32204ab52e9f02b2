"""Select compiled or pure-Python inner loops.

Set LOCBOUNDS_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the backend-agreement tests).
"""
import os

from . import _kernels_py

NAME = "python"
kernels = _kernels_py

if not os.environ.get("LOCBOUNDS_PURE_PYTHON"):
    try:
        from . import _kernels_c as kernels  # type: ignore[no-redef]
        NAME = "cython"
    except ImportError:
        pass

conv_sum = kernels.conv_sum
fse_sum_1d = kernels.fse_sum_1d
pair_sum = kernels.pair_sum
zz_diagonal = kernels.zz_diagonal
