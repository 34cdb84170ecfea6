"""Hot-loop kernels with backend selection at import.

The compiled Cython module is preferred; the pure NumPy fallback is used
when it is missing or when TRUSTREC_PURE_PYTHON=1 forces it (handy for
benchmarking the two side by side).
"""

import os

from trustrec.kernels._pykernels import COSINE, IUF_PEARSON, PEARSON

if os.environ.get("TRUSTREC_PURE_PYTHON") == "1":
    from trustrec.kernels._pykernels import BACKEND_NAME, pair_weights
else:
    try:
        from trustrec.kernels._ckernels import BACKEND_NAME, pair_weights
    except ImportError:
        from trustrec.kernels._pykernels import BACKEND_NAME, pair_weights

__all__ = ["pair_weights", "BACKEND_NAME", "PEARSON", "COSINE", "IUF_PEARSON"]
