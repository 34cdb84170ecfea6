"""Pure NumPy weight kernel; fallback when the compiled extension is absent.

Same contract as the Cython version: given one active user's CSR row and
a batch of candidate rows, return the configured similarity per candidate,
NaN where the weight is undefined.
"""

from __future__ import annotations

import math

import numpy as np

PEARSON = 1
COSINE = 2
IUF_PEARSON = 3

BACKEND_NAME = "python"

# a variance this small relative to its uncentred magnitude is rounding
# noise from the sum formula, not signal: treat the weight as undefined
_DEGENERATE = 1e-12


def pair_weights(
    indptr,
    cols,
    vals,
    n_cols,
    a_row,
    cand_rows,
    exclude_col=-1,
    measure=PEARSON,
    min_overlap=2,
    iuf=None,
):
    """Similarity of ``a_row`` against each of ``cand_rows``.

    ``exclude_col`` masks one item from every co-rated set (leave-one-out);
    pass -1 to disable. Returns float64 with NaN for undefined weights.
    """
    out = np.full(len(cand_rows), np.nan)
    if a_row < 0:
        return out
    if measure == IUF_PEARSON and iuf is None:
        raise ValueError("iuf factors required for the inverse-user-frequency measure")
    alo, ahi = indptr[a_row], indptr[a_row + 1]
    a_cols = cols[alo:ahi]
    if len(a_cols) == 0:
        return out

    # dense lookup for the active user's row; candidates index into it
    a_dense = np.zeros(n_cols)
    a_mask = np.zeros(n_cols, dtype=bool)
    a_dense[a_cols] = vals[alo:ahi]
    a_mask[a_cols] = True
    if 0 <= exclude_col < n_cols:
        a_mask[exclude_col] = False

    for k in range(len(cand_rows)):
        u = cand_rows[k]
        ulo, uhi = indptr[u], indptr[u + 1]
        uc = cols[ulo:uhi]
        sel = a_mask[uc]
        n = int(sel.sum())
        if n < min_overlap or n == 0:
            continue
        shared = uc[sel]
        x = a_dense[shared]
        y = vals[ulo:uhi][sel]
        if measure == PEARSON:
            sx, sy = x.sum(), y.sum()
            sxx, syy, sxy = x @ x, y @ y, x @ y
            num = n * sxy - sx * sy
            dx = n * sxx - sx * sx
            dy = n * syy - sy * sy
            if dx <= _DEGENERATE * n * sxx or dy <= _DEGENERATE * n * syy:
                continue
            w = num / math.sqrt(dx * dy)
        elif measure == COSINE:
            sxx, syy, sxy = x @ x, y @ y, x @ y
            if sxx <= 0 or syy <= 0:
                continue
            w = sxy / math.sqrt(sxx * syy)
        else:
            f = iuf[shared]
            fw = f.sum()
            if not fw > 0:
                continue
            sx, sy = f @ x, f @ y
            sxx, syy, sxy = f @ (x * x), f @ (y * y), f @ (x * y)
            num = fw * sxy - sx * sy
            dx = fw * sxx - sx * sx
            dy = fw * syy - sy * sy
            if dx <= _DEGENERATE * fw * sxx or dy <= _DEGENERATE * fw * syy:
                continue
            w = num / math.sqrt(dx * dy)
        out[k] = min(1.0, max(-1.0, w))
    return out
