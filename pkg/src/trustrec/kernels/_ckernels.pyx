# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled weight kernel: merge-based co-rated scan per candidate pair."""

from libc.math cimport sqrt

import numpy as np

PEARSON = 1
COSINE = 2
IUF_PEARSON = 3

BACKEND_NAME = "cython"

_EMPTY = np.empty(0, dtype=np.float64)

# a variance this small relative to its uncentred magnitude is rounding
# noise from the sum formula, not signal: treat the weight as undefined
cdef double _DEGENERATE = 1e-12


def pair_weights(
    long long[::1] indptr,
    int[::1] cols,
    double[::1] vals,
    Py_ssize_t n_cols,
    Py_ssize_t a_row,
    long long[::1] cand_rows,
    long long exclude_col=-1,
    int measure=PEARSON,
    long long min_overlap=2,
    iuf=None,
):
    """Similarity of ``a_row`` against each of ``cand_rows`` (NaN = undefined)."""
    cdef Py_ssize_t nc = cand_rows.shape[0]
    out_arr = np.full(nc, np.nan)
    cdef double[::1] out = out_arr
    if a_row < 0:
        return out_arr
    if measure == 3 and iuf is None:
        raise ValueError("iuf factors required for the inverse-user-frequency measure")
    cdef double[::1] fweights = _EMPTY
    if measure == 3:
        fweights = iuf
    cdef long long alo = indptr[a_row]
    cdef long long ahi = indptr[a_row + 1]
    if ahi == alo:
        return out_arr

    cdef Py_ssize_t k
    cdef long long u, i, j, ulo, uhi, n
    cdef double x, y, f, fw, sx, sy, sxx, syy, sxy, num, dx, dy, w
    with nogil:
        for k in range(nc):
            u = cand_rows[k]
            ulo = indptr[u]
            uhi = indptr[u + 1]
            i = alo
            j = ulo
            n = 0
            fw = 0.0
            sx = 0.0
            sy = 0.0
            sxx = 0.0
            syy = 0.0
            sxy = 0.0
            while i < ahi and j < uhi:
                if cols[i] < cols[j]:
                    i += 1
                elif cols[i] > cols[j]:
                    j += 1
                else:
                    if cols[i] != exclude_col:
                        x = vals[i]
                        y = vals[j]
                        n += 1
                        if measure == 3:
                            f = fweights[cols[i]]
                            fw += f
                            sx += f * x
                            sy += f * y
                            sxx += f * (x * x)
                            syy += f * (y * y)
                            sxy += f * (x * y)
                        else:
                            sx += x
                            sy += y
                            sxx += x * x
                            syy += y * y
                            sxy += x * y
                    i += 1
                    j += 1
            if n < min_overlap or n == 0:
                continue
            if measure == 2:
                if sxx <= 0 or syy <= 0:
                    continue
                w = sxy / sqrt(sxx * syy)
            else:
                if measure == 3:
                    if not fw > 0:
                        continue
                    num = fw * sxy - sx * sy
                    dx = fw * sxx - sx * sx
                    dy = fw * syy - sy * sy
                    if dx <= _DEGENERATE * fw * sxx or dy <= _DEGENERATE * fw * syy:
                        continue
                else:
                    num = n * sxy - sx * sy
                    dx = n * sxx - sx * sx
                    dy = n * syy - sy * sy
                    if dx <= _DEGENERATE * n * sxx or dy <= _DEGENERATE * n * syy:
                        continue
                w = num / sqrt(dx * dy)
            if w > 1.0:
                w = 1.0
            elif w < -1.0:
                w = -1.0
            out[k] = w
    return out_arr
