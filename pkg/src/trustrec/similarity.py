"""User-user weight computation: Pearson correlation, vector (cosine)
similarity, inverse-user-frequency weighting and case amplification.

All weights are computed over co-rated items only; an undefined weight is
returned as None, never as zero, so it cannot silently dilute the
prediction formula's denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from trustrec import kernels
from trustrec.model import ItemId, RatingMatrix, UserId


class Measure(Enum):
    CORRELATION = "pearson"
    VECTOR_SIMILARITY = "cosine"
    INVERSE_USER_FREQUENCY = "iuf"


_MEASURE_CODE = {
    Measure.CORRELATION: kernels.PEARSON,
    Measure.VECTOR_SIMILARITY: kernels.COSINE,
    Measure.INVERSE_USER_FREQUENCY: kernels.IUF_PEARSON,
}

DEFAULT_RHO = 2.5


@dataclass(frozen=True)
class SimilarityConfig:
    """Base measure, optional case-amplification exponent, minimum overlap."""

    measure: Measure = Measure.CORRELATION
    amplification_rho: float | None = None
    min_overlap: int = 2

    def __post_init__(self):
        if self.min_overlap < 2:
            raise ValueError("min_overlap must be at least 2")
        if self.amplification_rho is not None and not self.amplification_rho > 1:
            raise ValueError("amplification_rho must be greater than 1")


def _pair(matrix: RatingMatrix, a: UserId, u: UserId, measure: int,
          min_overlap: int, exclude_item: ItemId | None) -> float | None:
    if a == u:
        raise ValueError("similarity is defined between distinct users")
    idx = matrix.index
    a_row, u_row = idx.row(a), idx.row(u)
    if a_row < 0 or u_row < 0:
        return None
    exclude_col = idx.col(exclude_item) if exclude_item is not None else -1
    w = kernels.pair_weights(
        idx.indptr,
        idx.cols,
        idx.vals,
        idx.n_items,
        a_row,
        np.array([u_row], dtype=np.int64),
        exclude_col,
        measure,
        min_overlap,
        idx.iuf if measure == kernels.IUF_PEARSON else None,
    )[0]
    return None if math.isnan(w) else float(w)


def pearson(matrix: RatingMatrix, a: UserId, u: UserId, min_overlap: int = 2,
            exclude_item: ItemId | None = None) -> float | None:
    """Pearson correlation over co-rated items, means taken over that set.

    None when the overlap is below ``min_overlap`` or either user's
    co-rated ratings have zero variance.
    """
    return _pair(matrix, a, u, kernels.PEARSON, min_overlap, exclude_item)


def cosine(matrix: RatingMatrix, a: UserId, u: UserId, min_overlap: int = 2,
           exclude_item: ItemId | None = None) -> float | None:
    """Cosine of the two co-rated rating vectors."""
    return _pair(matrix, a, u, kernels.COSINE, min_overlap, exclude_item)


def iuf_factor(matrix: RatingMatrix, item: ItemId) -> float:
    """ln(m / m_j): down-weights universally rated items.

    m counts users with at least one rating, m_j the item's raters.
    Raises for an item nobody rated (the factor is undefined).
    """
    idx = matrix.index
    col = idx.col(item)
    if col < 0:
        raise ValueError(f"undefined factor: item {item} has no raters")
    f = idx.iuf[col]
    if math.isnan(f):
        raise ValueError(f"undefined factor: item {item} has no raters")
    return float(f)


def iuf_pearson(matrix: RatingMatrix, a: UserId, u: UserId, min_overlap: int = 2,
                exclude_item: ItemId | None = None) -> float | None:
    """Pearson with co-rated items weighted by their inverse-user-frequency."""
    return _pair(matrix, a, u, kernels.IUF_PEARSON, min_overlap, exclude_item)


def case_amplify(w: float, rho: float) -> float:
    """sign(w) * |w|**rho; emphasizes strong weights, preserves sign."""
    if not rho > 1:
        raise ValueError("rho must be greater than 1")
    return math.copysign(abs(w) ** rho, w)


def similarity(matrix: RatingMatrix, a: UserId, u: UserId,
               config: SimilarityConfig = SimilarityConfig(),
               exclude_item: ItemId | None = None) -> float | None:
    """Configured weight between two users; absence propagates."""
    w = _pair(matrix, a, u, _MEASURE_CODE[config.measure], config.min_overlap, exclude_item)
    if w is None or config.amplification_rho is None:
        return w
    return case_amplify(w, config.amplification_rho)


def batch_weights(matrix: RatingMatrix, a: UserId, cand_rows: np.ndarray,
                  config: SimilarityConfig, exclude_item: ItemId | None = None) -> np.ndarray:
    """Configured weights of ``a`` against candidate row indices (NaN = undefined).

    Internal fast path for the predictor; candidates are CSR row indices,
    not user ids.
    """
    idx = matrix.index
    a_row = idx.row(a)
    measure = _MEASURE_CODE[config.measure]
    exclude_col = idx.col(exclude_item) if exclude_item is not None else -1
    w = kernels.pair_weights(
        idx.indptr,
        idx.cols,
        idx.vals,
        idx.n_items,
        a_row,
        np.ascontiguousarray(cand_rows, dtype=np.int64),
        exclude_col,
        measure,
        config.min_overlap,
        idx.iuf if measure == kernels.IUF_PEARSON else None,
    )
    if config.amplification_rho is not None:
        defined = ~np.isnan(w)
        w[defined] = np.copysign(np.abs(w[defined]) ** config.amplification_rho, w[defined])
    return w
