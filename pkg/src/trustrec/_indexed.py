"""Compact array view of a rating matrix for the prediction kernels.

Rows are users, columns are items, both remapped to dense indices in
sorted-id order so traversal order (and therefore floating-point
accumulation order) is reproducible.
"""

from __future__ import annotations

import math

import numpy as np


class IndexedRatings:
    """CSR (by user) plus CSC (by item) arrays with per-user totals."""

    def __init__(self, user_ids, item_ids, indptr, cols, vals):
        self.user_ids = user_ids  # int64, sorted
        self.item_ids = item_ids  # int64, sorted
        self.row_of = {int(u): i for i, u in enumerate(user_ids)}
        self.col_of = {int(j): i for i, j in enumerate(item_ids)}
        self.indptr = indptr  # int64, len M+1
        self.cols = cols  # int32, column index per entry, sorted within row
        self.vals = vals  # float64

        m, nnz = len(user_ids), len(vals)
        counts = np.diff(indptr)
        self.user_cnt = counts.astype(np.int64)
        self.user_sum = np.zeros(m)
        np.add.at(self.user_sum, np.repeat(np.arange(m), counts), vals)
        self.total_sum = float(vals.sum())
        self.total_cnt = nnz

        # CSC: entries regrouped by column, rows sorted within each column
        order = np.lexsort((np.repeat(np.arange(m), counts), cols))
        self.col_rows = np.repeat(np.arange(m, dtype=np.int64), counts)[order]
        self.col_vals = vals[order]
        self.col_indptr = np.zeros(len(item_ids) + 1, dtype=np.int64)
        np.add.at(self.col_indptr, cols + 1, 1)
        np.cumsum(self.col_indptr, out=self.col_indptr)

        self._iuf = None

    @classmethod
    def build(cls, ratings, users, items):
        user_ids = np.array(sorted(users), dtype=np.int64)
        item_ids = np.array(sorted(items), dtype=np.int64)
        col_of = {int(j): i for i, j in enumerate(item_ids)}
        indptr = np.zeros(len(user_ids) + 1, dtype=np.int64)
        cols, vals = [], []
        for i, u in enumerate(user_ids):
            row = ratings.get(int(u), {})
            for j in sorted(row):
                cols.append(col_of[j])
                vals.append(row[j])
            indptr[i + 1] = indptr[i] + len(row)
        return cls(
            user_ids,
            item_ids,
            indptr,
            np.array(cols, dtype=np.int32),
            np.array(vals, dtype=np.float64),
        )

    @property
    def n_users(self) -> int:
        return len(self.user_ids)

    @property
    def n_items(self) -> int:
        return len(self.item_ids)

    def row(self, user: int) -> int:
        return self.row_of.get(user, -1)

    def col(self, item: int) -> int:
        return self.col_of.get(item, -1)

    def rater_rows(self, col: int) -> np.ndarray:
        if col < 0:
            return np.empty(0, dtype=np.int64)
        return self.col_rows[self.col_indptr[col] : self.col_indptr[col + 1]]

    def rater_vals(self, col: int) -> np.ndarray:
        if col < 0:
            return np.empty(0)
        return self.col_vals[self.col_indptr[col] : self.col_indptr[col + 1]]

    def rater_ids(self, item: int) -> frozenset[int]:
        rows = self.rater_rows(self.col(item))
        return frozenset(int(self.user_ids[r]) for r in rows)

    def value_at(self, row: int, col: int) -> float | None:
        lo, hi = self.indptr[row], self.indptr[row + 1]
        pos = lo + np.searchsorted(self.cols[lo:hi], col)
        if pos < hi and self.cols[pos] == col:
            return float(self.vals[pos])
        return None

    def mean_of_row(self, row: int, exclude_col: int = -1) -> float | None:
        """Mean rating of a row; subtracts the excluded entry when present."""
        s, n = self.user_sum[row], int(self.user_cnt[row])
        if exclude_col >= 0:
            v = self.value_at(row, exclude_col)
            if v is not None:
                s, n = s - v, n - 1
        if n == 0:
            return None
        return s / n

    def global_mean(self, exclude_row: int = -1, exclude_col: int = -1) -> float | None:
        s, n = self.total_sum, self.total_cnt
        if exclude_row >= 0 and exclude_col >= 0:
            v = self.value_at(exclude_row, exclude_col)
            if v is not None:
                s, n = s - v, n - 1
        if n == 0:
            return None
        return s / n

    @property
    def iuf(self) -> np.ndarray:
        """ln(m / m_j) per column; m counts users with at least one rating."""
        if self._iuf is None:
            m_active = int((self.user_cnt > 0).sum())
            m_j = np.diff(self.col_indptr).astype(np.float64)
            with np.errstate(divide="ignore", invalid="ignore"):
                self._iuf = np.where(m_j > 0, np.log(m_active / m_j), math.nan)
        return self._iuf
