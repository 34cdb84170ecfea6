"""Sparse rating storage, trust graph and per-user statistics.

RatingMatrix and TrustNetwork are immutable after construction; every
other module reads them concurrently without locking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping

from trustrec._indexed import IndexedRatings

UserId = int
ItemId = int


@dataclass(frozen=True)
class RatingScale:
    """Closed rating interval; every stored rating lies in [min, max]."""

    min: float = 1.0
    max: float = 5.0

    def __post_init__(self):
        if not self.min < self.max:
            raise ValueError(f"rating scale needs min < max, got [{self.min}, {self.max}]")

    def clamp(self, value: float) -> float:
        return min(self.max, max(self.min, value))

    def contains(self, value: float) -> bool:
        return self.min <= value <= self.max


class ColdStartClass(Enum):
    NO_RATING = "no_rating"
    FEW_RATING = "few_rating"
    REGULAR = "regular"


# FEW_RATING covers 1-5 ratings; 6 and above is REGULAR.
FEW_RATING_MAX = 5


class RatingMatrix:
    """User -> (item -> rating) store.

    ``users`` may be wider than the set of raters: ids that only appear in
    a trust network (or are registered explicitly) are legal zero-rating
    users. Construction validates scale bounds; afterwards the object is
    read-only by convention.
    """

    def __init__(
        self,
        entries: Mapping[UserId, Mapping[ItemId, float]],
        scale: RatingScale = RatingScale(),
        extra_users: Iterable[UserId] = (),
        extra_items: Iterable[ItemId] = (),
    ):
        ratings: dict[UserId, dict[ItemId, float]] = {}
        items: set[ItemId] = set(extra_items)
        count = 0
        for user, row in entries.items():
            if not row:
                continue
            clean = {}
            for item, value in row.items():
                value = float(value)
                if not scale.contains(value):
                    raise ValueError(
                        f"rating {value} for ({user}, {item}) outside scale [{scale.min}, {scale.max}]"
                    )
                clean[int(item)] = value
            ratings[int(user)] = clean
            items.update(clean)
            count += len(clean)
        self._ratings = ratings
        self.scale = scale
        self.users = frozenset(ratings) | frozenset(int(u) for u in extra_users)
        self.items = frozenset(items)
        self.rating_count = count

    @property
    def user_count(self) -> int:
        return len(self.users)

    @property
    def item_count(self) -> int:
        return len(self.items)

    def ratings_of(self, user: UserId) -> Mapping[ItemId, float]:
        return self._ratings.get(user, {})

    def rating(self, user: UserId, item: ItemId) -> float | None:
        return self._ratings.get(user, {}).get(item)

    def iter_ratings(self):
        for user in self._ratings:
            for item, value in self._ratings[user].items():
                yield user, item, value

    @cached_property
    def index(self) -> IndexedRatings:
        """CSR/CSC view used by the prediction kernels (built once, lazily)."""
        return IndexedRatings.build(self._ratings, self.users, self.items)

    def __eq__(self, other):
        if not isinstance(other, RatingMatrix):
            return NotImplemented
        return (
            self._ratings == other._ratings
            and self.scale == other.scale
            and self.users == other.users
            and self.items == other.items
        )

    def __repr__(self):
        return (
            f"RatingMatrix(users={self.user_count}, items={self.item_count}, "
            f"ratings={self.rating_count})"
        )


class TrustNetwork:
    """Directed trust statements, truster -> set of trustees (binary trust)."""

    def __init__(self, edges: Mapping[UserId, Iterable[UserId]] = ()):
        adj: dict[UserId, frozenset[UserId]] = {}
        count = 0
        for truster, trustees in dict(edges).items():
            truster = int(truster)
            clean = frozenset(int(t) for t in trustees) - {truster}
            if clean:
                adj[truster] = clean
                count += len(clean)
        self._edges = adj
        self.statement_count = count
        users = set(adj)
        for trustees in adj.values():
            users.update(trustees)
        self.users = frozenset(users)

    def trustees(self, user: UserId) -> frozenset[UserId]:
        return self._edges.get(user, frozenset())

    def iter_edges(self):
        for truster, trustees in self._edges.items():
            for trustee in trustees:
                yield truster, trustee

    def __eq__(self, other):
        if not isinstance(other, TrustNetwork):
            return NotImplemented
        return self._edges == other._edges

    def __repr__(self):
        return f"TrustNetwork(users={len(self.users)}, statements={self.statement_count})"


EMPTY_TRUST = TrustNetwork()


@dataclass(frozen=True)
class DatasetStats:
    users: int
    items: int
    ratings: int
    sparsity: float | None
    avg_ratings_per_user: float | None
    trust_statements: int
    avg_trustees_per_user: float | None


def mean_rating(matrix: RatingMatrix, user: UserId, exclude: ItemId | None = None) -> float | None:
    """Arithmetic mean of a user's ratings, optionally skipping one item.

    Returns None when the user has no (remaining) ratings; absence is a
    value here, not an error.
    """
    row = matrix.ratings_of(user)
    if exclude is not None and exclude in row:
        total = sum(v for i, v in row.items() if i != exclude)
        n = len(row) - 1
    else:
        total = sum(row.values())
        n = len(row)
    if n == 0:
        return None
    return total / n


def classify_user(matrix: RatingMatrix, user: UserId) -> ColdStartClass:
    n = len(matrix.ratings_of(user))
    if n == 0:
        return ColdStartClass.NO_RATING
    if n <= FEW_RATING_MAX:
        return ColdStartClass.FEW_RATING
    return ColdStartClass.REGULAR


def raters_of(matrix: RatingMatrix, item: ItemId) -> frozenset[UserId]:
    """Users holding a rating for the item."""
    idx = matrix.index
    return idx.rater_ids(item)


def common_items(matrix: RatingMatrix, a: UserId, u: UserId) -> frozenset[ItemId]:
    ra, ru = matrix.ratings_of(a), matrix.ratings_of(u)
    if len(ra) > len(ru):
        ra, ru = ru, ra
    return frozenset(i for i in ra if i in ru)


def stats_from_counts(
    users: int, items: int, ratings: int, trust_statements: int = 0
) -> DatasetStats:
    """Table-style statistics from raw counts (the formula layer)."""
    if users > 0 and items > 0:
        sparsity = 1.0 - ratings / (users * items)
    else:
        sparsity = None
    avg_ratings = ratings / users if users > 0 else None
    avg_trustees = trust_statements / users if users > 0 else None
    return DatasetStats(
        users=users,
        items=items,
        ratings=ratings,
        sparsity=sparsity,
        avg_ratings_per_user=avg_ratings,
        trust_statements=trust_statements,
        avg_trustees_per_user=avg_trustees,
    )


def dataset_stats(matrix: RatingMatrix, trust: TrustNetwork = EMPTY_TRUST) -> DatasetStats:
    """Statistics over the combined user universe (raters plus trust-only users)."""
    universe = matrix.users | trust.users
    return stats_from_counts(
        users=len(universe),
        items=matrix.item_count,
        ratings=matrix.rating_count,
        trust_statements=trust.statement_count,
    )


def coldstart_shares(
    matrix: RatingMatrix, trust: TrustNetwork = EMPTY_TRUST
) -> dict[ColdStartClass, float]:
    """Fraction of the user universe in each cold-start class."""
    universe = matrix.users | trust.users
    counts = {cls: 0 for cls in ColdStartClass}
    for user in universe:
        counts[classify_user(matrix, user)] += 1
    m = len(universe)
    if m == 0:
        return {cls: math.nan for cls in ColdStartClass}
    return {cls: counts[cls] / m for cls in ColdStartClass}
