"""Neighbour-set construction: the four strategies feeding the predictor.

A neighbourhood is the raw candidate set; users that actually hold a
rating for the target item (and therefore can enter the prediction
formula) are obtained separately via contributors().
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from trustrec.model import ItemId, RatingMatrix, TrustNetwork, UserId, raters_of


class Algorithm(Enum):
    TRADITIONAL = "traditional"
    TRUST_AWARE = "trust"
    HYBRID = "hybrid"
    PROPAGATED = "propagated"


@dataclass(frozen=True)
class Neighbourhood:
    """Candidate users for one prediction; the active user is never a member.

    ``distances`` carries minimum trust distances and is populated only by
    the propagated-trust strategy.
    """

    members: frozenset[UserId]
    distances: Mapping[UserId, int] | None = None


def traditional_neighbors(matrix: RatingMatrix, a: UserId, j: ItemId) -> Neighbourhood:
    """Users who rated the target item, the active user excluded."""
    return Neighbourhood(members=raters_of(matrix, j) - {a})


def trust_aware_neighbors(trust: TrustNetwork, a: UserId, j: ItemId | None = None) -> Neighbourhood:
    """The active user's direct trustees, regardless of the item.

    Pruning to users that rated j happens in contributors(); the raw set
    is exposed because trusted non-raters are still neighbours by this
    strategy's definition.
    """
    return Neighbourhood(members=trust.trustees(a))


def hybrid_neighbors(matrix: RatingMatrix, trust: TrustNetwork, a: UserId, j: ItemId) -> Neighbourhood:
    """Union of item raters and direct trustees."""
    return Neighbourhood(members=(raters_of(matrix, j) | trust.trustees(a)) - {a})


def trust_distances(trust: TrustNetwork, a: UserId, d_max: int) -> dict[UserId, int]:
    """Minimum trust distance (1..d_max) from ``a``, by breadth-first search."""
    seen = {a}
    frontier = [a]
    dist: dict[UserId, int] = {}
    for d in range(1, d_max + 1):
        nxt = []
        for u in frontier:
            for v in trust.trustees(u):
                if v not in seen:
                    seen.add(v)
                    dist[v] = d
                    nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return dist


def propagated_neighbors(
    matrix: RatingMatrix, trust: TrustNetwork, a: UserId, j: ItemId, d_max: int
) -> Neighbourhood:
    """Raters of j within trust distance d_max of ``a``, with their distances."""
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    dist = trust_distances(trust, a, d_max)
    raters = raters_of(matrix, j)
    members = frozenset(u for u in dist if u in raters)
    return Neighbourhood(members=members, distances={u: dist[u] for u in members})


def contributors(matrix: RatingMatrix, neighbourhood: Neighbourhood, j: ItemId) -> frozenset[UserId]:
    """Members of the neighbourhood holding a rating for j."""
    return neighbourhood.members & raters_of(matrix, j)
