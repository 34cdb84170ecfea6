"""Rating prediction: mean-centred weighted deviations over a neighbour set.

predict() never uses the active user's own rating of the target item --
the pair is masked from the active mean and from every similarity -- so
calling it on a held-out rating is leave-one-out safe by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from trustrec.model import ItemId, RatingMatrix, TrustNetwork, UserId
from trustrec.neighborhood import Algorithm, trust_distances
from trustrec.similarity import SimilarityConfig, batch_weights, similarity


class FailureReason(Enum):
    NO_NEIGHBOURS = "no_neighbours"
    NO_CONTRIBUTORS = "no_contributors"
    ZERO_WEIGHT_MASS = "zero_weight_mass"
    NO_ACTIVE_MEAN = "no_active_mean"


@dataclass(frozen=True)
class PredictionOutcome:
    value: float | None
    contributor_count: int = 0
    clamped: bool = False
    failure: FailureReason | None = None

    @property
    def defined(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class PredictorConfig:
    strategy: Algorithm = Algorithm.TRADITIONAL
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    d_max: int = 1
    trust_fallback_weight: float = 1.0
    clamp_to_scale: bool = True
    global_mean_fallback: bool = True

    def __post_init__(self):
        if not 0 < self.trust_fallback_weight <= 1:
            raise ValueError("trust_fallback_weight must be in (0, 1]")
        if self.d_max < 1:
            raise ValueError("d_max must be at least 1")


@dataclass(frozen=True)
class ElasticConfig:
    budget: int
    k_min: int = 5

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if self.k_min < 1:
            raise ValueError("k_min must be at least 1")


@dataclass(frozen=True)
class ElasticResult:
    """Outcome of the budget-limited predictor plus its search diagnostics."""

    outcome: PredictionOutcome
    depth: int
    edges_visited: int


def weight_for(
    matrix: RatingMatrix,
    trust: TrustNetwork,
    a: UserId,
    u: UserId,
    config: PredictorConfig,
    exclude_item: ItemId | None = None,
) -> float | None:
    """Prediction weight for one contributor candidate.

    The configured similarity when defined; under the trust-aware and
    hybrid strategies a trusted neighbour with undefined similarity falls
    back to ``trust_fallback_weight``. Traditional CF has no fallback.
    """
    w = similarity(matrix, a, u, config.similarity, exclude_item)
    if w is not None:
        return w
    if config.strategy in (Algorithm.TRUST_AWARE, Algorithm.HYBRID) and u in trust.trustees(a):
        return config.trust_fallback_weight
    return None


def _active_mean(matrix: RatingMatrix, a_row: int, j_col: int, config: PredictorConfig) -> float | None:
    idx = matrix.index
    mean = idx.mean_of_row(a_row, exclude_col=j_col) if a_row >= 0 else None
    if mean is None and config.global_mean_fallback:
        mean = idx.global_mean(exclude_row=a_row, exclude_col=j_col)
    return mean


def _combine(
    matrix: RatingMatrix,
    a_row: int,
    j_col: int,
    rows: np.ndarray,
    item_ratings: np.ndarray,
    weights: np.ndarray,
    config: PredictorConfig,
) -> PredictionOutcome:
    """Weighted-deviation aggregation over contributors.

    Both means exclude the target item: the active user's for leave-one-out
    safety, the neighbour's because the deviation is measured against their
    taste on other items. A neighbour whose only rating is the target item
    has no such mean and is skipped.
    """
    idx = matrix.index
    defined = ~np.isnan(weights) & (idx.user_cnt[rows] > 1)
    count = int(defined.sum())
    if count == 0:
        return PredictionOutcome(None, 0, failure=FailureReason.NO_CONTRIBUTORS)
    w = weights[defined]
    weight_mass = float(np.abs(w).sum())
    if weight_mass == 0.0:
        return PredictionOutcome(None, count, failure=FailureReason.ZERO_WEIGHT_MASS)
    base = _active_mean(matrix, a_row, j_col, config)
    if base is None:
        return PredictionOutcome(None, count, failure=FailureReason.NO_ACTIVE_MEAN)
    sub = rows[defined]
    held = item_ratings[defined]
    neighbour_means = (idx.user_sum[sub] - held) / (idx.user_cnt[sub] - 1)
    value = base + float(((held - neighbour_means) * w).sum()) / weight_mass
    clamped = False
    if config.clamp_to_scale:
        bounded = matrix.scale.clamp(value)
        clamped = bounded != value
        value = bounded
    return PredictionOutcome(value, count, clamped=clamped)


def _rater_arrays(matrix: RatingMatrix, j_col: int, drop_row: int = -1):
    idx = matrix.index
    rows = idx.rater_rows(j_col)
    vals = idx.rater_vals(j_col)
    if drop_row >= 0:
        keep = rows != drop_row
        rows, vals = rows[keep], vals[keep]
    return rows, vals


def _trustee_rows(matrix: RatingMatrix, trust: TrustNetwork, a: UserId) -> np.ndarray:
    idx = matrix.index
    rows = [idx.row(t) for t in sorted(trust.trustees(a))]
    return np.array([r for r in rows if r >= 0], dtype=np.int64)


def predict(
    matrix: RatingMatrix,
    trust: TrustNetwork,
    a: UserId,
    j: ItemId,
    config: PredictorConfig = PredictorConfig(),
) -> PredictionOutcome:
    """Predict user a's rating of item j under the configured strategy."""
    if config.strategy is Algorithm.PROPAGATED:
        return predict_propagated(matrix, trust, a, j, config.d_max, config)

    idx = matrix.index
    a_row, j_col = idx.row(a), idx.col(j)
    rater_rows, rater_vals = _rater_arrays(matrix, j_col, drop_row=a_row)

    if config.strategy is Algorithm.TRADITIONAL:
        if len(rater_rows) == 0:
            return PredictionOutcome(None, 0, failure=FailureReason.NO_NEIGHBOURS)
        rows, item_ratings = rater_rows, rater_vals
        fallback_rows = None
    else:
        trustees = trust.trustees(a)
        if config.strategy is Algorithm.TRUST_AWARE:
            if not trustees:
                return PredictionOutcome(None, 0, failure=FailureReason.NO_NEIGHBOURS)
            value_of = dict(zip(rater_rows.tolist(), rater_vals.tolist()))
            t_rows = _trustee_rows(matrix, trust, a)
            keep = [r for r in t_rows.tolist() if r in value_of]
            if not keep:
                return PredictionOutcome(None, 0, failure=FailureReason.NO_CONTRIBUTORS)
            rows = np.array(keep, dtype=np.int64)
            item_ratings = np.array([value_of[r] for r in keep])
            fallback_rows = rows  # every trust-aware contributor is a trustee
        else:  # hybrid: trustees widen the neighbourhood, raters contribute
            if len(rater_rows) == 0 and not trustees:
                return PredictionOutcome(None, 0, failure=FailureReason.NO_NEIGHBOURS)
            if len(rater_rows) == 0:
                return PredictionOutcome(None, 0, failure=FailureReason.NO_CONTRIBUTORS)
            rows, item_ratings = rater_rows, rater_vals
            fallback_rows = _trustee_rows(matrix, trust, a)

    weights = batch_weights(matrix, a, rows, config.similarity, exclude_item=j)
    if fallback_rows is not None and len(fallback_rows):
        trusted = np.isin(rows, fallback_rows)
        weights[np.isnan(weights) & trusted] = config.trust_fallback_weight
    return _combine(matrix, a_row, j_col, rows, item_ratings, weights, config)


def _propagated_contributors(matrix: RatingMatrix, j_col: int, dist: dict[UserId, int], a_row: int):
    """Raters of the item within the reached distance set, with distances."""
    idx = matrix.index
    rater_rows, rater_vals = _rater_arrays(matrix, j_col, drop_row=a_row)
    rows, vals, dists = [], [], []
    ids = idx.user_ids
    for r, v in zip(rater_rows.tolist(), rater_vals.tolist()):
        d = dist.get(int(ids[r]))
        if d is not None:
            rows.append(r)
            vals.append(v)
            dists.append(d)
    return (
        np.array(rows, dtype=np.int64),
        np.array(vals),
        np.array(dists, dtype=np.int64),
    )


def predict_propagated(
    matrix: RatingMatrix,
    trust: TrustNetwork,
    a: UserId,
    j: ItemId,
    d_max: int,
    config: PredictorConfig = PredictorConfig(),
) -> PredictionOutcome:
    """Propagated-trust baseline: weight = (d_max - d + 1) / d_max.

    Contributors are raters of j within trust distance d_max; the weight
    decays linearly from 1 at distance 1 down to 1/d_max at d_max.
    """
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    dist = trust_distances(trust, a, d_max)
    if not dist:
        return PredictionOutcome(None, 0, failure=FailureReason.NO_NEIGHBOURS)
    idx = matrix.index
    rows, vals, dists = _propagated_contributors(matrix, idx.col(j), dist, idx.row(a))
    if len(rows) == 0:
        return PredictionOutcome(None, 0, failure=FailureReason.NO_CONTRIBUTORS)
    weights = (d_max - dists + 1) / d_max
    return _combine(matrix, idx.row(a), idx.col(j), rows, vals, weights.astype(np.float64), config)


def predict_elastic(
    matrix: RatingMatrix,
    trust: TrustNetwork,
    a: UserId,
    j: ItemId,
    elastic: ElasticConfig,
    config: PredictorConfig = PredictorConfig(),
) -> ElasticResult:
    """Budget-limited propagated prediction.

    Starts at depth 1 and deepens while the contributor count is below
    ``k_min``; each extra breadth-first level is charged its edge visits
    against ``budget`` before it is expanded, so the total never exceeds
    budget + out-degree(a). Returns the last outcome and the depth used.
    """
    idx = matrix.index
    a_row, j_col = idx.row(a), idx.col(j)

    seen = {a}
    dist: dict[UserId, int] = {}
    frontier = [a]
    depth = 0
    edges_visited = 0
    budget_spent = 0
    outcome = PredictionOutcome(None, 0, failure=FailureReason.NO_NEIGHBOURS)

    def expand(level: int, nodes: list[UserId]) -> list[UserId]:
        nxt = []
        for u in nodes:
            for v in trust.trustees(u):
                if v not in seen:
                    seen.add(v)
                    dist[v] = level
                    nxt.append(v)
        return nxt

    def outcome_at(level: int) -> PredictionOutcome:
        rows, vals, dists = _propagated_contributors(matrix, j_col, dist, a_row)
        if len(rows) == 0:
            failure = FailureReason.NO_CONTRIBUTORS if dist else FailureReason.NO_NEIGHBOURS
            return PredictionOutcome(None, 0, failure=failure)
        weights = (level - dists + 1) / level
        return _combine(matrix, a_row, j_col, rows, vals, weights.astype(np.float64), config)

    while True:
        level_cost = sum(len(trust.trustees(u)) for u in frontier)
        if depth > 0:
            # the depth-1 sweep is the baseline; only deeper levels are billed
            if level_cost == 0 or budget_spent + level_cost > elastic.budget:
                break
            budget_spent += level_cost
        edges_visited += level_cost
        frontier = expand(depth + 1, frontier)
        depth += 1
        outcome = outcome_at(depth)
        if outcome.contributor_count >= elastic.k_min:
            break
        if not frontier:
            break
    return ElasticResult(outcome=outcome, depth=depth, edges_visited=edges_visited)
