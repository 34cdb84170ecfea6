"""Leave-one-out evaluation: error metrics, rating coverage, cold-start
segment breakdowns and paired significance testing.

Every rating of every sampled user is withheld and re-predicted; predict()
masks the held-out pair internally, so the protocol needs no matrix
copies and stays deterministic for a given seed.
"""

from __future__ import annotations

import dataclasses
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.special import stdtr

from trustrec.model import ColdStartClass, RatingMatrix, TrustNetwork, UserId, classify_user
from trustrec.predictor import PredictorConfig, predict


class UserErrors(NamedTuple):
    mae: float
    rmse: float
    count: int


@dataclass(frozen=True)
class MetricsSummary:
    attempted: int
    predicted: int
    coverage: float | None
    mae: float | None
    rmse: float | None
    maue: float | None
    rmsue: float | None


@dataclass(frozen=True)
class EvalConfig:
    predictor: PredictorConfig = field(default_factory=PredictorConfig)
    user_sample_size: int | None = None
    rng_seed: int = 42
    segment: frozenset[ColdStartClass] | None = None

    def __post_init__(self):
        if isinstance(self.segment, ColdStartClass):
            object.__setattr__(self, "segment", frozenset({self.segment}))
        elif self.segment is not None:
            object.__setattr__(self, "segment", frozenset(self.segment))


@dataclass(frozen=True)
class EvalReport:
    attempted: int
    predicted: int
    coverage: float | None
    mae: float | None
    rmse: float | None
    maue: float | None
    rmsue: float | None
    per_user_errors: Mapping[UserId, UserErrors]
    per_user_attempted: Mapping[UserId, int]
    segment_reports: Mapping[ColdStartClass, MetricsSummary]

    def summary(self) -> MetricsSummary:
        return MetricsSummary(
            self.attempted, self.predicted, self.coverage,
            self.mae, self.rmse, self.maue, self.rmsue,
        )


@dataclass(frozen=True)
class SignificanceResult:
    t_statistic: float
    degrees_of_freedom: int
    p_value: float


def compute_metrics(
    residuals: Sequence[tuple[UserId, float]],
) -> tuple[float | None, float | None, float | None, float | None]:
    """(mae, rmse, maue, rmsue) of signed residuals; all None when empty.

    mae/rmse pool every residual; maue/rmsue first aggregate per user and
    then average over users, so sparse raters weigh as much as heavy ones.
    """
    if not residuals:
        return None, None, None, None
    errors = np.array([e for _, e in residuals])
    mae = float(np.abs(errors).mean())
    rmse = float(math.sqrt((errors**2).mean()))
    by_user: dict[UserId, list[float]] = {}
    for user, e in residuals:
        by_user.setdefault(user, []).append(e)
    user_maes, user_rmses = [], []
    for user in sorted(by_user):
        es = np.array(by_user[user])
        user_maes.append(float(np.abs(es).mean()))
        user_rmses.append(float(math.sqrt((es**2).mean())))
    return mae, rmse, float(np.mean(user_maes)), float(np.mean(user_rmses))


def coverage(report: EvalReport) -> float | None:
    """Fraction of attempted predictions that produced a value."""
    if report.attempted == 0:
        return None
    return report.predicted / report.attempted


def _summary(attempted: int, residuals: Sequence[tuple[UserId, float]]) -> MetricsSummary:
    mae, rmse, maue, rmsue = compute_metrics(residuals)
    predicted = len(residuals)
    cov = predicted / attempted if attempted else None
    return MetricsSummary(attempted, predicted, cov, mae, rmse, maue, rmsue)


def segment_by_coldstart(matrix: RatingMatrix, report: EvalReport) -> dict[ColdStartClass, MetricsSummary]:
    """Per-class sub-reports, classifying users on their full profiles."""
    attempted = {cls: 0 for cls in ColdStartClass}
    abs_sum = {cls: 0.0 for cls in ColdStartClass}
    sq_sum = {cls: 0.0 for cls in ColdStartClass}
    predicted = {cls: 0 for cls in ColdStartClass}
    maes = {cls: [] for cls in ColdStartClass}
    rmses = {cls: [] for cls in ColdStartClass}
    for user, n in report.per_user_attempted.items():
        attempted[classify_user(matrix, user)] += n
    for user in sorted(report.per_user_errors):
        stats = report.per_user_errors[user]
        cls = classify_user(matrix, user)
        predicted[cls] += stats.count
        abs_sum[cls] += stats.mae * stats.count
        sq_sum[cls] += stats.rmse**2 * stats.count
        maes[cls].append(stats.mae)
        rmses[cls].append(stats.rmse)
    out = {}
    for cls in ColdStartClass:
        n_pred = predicted[cls]
        out[cls] = MetricsSummary(
            attempted=attempted[cls],
            predicted=n_pred,
            coverage=n_pred / attempted[cls] if attempted[cls] else None,
            mae=abs_sum[cls] / n_pred if n_pred else None,
            rmse=math.sqrt(sq_sum[cls] / n_pred) if n_pred else None,
            maue=float(np.mean(maes[cls])) if maes[cls] else None,
            rmsue=float(np.mean(rmses[cls])) if rmses[cls] else None,
        )
    return out


def _evaluate_user(matrix, trust, config: PredictorConfig, user: UserId):
    items = sorted(matrix.ratings_of(user))
    residuals = []
    for item in items:
        outcome = predict(matrix, trust, user, item, config)
        if outcome.value is not None:
            residuals.append((item, outcome.value - matrix.rating(user, item)))
    return len(items), residuals


def leave_one_out(
    matrix: RatingMatrix,
    trust: TrustNetwork,
    config: EvalConfig,
    threads: int = 1,
) -> EvalReport:
    """Withhold-and-predict every rating of the sampled users.

    Sampling is uniform without replacement over users with at least one
    rating (after the optional cold-start segment filter), seeded by
    ``config.rng_seed``. The report is identical for identical inputs
    regardless of ``threads``.
    """
    eligible = sorted(u for u in matrix.users if len(matrix.ratings_of(u)) > 0)
    if config.segment is not None:
        eligible = [u for u in eligible if classify_user(matrix, u) in config.segment]
    if config.user_sample_size is not None:
        if config.user_sample_size > len(eligible):
            raise ValueError(
                f"sample size {config.user_sample_size} exceeds the "
                f"{len(eligible)} eligible users"
            )
        rng = random.Random(config.rng_seed)
        users = sorted(rng.sample(eligible, config.user_sample_size))
    else:
        users = eligible

    matrix.index  # build the shared view once, before any worker threads

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda u: _evaluate_user(matrix, trust, config.predictor, u), users))
    else:
        results = [_evaluate_user(matrix, trust, config.predictor, u) for u in users]

    per_user_attempted: dict[UserId, int] = {}
    per_user_errors: dict[UserId, UserErrors] = {}
    residuals: list[tuple[UserId, float]] = []
    for user, (n_items, user_res) in zip(users, results):
        per_user_attempted[user] = n_items
        for _, e in user_res:
            residuals.append((user, e))
        if user_res:
            es = np.array([e for _, e in user_res])
            per_user_errors[user] = UserErrors(
                mae=float(np.abs(es).mean()),
                rmse=float(math.sqrt((es**2).mean())),
                count=len(user_res),
            )

    attempted = sum(per_user_attempted.values())
    mae, rmse, maue, rmsue = compute_metrics(residuals)
    report = EvalReport(
        attempted=attempted,
        predicted=len(residuals),
        coverage=len(residuals) / attempted if attempted else None,
        mae=mae,
        rmse=rmse,
        maue=maue,
        rmsue=rmsue,
        per_user_errors=per_user_errors,
        per_user_attempted=per_user_attempted,
        segment_reports={},
    )
    return dataclasses.replace(report, segment_reports=segment_by_coldstart(matrix, report))


def paired_significance(report_a: EvalReport, report_b: EvalReport) -> SignificanceResult:
    """Two-tailed paired t-test on per-user MAE over the common user set.

    Degenerate convention for zero-variance differences: p = 1 when the
    mean difference is 0, else p = 0.
    """
    common = sorted(set(report_a.per_user_errors) & set(report_b.per_user_errors))
    if len(common) < 2:
        raise ValueError("need at least 2 users evaluated by both runs")
    diffs = np.array(
        [report_a.per_user_errors[u].mae - report_b.per_user_errors[u].mae for u in common]
    )
    n = len(diffs)
    df = n - 1
    mean = float(diffs.mean())
    sd = float(diffs.std(ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            return SignificanceResult(0.0, df, 1.0)
        return SignificanceResult(math.copysign(math.inf, mean), df, 0.0)
    t = mean / (sd / math.sqrt(n))
    p = 2.0 * float(stdtr(df, -abs(t)))
    return SignificanceResult(t, df, p)


# -- CSV serialization ------------------------------------------------------

CSV_COLUMNS = (
    "algorithm", "similarity", "segment",
    "attempted", "predicted", "coverage", "mae", "rmse", "maue", "rmsue",
)

_SEGMENT_LABELS = (
    (None, "all"),
    (ColdStartClass.NO_RATING, "no_rating"),
    (ColdStartClass.FEW_RATING, "few_rating"),
    (ColdStartClass.REGULAR, "regular"),
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def report_rows(report: EvalReport, algorithm: str, similarity: str) -> list[dict]:
    """One row per segment (plus the pooled "all" row), fixed order."""
    rows = []
    for cls, label in _SEGMENT_LABELS:
        s = report.summary() if cls is None else report.segment_reports[cls]
        rows.append(
            {
                "algorithm": algorithm,
                "similarity": similarity,
                "segment": label,
                "attempted": s.attempted,
                "predicted": s.predicted,
                "coverage": s.coverage,
                "mae": s.mae,
                "rmse": s.rmse,
                "maue": s.maue,
                "rmsue": s.rmsue,
            }
        )
    return rows


def render_csv(rows: Iterable[dict]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"
