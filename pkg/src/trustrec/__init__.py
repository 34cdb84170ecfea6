"""Trust-aware neighbourhood collaborative filtering.

Rating prediction from mean-centred weighted neighbour deviations, with
four neighbourhood strategies (traditional raters, direct trustees, their
hybrid union, and distance-decayed propagated trust), a leave-one-out
evaluation harness, and loaders/generators for desk-scale experiments.
"""

from trustrec.evaluation import (
    EvalConfig,
    EvalReport,
    MetricsSummary,
    SignificanceResult,
    compute_metrics,
    coverage,
    leave_one_out,
    paired_significance,
    render_csv,
    report_rows,
    segment_by_coldstart,
)
from trustrec.ingestion import (
    RATING_FORMATS,
    TRUST_FORMATS,
    FormatMismatchError,
    LoadReport,
    RatingsFileFormat,
    SyntheticParams,
    generate_synthetic,
    load_ratings,
    load_trust,
    save_ratings,
    save_trust,
)
from trustrec.model import (
    ColdStartClass,
    DatasetStats,
    RatingMatrix,
    RatingScale,
    TrustNetwork,
    classify_user,
    coldstart_shares,
    common_items,
    dataset_stats,
    mean_rating,
    raters_of,
    stats_from_counts,
)
from trustrec.neighborhood import (
    Algorithm,
    Neighbourhood,
    contributors,
    hybrid_neighbors,
    propagated_neighbors,
    traditional_neighbors,
    trust_aware_neighbors,
    trust_distances,
)
from trustrec.predictor import (
    ElasticConfig,
    ElasticResult,
    FailureReason,
    PredictionOutcome,
    PredictorConfig,
    predict,
    predict_elastic,
    predict_propagated,
    weight_for,
)
from trustrec.similarity import (
    Measure,
    SimilarityConfig,
    case_amplify,
    cosine,
    iuf_factor,
    iuf_pearson,
    pearson,
    similarity,
)

__version__ = "0.1.0"
