"""Command-line surface: stats, eval, compare, predict and synth.

Exit codes: 0 success, 1 data error (unreadable/mismatched files,
infeasible parameters), 2 usage error. Output is CSV on stdout unless
--out is given; only `stats` prints a human-readable block.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from trustrec.evaluation import (
    EvalConfig,
    leave_one_out,
    paired_significance,
    render_csv,
    report_rows,
)
from trustrec.ingestion import (
    RATING_FORMATS,
    TRUST_FORMATS,
    SyntheticParams,
    generate_synthetic,
    load_ratings,
    load_trust,
    save_ratings,
    save_trust,
)
from trustrec.model import (
    ColdStartClass,
    RatingMatrix,
    RatingScale,
    TrustNetwork,
    coldstart_shares,
    dataset_stats,
)
from trustrec.neighborhood import Algorithm
from trustrec.predictor import (
    ElasticConfig,
    PredictorConfig,
    predict,
    predict_elastic,
)
from trustrec.similarity import Measure, SimilarityConfig

_ALGOS = {
    "traditional": Algorithm.TRADITIONAL,
    "trust": Algorithm.TRUST_AWARE,
    "hybrid": Algorithm.HYBRID,
    "propagated": Algorithm.PROPAGATED,
}

_MEASURES = {
    "pearson": Measure.CORRELATION,
    "cosine": Measure.VECTOR_SIMILARITY,
    "iuf": Measure.INVERSE_USER_FREQUENCY,
}

_SEGMENTS = {
    "no": frozenset({ColdStartClass.NO_RATING}),
    "few": frozenset({ColdStartClass.FEW_RATING}),
    "regular": frozenset({ColdStartClass.REGULAR}),
    "coldstart": frozenset({ColdStartClass.NO_RATING, ColdStartClass.FEW_RATING}),
}


def _scale_arg(text: str) -> RatingScale:
    try:
        lo, hi = text.split(":")
        return RatingScale(float(lo), float(hi))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad scale {text!r}, expected MIN:MAX") from exc


def _add_data_flags(p: argparse.ArgumentParser, trust_required: bool = False):
    p.add_argument("--ratings", required=True, help="ratings file path")
    p.add_argument("--trust", required=trust_required, help="trust file path")
    p.add_argument("--format", choices=sorted(RATING_FORMATS), default="csv")
    p.add_argument("--scale", type=_scale_arg, default=RatingScale(), metavar="MIN:MAX")


def _add_predictor_flags(p: argparse.ArgumentParser, with_algo: bool = True):
    if with_algo:
        p.add_argument("--algo", choices=sorted(_ALGOS), default="traditional")
    p.add_argument("--dmax", type=int, default=1, help="propagation depth for --algo propagated")
    p.add_argument("--sim", choices=sorted(_MEASURES), default="pearson")
    p.add_argument("--rho", type=float, default=None, help="case-amplification exponent (> 1)")
    p.add_argument("--min-overlap", type=int, default=2)
    p.add_argument("--fallback-weight", type=float, default=1.0)
    p.add_argument("--no-clamp", action="store_true")


def _add_eval_flags(p: argparse.ArgumentParser):
    p.add_argument("--sample-users", type=int, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--segment", choices=sorted(_SEGMENTS), default=None)
    p.add_argument("--out", default=None, help="CSV output path (stdout when omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trustrec",
        description="Trust-aware neighbourhood collaborative filtering",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("stats", help="dataset statistics block")
    _add_data_flags(p_stats)
    p_stats.set_defaults(func=_cmd_stats)

    p_eval = sub.add_parser("eval", help="leave-one-out evaluation, CSV report")
    _add_data_flags(p_eval)
    _add_predictor_flags(p_eval)
    _add_eval_flags(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_cmp = sub.add_parser("compare", help="two evaluations plus paired significance")
    _add_data_flags(p_cmp)
    p_cmp.add_argument("--algo-a", choices=sorted(_ALGOS), required=True)
    p_cmp.add_argument("--algo-b", choices=sorted(_ALGOS), required=True)
    _add_predictor_flags(p_cmp, with_algo=False)
    _add_eval_flags(p_cmp)
    p_cmp.set_defaults(func=_cmd_compare)

    p_pred = sub.add_parser("predict", help="single rating prediction")
    _add_data_flags(p_pred)
    _add_predictor_flags(p_pred)
    p_pred.add_argument("--user", type=int, required=True)
    p_pred.add_argument("--item", type=int, required=True)
    p_pred.add_argument("--budget", type=int, default=None,
                        help="trust-edge budget: use the elastic predictor")
    p_pred.add_argument("--kmin", type=int, default=5)
    p_pred.set_defaults(func=_cmd_predict)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    p_synth.add_argument("--users", type=int, required=True)
    p_synth.add_argument("--items", type=int, required=True)
    p_synth.add_argument("--avg-ratings", type=float, default=20.0)
    p_synth.add_argument("--out-degree", type=float, default=5.0)
    p_synth.add_argument("--coupling", type=float, default=0.8)
    p_synth.add_argument("--coldstart-frac", type=float, default=0.0)
    p_synth.add_argument("--scale", type=_scale_arg, default=RatingScale(), metavar="MIN:MAX")
    p_synth.add_argument("--seed", type=int, default=42)
    p_synth.add_argument("--out-prefix", required=True)
    p_synth.set_defaults(func=_cmd_synth)

    return parser


def _threads() -> int:
    raw = os.environ.get("TRUSTREC_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
        if value < 1:
            raise ValueError
    except ValueError:
        raise UsageError(f"TRUSTREC_THREADS must be a positive integer, got {raw!r}")
    return value


class UsageError(Exception):
    pass


def _load(args) -> tuple[RatingMatrix, TrustNetwork]:
    matrix, _ = load_ratings(args.ratings, RATING_FORMATS[args.format], args.scale)
    if args.trust:
        trust, _ = load_trust(args.trust, TRUST_FORMATS[args.format])
    else:
        trust = TrustNetwork()
    return matrix, trust


def _predictor_config(args, algo: str) -> PredictorConfig:
    return PredictorConfig(
        strategy=_ALGOS[algo],
        similarity=SimilarityConfig(
            measure=_MEASURES[args.sim],
            amplification_rho=args.rho,
            min_overlap=args.min_overlap,
        ),
        d_max=args.dmax,
        trust_fallback_weight=args.fallback_weight,
        clamp_to_scale=not args.no_clamp,
    )


def _eval_config(args, algo: str) -> EvalConfig:
    return EvalConfig(
        predictor=_predictor_config(args, algo),
        user_sample_size=args.sample_users,
        rng_seed=args.seed,
        segment=_SEGMENTS[args.segment] if args.segment else None,
    )


def _emit(text: str, out_path: str | None):
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _pct(x: float | None) -> str:
    return "n/a" if x is None else f"{100.0 * x:.2f}%"


def _cmd_stats(args) -> int:
    matrix, trust = _load(args)
    stats = dataset_stats(matrix, trust)
    shares = coldstart_shares(matrix, trust)
    cold = shares[ColdStartClass.NO_RATING] + shares[ColdStartClass.FEW_RATING]
    lines = [
        f"users              {stats.users}",
        f"items              {stats.items}",
        f"ratings            {stats.ratings}",
        f"sparsity           {_pct(stats.sparsity)}",
        f"avg ratings/user   "
        + ("n/a" if stats.avg_ratings_per_user is None else f"{stats.avg_ratings_per_user:.2f}"),
        f"trust statements   {stats.trust_statements}",
        f"avg trustees/user  "
        + ("n/a" if stats.avg_trustees_per_user is None else f"{stats.avg_trustees_per_user:.2f}"),
        f"no-rating users    {_pct(shares[ColdStartClass.NO_RATING])}",
        f"few-rating users   {_pct(shares[ColdStartClass.FEW_RATING])}",
        f"cold-start users   {_pct(cold)}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_eval(args) -> int:
    matrix, trust = _load(args)
    report = leave_one_out(matrix, trust, _eval_config(args, args.algo), threads=_threads())
    _emit(render_csv(report_rows(report, args.algo, args.sim)), args.out)
    return 0


def _cmd_compare(args) -> int:
    matrix, trust = _load(args)
    threads = _threads()
    report_a = leave_one_out(matrix, trust, _eval_config(args, args.algo_a), threads=threads)
    report_b = leave_one_out(matrix, trust, _eval_config(args, args.algo_b), threads=threads)
    rows = report_rows(report_a, args.algo_a, args.sim) + report_rows(report_b, args.algo_b, args.sim)
    result = paired_significance(report_a, report_b)
    _emit(render_csv(rows) + f"p_value,{result.p_value:.6f}\n", args.out)
    return 0


def _cmd_predict(args) -> int:
    matrix, trust = _load(args)
    config = _predictor_config(args, args.algo)
    extra = ""
    if args.budget is not None:
        result = predict_elastic(
            matrix, trust, args.user, args.item,
            ElasticConfig(budget=args.budget, k_min=args.kmin), config,
        )
        outcome = result.outcome
        extra = f" depth={result.depth} edges_visited={result.edges_visited}"
    else:
        outcome = predict(matrix, trust, args.user, args.item, config)
    value = "none" if outcome.value is None else f"{outcome.value:.6f}"
    failure = outcome.failure.value if outcome.failure else "none"
    clamped = "true" if outcome.clamped else "false"
    sys.stdout.write(
        f"user={args.user} item={args.item} value={value} "
        f"contributors={outcome.contributor_count} clamped={clamped} failure={failure}{extra}\n"
    )
    return 0


def _cmd_synth(args) -> int:
    params = SyntheticParams(
        users=args.users,
        items=args.items,
        ratings_per_user=args.avg_ratings,
        trust_out_degree=args.out_degree,
        trust_similarity_coupling=args.coupling,
        coldstart_fraction=args.coldstart_frac,
        scale=args.scale,
    )
    matrix, trust = generate_synthetic(params, args.seed)
    ratings_path = f"{args.out_prefix}_ratings.csv"
    trust_path = f"{args.out_prefix}_trust.csv"
    save_ratings(matrix, ratings_path)
    save_trust(trust, trust_path)
    sys.stdout.write(f"wrote {ratings_path}\nwrote {trust_path}\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
