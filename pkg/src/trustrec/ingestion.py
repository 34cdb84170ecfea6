"""Dataset ingestion: delimited-file loaders for the public-dataset
layouts, canonical CSV writers, and a seeded synthetic generator whose
trust edges can be coupled to rating similarity.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable

import numpy as np

from trustrec.model import RatingMatrix, RatingScale, TrustNetwork


class FormatMismatchError(ValueError):
    """More than 10% of the rows failed to parse."""


@dataclass(frozen=True)
class RatingsFileFormat:
    """Column layout of a delimited ratings or trust file.

    ``columns`` assigns a role to each position; "ignore" skips a column.
    A " " delimiter splits on any whitespace run (the Epinions layout).
    """

    delimiter: str = "\t"
    columns: tuple[str, ...] = ("user", "item", "rating")
    has_header: bool = False

    def role_index(self, role: str) -> int:
        try:
            return self.columns.index(role)
        except ValueError:
            raise ValueError(f"format has no '{role}' column") from None


RATING_FORMATS = {
    "movielens": RatingsFileFormat("\t", ("user", "item", "rating", "ignore")),
    "epinions": RatingsFileFormat(" ", ("user", "item", "rating")),
    "flixster": RatingsFileFormat("\t", ("user", "item", "rating")),
    "csv": RatingsFileFormat(",", ("user", "item", "rating"), has_header=True),
}

TRUST_FORMATS = {
    "movielens": RatingsFileFormat("\t", ("truster", "trustee")),
    "epinions": RatingsFileFormat(" ", ("truster", "trustee")),
    "flixster": RatingsFileFormat("\t", ("truster", "trustee")),
    "csv": RatingsFileFormat(",", ("truster", "trustee"), has_header=True),
}


@dataclass
class LoadReport:
    """Warning counters accumulated during a load (never printed per row)."""

    rows: int = 0
    malformed: int = 0
    out_of_scale: int = 0
    duplicates: int = 0
    self_loops: int = 0


def _lines(source) -> Iterable[str]:
    if isinstance(source, (str, Path)):
        with open(source, "rb") as handle:
            yield from io.TextIOWrapper(handle, encoding="utf-8")
    elif isinstance(source, bytes):
        yield from io.StringIO(source.decode("utf-8"))
    else:
        yield from io.TextIOWrapper(source, encoding="utf-8")


def _split(line: str, fmt: RatingsFileFormat) -> list[str]:
    if fmt.delimiter == " ":
        return line.split()
    return line.split(fmt.delimiter)


def _check_mismatch(report: LoadReport):
    if report.rows > 0 and report.malformed / report.rows > 0.10:
        raise FormatMismatchError(
            f"format mismatch: {report.malformed} of {report.rows} rows unparseable"
        )


def load_ratings(
    source: str | Path | bytes | BinaryIO,
    fmt: RatingsFileFormat = RATING_FORMATS["csv"],
    scale: RatingScale = RatingScale(),
) -> tuple[RatingMatrix, LoadReport]:
    """Parse a delimited ratings file.

    Duplicate (user, item) pairs keep the last value; out-of-scale ratings
    are dropped; both are counted in the report. Raises FormatMismatchError
    when more than 10% of the data rows fail to parse.
    """
    iu, ii, ir = (fmt.role_index(r) for r in ("user", "item", "rating"))
    need = max(iu, ii, ir) + 1
    entries: dict[int, dict[int, float]] = {}
    report = LoadReport()
    for lineno, line in enumerate(_lines(source)):
        if lineno == 0 and fmt.has_header:
            continue
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        report.rows += 1
        parts = _split(line, fmt)
        if len(parts) < need:
            report.malformed += 1
            continue
        try:
            user, item, rating = int(parts[iu]), int(parts[ii]), float(parts[ir])
            if user < 0 or item < 0:
                raise ValueError
        except ValueError:
            report.malformed += 1
            continue
        if not scale.contains(rating):
            report.out_of_scale += 1
            continue
        row = entries.setdefault(user, {})
        if item in row:
            report.duplicates += 1
        row[item] = rating
    _check_mismatch(report)
    entries = {u: r for u, r in entries.items() if r}
    return RatingMatrix(entries, scale=scale), report


def load_trust(
    source: str | Path | bytes | BinaryIO,
    fmt: RatingsFileFormat = TRUST_FORMATS["csv"],
) -> tuple[TrustNetwork, LoadReport]:
    """Parse a delimited trust file into directed truster -> trustee edges.

    Self-loops are dropped (counted), duplicate edges collapse, and any
    trailing trust-value column is ignored: trust is binary here.
    """
    it, ie = fmt.role_index("truster"), fmt.role_index("trustee")
    need = max(it, ie) + 1
    edges: dict[int, set[int]] = {}
    report = LoadReport()
    for lineno, line in enumerate(_lines(source)):
        if lineno == 0 and fmt.has_header:
            continue
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        report.rows += 1
        parts = _split(line, fmt)
        if len(parts) < need:
            report.malformed += 1
            continue
        try:
            truster, trustee = int(parts[it]), int(parts[ie])
            if truster < 0 or trustee < 0:
                raise ValueError
        except ValueError:
            report.malformed += 1
            continue
        if truster == trustee:
            report.self_loops += 1
            continue
        bucket = edges.setdefault(truster, set())
        if trustee in bucket:
            report.duplicates += 1
        bucket.add(trustee)
    _check_mismatch(report)
    return TrustNetwork(edges), report


def save_ratings(matrix: RatingMatrix, path: str | Path) -> None:
    """Canonical CSV: header ``user,item,rating``, sorted, newline-terminated."""
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        out.write("user,item,rating\n")
        for user in sorted(matrix.users):
            row = matrix.ratings_of(user)
            for item in sorted(row):
                out.write(f"{user},{item},{row[item]!r}\n")


def save_trust(trust: TrustNetwork, path: str | Path) -> None:
    """Canonical CSV: header ``truster,trustee``, sorted, newline-terminated."""
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        out.write("truster,trustee\n")
        for truster in sorted(trust.users):
            for trustee in sorted(trust.trustees(truster)):
                out.write(f"{truster},{trustee}\n")


# -- synthetic data ----------------------------------------------------------


@dataclass(frozen=True)
class SyntheticParams:
    """Knobs for the seeded generator.

    ``trust_similarity_coupling`` drives both trustee choice (probability
    of picking from the user's own taste community) and how far each
    user's latent vector is pulled toward its trustees' vectors; 0 makes
    trust independent of rating behaviour, 1 makes trusted pairs share
    latent tastes almost entirely.

    ``ratings_per_user`` is the mean rating count of non-cold users; the
    ``coldstart_fraction`` receive 0-5 ratings, split between no-rating
    and few-rating users by ``norating_share``.
    """

    users: int
    items: int
    ratings_per_user: float = 20.0
    trust_out_degree: float = 5.0
    latent_dim: int = 8
    trust_similarity_coupling: float = 0.8
    coldstart_fraction: float = 0.0
    norating_share: float = 0.5
    scale: RatingScale = field(default_factory=RatingScale)

    def __post_init__(self):
        if self.users <= 0 or self.items <= 0 or self.latent_dim <= 0:
            raise ValueError("users, items and latent_dim must be positive")
        if self.ratings_per_user <= 0 or self.trust_out_degree < 0:
            raise ValueError("ratings_per_user must be positive, trust_out_degree non-negative")
        if self.ratings_per_user > self.items:
            raise ValueError("ratings_per_user cannot exceed the item count")
        for name in ("trust_similarity_coupling", "coldstart_fraction", "norating_share"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


# rating = mid + spread*(SIGNAL*z + BIAS*b_u + NOISE*eps), then snapped to
# the integer grid; z is the unit-variance latent dot product
_SIGNAL = 0.9
_BIAS = 0.6
_NOISE = 0.5


def generate_synthetic(params: SyntheticParams, seed: int) -> tuple[RatingMatrix, TrustNetwork]:
    """Seeded rating matrix plus trust network over users 0..m-1.

    Deterministic for a given (params, seed): a single RNG is consumed in
    a fixed order (latents, rating counts, trust edges, ratings).
    """
    rng = np.random.default_rng(seed)
    m, n, k = params.users, params.items, params.latent_dim
    c = params.trust_similarity_coupling

    n_groups = max(2, int(round(math.sqrt(m))))
    group = rng.integers(0, n_groups, size=m)
    anchors = rng.standard_normal((n_groups, k))
    base = math.sqrt(0.5) * anchors[group] + math.sqrt(0.5) * rng.standard_normal((m, k))
    item_latent = rng.standard_normal((n, k))
    popularity = (1.0 + rng.permutation(n)) ** -0.7
    popularity /= popularity.sum()

    counts = np.zeros(m, dtype=np.int64)
    n_cold = int(round(params.coldstart_fraction * m))
    cold = rng.choice(m, size=n_cold, replace=False) if n_cold else np.empty(0, dtype=np.int64)
    n_norating = int(round(params.norating_share * n_cold))
    few = np.sort(cold[n_norating:])
    counts[few] = rng.integers(1, 6, size=len(few))
    regular = np.setdiff1d(np.arange(m), cold)
    counts[regular] = np.clip(rng.poisson(params.ratings_per_user, size=len(regular)), 6, n)

    members_of = {g: np.flatnonzero(group == g) for g in range(n_groups)}
    edges: dict[int, set[int]] = {}
    out_degree = np.minimum(rng.poisson(params.trust_out_degree, size=m), m - 1)
    for u in range(m):
        wanted = int(out_degree[u])
        if wanted == 0:
            continue
        chosen: set[int] = set()
        own = members_of[int(group[u])]
        for _ in range(wanted):
            if c > 0 and rng.random() < c and len(own) > 1:
                v = int(own[rng.integers(len(own))])
            else:
                v = int(rng.integers(m))
            if v != u:
                chosen.add(v)
        if chosen:
            edges[u] = chosen
    trust = TrustNetwork(edges)

    # trusted pairs share latent vectors: pull each truster toward the
    # mean of its trustees' base vectors by the coupling weight
    latent = base.copy()
    for u in sorted(edges):
        rows = np.array(sorted(edges[u]), dtype=np.int64)
        latent[u] = (1.0 - c) * base[u] + c * base[rows].mean(axis=0)
    norms = np.linalg.norm(latent, axis=1)
    norms[norms == 0] = 1.0
    latent *= math.sqrt(k) / norms[:, None]

    scale = params.scale
    mid = (scale.min + scale.max) / 2.0
    spread = (scale.max - scale.min) / 4.0
    bias = rng.standard_normal(m)
    entries: dict[int, dict[int, float]] = {}
    for u in range(m):
        cnt = int(counts[u])
        if cnt == 0:
            continue
        items = rng.choice(n, size=cnt, replace=False, p=popularity)
        z = latent[u] @ item_latent[items].T / math.sqrt(k)
        raw = mid + spread * (_SIGNAL * z + _BIAS * bias[u] + _NOISE * rng.standard_normal(cnt))
        snapped = np.clip(np.round(raw), scale.min, scale.max)
        entries[u] = {int(j): float(v) for j, v in zip(items, snapped)}

    matrix = RatingMatrix(entries, scale=scale, extra_users=range(m), extra_items=range(n))
    return matrix, trust
