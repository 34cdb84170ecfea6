"""Brute-force reference implementations used only by the tests.

Everything here works on plain dicts with textbook two-pass formulas and
networkx shortest paths -- no shared code with the package internals, so
agreement between the two is a real check.
"""

import math

import networkx as nx


def pearson_oracle(ratings, a, u, min_overlap=2, exclude_item=None):
    common = sorted(set(ratings.get(a, {})) & set(ratings.get(u, {})) - {exclude_item})
    if len(common) < min_overlap:
        return None
    xs = [ratings[a][i] for i in common]
    ys = [ratings[u][i] for i in common]
    # zero variance means a constant side: decided structurally, not by floats
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        return None
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    dx = sum((x - mx) ** 2 for x in xs)
    dy = sum((y - my) ** 2 for y in ys)
    return max(-1.0, min(1.0, cov / math.sqrt(dx * dy)))


def cosine_oracle(ratings, a, u, min_overlap=2, exclude_item=None):
    common = sorted(set(ratings.get(a, {})) & set(ratings.get(u, {})) - {exclude_item})
    if len(common) < min_overlap:
        return None
    xs = [ratings[a][i] for i in common]
    ys = [ratings[u][i] for i in common]
    nx_ = math.sqrt(sum(x * x for x in xs))
    ny_ = math.sqrt(sum(y * y for y in ys))
    if nx_ == 0 or ny_ == 0:
        return None
    dot = sum(x * y for x, y in zip(xs, ys))
    return max(-1.0, min(1.0, dot / (nx_ * ny_)))


def iuf_factor_oracle(ratings, item):
    m = sum(1 for u in ratings if ratings[u])
    m_j = sum(1 for u in ratings if item in ratings[u])
    return math.log(m / m_j)


def iuf_pearson_oracle(ratings, a, u, min_overlap=2, exclude_item=None):
    common = sorted(set(ratings.get(a, {})) & set(ratings.get(u, {})) - {exclude_item})
    if len(common) < min_overlap:
        return None
    fs = [iuf_factor_oracle(ratings, i) for i in common]
    total = sum(fs)
    if not total > 0:
        return None
    xs = [ratings[a][i] for i in common]
    ys = [ratings[u][i] for i in common]
    # weighted variance is zero iff the side is constant where f > 0
    support_x = {x for f, x in zip(fs, xs) if f > 0}
    support_y = {y for f, y in zip(fs, ys) if f > 0}
    if len(support_x) < 2 or len(support_y) < 2:
        return None
    mx = sum(f * x for f, x in zip(fs, xs)) / total
    my = sum(f * y for f, y in zip(fs, ys)) / total
    cov = sum(f * (x - mx) * (y - my) for f, x, y in zip(fs, xs, ys))
    dx = sum(f * (x - mx) ** 2 for f, x in zip(fs, xs))
    dy = sum(f * (y - my) ** 2 for f, y in zip(fs, ys))
    return max(-1.0, min(1.0, cov / math.sqrt(dx * dy)))


def amplify_oracle(w, rho):
    return math.copysign(abs(w) ** rho, w)


_SIM = {"pearson": pearson_oracle, "cosine": cosine_oracle, "iuf": iuf_pearson_oracle}


def trust_distances_oracle(trust_edges, a, d_max):
    graph = nx.DiGraph()
    graph.add_node(a)
    for s, targets in trust_edges.items():
        for t in targets:
            graph.add_edge(s, t)
    lengths = nx.single_source_shortest_path_length(graph, a, cutoff=d_max)
    return {u: d for u, d in lengths.items() if u != a}


def predict_oracle(
    ratings,
    trust_edges,
    a,
    j,
    strategy,
    d_max=1,
    sim="pearson",
    rho=None,
    min_overlap=2,
    fallback=1.0,
    scale=(1.0, 5.0),
    clamp=True,
    global_fallback=True,
):
    """Straight evaluation of the weighted-deviation formula.

    Returns (value, contributor_count, failure_name); value is None on
    failure. Masks the (a, j) pair everywhere, means exclude item j on
    both sides, neighbours rating only j are skipped.
    """
    raters = {u for u in ratings if j in ratings[u]}
    trustees = set(trust_edges.get(a, set()))
    distances = {}
    if strategy == "traditional":
        neighbours = raters - {a}
    elif strategy == "trust":
        neighbours = set(trustees)
    elif strategy == "hybrid":
        neighbours = (raters | trustees) - {a}
    elif strategy == "propagated":
        distances = trust_distances_oracle(trust_edges, a, d_max)
        neighbours = {u for u in distances if u in raters} - {a}
    else:
        raise ValueError(strategy)
    if strategy == "propagated" and not distances:
        return None, 0, "no_neighbours"
    if not neighbours:
        return None, 0, "no_neighbours"

    contributors = []
    for u in sorted(neighbours - {a}):
        if j not in ratings.get(u, {}):
            continue
        others = [v for i, v in ratings[u].items() if i != j]
        if not others:
            continue  # no deviation basis
        if strategy == "propagated":
            w = (d_max - distances[u] + 1) / d_max
        else:
            w = _SIM[sim](ratings, a, u, min_overlap, exclude_item=j)
            if w is not None and rho is not None:
                w = amplify_oracle(w, rho)
            if w is None and strategy in ("trust", "hybrid") and u in trustees:
                w = fallback
        if w is None:
            continue
        contributors.append((u, w, ratings[u][j], sum(others) / len(others)))

    if not contributors:
        return None, 0, "no_contributors"
    mass = sum(abs(w) for _, w, _, _ in contributors)
    if mass == 0:
        return None, len(contributors), "zero_weight_mass"

    own = [v for i, v in ratings.get(a, {}).items() if i != j]
    if own:
        base = sum(own) / len(own)
    elif global_fallback:
        pool = [v for u in ratings for i, v in ratings[u].items() if not (u == a and i == j)]
        if not pool:
            return None, len(contributors), "no_active_mean"
        base = sum(pool) / len(pool)
    else:
        return None, len(contributors), "no_active_mean"

    value = base + sum((r - mu) * w for _, w, r, mu in contributors) / mass
    if clamp:
        value = max(scale[0], min(scale[1], value))
    return value, len(contributors), None
