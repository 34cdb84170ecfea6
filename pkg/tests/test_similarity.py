import math
import random

import pytest
from hypothesis import given, strategies as st

from trustrec.model import RatingMatrix, RatingScale
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

from oracle import cosine_oracle, iuf_pearson_oracle, pearson_oracle


def test_pearson_perfect_agreement():
    m = RatingMatrix({1: {1: 5, 2: 3, 3: 4}, 2: {1: 4, 2: 2, 3: 3}})
    assert pearson(m, 1, 2) == 1.0


def test_pearson_perfect_disagreement():
    m = RatingMatrix({1: {1: 5, 2: 3, 3: 4}, 2: {1: 2, 2: 4, 3: 3}})
    assert pearson(m, 1, 2) == -1.0


def test_pearson_below_min_overlap():
    m = RatingMatrix({1: {1: 5, 2: 3}, 2: {2: 2, 3: 3}})
    assert pearson(m, 1, 2) is None


def test_pearson_zero_variance_is_absent_not_zero():
    m = RatingMatrix({1: {1: 4, 2: 4, 3: 4}, 2: {1: 5, 2: 3, 3: 4}})
    assert pearson(m, 1, 2) is None


def test_pearson_rejects_same_user():
    m = RatingMatrix({1: {1: 4, 2: 2}})
    with pytest.raises(ValueError):
        pearson(m, 1, 1)


def test_cosine_parallel_vectors():
    m = RatingMatrix({1: {1: 4, 2: 3}, 2: {1: 8, 2: 6}}, scale=RatingScale(1, 10))
    assert cosine(m, 1, 2) == 1.0


def test_cosine_hand_value():
    m = RatingMatrix({1: {1: 5, 2: 1}, 2: {1: 1, 2: 5}})
    assert cosine(m, 1, 2) == pytest.approx(10 / 26, abs=1e-12)


def test_cosine_no_overlap():
    m = RatingMatrix({1: {1: 5}, 2: {2: 5}})
    assert cosine(m, 1, 2) is None


def test_iuf_factor_values():
    # 100 active users; item 500 rated by 10 of them
    entries = {u: {u: 3.0} for u in range(100)}
    for u in range(10):
        entries[u][500] = 4.0
    m = RatingMatrix(entries)
    assert iuf_factor(m, 500) == pytest.approx(math.log(10), abs=1e-12)


def test_iuf_factor_universal_item_is_zero():
    m = RatingMatrix({1: {1: 3, 2: 4}, 2: {1: 2, 3: 5}})
    assert iuf_factor(m, 1) == 0.0


def test_iuf_factor_ln2():
    m = RatingMatrix({1: {1: 3, 2: 4}, 2: {2: 5}})
    assert iuf_factor(m, 1) == pytest.approx(math.log(2), abs=1e-12)


def test_iuf_factor_unrated_item_errors():
    m = RatingMatrix({1: {1: 3}}, extra_items=[9])
    with pytest.raises(ValueError, match="undefined factor"):
        iuf_factor(m, 9)


def test_iuf_pearson_equals_pearson_under_uniform_factors():
    # items 1-3 all have exactly two raters, so their factors are equal
    m = RatingMatrix({1: {1: 5, 2: 3, 3: 4}, 2: {1: 4, 2: 1, 3: 3}, 3: {4: 2}})
    base = pearson(m, 1, 2)
    weighted = iuf_pearson(m, 1, 2)
    assert base is not None
    assert abs(weighted - base) <= 1e-12


def test_iuf_pearson_all_zero_factors_absent():
    # both items rated by every active user -> both factors are ln(1) = 0
    m = RatingMatrix({1: {1: 5, 2: 3}, 2: {1: 4, 2: 1}})
    assert iuf_pearson(m, 1, 2) is None


def test_iuf_pearson_perfect_agreement_weighted():
    # factors ln(10) and ln(2): m=20 active, item 1 has 2 raters, item 2 has 10
    entries = {1: {1: 5.0, 2: 3.0}, 2: {1: 4.0, 2: 2.0}}
    for u in range(3, 11):
        entries[u] = {2: 3.0}
    for u in range(11, 21):
        entries[u] = {3: 3.0}
    m = RatingMatrix(entries)
    assert iuf_factor(m, 1) == pytest.approx(math.log(10), abs=1e-12)
    assert iuf_factor(m, 2) == pytest.approx(math.log(2), abs=1e-12)
    assert iuf_pearson(m, 1, 2) == pytest.approx(1.0, abs=1e-9)


def test_case_amplify_hand_values():
    assert case_amplify(0.8, 2.5) == pytest.approx(0.572433, abs=1e-6)
    assert case_amplify(-0.5, 2.5) == pytest.approx(-0.176777, abs=1e-6)


def test_case_amplify_fixed_points():
    assert case_amplify(0.0, 2.5) == 0.0
    assert case_amplify(1.0, 2.5) == 1.0
    assert case_amplify(-1.0, 2.5) == -1.0


def test_case_amplify_requires_rho_above_one():
    with pytest.raises(ValueError):
        case_amplify(0.5, 1.0)


@given(st.floats(min_value=-1.0, max_value=1.0), st.floats(min_value=1.001, max_value=10.0))
def test_case_amplify_odd_and_bounded(w, rho):
    amplified = case_amplify(w, rho)
    assert abs(amplified) <= 1.0
    assert case_amplify(-w, rho) == pytest.approx(-amplified, abs=1e-15)


@given(
    st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=2, max_size=6, unique=True),
    st.floats(min_value=1.001, max_value=5.0),
)
def test_case_amplify_monotone_on_unit_interval(ws, rho):
    ws = sorted(ws)
    amplified = [case_amplify(w, rho) for w in ws]
    assert amplified == sorted(amplified)


def test_amplified_ranking_matches_base_ranking():
    rng = random.Random(13)
    weights = [rng.uniform(-1, 1) for _ in range(50)]
    rho = 2.5
    by_abs_base = sorted(range(50), key=lambda i: abs(weights[i]))
    by_abs_amp = sorted(range(50), key=lambda i: abs(case_amplify(weights[i], rho)))
    assert by_abs_base == by_abs_amp


def test_similarity_dispatch_correlation():
    m = RatingMatrix({1: {1: 5, 2: 3, 3: 4}, 2: {1: 4, 2: 2, 3: 3}})
    assert similarity(m, 1, 2, SimilarityConfig(Measure.CORRELATION)) == 1.0


def test_similarity_dispatch_amplified():
    # base pearson is exactly -0.5, amplified by rho 2.5
    m = RatingMatrix({1: {1: 5, 2: 4, 3: 3}, 2: {1: 2, 2: 4, 3: 3}})
    assert pearson(m, 1, 2) == -0.5
    got = similarity(m, 1, 2, SimilarityConfig(Measure.CORRELATION, amplification_rho=2.5))
    assert got == pytest.approx(-0.176777, abs=1e-6)


def test_similarity_dispatch_absent_propagates():
    m = RatingMatrix({1: {1: 5}, 2: {2: 5}})
    cfg = SimilarityConfig(Measure.VECTOR_SIMILARITY)
    assert similarity(m, 1, 2, cfg) is None


def test_similarity_config_validation():
    with pytest.raises(ValueError):
        SimilarityConfig(min_overlap=1)
    with pytest.raises(ValueError):
        SimilarityConfig(amplification_rho=1.0)


def _random_matrix(rng, users=8, items=8, density=0.6):
    entries = {}
    for u in range(users):
        row = {j: float(rng.randint(1, 5)) for j in range(items) if rng.random() < density}
        if row:
            entries[u] = row
    return RatingMatrix(entries, extra_users=range(users), extra_items=range(items))


def test_symmetry_exact_for_all_measures():
    rng = random.Random(23)
    for _ in range(15):
        m = _random_matrix(rng)
        for cfg in (
            SimilarityConfig(Measure.CORRELATION),
            SimilarityConfig(Measure.VECTOR_SIMILARITY),
            SimilarityConfig(Measure.INVERSE_USER_FREQUENCY),
            SimilarityConfig(Measure.CORRELATION, amplification_rho=2.5),
        ):
            users = sorted(m.users)
            for a in users:
                for u in users:
                    if a < u:
                        assert similarity(m, a, u, cfg) == similarity(m, u, a, cfg)


def test_defined_weights_lie_in_unit_interval():
    rng = random.Random(29)
    for _ in range(15):
        m = _random_matrix(rng)
        users = sorted(m.users)
        for a in users:
            for u in users:
                if a >= u:
                    continue
                for fn in (pearson, cosine, iuf_pearson):
                    w = fn(m, a, u)
                    if w is not None:
                        assert -1.0 <= w <= 1.0
                cw = cosine(m, a, u)
                if cw is not None:
                    assert 0.0 < cw <= 1.0  # positive scale


def test_pearson_matches_textbook_oracle():
    rng = random.Random(31)
    for _ in range(40):
        m = _random_matrix(rng)
        raw = {u: dict(m.ratings_of(u)) for u in m.users}
        users = sorted(m.users)
        for a in users:
            for u in users:
                if a >= u:
                    continue
                got = pearson(m, a, u)
                want = pearson_oracle(raw, a, u)
                if want is None:
                    assert got is None
                else:
                    assert got == pytest.approx(want, abs=1e-12)


def test_cosine_and_iuf_match_oracles():
    rng = random.Random(37)
    for _ in range(20):
        m = _random_matrix(rng)
        raw = {u: dict(m.ratings_of(u)) for u in m.users}
        users = sorted(m.users)
        for a in users:
            for u in users:
                if a >= u:
                    continue
                for fn, ofn in ((cosine, cosine_oracle), (iuf_pearson, iuf_pearson_oracle)):
                    got = fn(m, a, u)
                    want = ofn(raw, a, u)
                    if want is None:
                        assert got is None
                    else:
                        assert got == pytest.approx(want, abs=1e-12)
