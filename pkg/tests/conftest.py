from pathlib import Path

import pytest

from trustrec.ingestion import RATING_FORMATS, TRUST_FORMATS, load_ratings, load_trust

DATA = Path(__file__).parent / "data"


def load_fixture(name):
    matrix, _ = load_ratings(DATA / f"{name}_ratings.csv", RATING_FORMATS["csv"])
    trust, _ = load_trust(DATA / f"{name}_trust.csv", TRUST_FORMATS["csv"])
    return matrix, trust


@pytest.fixture(scope="session")
def fixture_a():
    """Trust-aware worked example: trustees of 5 are {10,8,2}, raters of
    item 13 are {2,8,11,16,20}, users 20 and 16 sit at trust distance 2."""
    return load_fixture("fixture_a")


@pytest.fixture(scope="session")
def fixture_b():
    """Hybrid worked example: trustees of 5 are {2,8,10}, raters of item 13
    are {2,8,11}."""
    return load_fixture("fixture_b")
