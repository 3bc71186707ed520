import pytest

from semcom.corpus import generate_synthetic_corpus, synthetic_base_keywords
from semcom.kb import build_base_kb


@pytest.fixture(scope="session")
def football_corpus():
    return generate_synthetic_corpus(seed=7, n_sentences=300)


@pytest.fixture(scope="session")
def football_kb():
    return build_base_kb(synthetic_base_keywords("football"))
