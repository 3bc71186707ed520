import math

import pytest
from sklearn.exceptions import NotFittedError

from semcom.corpus import build_vocabulary, generate_synthetic_corpus
from semcom.kb import augment_full, build_base_kb
from semcom.lm import NGramLanguageModel
from semcom.pipeline import SemanticTransceiver


@pytest.fixture(scope="module")
def small_corpus():
    return generate_synthetic_corpus(seed=11, n_sentences=120)


@pytest.fixture(scope="module")
def covering_kb(small_corpus):
    base = build_base_kb(["goal"])
    return augment_full(base, build_vocabulary(small_corpus))


class TestLosslessLimit:
    def test_identity_reconstruction(self, small_corpus, covering_kb):
        tx = SemanticTransceiver(kb=covering_kb, snr_db=math.inf).fit(small_corpus)
        out = tx.transform(small_corpus)
        assert all(r.tokens == s.tokens for r, s in zip(out, small_corpus))

    def test_chain_counters_clean(self, small_corpus, covering_kb):
        tx = SemanticTransceiver(kb=covering_kb, snr_db=math.inf).fit(small_corpus)
        res = tx.process(small_corpus[0], index=0)
        assert res.keyword_count == len(small_corpus[0])
        assert res.erasures == 0
        assert res.substitutions == 0
        assert res.mask_bits == "1" * len(small_corpus[0])


class TestDeterminism:
    def test_transform_reproducible(self, small_corpus, football_kb):
        mk = lambda: SemanticTransceiver(
            kb=football_kb, snr_db=3.0, seed=5
        ).fit(small_corpus)
        first = mk().transform(small_corpus.sentences[:40])
        second = mk().transform(small_corpus.sentences[:40])
        assert [s.tokens for s in first] == [s.tokens for s in second]

    def test_index_selects_noise_stream(self, small_corpus, football_kb):
        tx = SemanticTransceiver(kb=football_kb, snr_db=0.0, seed=5).fit(small_corpus)
        s = small_corpus[0]
        a = tx.process(s, index=0)
        b = tx.process(s, index=0)
        assert a == b


class TestFitContract:
    def test_unfitted_raises(self, small_corpus, football_kb):
        tx = SemanticTransceiver(kb=football_kb)
        with pytest.raises(NotFittedError):
            tx.transform(small_corpus)

    def test_prefit_language_model_reused(self, small_corpus, football_kb):
        lm = NGramLanguageModel(order=3).fit(small_corpus)
        tx = SemanticTransceiver(kb=football_kb, language_model=lm).fit(small_corpus)
        assert tx.lm_ is lm

    def test_prefit_language_model_must_be_fitted(self, small_corpus, football_kb):
        tx = SemanticTransceiver(
            kb=football_kb, language_model=NGramLanguageModel()
        )
        with pytest.raises(NotFittedError):
            tx.fit(small_corpus)

    def test_get_params_roundtrip(self, football_kb):
        tx = SemanticTransceiver(kb=football_kb, snr_db=2.0, beam_width=16)
        params = tx.get_params()
        assert params["snr_db"] == 2.0
        clone = SemanticTransceiver(**params)
        assert clone.get_params() == params

    def test_negative_seed_rejected(self, small_corpus, football_kb):
        with pytest.raises(ValueError):
            SemanticTransceiver(kb=football_kb, seed=-1).fit(small_corpus)


class TestTrainingCache:
    def test_cache_aligned_and_keyword_consistent(self, small_corpus, football_kb):
        tx = SemanticTransceiver(
            kb=football_kb,
            snr_db=math.inf,
            cache_training_reconstructions=True,
        ).fit(small_corpus)
        cache = tx.training_reconstructions_
        assert len(cache) == len(small_corpus)
        for original, rebuilt in zip(small_corpus, cache):
            assert len(rebuilt.tokens) == len(original.tokens)
            for pos, tok in enumerate(original.tokens):
                if tok in football_kb.keywords:
                    assert rebuilt.tokens[pos] == tok

    def test_cache_absent_by_default(self, small_corpus, football_kb):
        tx = SemanticTransceiver(kb=football_kb).fit(small_corpus)
        assert not hasattr(tx, "training_reconstructions_")


class TestNoisyAccounting:
    def test_substitutions_and_erasures_counted(self, small_corpus, football_kb):
        # at very low SNR corrupted slots must show up in the counters
        kb = augment_full(football_kb, build_vocabulary(small_corpus))
        tx = SemanticTransceiver(kb=kb, snr_db=-10.0, seed=1).fit(small_corpus)
        totals = [tx.process(s, index=i) for i, s in enumerate(small_corpus.sentences[:30])]
        assert sum(r.erasures + r.substitutions for r in totals) > 0
        for r in totals:
            assert r.erasures >= 0 and r.substitutions >= 0
