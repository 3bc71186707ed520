import pytest
from hypothesis import given, strategies as st

from semcom.corpus import tokenize
from semcom.errors import LengthMismatchError
from semcom.extract import KeywordMask, compute_mask, extract_keywords
from semcom.kb import build_base_kb

COMMENTARY = "Ronaldo shoots the ball into the right-bottom of the net and it's a goal!"
COMMENTARY_KEYWORDS = ["ronaldo", "shoots", "ball", "right-bottom", "net", "goal"]


class TestComputeMask:
    def test_commentary_mask(self):
        mask = compute_mask(tokenize(COMMENTARY), build_base_kb(COMMENTARY_KEYWORDS))
        assert mask.bits == (1, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1)

    def test_disjoint_kb_all_zero(self):
        mask = compute_mask(tokenize("a b c"), build_base_kb(["z"]))
        assert mask.bits == (0, 0, 0)

    def test_covering_kb_all_one(self):
        mask = compute_mask(tokenize("a b c"), build_base_kb(["a", "b", "c", "d"]))
        assert mask.bits == (1, 1, 1)

    def test_enlarging_kb_never_clears_bits(self, football_corpus):
        small = build_base_kb(["goal", "save"])
        big = build_base_kb(["goal", "save", "the", "ball"])
        for s in football_corpus.sentences[:50]:
            m_small = compute_mask(s, small)
            m_big = compute_mask(s, big)
            assert all(b >= a for a, b in zip(m_small.bits, m_big.bits))


class TestExtractKeywords:
    def test_commentary_positions(self):
        sentence = tokenize(COMMENTARY)
        kb = build_base_kb(COMMENTARY_KEYWORDS)
        ks = extract_keywords(sentence, compute_mask(sentence, kb))
        assert ks.positions() == (1, 2, 4, 7, 10, 14)
        assert ks.words() == (
            "ronaldo", "shoots", "ball", "right-bottom", "net", "goal",
        )

    def test_all_zero_mask_empty(self):
        sentence = tokenize("a b")
        ks = extract_keywords(sentence, KeywordMask(bits=(0, 0)))
        assert len(ks) == 0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            extract_keywords(tokenize("a b"), KeywordMask(bits=(1, 0, 1)))

    def test_repeated_keyword_keeps_every_occurrence(self):
        sentence = tokenize("goal goal goal")
        kb = build_base_kb(["goal"])
        ks = extract_keywords(sentence, compute_mask(sentence, kb))
        assert ks.items == ((1, "goal"), (2, "goal"), (3, "goal"))

    @given(st.lists(st.sampled_from("abcde"), min_size=1, max_size=12),
           st.sets(st.sampled_from("abcde")))
    def test_count_matches_mask_sum(self, tokens, kb_words):
        sentence = tokenize(" ".join(tokens))
        if not kb_words:
            return
        kb = build_base_kb(sorted(kb_words))
        mask = compute_mask(sentence, kb)
        ks = extract_keywords(sentence, mask)
        assert len(ks) == mask.count()
        # equivalent to a single-pass filter by membership
        assert ks.words() == tuple(t for t in sentence.tokens if t in kb.keywords)
