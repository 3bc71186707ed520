"""Shared knowledge base: the keyword set both ends of the link agree on.

A base keyword list can be grown with a fraction ``rho`` of the corpus
vocabulary, either uniformly at random (RANDOM) or by descending word
frequency (ORDERED). RANDOM augmentation draws one seeded permutation of
the vocabulary and takes its prefix, so sweeping ``rho`` upward only ever
adds keywords (nested sampling).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
import random

from .corpus import DEFAULT_POLICY, NormalizationPolicy, Vocabulary, normalize_token
from .errors import EmptyKeywordListError

SCHEME_BASE = "BASE"
SCHEME_RANDOM = "RANDOM"
SCHEME_ORDERED = "ORDERED"
SCHEME_FULL = "FULL"

SCHEMES = (SCHEME_BASE, SCHEME_RANDOM, SCHEME_ORDERED, SCHEME_FULL)


@dataclass(frozen=True)
class KnowledgeBase:
    keywords: frozenset[str]
    scheme: str = SCHEME_BASE
    rho: float = 0.0
    seed: int | None = None
    lm_ref: str = ""

    def __len__(self) -> int:
        return len(self.keywords)

    def __contains__(self, word: str) -> bool:
        return word in self.keywords


def _check_rho(rho: float) -> None:
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")


def _n_to_add(rho: float, vocab_size: int) -> int:
    # floor of rho*|V|; the epsilon absorbs binary rounding of grid
    # values like 0.2*|V| so exact fractions stay exact
    return int(math.floor(rho * vocab_size + 1e-9))


def build_base_kb(
    keyword_list, policy: NormalizationPolicy = DEFAULT_POLICY
) -> KnowledgeBase:
    """Normalize and deduplicate a raw keyword list into a BASE-scheme KB."""
    keywords = frozenset(
        t for t in (normalize_token(w, policy) for w in keyword_list) if t
    )
    if not keywords:
        raise EmptyKeywordListError("keyword list is empty after normalization")
    return KnowledgeBase(keywords=keywords, scheme=SCHEME_BASE, rho=0.0)


def augment_random(
    kb: KnowledgeBase, vocab: Vocabulary, rho: float, seed: int
) -> KnowledgeBase:
    """Union a uniformly random floor(rho*|V|) vocabulary words into the KB.

    Words come from the prefix of one seeded permutation of the sorted
    vocabulary, so for a fixed seed the result at rho1 <= rho2 is nested.
    """
    _check_rho(rho)
    pool = sorted(vocab.counts)
    random.Random(seed).shuffle(pool)
    added = pool[: _n_to_add(rho, len(pool))]
    return replace(
        kb, keywords=kb.keywords | frozenset(added),
        scheme=SCHEME_RANDOM, rho=rho, seed=seed,
    )


def augment_ordered(kb: KnowledgeBase, vocab: Vocabulary, rho: float) -> KnowledgeBase:
    """Union the floor(rho*|V|) most frequent vocabulary words into the KB."""
    _check_rho(rho)
    added = vocab.by_frequency[: _n_to_add(rho, len(vocab.by_frequency))]
    return replace(
        kb, keywords=kb.keywords | frozenset(added),
        scheme=SCHEME_ORDERED, rho=rho, seed=None,
    )


def augment_full(kb: KnowledgeBase, vocab: Vocabulary) -> KnowledgeBase:
    """Union the entire vocabulary into the KB (transmit-all-words baseline)."""
    return replace(
        kb, keywords=kb.keywords | vocab.words(),
        scheme=SCHEME_FULL, rho=1.0, seed=None,
    )


def load_keywords(path) -> list[str]:
    """Read a KB file: a JSON array of keyword strings."""
    with Path(path).open("r", encoding="utf-8") as fh:
        words = json.load(fh)
    if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
        raise ValueError(f"{path}: expected a JSON array of strings")
    return words


def save_keywords(path, keywords) -> None:
    """Write a KB file bit-stably: sorted JSON array, two-space indent."""
    if isinstance(keywords, KnowledgeBase):
        keywords = keywords.keywords
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        json.dump(sorted(keywords), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
