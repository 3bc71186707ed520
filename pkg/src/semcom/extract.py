"""Per-sentence keyword masks and the extracted keyword slots.

The mask has one bit per token position; bit ``l`` is set exactly when
token ``l`` is in the knowledge base. Collecting the set positions gives
the ordered keyword slots that the codec transmits. Repeated keywords
keep one entry per occurrence so the slot structure of the sentence is
preserved end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Sentence
from .errors import LengthMismatchError
from .kb import KnowledgeBase


@dataclass(frozen=True)
class KeywordMask:
    bits: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.bits)

    def count(self) -> int:
        return sum(self.bits)

    def as_string(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class KeywordSet:
    """Ordered (position, word) pairs; positions are 1-based and increasing."""

    items: tuple[tuple[int, str], ...]

    def __len__(self) -> int:
        return len(self.items)

    def words(self) -> tuple[str, ...]:
        return tuple(w for _, w in self.items)

    def positions(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.items)


def compute_mask(sentence: Sentence, kb: KnowledgeBase) -> KeywordMask:
    """Mark which token positions hold a KB keyword (exact token match)."""
    return KeywordMask(
        bits=tuple(1 if t in kb.keywords else 0 for t in sentence.tokens)
    )


def extract_keywords(sentence: Sentence, mask: KeywordMask) -> KeywordSet:
    """Collect the tokens at set mask positions, in sentence order."""
    if len(mask) != len(sentence):
        raise LengthMismatchError(
            f"mask length {len(mask)} != sentence length {len(sentence)}"
        )
    return KeywordSet(
        items=tuple(
            (i + 1, tok)
            for i, (tok, bit) in enumerate(zip(sentence.tokens, mask.bits))
            if bit
        )
    )
