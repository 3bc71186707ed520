"""Corpus loading, tokenization, vocabulary statistics, and synthetic text.

A corpus is a plain UTF-8 text file with one sentence per line. Tokens are
lowercased words with sentence punctuation stripped at the boundaries;
intra-word hyphens and apostrophes stay part of the token, so
``right-bottom`` and ``it's`` are single tokens.
"""

from __future__ import annotations

import json
import random
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

from .errors import EmptyCorpusError, EmptySentenceError, UnknownTemplateSetError

DEFAULT_STRIP_CHARS = '.,!?;:"()'

_SLOT_RE = re.compile(r"\{(\w+)\}")


@dataclass(frozen=True)
class NormalizationPolicy:
    """How raw words become tokens.

    ``strip_chars`` are removed from both ends of each whitespace-split
    word (repeatedly, so ``"(goal)!"`` becomes ``goal``); characters in
    the middle of a word are never touched.
    """

    lowercase: bool = True
    strip_chars: str = DEFAULT_STRIP_CHARS


DEFAULT_POLICY = NormalizationPolicy()


def normalize_token(word: str, policy: NormalizationPolicy = DEFAULT_POLICY) -> str:
    if policy.lowercase:
        word = word.lower()
    return word.strip(policy.strip_chars)


@dataclass(frozen=True)
class Sentence:
    """An ordered, non-empty sequence of normalized tokens."""

    tokens: tuple[str, ...]
    raw: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of sentences with a stable iteration order."""

    sentences: tuple[Sentence, ...]
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def __getitem__(self, i):
        return self.sentences[i]


@dataclass(frozen=True)
class Vocabulary:
    """Distinct words with exact corpus counts.

    ``by_frequency`` orders words by descending count; equal counts are
    broken by ascending lexicographic order so the ordering is total and
    reproducible.
    """

    counts: dict[str, int]
    total_tokens: int
    by_frequency: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.counts)

    def __contains__(self, word: str) -> bool:
        return word in self.counts

    def words(self) -> frozenset[str]:
        return frozenset(self.counts)


def tokenize(raw_line: str, policy: NormalizationPolicy = DEFAULT_POLICY) -> Sentence:
    """Split a line into normalized tokens.

    Raises EmptySentenceError when nothing survives normalization
    (e.g. a line of bare punctuation).
    """
    tokens = tuple(
        t for t in (normalize_token(w, policy) for w in raw_line.split()) if t
    )
    if not tokens:
        raise EmptySentenceError(f"no tokens survive normalization: {raw_line!r}")
    return Sentence(tokens=tokens, raw=raw_line)


def load_corpus(path, policy: NormalizationPolicy = DEFAULT_POLICY) -> Corpus:
    """Read a one-sentence-per-line UTF-8 file in file order.

    Lines that are blank, or that normalize to nothing, are skipped.
    Raises EmptyCorpusError when no line yields a sentence.
    """
    path = Path(path)
    sentences = []
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                sentences.append(tokenize(line.rstrip("\n"), policy))
            except EmptySentenceError:
                continue
    if not sentences:
        raise EmptyCorpusError(f"no sentences in {path}")
    return Corpus(sentences=tuple(sentences), source_id=str(path))


def save_corpus(corpus: Corpus, path) -> None:
    """Write one raw sentence per line (falls back to normalized text)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        for s in corpus:
            fh.write((s.raw or s.text()) + "\n")


def build_vocabulary(corpus: Corpus) -> Vocabulary:
    """Count every token of the corpus."""
    counts: Counter[str] = Counter()
    for sentence in corpus:
        counts.update(sentence.tokens)
    by_frequency = tuple(sorted(counts, key=lambda w: (-counts[w], w)))
    return Vocabulary(
        counts=dict(counts),
        total_tokens=sum(counts.values()),
        by_frequency=by_frequency,
    )


def _load_template_set(template_set_id: str) -> dict:
    resource = resources.files("semcom").joinpath(
        f"data/{template_set_id}_templates.json"
    )
    if not resource.is_file():
        raise UnknownTemplateSetError(f"no bundled template set {template_set_id!r}")
    spec = json.loads(resource.read_text(encoding="utf-8"))
    keyword_slots = set(spec["base_keyword_slots"])
    for template in spec["templates"]:
        fields = set(_SLOT_RE.findall(template))
        if not fields & keyword_slots:
            raise UnknownTemplateSetError(
                f"template set {template_set_id!r} is malformed: "
                f"{template!r} has no base-keyword slot"
            )
    return spec


def synthetic_base_keywords(
    template_set_id: str, policy: NormalizationPolicy = DEFAULT_POLICY
) -> list[str]:
    """Base keyword list of a bundled template family, normalized and sorted."""
    spec = _load_template_set(template_set_id)
    words = set()
    for slot in spec["base_keyword_slots"]:
        words.update(normalize_token(w, policy) for w in spec["slots"][slot])
    return sorted(words)


def generate_synthetic_corpus(
    seed: int,
    n_sentences: int,
    template_set_id: str = "football",
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> Corpus:
    """Draw sentences from a bundled template grammar.

    A pure function of its arguments: the same (seed, n_sentences,
    template_set_id) always yields the identical corpus. Every generated
    sentence contains at least one token from the family's base keyword
    list, which is what makes the corpus usable as a stand-in dataset for
    end-to-end runs. Templates are drawn uniformly; slot fillers are
    drawn with a harmonic rank bias (weight 1/rank within each family) so
    word frequencies decay Zipf-like all the way into the tail, as they
    do in natural text.
    """
    if n_sentences < 1:
        raise ValueError(f"n_sentences must be >= 1, got {n_sentences}")
    spec = _load_template_set(template_set_id)
    templates = spec["templates"]
    slots = spec["slots"]
    slot_weights = {
        name: [1.0 / (i + 1) for i in range(len(words))]
        for name, words in slots.items()
    }
    rng = random.Random(seed)

    def fill(match: re.Match) -> str:
        name = match.group(1)
        return rng.choices(slots[name], weights=slot_weights[name])[0]

    sentences = []
    for _ in range(n_sentences):
        template = rng.choice(templates)
        raw = _SLOT_RE.sub(fill, template)
        sentences.append(tokenize(raw, policy))
    source = f"synthetic:{template_set_id}:seed={seed}:n={n_sentences}"
    return Corpus(sentences=tuple(sentences), source_id=source)


def as_sentences(data) -> list[Sentence]:
    """Coerce a Corpus, iterable of Sentence, or iterable of token lists."""
    if isinstance(data, Corpus):
        return list(data.sentences)
    out = []
    for item in data:
        if isinstance(item, Sentence):
            out.append(item)
        else:
            tokens = tuple(item)
            if not tokens:
                raise EmptySentenceError("empty token sequence")
            out.append(Sentence(tokens=tokens))
    return out
