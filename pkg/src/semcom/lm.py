"""Backoff n-gram language model and constrained sentence generation.

The model counts n-grams up to a fixed order with sentence-boundary
padding and scores continuations with absolute discounting: probability
mass ``discount`` is removed from every observed continuation and
redistributed to the next-shorter context, bottoming out at a uniform
distribution over the event space (vocabulary plus end marker). Every
conditional distribution therefore sums to one and assigns positive
probability to every known word.

Generation fills a fixed-length slot template: keyword slots keep their
word verbatim, gap slots are filled left to right by a beam search over
the model's ranked continuations. The procedure is deterministic, so the
same template, model, and parameters always produce the same candidates.

    lm = NGramLanguageModel(order=3).fit(corpus)
    template = SlotTemplate(("ronaldo", None, None, "goal"))
    candidates = generate_candidates(template, lm, GeneratorParams())
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .bleu import BleuConfig, bleu_score
from .corpus import Sentence, as_sentences
from .errors import EmptyCandidateListError, EmptyCorpusError

BOS = "<s>"
EOS = "</s>"


class NGramLanguageModel(BaseEstimator):
    """Count-based n-gram model with absolute-discount backoff.

    Parameters
    ----------
    order : int, default=3
        Maximum context length is ``order - 1``. Must be in [1, 5].
    discount : float, default=0.4
        Absolute discount subtracted from every observed count, in (0, 1).

    Attributes
    ----------
    vocab_ : frozenset of str
        Words observed during fit (sentence markers excluded).
    events_ : tuple of str
        The full event space the conditionals are normalized over:
        the vocabulary plus the end-of-sentence marker.
    n_sentences_ : int
        Number of training sentences.
    """

    def __init__(self, order: int = 3, discount: float = 0.4):
        self.order = order
        self.discount = discount

    def fit(self, X, y=None):
        if not 1 <= self.order <= 5:
            raise ValueError(f"order must be in [1, 5], got {self.order}")
        if not 0.0 < self.discount < 1.0:
            raise ValueError(f"discount must be in (0, 1), got {self.discount}")
        sentences = as_sentences(X)
        if not sentences:
            raise EmptyCorpusError("cannot fit a language model on zero sentences")

        table: dict[tuple[str, ...], dict[str, int]] = {}
        for sentence in sentences:
            seq = [BOS] * (self.order - 1) + list(sentence.tokens) + [EOS]
            for i in range(self.order - 1, len(seq)):
                word = seq[i]
                for ctx_len in range(self.order):
                    ctx = tuple(seq[i - ctx_len : i])
                    bucket = table.setdefault(ctx, {})
                    bucket[word] = bucket.get(word, 0) + 1

        self._table = {
            ctx: (sum(c.values()), c, len(c)) for ctx, c in table.items()
        }
        # continuations pre-ranked by (count desc, word asc) for proposals
        self._ranked = {
            ctx: tuple(
                w
                for w in sorted(c, key=lambda w: (-c[w], w))
                if w != EOS and w != BOS
            )
            for ctx, (_, c, _) in self._table.items()
        }
        self.vocab_ = frozenset(
            w for w in self._table[()][1] if w not in (BOS, EOS)
        )
        self.events_ = tuple(sorted(self._table[()][1]))
        self.n_sentences_ = len(sentences)
        return self

    def _check_fitted(self):
        if not hasattr(self, "_table"):
            raise NotFittedError("this NGramLanguageModel is not fitted yet")

    # -- probabilities -------------------------------------------------

    def continuation_counts(self, context: Sequence[str]) -> Mapping[str, int]:
        """Raw next-word counts after ``context`` (empty if unseen)."""
        self._check_fitted()
        entry = self._table.get(tuple(context))
        return dict(entry[1]) if entry else {}

    def mle_prob(self, word: str, context: Sequence[str] = ()) -> float:
        """Plain count ratio count(context, word) / count(context)."""
        self._check_fitted()
        entry = self._table.get(tuple(context))
        if not entry or entry[0] == 0:
            return 0.0
        return entry[1].get(word, 0) / entry[0]

    def prob(self, word: str, context: Sequence[str] = ()) -> float:
        """Discounted backoff probability of ``word`` after ``context``.

        Positive for every word in the event space; unknown words fall
        through to the uniform floor and receive a small positive value
        outside the normalized event space.
        """
        self._check_fitted()
        ctx = tuple(context)
        if len(ctx) > self.order - 1:
            ctx = ctx[-(self.order - 1) :] if self.order > 1 else ()
        return self._backoff_prob(word, ctx)

    def _backoff_prob(self, word: str, ctx: tuple[str, ...]) -> float:
        if not ctx:
            total, counts, distinct = self._table[()]
            discounted = max(counts.get(word, 0) - self.discount, 0.0) / total
            backoff_w = self.discount * distinct / total
            return discounted + backoff_w / len(self.events_)
        entry = self._table.get(ctx)
        if entry is None:
            return self._backoff_prob(word, ctx[1:])
        total, counts, distinct = entry
        discounted = max(counts.get(word, 0) - self.discount, 0.0) / total
        backoff_w = self.discount * distinct / total
        return discounted + backoff_w * self._backoff_prob(word, ctx[1:])

    def logprob(self, word: str, context: Sequence[str] = ()) -> float:
        return math.log(self.prob(word, context))

    def conditional(self, context: Sequence[str] = ()) -> dict[str, float]:
        """Full next-event distribution (sums to 1 over ``events_``)."""
        self._check_fitted()
        return {w: self.prob(w, context) for w in self.events_}

    def sentence_logprob(self, sentence) -> float:
        """Total log-likelihood of the tokens plus the end marker."""
        self._check_fitted()
        tokens = tuple(getattr(sentence, "tokens", sentence))
        seq = (BOS,) * (self.order - 1) + tokens + (EOS,)
        return math.fsum(
            self.logprob(seq[i], seq[max(0, i - self.order + 1) : i])
            for i in range(self.order - 1, len(seq))
        )

    # -- generation support ---------------------------------------------

    def top_continuations(self, context: Sequence[str], k: int) -> list[str]:
        """Up to ``k`` distinct word proposals for the slot after ``context``.

        Walks contexts from longest matching suffix to the unigram level,
        taking continuations in (count desc, word asc) order, so the most
        frequent unigram is always reachable as a fallback.
        """
        self._check_fitted()
        ctx = tuple(context)
        if len(ctx) > self.order - 1:
            ctx = ctx[-(self.order - 1) :] if self.order > 1 else ()
        seen: list[str] = []
        chosen = set()
        while True:
            for w in self._ranked.get(ctx, ()):
                if w not in chosen:
                    seen.append(w)
                    chosen.add(w)
                    if len(seen) == k:
                        return seen
            if not ctx:
                return seen
            ctx = ctx[1:]


@dataclass(frozen=True)
class GeneratorParams:
    """Knobs for constrained generation.

    ``n_candidates`` sentences are emitted, ranked by likelihood;
    ``beam_width`` bounds both the number of partial fills kept per slot
    and the number of word proposals per gap. The seed is reserved for
    stochastic generation modes; plain beam search ignores it.
    """

    n_candidates: int = 4
    beam_width: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.n_candidates < 1:
            raise ValueError("n_candidates must be >= 1")
        if self.beam_width < self.n_candidates:
            raise ValueError("beam_width must be >= n_candidates")


@dataclass(frozen=True)
class SlotTemplate:
    """Fixed-length slot sequence: a word pins the slot, None is a gap."""

    slots: tuple[str | None, ...]

    def __len__(self) -> int:
        return len(self.slots)

    def n_gaps(self) -> int:
        return sum(1 for s in self.slots if s is None)


def generate_candidates(
    template: SlotTemplate,
    lm: NGramLanguageModel,
    params: GeneratorParams = GeneratorParams(),
) -> list[Sentence]:
    """Fill template gaps by beam search; return the best candidates.

    Every candidate has exactly the template's length and carries every
    pinned word at its position. At most ``params.n_candidates`` distinct
    sentences are returned, best log-likelihood first (exact ties broken
    by lexicographic token order).
    """
    if len(template) == 0:
        raise ValueError("template must be non-empty")
    pad = (BOS,) * (lm.order - 1)
    beams: list[tuple[float, tuple[str, ...]]] = [(0.0, ())]
    for slot in template.slots:
        expanded = []
        for lp, toks in beams:
            ctx = (pad + toks)[-(lm.order - 1) :] if lm.order > 1 else ()
            proposals = [slot] if slot is not None else lm.top_continuations(
                ctx, params.beam_width
            )
            for w in proposals:
                expanded.append((lp + lm.logprob(w, ctx), toks + (w,)))
        expanded.sort(key=lambda b: (-b[0], b[1]))
        beams = expanded[: params.beam_width]
    return [Sentence(tokens=toks) for _, toks in beams[: params.n_candidates]]


def select_best(
    candidates: list[Sentence], reference, cfg: BleuConfig = BleuConfig()
) -> Sentence:
    """Candidate with the highest BLEU against the reference.

    Ties keep the earliest candidate, i.e. the most likely one when the
    list came from ``generate_candidates``.
    """
    if not candidates:
        raise EmptyCandidateListError("no candidates to select from")
    best = candidates[0]
    best_score = bleu_score(best, reference, cfg)
    for cand in candidates[1:]:
        score = bleu_score(cand, reference, cfg)
        if score > best_score:
            best, best_score = cand, score
    return best


def select_by_likelihood(
    candidates: list[Sentence], lm: NGramLanguageModel
) -> Sentence:
    """Candidate with the highest model likelihood (ties keep the earliest)."""
    if not candidates:
        raise EmptyCandidateListError("no candidates to select from")
    best = candidates[0]
    best_lp = lm.sentence_logprob(best)
    for cand in candidates[1:]:
        lp = lm.sentence_logprob(cand)
        if lp > best_lp:
            best, best_lp = cand, lp
    return best
