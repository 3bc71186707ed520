"""Sentence-level BLEU: modified n-gram precision, brevity penalty, and
their weighted geometric combination.

The score of candidate c against reference r is

    BP * exp(sum_n w_n * ln p_n)

where p_n is the clipped n-gram precision and BP penalizes candidates
shorter than the reference: BP = 1 when len(c) > len(r), else
exp(1 - len(r)/len(c)). No smoothing is applied: if any weighted
precision is zero the score is zero. Orders for which the candidate has
no n-grams at all (len(c) < n) are dropped and the remaining weights are
renormalized; when no order remains the score is defined as zero.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

MODE_CUMULATIVE = "cumulative"
MODE_SINGLE = "single"


@dataclass(frozen=True)
class BleuConfig:
    """Maximum n-gram order, per-order weights, and combination mode.

    ``weights=None`` means uniform. In ``single`` mode all weight sits on
    ``max_order`` alone, giving the per-order scores plotted in rho sweeps.
    """

    max_order: int = 4
    weights: tuple[float, ...] | None = None
    mode: str = MODE_CUMULATIVE

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError(f"max_order must be >= 1, got {self.max_order}")
        if self.mode not in (MODE_CUMULATIVE, MODE_SINGLE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.weights is not None:
            if len(self.weights) != self.max_order:
                raise ValueError("need one weight per order")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be non-negative")
            if abs(math.fsum(self.weights) - 1.0) > 1e-12:
                raise ValueError("weights must sum to 1")

    def effective_weights(self) -> tuple[float, ...]:
        if self.mode == MODE_SINGLE:
            return tuple(0.0 for _ in range(self.max_order - 1)) + (1.0,)
        if self.weights is None:
            return tuple(1.0 / self.max_order for _ in range(self.max_order))
        return self.weights


def single_order_config(n: int) -> BleuConfig:
    """Config scoring with order n alone (BLEU-n)."""
    return BleuConfig(max_order=n, mode=MODE_SINGLE)


@dataclass(frozen=True)
class BleuBreakdown:
    """Score plus the quantities it was combined from.

    ``precisions[n-1]`` is the modified precision of order n, or None
    when the candidate has no n-grams of that order.
    """

    score: float
    bp: float
    precisions: tuple[float | None, ...]
    len_c: int
    len_r: int


def _tokens(sentence) -> tuple[str, ...]:
    tokens = tuple(getattr(sentence, "tokens", sentence))
    if not tokens:
        raise ValueError("sentence must be non-empty")
    return tokens


def ngram_counts(tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def modified_precision(candidate, reference, n: int) -> float | None:
    """Clipped n-gram matches over candidate n-gram count.

    Each candidate n-gram counts at most as often as it occurs in the
    reference. Returns None when the candidate has no n-grams of order n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cand = _tokens(candidate)
    ref = _tokens(reference)
    counts = ngram_counts(cand, n)
    total = sum(counts.values())
    if total == 0:
        return None
    ref_counts = ngram_counts(ref, n)
    clipped = sum(min(c, ref_counts[g]) for g, c in counts.items())
    return clipped / total


def brevity_penalty(len_c: int, len_r: int) -> float:
    """1 when the candidate is longer than the reference, else
    exp(1 - len_r/len_c)."""
    if len_c < 1 or len_r < 1:
        raise ValueError("lengths must be >= 1")
    if len_c > len_r:
        return 1.0
    return math.exp(1.0 - len_r / len_c)


def bleu(candidate, reference, cfg: BleuConfig = BleuConfig()) -> BleuBreakdown:
    """Score a candidate sentence against a reference."""
    cand = _tokens(candidate)
    ref = _tokens(reference)
    precisions = tuple(
        modified_precision(cand, ref, n) for n in range(1, cfg.max_order + 1)
    )
    bp = brevity_penalty(len(cand), len(ref))
    weighted = [
        (w, p)
        for w, p in zip(cfg.effective_weights(), precisions)
        if w > 0 and p is not None
    ]
    total_w = math.fsum(w for w, _ in weighted)
    if not weighted or total_w <= 0 or any(p == 0 for _, p in weighted):
        score = 0.0
    else:
        score = bp * math.exp(
            math.fsum(w / total_w * math.log(p) for w, p in weighted)
        )
    return BleuBreakdown(
        score=score, bp=bp, precisions=precisions, len_c=len(cand), len_r=len(ref)
    )


def bleu_score(candidate, reference, cfg: BleuConfig = BleuConfig()) -> float:
    return bleu(candidate, reference, cfg).score
