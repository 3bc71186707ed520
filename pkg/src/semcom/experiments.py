"""Evaluation harness: pipeline runs, rho sweeps, and the words-vs-accuracy
optimization, with deterministic CSV export.

Seeding rule: every work unit draws its noise from a generator seeded by
``SeedSequence([master_seed, *context])`` where the context integers are
(scheme code, rho scaled by 1e6, knowledge-base seed index); the sentence
index is appended inside the transceiver. The rule is fixed so that
serial and parallel execution produce byte-identical outputs. RANDOM
knowledge-base seeds are derived from the master seed and the seed index
only, never from rho, so a sweep's augmented keyword sets are nested
along the rho grid.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .bleu import bleu_score, single_order_config
from .corpus import Corpus, Sentence, Vocabulary, build_vocabulary
from .errors import EmptyCorpusError
from .kb import (
    SCHEME_BASE,
    SCHEME_FULL,
    SCHEME_ORDERED,
    SCHEME_RANDOM,
    SCHEMES,
    KnowledgeBase,
    augment_full,
    augment_ordered,
    augment_random,
)
from .lm import NGramLanguageModel
from .pipeline import SemanticTransceiver

_SCHEME_CODE = {s: i for i, s in enumerate(SCHEMES)}
_KB_SEED_TAG = 2
_BLEU_ORDERS = (1, 2, 3, 4)
_BLEU_CONFIGS = tuple(single_order_config(n) for n in _BLEU_ORDERS)


@dataclass(frozen=True)
class PipelineConfig:
    """All knobs of one evaluation run."""

    scheme: str = SCHEME_ORDERED
    rho: float = 0.0
    master_seed: int = 0
    snr_db: float = 6.0
    gain: float = 1.0
    lm_order: int = 3
    lm_discount: float = 0.4
    n_candidates: int = 4
    beam_width: int = 8
    train_frac: float = 0.8
    eval_frac: float = 0.2
    kb_seed_count: int = 10
    tau_bleu_order: int = 1
    satisfaction_fraction: float = 1.0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        if not (0.0 < self.train_frac < 1.0 and 0.0 < self.eval_frac < 1.0):
            raise ValueError("split fractions must lie in (0, 1)")
        if self.train_frac + self.eval_frac > 1.0 + 1e-12:
            raise ValueError("split fractions must sum to at most 1")
        if self.kb_seed_count < 1:
            raise ValueError("kb_seed_count must be >= 1")
        if self.tau_bleu_order not in _BLEU_ORDERS:
            raise ValueError("tau_bleu_order must be in 1..4")
        if not 0.0 < self.satisfaction_fraction <= 1.0:
            raise ValueError("satisfaction_fraction must be in (0, 1]")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")


@dataclass(frozen=True)
class SentenceResult:
    sentence_id: int
    keyword_count: int
    bleu_scores: tuple[float, float, float, float]
    erasures: int
    substitutions: int
    mask_bits: str


@dataclass(frozen=True)
class CurvePoint:
    """One sweep point; per-seed values back the aggregate means."""

    scheme: str
    rho: float
    seed_count: int
    mean_bleu: tuple[float, float, float, float]
    w_bar: float
    bleu1_per_seed: tuple[float, ...]
    wbar_per_seed: tuple[float, ...]


@dataclass(frozen=True)
class OptimizationResult:
    """Smallest grid rho meeting the accuracy constraint, if any.

    When no grid point qualifies, ``feasible`` is False, ``rho_star`` is
    None, and ``satisfaction_rate``/``w_bar`` describe the best point in
    the grid instead of silently relaxing the constraint.
    """

    scheme: str
    tau: float
    rho_star: float | None
    w_bar: float
    feasible: bool
    satisfaction_rate: float


def _mix(*keys: int) -> int:
    """Fixed integer mixing rule for derived seeds."""
    return int(np.random.SeedSequence(list(keys)).generate_state(1, np.uint32)[0])


def split_corpus(
    corpus: Corpus, cfg: PipelineConfig
) -> tuple[list[Sentence], list[tuple[int, Sentence]]]:
    """Split in file order: training prefix, then the evaluation block.

    Evaluation sentences keep their corpus index for result ids.
    """
    n = len(corpus)
    n_train = int(n * cfg.train_frac + 1e-9)
    n_eval = int(n * cfg.eval_frac + 1e-9)
    train = list(corpus.sentences[:n_train])
    eval_pairs = [
        (i, corpus.sentences[i]) for i in range(n_train, min(n, n_train + n_eval))
    ]
    if not train or not eval_pairs:
        raise EmptyCorpusError(
            f"split of {n} sentences leaves an empty train or eval set"
        )
    return train, eval_pairs


def scheme_kb(
    base_kb: KnowledgeBase,
    vocab: Vocabulary,
    scheme: str,
    rho: float,
    kb_seed: int = 0,
) -> KnowledgeBase:
    """Augment the base KB according to the scheme."""
    if scheme == SCHEME_BASE:
        return base_kb
    if scheme == SCHEME_RANDOM:
        return augment_random(base_kb, vocab, rho, seed=kb_seed)
    if scheme == SCHEME_ORDERED:
        return augment_ordered(base_kb, vocab, rho)
    if scheme == SCHEME_FULL:
        return augment_full(base_kb, vocab)
    raise ValueError(f"unknown scheme {scheme!r}")


def _evaluate_split(
    kb: KnowledgeBase,
    train: list[Sentence],
    eval_pairs: list[tuple[int, Sentence]],
    cfg: PipelineConfig,
    unit_seed: int,
    language_model: NGramLanguageModel | None,
) -> list[SentenceResult]:
    tx = SemanticTransceiver(
        kb=kb,
        snr_db=cfg.snr_db,
        gain=cfg.gain,
        lm_order=cfg.lm_order,
        lm_discount=cfg.lm_discount,
        n_candidates=cfg.n_candidates,
        beam_width=cfg.beam_width,
        seed=unit_seed,
        language_model=language_model,
    ).fit(train)
    results = []
    for local_idx, (corpus_idx, sentence) in enumerate(eval_pairs):
        chain = tx.process(sentence, index=local_idx)
        scores = tuple(
            bleu_score(chain.reconstructed, sentence, cfg_n)
            for cfg_n in _BLEU_CONFIGS
        )
        results.append(
            SentenceResult(
                sentence_id=corpus_idx,
                keyword_count=chain.keyword_count,
                bleu_scores=scores,
                erasures=chain.erasures,
                substitutions=chain.substitutions,
                mask_bits=chain.mask_bits,
            )
        )
    return results


def _unit_seed(cfg: PipelineConfig, rho: float, kb_seed_index: int) -> int:
    return _mix(
        cfg.master_seed,
        _SCHEME_CODE[cfg.scheme],
        int(round(rho * 1e6)),
        kb_seed_index,
    )


def _kb_seed(master_seed: int, kb_seed_index: int) -> int:
    return _mix(master_seed, _KB_SEED_TAG, kb_seed_index)


def run_pipeline(
    corpus: Corpus,
    base_kb: KnowledgeBase,
    cfg: PipelineConfig,
    kb_seed_index: int = 0,
    language_model: NGramLanguageModel | None = None,
) -> list[SentenceResult]:
    """Evaluate the configured scheme once over the corpus's eval split.

    Reconstructions are scored with single-order BLEU 1..4 against the
    original sentence.
    """
    vocab = build_vocabulary(corpus)
    train, eval_pairs = split_corpus(corpus, cfg)
    kb = scheme_kb(
        base_kb, vocab, cfg.scheme, cfg.rho,
        kb_seed=_kb_seed(cfg.master_seed, kb_seed_index),
    )
    return _evaluate_split(
        kb, train, eval_pairs, cfg,
        unit_seed=_unit_seed(cfg, cfg.rho, kb_seed_index),
        language_model=language_model,
    )


def avg_words(results: list[SentenceResult]) -> float:
    """Mean number of transmitted keyword slots per sentence."""
    if not results:
        raise ValueError("no results to average")
    return sum(r.keyword_count for r in results) / len(results)


def _mean_bleu(results: list[SentenceResult]) -> tuple[float, ...]:
    n = len(results)
    return tuple(
        sum(r.bleu_scores[k] for r in results) / n for k in range(len(_BLEU_ORDERS))
    )


def sweep_rho(
    corpus: Corpus,
    base_kb: KnowledgeBase,
    scheme: str,
    rho_grid,
    cfg: PipelineConfig,
) -> list[CurvePoint]:
    """One curve point per rho; RANDOM points average over derived KB seeds.

    The language model is fitted once on the training split and shared by
    every point, since it does not depend on the knowledge base.
    """
    rho_grid = list(rho_grid)
    if rho_grid != sorted(rho_grid) or any(not 0 <= r <= 1 for r in rho_grid):
        raise ValueError("rho_grid must be sorted and within [0, 1]")
    vocab = build_vocabulary(corpus)
    train, eval_pairs = split_corpus(corpus, cfg)
    lm = NGramLanguageModel(order=cfg.lm_order, discount=cfg.lm_discount).fit(train)
    n_seeds = cfg.kb_seed_count if scheme == SCHEME_RANDOM else 1
    run_cfg = replace(cfg, scheme=scheme)
    points = []
    for rho in rho_grid:
        bleu_per_seed = []
        wbar_per_seed = []
        for j in range(n_seeds):
            kb = scheme_kb(
                base_kb, vocab, scheme, rho,
                kb_seed=_kb_seed(cfg.master_seed, j),
            )
            results = _evaluate_split(
                kb, train, eval_pairs, run_cfg,
                unit_seed=_unit_seed(run_cfg, rho, j),
                language_model=lm,
            )
            bleu_per_seed.append(_mean_bleu(results))
            wbar_per_seed.append(avg_words(results))
        mean_bleu = tuple(
            sum(b[k] for b in bleu_per_seed) / n_seeds
            for k in range(len(_BLEU_ORDERS))
        )
        points.append(
            CurvePoint(
                scheme=scheme,
                rho=rho,
                seed_count=n_seeds,
                mean_bleu=mean_bleu,
                w_bar=sum(wbar_per_seed) / n_seeds,
                bleu1_per_seed=tuple(b[0] for b in bleu_per_seed),
                wbar_per_seed=tuple(wbar_per_seed),
            )
        )
    return points


def min_words_for_tau(
    corpus: Corpus,
    base_kb: KnowledgeBase,
    scheme: str,
    tau: float,
    cfg: PipelineConfig,
    rho_grid,
) -> OptimizationResult:
    """Smallest grid rho whose run keeps per-sentence BLEU above tau.

    The constraint is satisfied when at least ``cfg.satisfaction_fraction``
    of the evaluation sentences reach BLEU >= tau at order
    ``cfg.tau_bleu_order`` (averaged over KB seeds for RANDOM).
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    rho_grid = list(rho_grid)
    if rho_grid != sorted(rho_grid) or any(not 0 <= r <= 1 for r in rho_grid):
        raise ValueError("rho_grid must be sorted and within [0, 1]")
    vocab = build_vocabulary(corpus)
    train, eval_pairs = split_corpus(corpus, cfg)
    lm = NGramLanguageModel(order=cfg.lm_order, discount=cfg.lm_discount).fit(train)
    n_seeds = cfg.kb_seed_count if scheme == SCHEME_RANDOM else 1
    run_cfg = replace(cfg, scheme=scheme)
    order_idx = cfg.tau_bleu_order - 1
    best_rate = -1.0
    best_wbar = float("nan")
    for rho in rho_grid:
        rates = []
        wbars = []
        for j in range(n_seeds):
            kb = scheme_kb(
                base_kb, vocab, scheme, rho,
                kb_seed=_kb_seed(cfg.master_seed, j),
            )
            results = _evaluate_split(
                kb, train, eval_pairs, run_cfg,
                unit_seed=_unit_seed(run_cfg, rho, j),
                language_model=lm,
            )
            rates.append(
                sum(
                    1 for r in results if r.bleu_scores[order_idx] >= tau - 1e-12
                )
                / len(results)
            )
            wbars.append(avg_words(results))
        rate = sum(rates) / n_seeds
        wbar = sum(wbars) / n_seeds
        if rate >= cfg.satisfaction_fraction - 1e-12:
            return OptimizationResult(
                scheme=scheme, tau=tau, rho_star=rho, w_bar=wbar,
                feasible=True, satisfaction_rate=rate,
            )
        if rate > best_rate:
            best_rate, best_wbar = rate, wbar
    return OptimizationResult(
        scheme=scheme, tau=tau, rho_star=None, w_bar=best_wbar,
        feasible=False, satisfaction_rate=best_rate,
    )


# -- CSV export --------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path, header, rows) -> None:
    """Write rows with a fixed header; formatting is locale-independent
    and byte-stable for identical inputs."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_sentence_results(path, results: list[SentenceResult]) -> None:
    write_csv(
        path,
        ["id", "keyword_count", "bleu_1", "bleu_2", "bleu_3", "bleu_4",
         "erasures", "substitutions", "mask"],
        (
            [r.sentence_id, r.keyword_count, *r.bleu_scores,
             r.erasures, r.substitutions, r.mask_bits]
            for r in results
        ),
    )


def write_curve_points(path, points: list[CurvePoint]) -> None:
    write_csv(
        path,
        ["scheme", "rho", "seed_count", "mean_bleu_1", "mean_bleu_2",
         "mean_bleu_3", "mean_bleu_4", "w_bar"],
        (
            [p.scheme, p.rho, p.seed_count, *p.mean_bleu, p.w_bar]
            for p in points
        ),
    )


def write_optimization_results(path, rows: list[OptimizationResult]) -> None:
    write_csv(
        path,
        ["scheme", "tau", "rho_star", "w_bar", "feasible", "satisfaction_rate"],
        (
            [r.scheme, r.tau, r.rho_star, r.w_bar, r.feasible,
             r.satisfaction_rate]
            for r in rows
        ),
    )


def write_bound_reports(path, reports) -> None:
    write_csv(
        path,
        ["trial", "l1", "l2", "mi", "l", "ce", "h_lambda", "b", "gap",
         "delta_residual"],
        (
            [r.trial, r.l1, r.l2, r.mi, r.l, r.ce, r.h_lambda, r.b, r.gap,
             r.delta_residual]
            for r in reports
        ),
    )


def write_vocabulary(path, vocab: Vocabulary) -> None:
    write_csv(
        path,
        ["word", "count"],
        ([w, vocab.counts[w]] for w in vocab.by_frequency),
    )
