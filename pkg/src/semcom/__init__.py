"""Keyword-based semantic communication over a noisy channel.

Transmitter and receiver share a knowledge base (keyword set plus an
n-gram language model). Only keyword slots are transmitted; every other
slot carries one common symbol, and the receiver regenerates the missing
words from the shared model. The package provides the full simulation
chain, BLEU scoring, discrete information measures with a distortion/
bound explorer, and a reproducible evaluation harness.
"""

from .bleu import (
    BleuBreakdown,
    BleuConfig,
    bleu,
    bleu_score,
    brevity_penalty,
    modified_precision,
    single_order_config,
)
from .channel import (
    ChannelConfig,
    Codebook,
    DecodeResult,
    SymbolFrame,
    ber_theoretical,
    build_codebook,
    decode,
    encode,
    ser_theoretical,
    simulate_bit_errors,
    transmit,
)
from .corpus import (
    Corpus,
    NormalizationPolicy,
    Sentence,
    Vocabulary,
    build_vocabulary,
    generate_synthetic_corpus,
    load_corpus,
    save_corpus,
    synthetic_base_keywords,
    tokenize,
)
from .errors import (
    AbsoluteContinuityError,
    EmptyCandidateListError,
    EmptyCorpusError,
    EmptyKeywordListError,
    EmptyKnowledgeBaseError,
    EmptySentenceError,
    LengthMismatchError,
    SemcomError,
    UnknownKeywordError,
    UnknownTemplateSetError,
)
from .extract import KeywordMask, KeywordSet, compute_mask, extract_keywords
from .info import (
    BoundReport,
    bound_gap_trials,
    bound_report,
    cross_entropy,
    delta_residual,
    distortion,
    distortion_bound,
    entropy,
    gap_sign_counts,
    kl_divergence,
    mutual_information,
)
from .kb import (
    KnowledgeBase,
    augment_full,
    augment_ordered,
    augment_random,
    build_base_kb,
    load_keywords,
    save_keywords,
)
from .lm import (
    GeneratorParams,
    NGramLanguageModel,
    SlotTemplate,
    generate_candidates,
    select_best,
    select_by_likelihood,
)
from .pipeline import ChainResult, SemanticTransceiver

__version__ = "0.1.0"
