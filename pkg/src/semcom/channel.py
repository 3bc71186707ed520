"""Slot codec and AWGN transmission.

Every keyword in the knowledge base gets a unique positive index; index 0
is the common symbol shared by all non-keyword slots, which preserves the
sentence's slot structure at no per-word cost. Indices are serialized
MSB-first into ceil(log2(|keywords|+1)) bits, each bit sent as one
antipodal unit-power sample. The channel applies a scalar gain and adds
white Gaussian noise with total variance N0 = 10^(-snr_db/10); each real
sample occupies one of the two quadrature dimensions and therefore sees
variance N0/2, which is what makes the per-bit error rate equal
Q(sqrt(2 * snr_linear)). The receiver knows the gain, equalizes, and
hard-thresholds each sample at zero. Decoded
indices above the largest codebook index are flagged as erasures and
treated as gaps so the chain stays total under noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyKnowledgeBaseError, LengthMismatchError, UnknownKeywordError
from .extract import KeywordMask, KeywordSet
from .kb import KnowledgeBase
from .lm import SlotTemplate


@dataclass(frozen=True)
class ChannelConfig:
    """AWGN channel with scalar gain; ``snr_db=math.inf`` is noiseless."""

    snr_db: float = 6.0
    gain: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.gain == 0:
            raise ValueError("gain must be non-zero")

    @property
    def noise_variance(self) -> float:
        """Total noise variance N0 for unit-power symbols; a single real
        sample sees half of it."""
        if math.isinf(self.snr_db) and self.snr_db > 0:
            return 0.0
        return 10.0 ** (-self.snr_db / 10.0)


@dataclass(frozen=True)
class Codebook:
    """Keyword-to-index table; index 0 is the common (non-keyword) symbol."""

    word_to_index: dict[str, int]
    index_to_word: tuple[str | None, ...]
    bits_per_symbol: int

    @property
    def max_index(self) -> int:
        return len(self.index_to_word) - 1


@dataclass(frozen=True)
class SymbolFrame:
    """Per-slot indices plus their modulated samples.

    ``slot_indices`` is None on a received frame: the indices are unknown
    until decoding. ``samples`` holds one antipodal value per index bit.
    """

    slot_indices: tuple[int, ...] | None
    samples: np.ndarray
    frame_len: int
    bits_per_symbol: int


@dataclass(frozen=True)
class DecodeResult:
    template: SlotTemplate
    keywords: KeywordSet
    slot_indices: tuple[int, ...]
    erasures: int


def build_codebook(kb: KnowledgeBase) -> Codebook:
    """Assign dense indices 1..K to the sorted keywords."""
    if not kb.keywords:
        raise EmptyKnowledgeBaseError("cannot build a codebook from an empty KB")
    words = sorted(kb.keywords)
    return Codebook(
        word_to_index={w: i + 1 for i, w in enumerate(words)},
        index_to_word=(None, *words),
        bits_per_symbol=max(1, math.ceil(math.log2(len(words) + 1))),
    )


def _index_bits(index: int, width: int) -> list[int]:
    return [(index >> (width - 1 - b)) & 1 for b in range(width)]


def encode(mask: KeywordMask, keywords: KeywordSet, cb: Codebook) -> SymbolFrame:
    """Map slots to codebook indices and modulate their bits to +/-1.

    Bit 0 maps to +1 and bit 1 to -1, so the transmitted samples have
    unit power exactly.
    """
    if len(keywords) != mask.count():
        raise LengthMismatchError(
            f"{len(keywords)} keywords for {mask.count()} set mask bits"
        )
    kw_by_pos = dict(keywords.items)
    indices = []
    for pos, bit in enumerate(mask.bits, start=1):
        if not bit:
            indices.append(0)
            continue
        word = kw_by_pos.get(pos)
        if word is None:
            raise LengthMismatchError(f"mask bit {pos} set but no keyword there")
        index = cb.word_to_index.get(word)
        if index is None:
            raise UnknownKeywordError(f"keyword {word!r} not in codebook")
        indices.append(index)
    bits = [
        b for index in indices for b in _index_bits(index, cb.bits_per_symbol)
    ]
    samples = 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)
    return SymbolFrame(
        slot_indices=tuple(indices),
        samples=samples,
        frame_len=len(mask),
        bits_per_symbol=cb.bits_per_symbol,
    )


def transmit(
    frame: SymbolFrame, ch: ChannelConfig, rng: np.random.Generator | None = None
) -> SymbolFrame:
    """Apply the channel: y = gain * x + noise.

    Each sample receives N(0, N0/2) noise, N0 = ``ch.noise_variance``.
    Noise is drawn from ``rng`` when given, else from a fresh generator
    seeded with ``ch.seed``, so a fixed seed reproduces the realization.
    """
    if rng is None:
        rng = np.random.default_rng(ch.seed)
    var = ch.noise_variance
    received = ch.gain * frame.samples
    if var > 0:
        received = received + rng.normal(
            0.0, math.sqrt(var / 2.0), frame.samples.shape
        )
    return SymbolFrame(
        slot_indices=None,
        samples=received,
        frame_len=frame.frame_len,
        bits_per_symbol=frame.bits_per_symbol,
    )


def decode(received: SymbolFrame, cb: Codebook, ch: ChannelConfig) -> DecodeResult:
    """Equalize, threshold, and rebuild the slot template.

    Index 0 becomes a gap; a valid keyword index pins the slot to its
    word; an out-of-range index becomes a gap and bumps the erasure
    counter. The frame length is preserved, so the receiver always knows
    the original sentence length.
    """
    equalized = received.samples / ch.gain
    bits = (equalized < 0).astype(np.int64)
    width = received.bits_per_symbol
    slots: list[str | None] = []
    items = []
    indices = []
    erasures = 0
    for slot in range(received.frame_len):
        index = 0
        for b in bits[slot * width : (slot + 1) * width]:
            index = (index << 1) | int(b)
        indices.append(index)
        if index == 0:
            slots.append(None)
        elif index <= cb.max_index:
            word = cb.index_to_word[index]
            slots.append(word)
            items.append((slot + 1, word))
        else:
            slots.append(None)
            erasures += 1
    return DecodeResult(
        template=SlotTemplate(slots=tuple(slots)),
        keywords=KeywordSet(items=tuple(items)),
        slot_indices=tuple(indices),
        erasures=erasures,
    )


def qfunc(x: float) -> float:
    """Gaussian tail probability Q(x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def ser_theoretical(ch: ChannelConfig, bits_per_symbol: int) -> float:
    """Closed-form symbol error probability for the antipodal bit mapping.

    A symbol is wrong when any of its bits flips:
    1 - (1 - Q(sqrt(2 * snr_linear)))**bits_per_symbol.
    """
    if bits_per_symbol < 1:
        raise ValueError("bits_per_symbol must be >= 1")
    if math.isinf(ch.snr_db) and ch.snr_db > 0:
        return 0.0
    p_bit = qfunc(math.sqrt(2.0 * 10.0 ** (ch.snr_db / 10.0)))
    return 1.0 - (1.0 - p_bit) ** bits_per_symbol


def ber_theoretical(snr_db: float) -> float:
    """Per-bit error probability Q(sqrt(2 * snr_linear))."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return qfunc(math.sqrt(2.0 * 10.0 ** (snr_db / 10.0)))


def simulate_bit_errors(
    snr_db: float, n_bits: int, seed: int = 0, gain: float = 1.0
) -> float:
    """Monte-Carlo bit error rate of the antipodal mapping at one SNR."""
    if n_bits < 1:
        raise ValueError("n_bits must be >= 1")
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=n_bits)
    x = 1.0 - 2.0 * bits
    ch = ChannelConfig(snr_db=snr_db, gain=gain)
    y = gain * x
    if ch.noise_variance > 0:
        y = y + rng.normal(0.0, math.sqrt(ch.noise_variance / 2.0), n_bits)
    decided = (y / gain < 0).astype(np.int64)
    return float(np.mean(decided != bits))
