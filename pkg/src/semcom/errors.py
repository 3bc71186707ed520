"""Domain exceptions shared across the package.

Plain precondition violations (out-of-range fractions, bad orders,
negative weights) raise :class:`ValueError`; the classes below cover
conditions that callers may want to catch and handle individually.
I/O failures propagate as the built-in :class:`OSError` family.
"""


class SemcomError(Exception):
    """Base class for all domain errors raised by this package."""


class EmptySentenceError(SemcomError):
    """Normalization left no tokens in a line."""


class EmptyCorpusError(SemcomError):
    """A corpus source yielded zero usable sentences."""


class UnknownTemplateSetError(SemcomError):
    """No bundled template family with the requested identifier."""


class EmptyKeywordListError(SemcomError):
    """A keyword list is empty after normalization and deduplication."""


class EmptyKnowledgeBaseError(SemcomError):
    """A knowledge base with no keywords cannot drive the codec."""


class LengthMismatchError(SemcomError):
    """A mask or frame does not match the length of its sentence."""


class UnknownKeywordError(SemcomError):
    """A keyword has no entry in the codebook."""


class EmptyCandidateListError(SemcomError):
    """Selection was asked to choose from zero candidate sentences."""


class AbsoluteContinuityError(SemcomError):
    """q(x) = 0 at a point where p(x) > 0, so log(p/q) terms diverge."""
