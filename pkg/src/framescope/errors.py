"""Domain error types shared across the package."""


class FramescopeError(Exception):
    """Base class for all domain errors raised by this package."""


# --- lexicon file parsing ---

class LexiconError(FramescopeError):
    pass


class MalformedHeader(LexiconError):
    pass


class UnknownCategoryName(LexiconError):
    pass


class DuplicatePattern(LexiconError):
    pass


class BadWildcard(LexiconError):
    pass


class MalformedEntry(LexiconError):
    pass


# --- scoring / ingestion ---

class EmptyDocument(FramescopeError):
    pass


class InvalidEncoding(FramescopeError):
    pass


class UnknownFrame(FramescopeError):
    pass


# --- anchors ---

class OutOfBounds(FramescopeError):
    pass


class EmptySpan(FramescopeError):
    pass


# --- collaborative model ---

class UnknownUser(FramescopeError):
    pass


class UnknownArticle(FramescopeError):
    pass


class UnknownAnnotation(FramescopeError):
    pass


class UnknownTagAssignment(FramescopeError):
    pass


class NoTagsProvided(FramescopeError):
    pass


class DuplicateTag(FramescopeError):
    pass


class GatingViolation(FramescopeError):
    """Commenting requires a prior tagging/voting contribution on the annotation."""


class EmptyBody(FramescopeError):
    pass


class BadParent(FramescopeError):
    pass


# --- recommendations ---

class EmptyCorpus(FramescopeError):
    pass


# --- analysis ---

class EmptyGroup(FramescopeError):
    pass


class BadSampleCount(FramescopeError):
    pass


class ZeroBaseline(FramescopeError):
    pass


# --- service ---

class ConfigError(FramescopeError):
    pass


class CorruptLog(FramescopeError):
    """Event log cannot be replayed; ``seq`` is the first offending sequence number."""

    def __init__(self, message: str, seq: int | None = None):
        super().__init__(message)
        self.seq = seq


class StorageFailure(FramescopeError):
    pass
