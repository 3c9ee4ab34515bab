"""Exception hierarchy shared by all adaptls modules."""


class AdaptlsError(Exception):
    """Base class for all errors raised by this package."""


class NotFound(AdaptlsError):
    """A required dataset file or directory does not exist."""


class ParseError(AdaptlsError):
    """A dataset file is malformed. Carries the 1-based line number."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class DateError(AdaptlsError):
    """A date string is not a valid ISO-8601 calendar date."""


class EmptyCorpus(AdaptlsError):
    """A topic has no sentences (or no articles) where some are required."""


class EmptyDataset(AdaptlsError):
    """A dataset has no usable topics."""


class EmptyInput(AdaptlsError):
    """An operation received an empty sequence it cannot work on."""


class EmptyTimeline(AdaptlsError):
    """A timeline has no entries where at least one is required."""


class EmptyReference(AdaptlsError):
    """A reference timeline is empty."""


class BadConstraint(AdaptlsError):
    """A selection constraint c is outside the valid range."""


class TooFewPoints(AdaptlsError):
    """Knee detection needs at least three curve points."""


class SingularSystem(AdaptlsError):
    """The (regularized) normal-equation matrix is not invertible."""


class InsufficientTopics(AdaptlsError):
    """Leave-one-topic-out training needs at least two topics."""


class MissingPrediction(AdaptlsError):
    """A (topic, reference) pair has no generated timeline to evaluate."""


class UnknownTopic(AdaptlsError):
    """A topic name is not present in the dataset."""
