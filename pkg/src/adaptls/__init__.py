"""Timeline summarization with automatic timeline-length selection."""

from .errors import AdaptlsError

__all__ = ["AdaptlsError"]
__version__ = "0.1.0"
