"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class InputError(ToolkitError):
    """Unreadable or malformed input: bad encoding, bad paths, bad config."""


class ParseError(InputError):
    """Structurally invalid corpus, topic, qrels, or run data."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CollectionError(InputError):
    """Collection-level inconsistency such as a duplicate identifier."""


class EmptyQueryError(ToolkitError):
    """No query terms survived stopword removal; the topic cannot be run."""


class DegenerateDocumentError(ToolkitError):
    """A document has no tokens left after filtering."""


class NoKeywordError(ToolkitError):
    """A document contains no occurrence of any query term."""


class UndefinedIdfError(ToolkitError):
    """A term was scored against partitions none of which contain it."""


class EvaluationError(ToolkitError):
    """A run/qrels combination cannot be evaluated as requested."""
