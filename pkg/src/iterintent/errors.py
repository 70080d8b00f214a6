"""Exception types shared across the toolkit."""

from __future__ import annotations


class IterIntentError(Exception):
    """Base class for all toolkit errors."""


class EmptyDataset(IterIntentError):
    pass


class DimensionMismatch(IterIntentError):
    def __init__(self, record_id: str, expected: int, actual: int):
        super().__init__(
            f"record {record_id!r}: embedding has {actual} components, expected {expected}"
        )
        self.record_id = record_id
        self.expected = expected
        self.actual = actual


class NonFiniteValue(IterIntentError):
    def __init__(self, record_id: str):
        super().__init__(f"record {record_id!r}: embedding contains NaN or Inf")
        self.record_id = record_id


class DuplicateId(IterIntentError):
    def __init__(self, record_id: str):
        super().__init__(f"duplicate record id {record_id!r}")
        self.record_id = record_id


class ZeroNormVector(IterIntentError):
    """Cosine distance is undefined for an all-zero embedding."""

    def __init__(self, record_id: str | None = None):
        detail = f" (record {record_id!r})" if record_id is not None else ""
        super().__init__(f"zero-norm embedding{detail}: cosine distance undefined")
        self.record_id = record_id


class IndexOutOfRange(IterIntentError):
    pass


class EmptyActiveSet(IterIntentError):
    pass


class InvalidParams(IterIntentError):
    pass


class KTooLarge(IterIntentError):
    pass


class LengthMismatch(IterIntentError):
    pass


class EmptyInput(IterIntentError):
    pass


class TooFewClasses(IterIntentError):
    pass


class LabelsMissing(IterIntentError):
    pass


class ParseError(IterIntentError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DidNotConverge(UserWarning):
    """Classifier training ended without meeting the convergence tolerance."""
