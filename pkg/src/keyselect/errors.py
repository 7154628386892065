"""Shared exception types."""


class KeyselError(Exception):
    """Base class for all package errors."""


class CorpusError(KeyselError):
    """Raised for malformed corpus input in strict mode."""


class SelectionError(KeyselError):
    """Raised for invalid selection-session operations."""


class TextError(KeyselError):
    """Raised when a text baseline cannot be trained or queried."""


class EvalError(KeyselError):
    """Raised when a metric is undefined for the given state."""


class ConfigError(KeyselError):
    """Raised for invalid experiment or CLI configuration."""
