"""Exception types shared across the package."""


class QcbError(Exception):
    """Base class for all package-specific errors."""


class UsageError(QcbError, ValueError):
    """The caller passed inconsistent or out-of-contract arguments."""


class ConfigurationError(UsageError):
    """A configured value (qubit count, layer count, ...) is out of range."""


class DataError(QcbError, ValueError):
    """Input data violates the expected schema or value constraints."""


class TrainingError(QcbError, RuntimeError):
    """A model failed to train (e.g. every loss evaluation was non-finite)."""
