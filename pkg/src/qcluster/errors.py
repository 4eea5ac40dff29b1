"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`QClusterError`. The CLI maps the two families to exit codes:
usage/configuration problems exit with 2, bad input data with 3.
"""


class QClusterError(Exception):
    """Base class for all package errors."""


class UsageError(QClusterError, ValueError):
    """An API was called with arguments outside its contract."""


class ConfigurationError(UsageError):
    """A run configuration is invalid (qubit count, k > M, ...)."""


class EncodingError(UsageError):
    """A feature vector cannot be mapped to a quantum state."""


class DataError(QClusterError, ValueError):
    """Input data is malformed (non-finite values, wrong shape)."""


class IngestionError(DataError):
    """A KEV CSV could not be ingested."""


class MetricUndefinedError(QClusterError, ValueError):
    """A clustering metric is undefined for the given partition."""
