"""Exception hierarchy. Every failure mode raises a typed, descriptive error."""


class DeepBalanceError(Exception):
    """Base class for all library errors."""


class ContractViolationError(DeepBalanceError):
    """An operation was called with arguments that violate its contract."""


class DataLoadError(DeepBalanceError):
    """CSV ingestion failed (missing file/column, unparseable cell, ...)."""


class SplitError(DeepBalanceError):
    """A train/test split could not be performed."""


class ResampleError(DeepBalanceError):
    """A resampling method could not be applied to the given data."""


class ConfigError(DeepBalanceError):
    """Invalid training or experiment configuration."""


class TrainingError(DeepBalanceError):
    """Model training could not start or complete."""


class UndefinedMetricError(DeepBalanceError):
    """A metric's denominator is empty; refusing to return a sentinel value."""
