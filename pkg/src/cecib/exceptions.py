"""Error types raised by the library."""


class CecibError(Exception):
    """Base class for all library-specific errors."""


class DegenerateModelError(CecibError):
    """A cluster covariance is singular or too small to model."""


class EmptyClusterError(CecibError):
    """An operation needs cluster members that are not there."""


class DegenerateScenarioError(CecibError):
    """A merge scenario has a vanishing entropy denominator."""


class UnsupportedSettingError(CecibError):
    """The operation is defined only under a stricter labeling regime."""


class ConfigurationError(CecibError):
    """Run parameters are inconsistent with each other or with the data."""


class CsvParseError(CecibError):
    """A delimited input file could not be parsed."""
