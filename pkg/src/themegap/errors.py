"""Exception hierarchy shared across the pipeline."""

from __future__ import annotations


class ThemegapError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ThemegapError):
    """Invalid run configuration: bad paths, malformed settings, unknown outlets."""


class DataError(ThemegapError):
    """Unusable input data: undecodable streams, excess malformed rows, bad lexicon."""


class NumericError(ThemegapError):
    """Numerical failure: non-finite input or a decomposition that did not converge."""


class ReportError(ThemegapError):
    """A report artifact cannot be produced from the data given."""


class DegenerateUnitError(ThemegapError):
    """A (topic, year) unit has too little data to analyze.

    Expected during normal runs; callers record the unit as degenerate and
    continue with the remaining units.
    """

    def __init__(self, topic: object, year: int, reason: str):
        self.topic = topic
        self.year = year
        self.reason = reason
        super().__init__(f"{getattr(topic, 'value', topic)}/{year}: {reason}")


class MetricUndefinedError(ThemegapError):
    """A metric has no defined value for this unit (missing outlet, emptied cluster)."""
