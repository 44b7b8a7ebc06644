"""Corpus analytics for fine-grained thematic discrepancy among news outlets.

The pipeline mines topic-labeled frequent n-grams from headlines, builds
outlet-by-n-gram contingency tables per (topic, year), embeds outlets in two
dimensions with correspondence analysis, and tracks distance and dispersion
metrics over time.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DataError,
    DegenerateUnitError,
    MetricUndefinedError,
    NumericError,
    ReportError,
    ThemegapError,
)

__all__ = [
    "ConfigError",
    "DataError",
    "DegenerateUnitError",
    "MetricUndefinedError",
    "NumericError",
    "ReportError",
    "ThemegapError",
    "__version__",
]
