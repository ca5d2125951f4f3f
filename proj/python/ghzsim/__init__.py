"""Single-step GHZ state preparation for a trapped ion in an optical cavity."""

from ._ghzsim import *  # noqa: F401,F403
from ._ghzsim import (
    AccuracyError,
    ConfigurationError,
    Error,
    HilbertShape,
    SystemParams,
    TruncationError,
)

__all__ = [name for name in dir() if not name.startswith("_")]
