"""Superoscillation evolution in the Aharonov-Bohm field (C++ core)."""

from ._core import *  # noqa: F401,F403
from ._core import ConfigError, NumericalError, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]
