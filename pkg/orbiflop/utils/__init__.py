"""Utility modules for orbiflop."""

from .errors import ConfigError, OrbiflopError

__all__ = ["ConfigError", "OrbiflopError"]
