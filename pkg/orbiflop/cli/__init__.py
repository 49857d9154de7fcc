"""Command-line interface."""

from .commands import dispatch, load_config

__all__ = ["dispatch", "load_config"]
