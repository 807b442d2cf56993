"""Streaming topic clustering for timestamped short-text feeds."""

__version__ = "0.1.0"
