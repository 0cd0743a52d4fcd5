"""Behavior-similarity scoring of programmatic RTS policies."""

__version__ = "0.1.0"
