"""Polyomino rep-tile laboratory: exact cover search, counting, encoders and structure."""

__version__ = "0.1.0"
