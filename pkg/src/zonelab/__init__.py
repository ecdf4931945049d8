"""Arrangements of congruent zones on the unit sphere."""

__version__ = "0.1.0"
