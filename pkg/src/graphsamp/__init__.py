"""Sampling and reconstruction of bandlimited graph signals."""

__version__ = "0.1.0"
