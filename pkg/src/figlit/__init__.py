"""Figurative-language detection and literalization for dialog corpora."""

__version__ = "0.1.0"
