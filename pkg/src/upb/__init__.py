"""Qubit unextendible product bases as orthogonality graphs."""

__version__ = "0.1.0"
