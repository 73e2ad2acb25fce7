"""Gentle and skew-gentle algebras, their complexes of projectives and the
matrix problems that classify them, all over exact arithmetic."""

__version__ = "0.1.0"
