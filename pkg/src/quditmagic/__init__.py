"""Qudit stabilizer formalism and magic-resource toolkit."""

__version__ = "0.1.0"
