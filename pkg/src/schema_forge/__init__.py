"""Reward, advantage, corpus and evaluation tooling for schema-constrained JSON generation."""

__version__ = "0.1.0"
