"""Finite truncations of categories of vector spaces, their chart atlases and bundle gluing."""

__version__ = "0.1.0"
