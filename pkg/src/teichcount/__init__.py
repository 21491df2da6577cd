"""Counting and verification engine for genus-2 branched torus covers."""

__version__ = "0.1.0"
