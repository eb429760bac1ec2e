"""Exact and high-precision verification of the Domb Apery limit 7/24 zeta(3)."""

__version__ = "0.1.0"
