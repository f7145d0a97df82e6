"""Numerics for Hilbert transforms along polynomial surfaces in the Heisenberg group."""
__version__ = "0.1.0"
