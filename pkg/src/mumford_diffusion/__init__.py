"""Invariant p-adic heat kernels and spectral classification of Mumford-curve reduction graphs."""
__version__ = "0.1.0"
