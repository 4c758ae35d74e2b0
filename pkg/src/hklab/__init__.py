"""Exact Hilbert-Kunz and F-signature computations for u*v + g_a over GF(2)-bar."""

__version__ = "0.1.0"
