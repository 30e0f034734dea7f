"""Exact computation of the Adams-Novikov E2-term of Q(2) at the prime 3."""

__version__ = "0.1.0"
