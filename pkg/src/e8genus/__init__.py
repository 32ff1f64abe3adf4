"""Exact q-expansion engine for E8-twisted elliptic genera of almost complex manifolds."""

__version__ = "0.1.0"
