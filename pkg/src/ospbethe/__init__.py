"""Exact Bethe ansatz populations for orthosymplectic Lie superalgebras."""

__version__ = "0.1.0"
