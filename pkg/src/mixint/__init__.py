"""Mixed integrals of quasi-concave functions and the calculus of alpha-concave functions."""

__version__ = "0.1.0"
