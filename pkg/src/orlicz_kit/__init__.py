"""Orlicz, weak Orlicz and Orlicz-Lorentz norms, maximal operators and inequality checks."""

__version__ = "0.1.0"
